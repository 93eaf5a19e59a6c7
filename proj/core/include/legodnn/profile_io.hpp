/*
Copyright 2026 The legodnn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "legodnn/profile.hpp"

namespace legodnn {

inline constexpr std::string_view kProfileFormat = "legodnn-profile/1";

/// Parses a profile document. Throws ParseError on malformed input; semantic
/// problems are left to validate_profile.
DnnProfile parse_profile(std::string_view text);
DnnProfile profile_from_json(const nlohmann::json& doc);
DnnProfile load_profile(const std::filesystem::path& path);

nlohmann::ordered_json profile_to_json(const DnnProfile& profile);
std::string serialize_profile(const DnnProfile& profile);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace legodnn
