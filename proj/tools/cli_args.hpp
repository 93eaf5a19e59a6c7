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

#include <cstdint>
#include <string_view>
#include <utility>

#include "legodnn/error.hpp"

namespace legodnn::cli {

/// "250ms", "1.5s", "800us" or a bare number of microseconds. Throws ValidationError.
Micros parse_duration(std::string_view text);

/// "64MB", "512k", "2GiB" or a bare byte count. Decimal (k, M, G) and binary
/// (Ki, Mi, Gi) prefixes, optional trailing "B". Throws ValidationError.
Bytes parse_bytes(std::string_view text);

/// "a..b" (inclusive) or a single seed "a". Throws ValidationError.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(std::string_view text);

}  // namespace legodnn::cli
