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


#include "cli_args.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace legodnn::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

/// Splits "12.5ms" into 12.5 and "ms".
std::pair<double, std::string_view> number_and_unit(std::string_view text, const char* what) {
    const std::string_view s = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr == s.data() || !std::isfinite(value)) {
        throw ValidationError(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return {value, trim(s.substr(static_cast<std::size_t>(ptr - s.data())))};
}

}  // namespace

Micros parse_duration(std::string_view text) {
    const auto [value, unit] = number_and_unit(text, "duration");
    double scale = 0.0;
    if (unit.empty() || unit == "us") {
        scale = 1.0;
    } else if (unit == "ms") {
        scale = 1e3;
    } else if (unit == "s") {
        scale = 1e6;
    } else {
        throw ValidationError("invalid duration unit '" + std::string(unit) + "' (use us, ms or s)");
    }
    if (value < 0.0) {
        throw ValidationError("duration must be non-negative: '" + std::string(text) + "'");
    }
    return value * scale;
}

Bytes parse_bytes(std::string_view text) {
    auto [value, unit] = number_and_unit(text, "size");
    if (!unit.empty() && (unit.back() == 'B' || unit.back() == 'b')) {
        unit.remove_suffix(1);
    }
    double scale = 0.0;
    if (unit.empty()) {
        scale = 1.0;
    } else if (unit == "k" || unit == "K") {
        scale = 1e3;
    } else if (unit == "M") {
        scale = 1e6;
    } else if (unit == "G") {
        scale = 1e9;
    } else if (unit == "Ki") {
        scale = 1024.0;
    } else if (unit == "Mi") {
        scale = 1024.0 * 1024.0;
    } else if (unit == "Gi") {
        scale = 1024.0 * 1024.0 * 1024.0;
    } else {
        throw ValidationError("invalid size unit '" + std::string(unit) + "' (use k, M, G, Ki, Mi or Gi)");
    }
    const double bytes = value * scale;
    if (bytes < 0.0 || bytes > static_cast<double>(std::numeric_limits<Bytes>::max()) ||
        std::abs(bytes - std::round(bytes)) > 1e-6 * std::max(1.0, bytes)) {
        throw ValidationError("size must be a non-negative whole number of bytes: '" + std::string(text) + "'");
    }
    return static_cast<Bytes>(std::llround(bytes));
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(std::string_view text) {
    auto parse_one = [&](std::string_view part) {
        part = trim(part);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            throw ValidationError("invalid seed range '" + std::string(text) + "' (use a..b)");
        }
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        const auto seed = parse_one(text);
        return {seed, seed};
    }
    const auto first = parse_one(text.substr(0, dots));
    const auto last = parse_one(text.substr(dots + 2));
    if (last < first) {
        throw ValidationError("seed range '" + std::string(text) + "' is empty");
    }
    return {first, last};
}

}  // namespace legodnn::cli
