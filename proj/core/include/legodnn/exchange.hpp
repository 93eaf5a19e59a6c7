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

#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"
#include "legodnn/profile.hpp"

namespace legodnn {

struct BlockSwap {
    int block_id = 0;
    int from_descendant = 0;
    int to_descendant = 0;
};

/// Energy proxy constants. Joules are derived from bytes moved; nothing here
/// is a hardware measurement.
struct EnergyModel {
    double joules_per_mb = 0.005;
    /// Extra cost charged per model switch by the nested-model baseline, which
    /// must rebuild layers after paging in weights.
    double reconstruction_joules_per_switch = 0.05;
};

inline constexpr double kBytesPerMb = 1'000'000.0;

struct ExchangePlan {
    std::vector<BlockSwap> swaps;
    Bytes bytes_in = 0;
    Bytes bytes_out = 0;
    double energy_joules = 0.0;

    Bytes total_bytes() const { return bytes_in + bytes_out; }
    bool empty() const { return bytes_in == 0 && bytes_out == 0 && swaps.empty(); }
};

/// Swap only the blocks whose descendant differs between the two selections.
ExchangePlan diff(const Selection& current, const Selection& target, const DnnProfile& profile,
                  const EnergyModel& energy = {});

/// Baseline: evict the whole current model and load the whole target model.
ExchangePlan whole_model_cost(Bytes current_model_size, Bytes target_model_size,
                              const EnergyModel& energy = {});

/// Baseline with nested descendant models: only the size difference is paged,
/// plus a fixed reconstruction charge per switch.
ExchangePlan nested_model_cost(Bytes current_model_size, Bytes target_model_size,
                               const EnergyModel& energy = {});

double energy_for_bytes(Bytes bytes, const EnergyModel& energy);

nlohmann::ordered_json plan_to_json(const ExchangePlan& plan);

}  // namespace legodnn
