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

#include "legodnn/exchange.hpp"

#include <string>

namespace legodnn {

double energy_for_bytes(Bytes bytes, const EnergyModel& energy) {
    return static_cast<double>(bytes) / kBytesPerMb * energy.joules_per_mb;
}

ExchangePlan diff(const Selection& current, const Selection& target, const DnnProfile& profile,
                  const EnergyModel& energy) {
    if (current.choices.size() != target.choices.size()) {
        throw ValidationError("selections of mismatched length (" + std::to_string(current.choices.size()) + " vs " +
                              std::to_string(target.choices.size()) + ")");
    }
    if (!selection_fits(profile, current) || !selection_fits(profile, target)) {
        throw ValidationError("selection does not fit profile '" + profile.dnn_id + "'");
    }
    ExchangePlan plan;
    for (std::size_t i = 0; i < current.choices.size(); ++i) {
        const int from = current.choices[i];
        const int to = target.choices[i];
        if (from == to) {
            continue;
        }
        const auto& block = profile.blocks[i];
        plan.swaps.push_back({block.block_id, from, to});
        plan.bytes_in += block.descendants[to].size_bytes;
        plan.bytes_out += block.descendants[from].size_bytes;
    }
    plan.energy_joules = energy_for_bytes(plan.total_bytes(), energy);
    return plan;
}

ExchangePlan whole_model_cost(Bytes current_model_size, Bytes target_model_size, const EnergyModel& energy) {
    if (current_model_size <= 0 || target_model_size <= 0) {
        throw ValidationError("model sizes must be positive");
    }
    ExchangePlan plan;
    plan.bytes_in = target_model_size;
    plan.bytes_out = current_model_size;
    plan.energy_joules = energy_for_bytes(plan.total_bytes(), energy);
    return plan;
}

ExchangePlan nested_model_cost(Bytes current_model_size, Bytes target_model_size, const EnergyModel& energy) {
    if (current_model_size <= 0 || target_model_size <= 0) {
        throw ValidationError("model sizes must be positive");
    }
    ExchangePlan plan;
    if (target_model_size > current_model_size) {
        plan.bytes_in = target_model_size - current_model_size;
    } else {
        plan.bytes_out = current_model_size - target_model_size;
    }
    plan.energy_joules = energy_for_bytes(plan.total_bytes(), energy);
    if (current_model_size != target_model_size) {
        plan.energy_joules += energy.reconstruction_joules_per_switch;
    }
    return plan;
}

nlohmann::ordered_json plan_to_json(const ExchangePlan& plan) {
    nlohmann::ordered_json doc;
    auto swaps = nlohmann::ordered_json::array();
    for (const auto& s : plan.swaps) {
        swaps.push_back({{"block_id", s.block_id}, {"from", s.from_descendant}, {"to", s.to_descendant}});
    }
    doc["swaps"] = std::move(swaps);
    doc["bytes_in"] = plan.bytes_in;
    doc["bytes_out"] = plan.bytes_out;
    doc["energy_joules"] = plan.energy_joules;
    return doc;
}

}  // namespace legodnn
