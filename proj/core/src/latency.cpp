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

#include "legodnn/latency.hpp"

#include <string>

namespace legodnn {

double latency_reduction(Bytes original_size, Bytes descendant_size) {
    if (original_size <= 0 || descendant_size <= 0) {
        throw ValidationError("block sizes must be positive");
    }
    if (descendant_size > original_size) {
        throw ValidationError("descendant larger than original");
    }
    return 1.0 - static_cast<double>(descendant_size) / static_cast<double>(original_size);
}

std::vector<Micros> latencies_from_original(const BlockProfile& block, Micros original_latency) {
    std::vector<Micros> out;
    out.reserve(block.descendants.size());
    for (const auto& desc : block.descendants) {
        out.push_back(original_latency * (1.0 - desc.latency_reduction));
    }
    return out;
}

std::vector<Micros> estimate_latencies(const LatencyObservation& observation, const BlockProfile& block) {
    if (observation.block_id != block.block_id) {
        throw ValidationError("observation for block " + std::to_string(observation.block_id) +
                              " applied to block " + std::to_string(block.block_id));
    }
    if (!(observation.measured_latency > 0.0)) {
        throw ValidationError("measured latency must be positive");
    }
    const int v = observation.descendant_index;
    if (v < 0 || v >= static_cast<int>(block.descendants.size())) {
        throw ValidationError("unknown descendant index " + std::to_string(v) + " for block " +
                              std::to_string(block.block_id));
    }
    const double reduction = block.descendants[v].latency_reduction;
    if (!(reduction < 1.0)) {
        throw ValidationError("latency reduction of the observed descendant must be < 1");
    }
    const Micros original = observation.measured_latency / (1.0 - reduction);
    auto out = latencies_from_original(block, original);
    out[v] = observation.measured_latency;
    return out;
}

std::vector<std::vector<Micros>> proportional_latencies(const DnnProfile& profile, double micros_per_byte) {
    if (!(micros_per_byte > 0.0)) {
        throw ValidationError("micros per byte must be positive");
    }
    std::vector<std::vector<Micros>> out;
    out.reserve(profile.blocks.size());
    for (const auto& block : profile.blocks) {
        out.push_back(latencies_from_original(block, static_cast<double>(block.original_size_bytes) * micros_per_byte));
    }
    return out;
}

}  // namespace legodnn
