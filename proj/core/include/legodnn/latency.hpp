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

#include "legodnn/error.hpp"
#include "legodnn/profile.hpp"

namespace legodnn {

/// A measured latency of the descendant currently deployed for one block.
struct LatencyObservation {
    int block_id = 0;
    int descendant_index = 0;
    Micros measured_latency = 0.0;
};

/// Latency reduction of a descendant relative to its original block,
/// 1 - descendant_size / original_size. Latency is taken as proportional to size.
double latency_reduction(Bytes original_size, Bytes descendant_size);

/// Latency of every descendant of `block` given one observation.
///
/// The observation fixes the current system status: the original block's
/// latency is recovered as measured / (1 - T_v), and each descendant j then
/// runs in t_0 * (1 - T_j). The observed descendant gets `measured` back exactly.
std::vector<Micros> estimate_latencies(const LatencyObservation& observation,
                                       const BlockProfile& block);

/// Descendant latencies when the original block runs in `original_latency`.
std::vector<Micros> latencies_from_original(const BlockProfile& block, Micros original_latency);

/// Size-proportional estimate for a whole profile: the original block i runs in
/// original_size_i * micros_per_byte. Indexed [block][descendant].
std::vector<std::vector<Micros>> proportional_latencies(const DnnProfile& profile,
                                                        double micros_per_byte);

}  // namespace legodnn
