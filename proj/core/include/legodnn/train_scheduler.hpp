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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"
#include "legodnn/profile.hpp"

namespace legodnn {

/// Re-training of one descendant block on the GPU server.
struct TrainJob {
    int block_id = 0;
    int descendant_index = 0;
    Bytes memory_demand = 0;
    std::int64_t duration = 0;
};

enum class Policy { smallest_first, largest_first, random };

struct SchedulePolicy {
    Policy kind = Policy::smallest_first;
    std::uint64_t seed = 0;
};

std::string to_string(Policy policy);
Policy parse_policy(std::string_view name);

struct ScheduledJob {
    TrainJob job;
    std::int64_t start = 0;
    std::int64_t end = 0;
};

struct ScheduleResult {
    std::string policy;
    std::int64_t makespan = 0;
    /// Sorted by start time, then by queue position.
    std::vector<ScheduledJob> timeline;
    int peak_concurrency = 0;
};

/// Memory-constrained list scheduling without preemption. Jobs are queued in
/// policy order; whenever memory frees up, every queued job that fits is
/// started, scanning the queue front to back.
ScheduleResult schedule(std::span<const TrainJob> jobs, Bytes memory_capacity,
                        SchedulePolicy policy);

/// One job per compressed descendant, demand = descendant size and
/// duration = ceil(demand / bytes_per_time_unit).
std::vector<TrainJob> jobs_from_profile(const DnnProfile& profile,
                                        Bytes bytes_per_time_unit = 1'000'000);

/// Peak memory in use over the timeline.
Bytes peak_memory(const ScheduleResult& result);

std::string gantt_chart(const ScheduleResult& result, int width = 60);

nlohmann::ordered_json schedule_to_json(const ScheduleResult& result);
std::vector<TrainJob> jobs_from_json(const nlohmann::json& doc,
                                     Bytes bytes_per_time_unit = 1'000'000);

inline constexpr std::string_view kJobsFormat = "legodnn-jobs/1";

}  // namespace legodnn
