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

#include "legodnn/train_scheduler.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <utility>

#include "legodnn/random.hpp"

namespace legodnn {

std::string to_string(Policy policy) {
    switch (policy) {
        case Policy::smallest_first:
            return "smallest_first";
        case Policy::largest_first:
            return "largest_first";
        case Policy::random:
            return "random";
    }
    return "unknown";
}

Policy parse_policy(std::string_view name) {
    if (name == "smallest_first") {
        return Policy::smallest_first;
    }
    if (name == "largest_first") {
        return Policy::largest_first;
    }
    if (name == "random") {
        return Policy::random;
    }
    throw ValidationError("unknown scheduling policy '" + std::string(name) + "'");
}

ScheduleResult schedule(std::span<const TrainJob> jobs, Bytes memory_capacity, SchedulePolicy policy) {
    if (memory_capacity <= 0) {
        throw ValidationError("memory capacity must be positive");
    }
    for (const auto& job : jobs) {
        if (job.memory_demand <= 0 || job.duration <= 0) {
            throw ValidationError("job for block " + std::to_string(job.block_id) + " descendant " +
                                  std::to_string(job.descendant_index) + " needs positive demand and duration");
        }
        if (job.memory_demand > memory_capacity) {
            throw ValidationError("job for block " + std::to_string(job.block_id) + " descendant " +
                                  std::to_string(job.descendant_index) + " needs " + std::to_string(job.memory_demand) +
                                  " bytes, more than the capacity " + std::to_string(memory_capacity));
        }
    }

    std::vector<std::size_t> queue(jobs.size());
    std::iota(queue.begin(), queue.end(), std::size_t{0});
    switch (policy.kind) {
        case Policy::smallest_first:
            std::stable_sort(queue.begin(), queue.end(), [&](std::size_t a, std::size_t b) {
                return jobs[a].memory_demand < jobs[b].memory_demand;
            });
            break;
        case Policy::largest_first:
            std::stable_sort(queue.begin(), queue.end(), [&](std::size_t a, std::size_t b) {
                return jobs[a].memory_demand > jobs[b].memory_demand;
            });
            break;
        case Policy::random: {
            Rng rng(policy.seed);
            rng.shuffle(std::span<std::size_t>(queue));
            break;
        }
    }

    ScheduleResult result;
    result.policy = to_string(policy.kind);
    if (policy.kind == Policy::random) {
        result.policy += "(" + std::to_string(policy.seed) + ")";
    }

    struct Running {
        std::int64_t end;
        std::size_t job;
    };
    std::vector<Running> running;
    std::int64_t now = 0;
    Bytes used = 0;
    while (!queue.empty() || !running.empty()) {
        for (auto it = queue.begin(); it != queue.end();) {
            const TrainJob& job = jobs[*it];
            if (used + job.memory_demand <= memory_capacity) {
                used += job.memory_demand;
                running.push_back({now + job.duration, *it});
                result.timeline.push_back({job, now, now + job.duration});
                it = queue.erase(it);
            } else {
                ++it;
            }
        }
        result.peak_concurrency = std::max(result.peak_concurrency, static_cast<int>(running.size()));

        std::int64_t next = running.front().end;
        for (const auto& r : running) {
            next = std::min(next, r.end);
        }
        now = next;
        std::erase_if(running, [&](const Running& r) {
            if (r.end == now) {
                used -= jobs[r.job].memory_demand;
                return true;
            }
            return false;
        });
        result.makespan = std::max(result.makespan, now);
    }
    return result;
}

std::vector<TrainJob> jobs_from_profile(const DnnProfile& profile, Bytes bytes_per_time_unit) {
    if (bytes_per_time_unit <= 0) {
        throw ValidationError("bytes per time unit must be positive");
    }
    std::vector<TrainJob> jobs;
    for (const auto& block : profile.blocks) {
        for (std::size_t j = 1; j < block.descendants.size(); ++j) {
            const Bytes demand = block.descendants[j].size_bytes;
            const std::int64_t duration = std::max<std::int64_t>(1, (demand + bytes_per_time_unit - 1) / bytes_per_time_unit);
            jobs.push_back({block.block_id, static_cast<int>(j), demand, duration});
        }
    }
    return jobs;
}

Bytes peak_memory(const ScheduleResult& result) {
    std::vector<std::pair<std::int64_t, Bytes>> deltas;
    for (const auto& s : result.timeline) {
        deltas.emplace_back(s.start, s.job.memory_demand);
        deltas.emplace_back(s.end, -s.job.memory_demand);
    }
    // Releases at an instant happen before starts at the same instant.
    std::sort(deltas.begin(), deltas.end());
    Bytes used = 0;
    Bytes peak = 0;
    for (const auto& [t, d] : deltas) {
        used += d;
        peak = std::max(peak, used);
    }
    return peak;
}

std::string gantt_chart(const ScheduleResult& result, int width) {
    std::ostringstream out;
    out << "policy " << result.policy << ", makespan " << result.makespan << ", peak concurrency "
        << result.peak_concurrency << "\n";
    if (result.makespan <= 0 || width <= 0) {
        return out.str();
    }
    for (const auto& s : result.timeline) {
        const auto col = [&](std::int64_t t) {
            return static_cast<int>((t * width + result.makespan - 1) / result.makespan);
        };
        const int from = static_cast<int>(s.start * width / result.makespan);
        const int to = std::max(from + 1, col(s.end));
        char label[48];
        std::snprintf(label, sizeof label, "b%-3d d%-2d", s.job.block_id, s.job.descendant_index);
        out << label << " |" << std::string(from, ' ') << std::string(to - from, '#')
            << std::string(std::max(0, width - to), ' ') << "| " << s.start << "-" << s.end << "\n";
    }
    return out.str();
}

nlohmann::ordered_json schedule_to_json(const ScheduleResult& result) {
    nlohmann::ordered_json doc;
    doc["format"] = "legodnn-schedule/1";
    doc["policy"] = result.policy;
    doc["makespan"] = result.makespan;
    doc["peak_concurrency"] = result.peak_concurrency;
    doc["peak_memory_bytes"] = peak_memory(result);
    auto timeline = nlohmann::ordered_json::array();
    for (const auto& s : result.timeline) {
        nlohmann::ordered_json js;
        js["block_id"] = s.job.block_id;
        js["descendant_index"] = s.job.descendant_index;
        js["memory_demand"] = s.job.memory_demand;
        js["start"] = s.start;
        js["end"] = s.end;
        timeline.push_back(std::move(js));
    }
    doc["timeline"] = std::move(timeline);
    return doc;
}

std::vector<TrainJob> jobs_from_json(const nlohmann::json& doc, Bytes bytes_per_time_unit) {
    if (!doc.is_object() || !doc.contains("format") || doc["format"] != kJobsFormat) {
        throw ParseError("jobs: expected an object with format \"" + std::string(kJobsFormat) + "\"");
    }
    if (!doc.contains("jobs") || !doc["jobs"].is_array()) {
        throw ParseError("jobs: field 'jobs' must be an array");
    }
    std::vector<TrainJob> jobs;
    for (std::size_t k = 0; k < doc["jobs"].size(); ++k) {
        const auto& j = doc["jobs"][k];
        const std::string where = "jobs[" + std::to_string(k) + "]";
        if (!j.is_object() || !j.contains("memory_demand") || !j["memory_demand"].is_number_integer()) {
            throw ParseError(where + ": integer 'memory_demand' required");
        }
        TrainJob job;
        job.block_id = j.value("block_id", 0);
        job.descendant_index = j.value("descendant_index", 0);
        job.memory_demand = j["memory_demand"].get<Bytes>();
        if (j.contains("duration")) {
            if (!j["duration"].is_number_integer()) {
                throw ParseError(where + ": 'duration' must be an integer");
            }
            job.duration = j["duration"].get<std::int64_t>();
        } else {
            job.duration = std::max<std::int64_t>(1, (job.memory_demand + bytes_per_time_unit - 1) / bytes_per_time_unit);
        }
        jobs.push_back(job);
    }
    return jobs;
}

}  // namespace legodnn
