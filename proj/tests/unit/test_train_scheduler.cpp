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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"
#include "legodnn/profile.hpp"
#include "legodnn/train_scheduler.hpp"

namespace legodnn {
namespace {

std::vector<TrainJob> jobs_of(const std::vector<Bytes>& demands, std::int64_t duration) {
    std::vector<TrainJob> jobs;
    for (std::size_t k = 0; k < demands.size(); ++k) {
        jobs.push_back({static_cast<int>(k + 1), 1, demands[k], duration});
    }
    return jobs;
}

/// Memory in use just after each start or end, checked against capacity.
Bytes sweep_peak(const ScheduleResult& r) {
    std::map<std::int64_t, Bytes> delta;
    for (const auto& s : r.timeline) {
        delta[s.start] += s.job.memory_demand;
        delta[s.end] -= s.job.memory_demand;
    }
    Bytes used = 0;
    Bytes peak = 0;
    for (const auto& [t, d] : delta) {
        used += d;
        peak = std::max(peak, used);
    }
    return peak;
}

TEST(TrainScheduler, SymmetricPacking) {
    // [2,2,2,2] in capacity 4: two waves of two, makespan 2d under any policy.
    for (Policy p : {Policy::smallest_first, Policy::largest_first, Policy::random}) {
        const ScheduleResult r = schedule(jobs_of({2, 2, 2, 2}, 5), 4, {p, 3});
        EXPECT_EQ(r.makespan, 10);
        EXPECT_EQ(r.peak_concurrency, 2);
    }
}

TEST(TrainScheduler, PeakConcurrencyOrdering) {
    // [9,2,2,2] in capacity 10: smallest_first runs the three 2s together then 9;
    // largest_first runs 9 alone then the three 2s. Both take 2d.
    const auto jobs = jobs_of({9, 2, 2, 2}, 4);
    const ScheduleResult small = schedule(jobs, 10, {Policy::smallest_first, 0});
    const ScheduleResult large = schedule(jobs, 10, {Policy::largest_first, 0});
    EXPECT_EQ(small.makespan, 8);
    EXPECT_EQ(large.makespan, 8);
    EXPECT_EQ(small.peak_concurrency, 3);
    EXPECT_EQ(large.peak_concurrency, 3);
    EXPECT_EQ(small.timeline.front().job.memory_demand, 2);
    EXPECT_EQ(large.timeline.front().job.memory_demand, 9);
}

TEST(TrainScheduler, BackfillStartsEveryFittingJob) {
    // [9,1,1,1] in capacity 10: largest_first starts 9 and one 1, the other two 1s after.
    const ScheduleResult r = schedule(jobs_of({9, 1, 1, 1}, 3), 10, {Policy::largest_first, 0});
    EXPECT_EQ(r.makespan, 6);
    EXPECT_EQ(r.peak_concurrency, 2);
}

TEST(TrainScheduler, CapacityNeverExceeded) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto jobs = jobs_from_profile(generate_synthetic(8, 5, seed));
        Bytes largest = 0;
        Bytes total = 0;
        std::int64_t longest = 0;
        std::int64_t work = 0;
        for (const auto& j : jobs) {
            largest = std::max(largest, j.memory_demand);
            total += j.memory_demand;
            longest = std::max(longest, j.duration);
            work += j.duration;
        }
        for (Policy p : {Policy::smallest_first, Policy::largest_first, Policy::random}) {
            const ScheduleResult r = schedule(jobs, 2 * largest, {p, seed});
            EXPECT_LE(sweep_peak(r), 2 * largest);
            EXPECT_EQ(peak_memory(r), sweep_peak(r));
            EXPECT_EQ(r.timeline.size(), jobs.size());
            EXPECT_GE(r.makespan, longest);
            EXPECT_GE(r.makespan * r.peak_concurrency, work);
        }
    }
}

TEST(TrainScheduler, WorkConserving) {
    // At every start or end instant, no queued job fits in the memory left free.
    const auto jobs = jobs_from_profile(generate_synthetic(6, 4, 12));
    Bytes largest = 0;
    for (const auto& j : jobs) {
        largest = std::max(largest, j.memory_demand);
    }
    const Bytes capacity = largest + largest / 2;
    const ScheduleResult r = schedule(jobs, capacity, {Policy::smallest_first, 0});
    std::vector<std::int64_t> instants;
    for (const auto& s : r.timeline) {
        instants.push_back(s.start);
        instants.push_back(s.end);
    }
    for (std::int64_t t : instants) {
        Bytes used = 0;
        Bytes smallest_waiting = capacity + 1;
        for (const auto& s : r.timeline) {
            if (s.start <= t && t < s.end) {
                used += s.job.memory_demand;
            } else if (s.start > t) {
                smallest_waiting = std::min(smallest_waiting, s.job.memory_demand);
            }
        }
        EXPECT_GT(smallest_waiting, capacity - used) << "idle memory at t=" << t;
    }
}

TEST(TrainScheduler, RandomPolicyIsSeeded) {
    const auto jobs = jobs_from_profile(generate_synthetic(5, 5, 4));
    const ScheduleResult a = schedule(jobs, 20'000'000, {Policy::random, 9});
    const ScheduleResult b = schedule(jobs, 20'000'000, {Policy::random, 9});
    ASSERT_EQ(a.timeline.size(), b.timeline.size());
    for (std::size_t k = 0; k < a.timeline.size(); ++k) {
        EXPECT_EQ(a.timeline[k].start, b.timeline[k].start);
        EXPECT_EQ(a.timeline[k].job.block_id, b.timeline[k].job.block_id);
    }
}

TEST(TrainScheduler, OversizedJobRejected) {
    EXPECT_THROW(schedule(jobs_of({11}, 1), 10, {}), ValidationError);
    EXPECT_THROW(schedule(jobs_of({1}, 1), 0, {}), ValidationError);
}

TEST(TrainScheduler, JobsFromProfile) {
    const DnnProfile p = generate_synthetic(3, 2, 1);
    const auto jobs = jobs_from_profile(p, 1000);
    ASSERT_EQ(jobs.size(), 6u);
    EXPECT_EQ(jobs[0].block_id, 1);
    EXPECT_EQ(jobs[0].descendant_index, 1);
    EXPECT_EQ(jobs[0].memory_demand, p.blocks[0].descendants[1].size_bytes);
    EXPECT_EQ(jobs[0].duration, (jobs[0].memory_demand + 999) / 1000);
}

TEST(TrainScheduler, JobsJsonAndPolicyNames) {
    const auto doc = nlohmann::json::parse(
        R"({"format":"legodnn-jobs/1","jobs":[{"block_id":1,"descendant_index":1,"memory_demand":5,"duration":2}]})");
    const auto jobs = jobs_from_json(doc);
    ASSERT_EQ(jobs.size(), 1u);
    EXPECT_EQ(jobs[0].duration, 2);
    EXPECT_THROW(jobs_from_json(nlohmann::json::parse(R"({"format":"x","jobs":[]})")), ParseError);
    EXPECT_EQ(parse_policy("largest_first"), Policy::largest_first);
    EXPECT_EQ(to_string(Policy::smallest_first), "smallest_first");
    EXPECT_THROW(parse_policy("fifo"), ValidationError);
}

TEST(TrainScheduler, GanttHasOneRowPerJob) {
    const ScheduleResult r = schedule(jobs_of({2, 2, 2, 2}, 5), 4, {});
    const std::string chart = gantt_chart(r, 20);
    EXPECT_EQ(std::count(chart.begin(), chart.end(), '\n'), 5);
    EXPECT_EQ(schedule_to_json(r)["makespan"], 10);
}

}  // namespace
}  // namespace legodnn
