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

#include <sstream>
#include <string>
#include <vector>

#include "legodnn/runtime_sim.hpp"

namespace legodnn::sim {
namespace {

WorkloadConfig workload(const std::string& load, std::uint64_t seed, double duration_s = 600.0) {
    WorkloadConfig w;
    w.duration_s = duration_s;
    w.load = parse_load(load);
    w.catalog = default_catalog();
    w.seed = seed;
    return w;
}

Strategy strategy(StrategyKind kind) {
    Strategy s;
    s.kind = kind;
    return s;
}

TEST(RuntimeSim, LoadAndStrategyNames) {
    EXPECT_EQ(parse_load("small").min_apps, 1);
    EXPECT_EQ(parse_load("small").max_apps, 6);
    EXPECT_EQ(parse_load("medium").min_apps, 2);
    EXPECT_EQ(parse_load("medium").max_apps, 8);
    EXPECT_EQ(parse_load("large").min_apps, 3);
    EXPECT_EQ(parse_load("large").max_apps, 10);
    EXPECT_EQ(load_name(parse_load("medium")), "medium");
    EXPECT_EQ(load_name(LoadRange{2, 3}), "2-3");
    EXPECT_THROW(parse_load("huge"), ValidationError);
    EXPECT_EQ(parse_strategy("block"), StrategyKind::block_grained);
    EXPECT_EQ(parse_strategy("whole_model"), StrategyKind::whole_model);
    EXPECT_EQ(parse_strategy("nested"), StrategyKind::nested_model);
    EXPECT_EQ(to_string(StrategyKind::nested_model), "nested_model");
    EXPECT_THROW(parse_strategy("fine"), ValidationError);
}

TEST(RuntimeSim, DescribeUsesLinearInterpolation) {
    const Distribution d = describe({4.0, 1.0, 3.0, 2.0});
    EXPECT_EQ(d.count, 4u);
    EXPECT_DOUBLE_EQ(d.mean, 2.5);
    EXPECT_DOUBLE_EQ(d.min, 1.0);
    EXPECT_DOUBLE_EQ(d.max, 4.0);
    EXPECT_DOUBLE_EQ(d.p25, 1.75);
    EXPECT_DOUBLE_EQ(d.median, 2.5);
    EXPECT_DOUBLE_EQ(d.p75, 3.25);
    EXPECT_EQ(describe({}).count, 0u);
}

TEST(RuntimeSim, SummarizeHandTrace) {
    ScenarioTrace trace;
    TraceEvent tick;
    tick.kind = EventKind::sample;
    tick.apps = {{0, "a", 2000.0, 0.04, 5.0, 10}, {1, "b", 4000.0, 0.04, 5.0, 20}};
    trace.events = {tick, tick};
    TraceEvent empty;
    empty.kind = EventKind::sample;
    trace.events.push_back(empty);
    const Summary s = summarize(trace);
    EXPECT_DOUBLE_EQ(s.mean_loss_percent, 5.0);
    EXPECT_DOUBLE_EQ(s.latency_ms.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.mean_apps, 4.0 / 3.0);
    EXPECT_THROW(summarize(ScenarioTrace{}), ValidationError);
}

TEST(RuntimeSim, DeterministicForASeed) {
    DeviceModel device;
    const auto a = trace_to_jsonl(run(workload("medium", 7), device, strategy(StrategyKind::block_grained)));
    const auto b = trace_to_jsonl(run(workload("medium", 7), device, strategy(StrategyKind::block_grained)));
    const auto c = trace_to_jsonl(run(workload("medium", 8), device, strategy(StrategyKind::block_grained)));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(RuntimeSim, PopulationStaysInsideLoadRangeAndMemory) {
    DeviceModel device;
    for (const char* load : {"small", "large"}) {
        const ScenarioTrace trace = run(workload(load, 3), device, strategy(StrategyKind::block_grained));
        const LoadRange range = parse_load(load);
        bool last_feasible = true;
        int samples = 0;
        for (const auto& ev : trace.events) {
            if (ev.kind == EventKind::rescale) {
                last_feasible = ev.feasible;
            }
            if (ev.kind != EventKind::sample) {
                continue;
            }
            ++samples;
            EXPECT_GE(static_cast<int>(ev.apps.size()), range.min_apps);
            EXPECT_LE(static_cast<int>(ev.apps.size()), range.max_apps);
            if (last_feasible) {
                EXPECT_LE(ev.memory_used, device.total_memory);
            }
        }
        EXPECT_EQ(samples, 31);
    }
}

TEST(RuntimeSim, GenerousBudgetsNeverSwitch) {
    DeviceModel device;
    device.contention = Contention::none;
    device.latency_budget = 1e12;
    device.total_memory = 1'000'000'000'000;
    const ScenarioTrace trace = run(workload("medium", 5), device, strategy(StrategyKind::block_grained));
    const Summary s = summarize(trace);
    EXPECT_EQ(s.switches, 0);
    EXPECT_EQ(s.swaps, 0);
    EXPECT_EQ(s.switch_bytes, 0);
    EXPECT_GT(s.load_bytes, 0);
    EXPECT_DOUBLE_EQ(s.mean_loss_percent, 0.0);
}

TEST(RuntimeSim, SingleAppNeverChangesAfterInitialLoad) {
    DeviceModel device;
    WorkloadConfig w = workload("small", 4);
    w.load = LoadRange{1, 1};
    const ScenarioTrace trace = run(w, device, strategy(StrategyKind::block_grained));
    int rescales = 0;
    for (const auto& ev : trace.events) {
        rescales += ev.kind == EventKind::rescale ? 1 : 0;
        EXPECT_NE(ev.kind, EventKind::kill);
    }
    EXPECT_EQ(rescales, 1);
    EXPECT_EQ(summarize(trace).switches, 0);
}

TEST(RuntimeSim, BlockGrainedBeatsWholeModel) {
    DeviceModel device;
    const Summary block = summarize(run(workload("medium", 1, 1800.0), device, strategy(StrategyKind::block_grained)));
    const Summary whole = summarize(run(workload("medium", 1, 1800.0), device, strategy(StrategyKind::whole_model)));
    EXPECT_LT(block.mean_loss_percent, whole.mean_loss_percent);
    EXPECT_LT(block.switch_bytes, block.whole_model_switch_bytes);
}

TEST(RuntimeSim, ContentionRaisesLatencyWithLoad) {
    DeviceModel device;
    const Summary small = summarize(run(workload("small", 2), device, strategy(StrategyKind::whole_model)));
    const Summary large = summarize(run(workload("large", 2), device, strategy(StrategyKind::whole_model)));
    EXPECT_GE(large.latency_ms.mean, small.latency_ms.mean);
    EXPECT_GT(large.mean_apps, small.mean_apps);
}

TEST(RuntimeSim, OutputFormats) {
    DeviceModel device;
    const ScenarioTrace trace = run(workload("small", 9, 100.0), device, strategy(StrategyKind::nested_model));
    const std::string jsonl = trace_to_jsonl(trace);
    std::istringstream lines(jsonl);
    std::string first;
    std::getline(lines, first);
    const auto header = nlohmann::json::parse(first);
    EXPECT_EQ(header["format"], "legodnn-trace/1");
    EXPECT_EQ(header["strategy"], "nested_model");
    std::string line;
    std::string last;
    std::size_t count = 1;
    while (std::getline(lines, line)) {
        last = line;
        ++count;
    }
    EXPECT_EQ(count, trace.events.size() + 2);
    EXPECT_EQ(nlohmann::json::parse(last)["kind"], "totals");
    const std::string csv = trace_to_csv(trace);
    EXPECT_EQ(csv.rfind("time_s,app_id,dnn_id,latency_ms,loss_percent,model_bytes\n", 0), 0u);
    EXPECT_EQ(summary_to_json(summarize(trace))["format"], "legodnn-summary/1");
}

TEST(RuntimeSim, RejectsBadConfiguration) {
    DeviceModel device;
    WorkloadConfig w = workload("small", 0);
    w.catalog.clear();
    EXPECT_THROW(run(w, device, strategy(StrategyKind::block_grained)), ValidationError);
    w = workload("small", 0);
    w.load = LoadRange{3, 2};
    EXPECT_THROW(run(w, device, strategy(StrategyKind::block_grained)), ValidationError);
    w = workload("small", 0);
    w.event_interval_s = 0.0;
    EXPECT_THROW(run(w, device, strategy(StrategyKind::block_grained)), ValidationError);
    w = workload("small", 0);
    DeviceModel bad = device;
    bad.scenario = ObjectiveMode::min_latency;
    bad.accuracy_budget = 1.5;
    EXPECT_THROW(run(w, bad, strategy(StrategyKind::block_grained)), ValidationError);
    Strategy none = strategy(StrategyKind::whole_model);
    none.variants = 0;
    EXPECT_THROW(run(w, device, none), ValidationError);
}

}  // namespace
}  // namespace legodnn::sim
