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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"
#include "legodnn/exchange.hpp"
#include "legodnn/optimizer.hpp"
#include "legodnn/profile.hpp"

namespace legodnn::sim {

struct LoadRange {
    int min_apps = 1;
    int max_apps = 6;
};

/// "small" (1-6), "medium" (2-8) or "large" (3-10) concurrent applications.
LoadRange parse_load(std::string_view name);
std::string load_name(const LoadRange& load);

struct WorkloadConfig {
    double duration_s = 1800.0;
    double event_interval_s = 20.0;
    /// Chance that a tick creates or kills an application.
    double event_probability = 0.6;
    LoadRange load;
    std::vector<DnnProfile> catalog;
    std::uint64_t seed = 0;
};

enum class Contention {
    /// Latency does not depend on the number of running applications.
    none,
    /// Latency is multiplied by the number of running applications.
    linear,
};

struct DeviceModel {
    Bytes total_memory = 400'000'000;
    /// Original block latency per byte of block size with one application running.
    double micros_per_byte = 4e-4;
    Contention contention = Contention::linear;
    ObjectiveMode scenario = ObjectiveMode::max_accuracy;
    /// Per-application latency budget (hard in max_accuracy, normalizer in balanced).
    Micros latency_budget = 100'000.0;
    /// Per-application accuracy-loss budget in min_latency.
    double accuracy_budget = 0.05;
    double sigma = kDefaultSigma;
    /// Relaxations per rescale; a capped solve keeps its incumbent and reports its gap.
    std::size_t max_nodes = 5000;
    EnergyModel energy;
};

enum class StrategyKind {
    /// Re-optimize per block and exchange only changed blocks.
    block_grained,
    /// Pick one of k uniformly compressed whole models per app and replace
    /// the whole model on every switch.
    whole_model,
    /// As whole_model, with nested models that page only the size difference.
    nested_model,
};

struct Strategy {
    StrategyKind kind = StrategyKind::block_grained;
    /// Compressed variants available to the whole-model baselines.
    int variants = 5;
};

std::string to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

enum class EventKind { arrive, kill, rescale, sample };

struct AppSelection {
    int app_id = 0;
    Selection selection;
};

struct AppSample {
    int app_id = 0;
    std::string dnn_id;
    Micros latency = 0.0;
    double accuracy_loss = 0.0;
    /// 100 * accuracy_loss / original accuracy of the app's model.
    double loss_percent = 0.0;
    Bytes model_bytes = 0;
};

struct TraceEvent {
    double time_s = 0.0;
    EventKind kind = EventKind::sample;

    // arrive / kill
    int app_id = -1;
    std::string dnn_id;
    Bytes bytes = 0;

    // rescale
    bool feasible = true;
    std::string note;
    std::vector<AppSelection> selections;
    double objective = 0.0;
    double bound_gap = 0.0;
    std::size_t nodes = 0;
    int swaps = 0;
    int switches = 0;
    Bytes switch_bytes_in = 0;
    Bytes switch_bytes_out = 0;
    /// The same decisions charged as whole-model replacements.
    Bytes whole_model_bytes_in = 0;
    Bytes whole_model_bytes_out = 0;
    double energy_joules = 0.0;

    // sample
    std::vector<AppSample> apps;
    Bytes memory_used = 0;
};

struct ScenarioTrace {
    std::string strategy;
    std::string scenario;
    LoadRange load;
    std::uint64_t seed = 0;
    Bytes total_memory = 0;
    std::vector<TraceEvent> events;

    Bytes load_bytes = 0;
    Bytes evict_bytes = 0;
    Bytes switch_bytes_in = 0;
    Bytes switch_bytes_out = 0;
    Bytes whole_model_bytes_in = 0;
    Bytes whole_model_bytes_out = 0;
    /// Every descendant (or whole model) ever paged in, summed by size.
    Bytes loaded_descendant_bytes = 0;
    double energy_joules = 0.0;
};

ScenarioTrace run(const WorkloadConfig& workload, const DeviceModel& device,
                  const Strategy& strategy);

struct Distribution {
    double mean = 0.0;
    double min = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Linear-interpolated percentiles of `values`.
Distribution describe(std::vector<double> values);

struct Summary {
    std::string strategy;
    std::string scenario;
    LoadRange load;
    std::uint64_t seed = 0;
    Distribution latency_ms;
    /// Per-tick mean over running apps of the loss percentage, then averaged
    /// over ticks with at least one app.
    double mean_loss_percent = 0.0;
    Distribution loss_percent;
    double mean_apps = 0.0;
    int rescales = 0;
    int infeasible_rescales = 0;
    int switches = 0;
    int swaps = 0;
    Bytes switch_bytes = 0;
    Bytes whole_model_switch_bytes = 0;
    Bytes load_bytes = 0;
    Bytes evict_bytes = 0;
    double energy_joules = 0.0;
};

Summary summarize(const ScenarioTrace& trace);

/// Three synthetic profiles shaped like the evaluation models: 5, 8 and 5
/// blocks with five descendants each.
std::vector<DnnProfile> default_catalog();

nlohmann::ordered_json event_to_json(const TraceEvent& event);
/// One JSON record per line, header line first.
std::string trace_to_jsonl(const ScenarioTrace& trace);
nlohmann::ordered_json summary_to_json(const Summary& summary);
/// time_s,app_id,dnn_id,latency_ms,loss_percent,model_bytes
std::string trace_to_csv(const ScenarioTrace& trace);

}  // namespace legodnn::sim
