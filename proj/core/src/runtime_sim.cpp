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

#include "legodnn/runtime_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "legodnn/latency.hpp"
#include "legodnn/random.hpp"

namespace legodnn::sim {

LoadRange parse_load(std::string_view name) {
    if (name == "small") {
        return {1, 6};
    }
    if (name == "medium") {
        return {2, 8};
    }
    if (name == "large") {
        return {3, 10};
    }
    throw ValidationError("unknown load '" + std::string(name) + "' (expected small, medium or large)");
}

std::string load_name(const LoadRange& load) {
    if (load.min_apps == 1 && load.max_apps == 6) {
        return "small";
    }
    if (load.min_apps == 2 && load.max_apps == 8) {
        return "medium";
    }
    if (load.min_apps == 3 && load.max_apps == 10) {
        return "large";
    }
    return std::to_string(load.min_apps) + "-" + std::to_string(load.max_apps);
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::block_grained:
            return "block_grained";
        case StrategyKind::whole_model:
            return "whole_model";
        case StrategyKind::nested_model:
            return "nested_model";
    }
    return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
    if (name == "block_grained" || name == "block") {
        return StrategyKind::block_grained;
    }
    if (name == "whole_model" || name == "whole") {
        return StrategyKind::whole_model;
    }
    if (name == "nested_model" || name == "nested") {
        return StrategyKind::nested_model;
    }
    throw ValidationError("unknown strategy '" + std::string(name) +
                          "' (expected block_grained, whole_model or nested_model)");
}

namespace {

struct App {
    int id = 0;
    std::size_t dnn = 0;
    /// Full per-block selection; empty until the first rescale places the app.
    Selection selection;
    /// Whole-model variant index, baselines only.
    int variant = -1;
};

/// Per-catalog-entry data shared by every app of that model.
struct ModelInfo {
    const DnnProfile* profile = nullptr;
    /// Original block latencies with one app running.
    std::vector<Micros> base_latency;
    /// Baselines: variant v selects variant_choice[v][block].
    std::vector<std::vector<int>> variant_choice;
    DnnProfile collapsed;
};

std::vector<int> uniform_variant(const DnnProfile& profile, int v, int variants) {
    std::vector<int> choice;
    for (const auto& block : profile.blocks) {
        const int c = block.compressed_count();
        choice.push_back(static_cast<int>(std::lround(static_cast<double>(v) * c / variants)));
    }
    return choice;
}

/// One-block stand-in whose descendants are the uniformly compressed whole
/// models, variant 0 being the original.
DnnProfile collapse(const DnnProfile& profile, const std::vector<std::vector<int>>& variants) {
    DnnProfile out;
    out.dnn_id = profile.dnn_id;
    out.base_size_bytes = profile.base_size_bytes;
    out.original_accuracy = profile.original_accuracy;
    BlockProfile block;
    block.block_id = 1;
    Bytes previous = 0;
    double previous_loss = 0.0;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        const Selection sel{variants[v]};
        Bytes blocks_size = profile.model_size(sel) - profile.residue_bytes();
        if (v > 0 && blocks_size >= previous) {
            continue;  // collapsed duplicate size, keep the variant list strictly decreasing
        }
        DescendantProfile d;
        d.descendant_index = static_cast<int>(block.descendants.size());
        d.size_bytes = blocks_size;
        d.accuracy_loss = std::max(profile.accuracy_loss(sel), previous_loss);
        block.descendants.push_back(d);
        previous = blocks_size;
        previous_loss = d.accuracy_loss;
    }
    block.original_size_bytes = block.descendants.front().size_bytes;
    out.blocks.push_back(std::move(block));
    derive_fields(out);
    return out;
}

class Simulator {
  public:
    Simulator(const WorkloadConfig& workload, const DeviceModel& device, const Strategy& strategy)
        : workload_(workload), device_(device), strategy_(strategy), rng_(workload.seed) {
        check_inputs();
        for (const auto& profile : workload_.catalog) {
            ModelInfo info;
            info.profile = &profile;
            for (const auto& block : profile.blocks) {
                info.base_latency.push_back(static_cast<double>(block.original_size_bytes) * device_.micros_per_byte);
            }
            if (strategy_.kind != StrategyKind::block_grained) {
                std::vector<std::vector<int>> kept;
                Bytes previous = 0;
                for (int v = 0; v <= strategy_.variants; ++v) {
                    auto choice = uniform_variant(profile, v, strategy_.variants);
                    const Bytes size = profile.model_size(Selection{choice});
                    if (v == 0 || size < previous) {
                        kept.push_back(std::move(choice));
                        previous = size;
                    }
                }
                info.variant_choice = std::move(kept);
                info.collapsed = collapse(profile, info.variant_choice);
            }
            models_.push_back(std::move(info));
        }
        trace_.strategy = to_string(strategy_.kind);
        trace_.scenario = to_string(device_.scenario);
        trace_.load = workload_.load;
        trace_.seed = workload_.seed;
        trace_.total_memory = device_.total_memory;
    }

    ScenarioTrace run() {
        for (int k = 0; k < workload_.load.min_apps; ++k) {
            arrive(0.0);
        }
        if (!apps_.empty()) {
            rescale(0.0);
        }
        sample(0.0);
        const auto ticks = static_cast<long>(std::floor(workload_.duration_s / workload_.event_interval_s + 1e-9));
        for (long tick = 1; tick <= ticks; ++tick) {
            const double t = static_cast<double>(tick) * workload_.event_interval_s;
            if (rng_.bernoulli(workload_.event_probability)) {
                bool create = rng_.bernoulli(0.5);
                const int count = static_cast<int>(apps_.size());
                if (count >= workload_.load.max_apps) {
                    create = false;
                }
                if (count <= workload_.load.min_apps) {
                    create = true;
                }
                const bool possible = create ? count < workload_.load.max_apps : count > workload_.load.min_apps;
                if (possible) {
                    if (create) {
                        arrive(t);
                    } else {
                        kill(t, static_cast<std::size_t>(rng_.below(apps_.size())));
                    }
                    rescale(t);
                }
            }
            sample(t);
        }
        return std::move(trace_);
    }

  private:
    void check_inputs() const {
        if (workload_.catalog.empty()) {
            throw ValidationError("simulation needs a non-empty model catalog");
        }
        for (const auto& p : workload_.catalog) {
            require_valid(p);
        }
        const auto& load = workload_.load;
        if (load.min_apps < 0 || load.max_apps < load.min_apps || load.max_apps < 1) {
            throw ValidationError("load range must satisfy 0 <= min_apps <= max_apps, max_apps >= 1");
        }
        if (!(workload_.event_probability >= 0.0 && workload_.event_probability <= 1.0)) {
            throw ValidationError("event probability must be in [0, 1]");
        }
        if (!(workload_.duration_s >= 0.0) || !(workload_.event_interval_s > 0.0)) {
            throw ValidationError("duration must be non-negative and the event interval positive");
        }
        if (device_.total_memory <= 0 || !(device_.micros_per_byte > 0.0)) {
            throw ValidationError("device memory and micros_per_byte must be positive");
        }
        if (device_.scenario != ObjectiveMode::min_latency && !(device_.latency_budget > 0.0)) {
            throw ValidationError("latency budget must be positive");
        }
        if (device_.scenario == ObjectiveMode::min_latency &&
            !(device_.accuracy_budget >= 0.0 && device_.accuracy_budget <= 1.0)) {
            throw ValidationError("accuracy budget must be in [0, 1]");
        }
        if (!(device_.sigma >= 0.0)) {
            throw ValidationError("sigma must be non-negative");
        }
        if (strategy_.variants < 1) {
            throw ValidationError("whole-model baselines need at least one compressed variant");
        }
    }

    double multiplier() const {
        return device_.contention == Contention::linear ? static_cast<double>(std::max<std::size_t>(apps_.size(), 1))
                                                        : 1.0;
    }

    /// Latency of every block descendant of `app` as the estimator sees it:
    /// one observation of the running descendant, scaled to the rest.
    std::vector<std::vector<Micros>> observed_latencies(const App& app) const {
        const ModelInfo& info = models_[app.dnn];
        const double mult = multiplier();
        std::vector<std::vector<Micros>> table;
        for (std::size_t b = 0; b < info.profile->blocks.size(); ++b) {
            const BlockProfile& block = info.profile->blocks[b];
            const int running = app.selection.choices.empty() ? 0 : app.selection.choices[b];
            const double reduction = block.descendants[running].latency_reduction;
            LatencyObservation obs{block.block_id, running, info.base_latency[b] * (1.0 - reduction) * mult};
            table.push_back(estimate_latencies(obs, block));
        }
        return table;
    }

    Micros app_latency(const App& app) const {
        const ModelInfo& info = models_[app.dnn];
        Micros total = 0.0;
        for (std::size_t b = 0; b < info.profile->blocks.size(); ++b) {
            const auto& d = info.profile->blocks[b].descendants[app.selection.choices[b]];
            total += info.base_latency[b] * (1.0 - d.latency_reduction);
        }
        return total * multiplier();
    }

    void arrive(double t) {
        App app;
        app.id = next_id_++;
        app.dnn = static_cast<std::size_t>(rng_.below(models_.size()));
        TraceEvent ev;
        ev.time_s = t;
        ev.kind = EventKind::arrive;
        ev.app_id = app.id;
        ev.dnn_id = models_[app.dnn].profile->dnn_id;
        apps_.push_back(std::move(app));
        pending_arrivals_.push_back(trace_.events.size());
        trace_.events.push_back(std::move(ev));
    }

    void kill(double t, std::size_t index) {
        const App& app = apps_[index];
        TraceEvent ev;
        ev.time_s = t;
        ev.kind = EventKind::kill;
        ev.app_id = app.id;
        ev.dnn_id = models_[app.dnn].profile->dnn_id;
        if (!app.selection.choices.empty()) {
            ev.bytes = models_[app.dnn].profile->model_size(app.selection);
            trace_.evict_bytes += ev.bytes;
        }
        apps_.erase(apps_.begin() + static_cast<std::ptrdiff_t>(index));
        trace_.events.push_back(std::move(ev));
    }

    ScalingRequest build_request() const {
        ScalingRequest req;
        req.mode = device_.scenario;
        req.memory_budget = device_.total_memory;
        req.sigma = device_.sigma;
        req.max_nodes = device_.max_nodes;
        const bool collapsed = strategy_.kind != StrategyKind::block_grained;
        for (const auto& app : apps_) {
            const ModelInfo& info = models_[app.dnn];
            auto table = observed_latencies(app);
            if (collapsed) {
                req.dnns.push_back(info.collapsed);
                std::vector<Micros> per_variant;
                for (const auto& choice : info.variant_choice) {
                    Micros sum = 0.0;
                    for (std::size_t b = 0; b < choice.size(); ++b) {
                        sum += table[b][choice[b]];
                    }
                    per_variant.push_back(sum);
                }
                req.latencies.push_back({std::move(per_variant)});
                req.current.push_back(app.variant < 0 ? Selection{} : Selection{{app.variant}});
            } else {
                req.dnns.push_back(*info.profile);
                req.latencies.push_back(std::move(table));
                req.current.push_back(app.selection);
            }
            if (device_.scenario != ObjectiveMode::min_latency) {
                req.latency_budgets.push_back(device_.latency_budget);
            }
            if (device_.scenario == ObjectiveMode::min_latency) {
                req.accuracy_budgets.push_back(device_.accuracy_budget);
            }
        }
        return req;
    }

    void rescale(double t) {
        TraceEvent ev;
        ev.time_s = t;
        ev.kind = EventKind::rescale;
        const bool collapsed = strategy_.kind != StrategyKind::block_grained;
        const ScalingRequest req = build_request();

        std::vector<Selection> targets;
        std::vector<int> target_variants(apps_.size(), -1);
        try {
            const ScalingDecision decision = solve(req);
            ev.objective = decision.objective_value;
            ev.bound_gap = decision.bound_gap;
            ev.nodes = decision.nodes_explored;
            for (std::size_t a = 0; a < apps_.size(); ++a) {
                if (collapsed) {
                    target_variants[a] = decision.selections[a].choices[0];
                    targets.push_back(Selection{models_[apps_[a].dnn].variant_choice[target_variants[a]]});
                } else {
                    targets.push_back(decision.selections[a]);
                }
            }
        } catch (const InfeasibleError& e) {
            ev.feasible = false;
            ev.note = e.what();
            targets.clear();
            for (std::size_t a = 0; a < apps_.size(); ++a) {
                const ModelInfo& info = models_[apps_[a].dnn];
                if (collapsed) {
                    target_variants[a] = static_cast<int>(info.variant_choice.size()) - 1;
                    targets.push_back(Selection{info.variant_choice.back()});
                } else {
                    targets.push_back(info.profile->most_compressed_selection());
                }
            }
        }

        for (std::size_t a = 0; a < apps_.size(); ++a) {
            App& app = apps_[a];
            const DnnProfile& profile = *models_[app.dnn].profile;
            const Selection& target = targets[a];
            if (app.selection.choices.empty()) {
                const Bytes size = profile.model_size(target);
                trace_.load_bytes += size;
                trace_.loaded_descendant_bytes += size;
                trace_.energy_joules += energy_for_bytes(size, device_.energy);
                for (auto& pending : pending_arrivals_) {
                    if (trace_.events[pending].app_id == app.id) {
                        trace_.events[pending].bytes = size;
                    }
                }
            } else if (!(app.selection == target)) {
                const Bytes from = profile.model_size(app.selection);
                const Bytes to = profile.model_size(target);
                ExchangePlan plan;
                switch (strategy_.kind) {
                    case StrategyKind::block_grained:
                        plan = diff(app.selection, target, profile, device_.energy);
                        for (const auto& s : plan.swaps) {
                            const auto& block = profile.blocks[static_cast<std::size_t>(s.block_id - 1)];
                            trace_.loaded_descendant_bytes += block.descendants[s.to_descendant].size_bytes;
                        }
                        break;
                    case StrategyKind::whole_model:
                        plan = whole_model_cost(from, to, device_.energy);
                        trace_.loaded_descendant_bytes += to;
                        break;
                    case StrategyKind::nested_model:
                        plan = nested_model_cost(from, to, device_.energy);
                        trace_.loaded_descendant_bytes += plan.bytes_in;
                        break;
                }
                const ExchangePlan whole = whole_model_cost(from, to, device_.energy);
                ev.switches += 1;
                ev.swaps += collapsed ? 1 : static_cast<int>(plan.swaps.size());
                ev.switch_bytes_in += plan.bytes_in;
                ev.switch_bytes_out += plan.bytes_out;
                ev.whole_model_bytes_in += whole.bytes_in;
                ev.whole_model_bytes_out += whole.bytes_out;
                ev.energy_joules += plan.energy_joules;
            }
            app.selection = target;
            app.variant = target_variants[a];
            ev.selections.push_back({app.id, target});
        }
        pending_arrivals_.clear();
        trace_.switch_bytes_in += ev.switch_bytes_in;
        trace_.switch_bytes_out += ev.switch_bytes_out;
        trace_.whole_model_bytes_in += ev.whole_model_bytes_in;
        trace_.whole_model_bytes_out += ev.whole_model_bytes_out;
        trace_.energy_joules += ev.energy_joules;
        trace_.events.push_back(std::move(ev));
    }

    void sample(double t) {
        TraceEvent ev;
        ev.time_s = t;
        ev.kind = EventKind::sample;
        for (const auto& app : apps_) {
            const DnnProfile& profile = *models_[app.dnn].profile;
            AppSample s;
            s.app_id = app.id;
            s.dnn_id = profile.dnn_id;
            s.latency = app_latency(app);
            s.accuracy_loss = profile.accuracy_loss(app.selection);
            s.loss_percent = 100.0 * s.accuracy_loss / profile.original_accuracy;
            s.model_bytes = profile.model_size(app.selection);
            ev.memory_used += s.model_bytes;
            ev.apps.push_back(std::move(s));
        }
        trace_.events.push_back(std::move(ev));
    }

    const WorkloadConfig& workload_;
    const DeviceModel& device_;
    Strategy strategy_;
    Rng rng_;
    std::vector<ModelInfo> models_;
    std::vector<App> apps_;
    std::vector<std::size_t> pending_arrivals_;
    int next_id_ = 0;
    ScenarioTrace trace_;
};

double percentile(const std::vector<double>& sorted, double q) {
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

nlohmann::ordered_json distribution_to_json(const Distribution& d) {
    return {{"count", d.count}, {"mean", d.mean}, {"min", d.min},     {"p25", d.p25}, {"median", d.median},
            {"p75", d.p75},     {"p90", d.p90},   {"p99", d.p99},     {"max", d.max}};
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::arrive:
            return "arrive";
        case EventKind::kill:
            return "kill";
        case EventKind::rescale:
            return "rescale";
        case EventKind::sample:
            return "sample";
    }
    return "unknown";
}

}  // namespace

ScenarioTrace run(const WorkloadConfig& workload, const DeviceModel& device, const Strategy& strategy) {
    return Simulator(workload, device, strategy).run();
}

Distribution describe(std::vector<double> values) {
    Distribution d;
    d.count = values.size();
    if (values.empty()) {
        return d;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    d.mean = sum / static_cast<double>(values.size());
    d.min = values.front();
    d.max = values.back();
    d.p25 = percentile(values, 0.25);
    d.median = percentile(values, 0.5);
    d.p75 = percentile(values, 0.75);
    d.p90 = percentile(values, 0.9);
    d.p99 = percentile(values, 0.99);
    return d;
}

Summary summarize(const ScenarioTrace& trace) {
    if (trace.events.empty()) {
        throw ValidationError("cannot summarize an empty trace");
    }
    Summary s;
    s.strategy = trace.strategy;
    s.scenario = trace.scenario;
    s.load = trace.load;
    s.seed = trace.seed;
    std::vector<double> latencies;
    std::vector<double> losses;
    double loss_sum = 0.0;
    int occupied = 0;
    double apps_sum = 0.0;
    int samples = 0;
    for (const auto& ev : trace.events) {
        switch (ev.kind) {
            case EventKind::sample: {
                ++samples;
                apps_sum += static_cast<double>(ev.apps.size());
                if (ev.apps.empty()) {
                    break;
                }
                double tick_loss = 0.0;
                for (const auto& a : ev.apps) {
                    latencies.push_back(a.latency / 1000.0);
                    losses.push_back(a.loss_percent);
                    tick_loss += a.loss_percent;
                }
                loss_sum += tick_loss / static_cast<double>(ev.apps.size());
                ++occupied;
                break;
            }
            case EventKind::rescale:
                ++s.rescales;
                s.infeasible_rescales += ev.feasible ? 0 : 1;
                s.switches += ev.switches;
                s.swaps += ev.swaps;
                break;
            default:
                break;
        }
    }
    s.latency_ms = describe(std::move(latencies));
    s.loss_percent = describe(std::move(losses));
    s.mean_loss_percent = occupied > 0 ? loss_sum / occupied : 0.0;
    s.mean_apps = samples > 0 ? apps_sum / samples : 0.0;
    s.switch_bytes = trace.switch_bytes_in + trace.switch_bytes_out;
    s.whole_model_switch_bytes = trace.whole_model_bytes_in + trace.whole_model_bytes_out;
    s.load_bytes = trace.load_bytes;
    s.evict_bytes = trace.evict_bytes;
    s.energy_joules = trace.energy_joules;
    return s;
}

std::vector<DnnProfile> default_catalog() {
    const std::vector<std::pair<std::string, int>> shapes{{"vgg16_like", 5}, {"resnet18_like", 8}, {"mobilenet_like", 5}};
    std::vector<DnnProfile> catalog;
    std::uint64_t seed = 1001;
    for (const auto& [name, blocks] : shapes) {
        SyntheticOptions opts;
        opts.dnn_id = name;
        opts.size_growth = 1.8;
        opts.depth_sensitivity = 1.2;
        catalog.push_back(generate_synthetic(blocks, 5, seed++, opts));
    }
    return catalog;
}

nlohmann::ordered_json event_to_json(const TraceEvent& ev) {
    nlohmann::ordered_json j;
    j["t"] = ev.time_s;
    j["kind"] = to_string(ev.kind);
    switch (ev.kind) {
        case EventKind::arrive:
        case EventKind::kill:
            j["app_id"] = ev.app_id;
            j["dnn_id"] = ev.dnn_id;
            j["bytes"] = ev.bytes;
            break;
        case EventKind::rescale: {
            j["feasible"] = ev.feasible;
            if (!ev.note.empty()) {
                j["note"] = ev.note;
            }
            j["objective"] = ev.objective;
            j["bound_gap"] = ev.bound_gap;
            j["nodes"] = ev.nodes;
            j["switches"] = ev.switches;
            j["swaps"] = ev.swaps;
            j["bytes_in"] = ev.switch_bytes_in;
            j["bytes_out"] = ev.switch_bytes_out;
            j["whole_model_bytes_in"] = ev.whole_model_bytes_in;
            j["whole_model_bytes_out"] = ev.whole_model_bytes_out;
            j["energy_joules"] = ev.energy_joules;
            auto sels = nlohmann::ordered_json::array();
            for (const auto& s : ev.selections) {
                sels.push_back({{"app_id", s.app_id}, {"choices", s.selection.choices}});
            }
            j["selections"] = std::move(sels);
            break;
        }
        case EventKind::sample: {
            j["memory_used"] = ev.memory_used;
            auto apps = nlohmann::ordered_json::array();
            for (const auto& a : ev.apps) {
                apps.push_back({{"app_id", a.app_id},
                                {"dnn_id", a.dnn_id},
                                {"latency_us", a.latency},
                                {"accuracy_loss", a.accuracy_loss},
                                {"loss_percent", a.loss_percent},
                                {"model_bytes", a.model_bytes}});
            }
            j["apps"] = std::move(apps);
            break;
        }
    }
    return j;
}

std::string trace_to_jsonl(const ScenarioTrace& trace) {
    std::ostringstream out;
    nlohmann::ordered_json header;
    header["format"] = "legodnn-trace/1";
    header["strategy"] = trace.strategy;
    header["scenario"] = trace.scenario;
    header["load"] = load_name(trace.load);
    header["min_apps"] = trace.load.min_apps;
    header["max_apps"] = trace.load.max_apps;
    header["seed"] = trace.seed;
    header["total_memory"] = trace.total_memory;
    out << header.dump() << '\n';
    for (const auto& ev : trace.events) {
        out << event_to_json(ev).dump() << '\n';
    }
    nlohmann::ordered_json totals;
    totals["kind"] = "totals";
    totals["load_bytes"] = trace.load_bytes;
    totals["evict_bytes"] = trace.evict_bytes;
    totals["switch_bytes_in"] = trace.switch_bytes_in;
    totals["switch_bytes_out"] = trace.switch_bytes_out;
    totals["whole_model_bytes_in"] = trace.whole_model_bytes_in;
    totals["whole_model_bytes_out"] = trace.whole_model_bytes_out;
    totals["loaded_descendant_bytes"] = trace.loaded_descendant_bytes;
    totals["energy_joules"] = trace.energy_joules;
    out << totals.dump() << '\n';
    return out.str();
}

nlohmann::ordered_json summary_to_json(const Summary& s) {
    nlohmann::ordered_json j;
    j["format"] = "legodnn-summary/1";
    j["strategy"] = s.strategy;
    j["scenario"] = s.scenario;
    j["load"] = load_name(s.load);
    j["seed"] = s.seed;
    j["mean_apps"] = s.mean_apps;
    j["mean_loss_percent"] = s.mean_loss_percent;
    j["loss_percent"] = distribution_to_json(s.loss_percent);
    j["latency_ms"] = distribution_to_json(s.latency_ms);
    j["rescales"] = s.rescales;
    j["infeasible_rescales"] = s.infeasible_rescales;
    j["switches"] = s.switches;
    j["swaps"] = s.swaps;
    j["switch_bytes"] = s.switch_bytes;
    j["whole_model_switch_bytes"] = s.whole_model_switch_bytes;
    j["load_bytes"] = s.load_bytes;
    j["evict_bytes"] = s.evict_bytes;
    j["energy_joules"] = s.energy_joules;
    return j;
}

std::string trace_to_csv(const ScenarioTrace& trace) {
    std::ostringstream out;
    out << "time_s,app_id,dnn_id,latency_ms,loss_percent,model_bytes\n";
    char buf[64];
    for (const auto& ev : trace.events) {
        if (ev.kind != EventKind::sample) {
            continue;
        }
        for (const auto& a : ev.apps) {
            out << nlohmann::json(ev.time_s).dump() << ',' << a.app_id << ',' << a.dnn_id << ',';
            std::snprintf(buf, sizeof buf, "%.6f", a.latency / 1000.0);
            out << buf << ',';
            std::snprintf(buf, sizeof buf, "%.6f", a.loss_percent);
            out << buf << ',' << a.model_bytes << '\n';
        }
    }
    return out.str();
}

}  // namespace legodnn::sim
