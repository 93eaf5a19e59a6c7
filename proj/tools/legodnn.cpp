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


#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli_args.hpp"
#include "legodnn/blockify.hpp"
#include "legodnn/error.hpp"
#include "legodnn/latency.hpp"
#include "legodnn/optimizer.hpp"
#include "legodnn/profile.hpp"
#include "legodnn/profile_io.hpp"
#include "legodnn/runtime_sim.hpp"
#include "legodnn/train_scheduler.hpp"

namespace {

using namespace legodnn;

enum ExitCode : int { kOk = 0, kParse = 1, kValidation = 2, kInfeasible = 3 };

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("legodnn");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("LEGODNN_LOG");
    const std::string level = env == nullptr ? "off" : env;
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        if (level != "off") {
            std::fprintf(stderr, "warning: LEGODNN_LOG must be off, info or debug; using off\n");
        }
        spdlog::set_level(spdlog::level::off);
    }
}

/// Writes `text` to `path`, or to standard output when `path` is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw ValidationError("failed writing '" + path + "'");
    }
    spdlog::info("wrote {}", path);
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------- blockify

struct BlockifyArgs {
    std::string graph;
    int num_blocks = 0;
    bool check = false;
    std::string output;
};

int cmd_blockify(const BlockifyArgs& args) {
    const LayerGraph graph = load_graph(args.graph);
    spdlog::info("graph '{}': {} layers, {} edges", args.graph, graph.size(), graph.edges().size());
    BlockPartition partition = elementary_blocks(graph);
    spdlog::info("{} elementary blocks, {} residue layers", partition.blocks.size(), partition.residue.size());
    if (args.num_blocks > 0) {
        partition = merge_blocks(graph, partition, args.num_blocks);
    }
    if (args.check) {
        const auto problems = check_partition(graph, partition);
        for (const auto& p : problems) {
            std::fprintf(stderr, "check: %s\n", p.c_str());
        }
        if (!problems.empty()) {
            return kValidation;
        }
        spdlog::info("partition check passed");
    }
    emit(args.output, dump(partition_to_json(graph, partition)));
    return kOk;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::vector<std::string> profiles;
    std::vector<std::string> latency_max;
    std::string memory_max;
    std::vector<double> accuracy_max;
    double sigma = kDefaultSigma;
    std::string mode = "max_accuracy";
    double balance_weight = 1.0;
    double micros_per_mb = 400.0;
    std::size_t max_nodes = 200'000;
    bool oracle = false;
    bool timing = false;
    std::string output;
};

/// Expands a single value to one per DNN; otherwise requires one per DNN.
template <typename T>
std::vector<T> per_dnn(const std::vector<T>& values, std::size_t m, const char* flag) {
    if (values.size() == 1) {
        return std::vector<T>(m, values.front());
    }
    if (values.size() != m) {
        throw ValidationError(std::string(flag) + " needs one value or one per profile (" +
                              std::to_string(m) + ")");
    }
    return values;
}

int cmd_optimize(const OptimizeArgs& args) {
    ScalingRequest req;
    req.mode = parse_objective_mode(args.mode);
    req.sigma = args.sigma;
    req.balance_weight = args.balance_weight;
    req.max_nodes = args.max_nodes;
    req.memory_budget = cli::parse_bytes(args.memory_max);
    if (!(args.micros_per_mb > 0.0)) {
        throw ValidationError("--us-per-mb must be positive");
    }
    for (const auto& path : args.profiles) {
        DnnProfile profile = load_profile(path);
        require_valid(profile);
        req.latencies.push_back(proportional_latencies(profile, args.micros_per_mb / 1e6));
        req.dnns.push_back(std::move(profile));
    }
    const std::size_t m = req.dnns.size();
    if (req.mode != ObjectiveMode::min_latency) {
        if (args.latency_max.empty()) {
            throw ValidationError("--latency-max is required in " + args.mode + " mode");
        }
        for (const auto& text : per_dnn(args.latency_max, m, "--latency-max")) {
            req.latency_budgets.push_back(cli::parse_duration(text));
        }
    } else {
        if (args.accuracy_max.empty()) {
            throw ValidationError("--accuracy-max is required in min_latency mode");
        }
        req.accuracy_budgets = per_dnn(args.accuracy_max, m, "--accuracy-max");
    }
    spdlog::info("optimizing {} DNNs, mode {}, sigma {}", m, args.mode, req.sigma);
    const ScalingDecision decision = solve(req);
    spdlog::info("objective {} gap {} nodes {} time {:.3f} ms", decision.objective_value, decision.bound_gap,
                 decision.nodes_explored, decision.solve_time_ms);
    auto doc = decision_to_json(req, decision, args.timing);
    if (args.oracle) {
        const ScalingDecision exact = oracle_solve(req);
        const double gap = minimized_objective(req, decision.selections) - minimized_objective(req, exact.selections);
        doc["oracle"] = {{"objective", exact.objective_value}, {"true_gap", gap},
                         {"within_sigma", gap <= req.sigma + 1e-12}};
        spdlog::info("oracle objective {} true gap {}", exact.objective_value, gap);
        emit(args.output, dump(doc));
        return gap <= req.sigma + 1e-12 ? kOk : kValidation;
    }
    emit(args.output, dump(doc));
    return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string load = "medium";
    std::string scenario = "max_accuracy";
    std::string duration = "1800s";
    std::string interval = "20s";
    double probability = 0.6;
    std::uint64_t seed = 0;
    std::string seeds;
    std::string strategy = "block_grained";
    int variants = 5;
    std::string memory;
    std::string latency_budget;
    std::optional<double> accuracy_budget;
    std::string contention = "linear";
    double sigma = kDefaultSigma;
    std::size_t max_nodes = 5000;
    std::vector<std::string> profiles;
    std::string trace;
    std::string csv;
    std::string summary;
    unsigned jobs = 0;
};

struct SimJob {
    std::uint64_t seed = 0;
    sim::Strategy strategy;
};

struct SimOutput {
    SimJob job;
    std::string jsonl;
    std::string csv;
    sim::Summary summary;
};

/// Replaces "{seed}" and "{strategy}" in an output path template.
std::string expand(std::string path, std::uint64_t seed, const std::string& strategy) {
    for (const auto& [key, value] : {std::pair<std::string, std::string>{"{seed}", std::to_string(seed)},
                                     {"{strategy}", strategy}}) {
        for (auto pos = path.find(key); pos != std::string::npos; pos = path.find(key)) {
            path.replace(pos, key.size(), value);
        }
    }
    return path;
}

std::string summary_table(const std::vector<SimOutput>& outputs) {
    std::ostringstream os;
    char line[512];
    std::snprintf(line, sizeof line, "%-6s %-14s %10s %10s %10s %9s %8s %14s %10s\n", "seed", "strategy",
                  "lat_mean", "lat_p90", "loss_%", "apps", "switches", "switch_bytes", "energy_J");
    os << line;
    for (const auto& o : outputs) {
        const auto& s = o.summary;
        std::snprintf(line, sizeof line, "%-6llu %-14s %10.3f %10.3f %10.4f %9.3f %8d %14lld %10.4f\n",
                      static_cast<unsigned long long>(s.seed), s.strategy.c_str(), s.latency_ms.mean,
                      s.latency_ms.p90, s.mean_loss_percent, s.mean_apps, s.switches,
                      static_cast<long long>(s.switch_bytes), s.energy_joules);
        os << line;
    }
    return os.str();
}

int cmd_simulate(const SimulateArgs& args) {
    sim::WorkloadConfig workload;
    workload.duration_s = cli::parse_duration(args.duration) / 1e6;
    workload.event_interval_s = cli::parse_duration(args.interval) / 1e6;
    workload.event_probability = args.probability;
    workload.load = sim::parse_load(args.load);
    if (args.profiles.empty()) {
        workload.catalog = sim::default_catalog();
    } else {
        for (const auto& path : args.profiles) {
            DnnProfile profile = load_profile(path);
            require_valid(profile);
            workload.catalog.push_back(std::move(profile));
        }
    }

    sim::DeviceModel device;
    device.scenario = parse_objective_mode(args.scenario);
    device.sigma = args.sigma;
    device.max_nodes = args.max_nodes;
    if (!args.memory.empty()) {
        device.total_memory = cli::parse_bytes(args.memory);
    }
    if (!args.latency_budget.empty()) {
        device.latency_budget = cli::parse_duration(args.latency_budget);
    }
    if (args.accuracy_budget) {
        device.accuracy_budget = *args.accuracy_budget;
    }
    if (args.contention == "linear") {
        device.contention = sim::Contention::linear;
    } else if (args.contention == "none") {
        device.contention = sim::Contention::none;
    } else {
        throw ValidationError("unknown contention model '" + args.contention + "' (use linear or none)");
    }

    std::vector<sim::StrategyKind> kinds;
    if (args.strategy == "both") {
        kinds = {sim::StrategyKind::block_grained, sim::StrategyKind::whole_model};
    } else if (args.strategy == "all") {
        kinds = {sim::StrategyKind::block_grained, sim::StrategyKind::whole_model, sim::StrategyKind::nested_model};
    } else {
        kinds = {sim::parse_strategy(args.strategy)};
    }

    auto [first, last] = args.seeds.empty() ? std::pair{args.seed, args.seed} : cli::parse_seed_range(args.seeds);
    std::vector<SimJob> jobs;
    for (std::uint64_t seed = first;; ++seed) {
        for (auto kind : kinds) {
            jobs.push_back({seed, sim::Strategy{kind, args.variants}});
        }
        if (seed == last) {
            break;
        }
    }
    const bool many = jobs.size() > 1;
    if (many && !args.trace.empty() && args.trace != "-" && args.trace.find("{seed}") == std::string::npos &&
        first != last) {
        throw ValidationError("--trace needs a {seed} placeholder with --seeds");
    }
    if (many && kinds.size() > 1 && !args.trace.empty() && args.trace.find("{strategy}") == std::string::npos) {
        throw ValidationError("--trace needs a {strategy} placeholder with several strategies");
    }

    auto run_one = [&](const SimJob& job) {
        sim::WorkloadConfig w = workload;
        w.seed = job.seed;
        const sim::ScenarioTrace trace = sim::run(w, device, job.strategy);
        SimOutput out;
        out.job = job;
        out.summary = sim::summarize(trace);
        if (!args.trace.empty()) {
            out.jsonl = sim::trace_to_jsonl(trace);
        }
        if (!args.csv.empty()) {
            out.csv = sim::trace_to_csv(trace);
        }
        return out;
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::max(1u, std::min<unsigned>(args.jobs == 0 ? hw : args.jobs,
                                                             static_cast<unsigned>(jobs.size())));
    spdlog::info("{} simulation runs on {} workers", jobs.size(), workers);
    std::vector<SimOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) {
                outputs[i] = run_one(jobs[i]);
                spdlog::debug("seed {} {} done", jobs[i].seed, sim::to_string(jobs[i].strategy.kind));
            }
        }));
    }
    for (auto& f : pool) {
        f.get();
    }

    nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
    for (const auto& o : outputs) {
        const std::string name = sim::to_string(o.job.strategy.kind);
        if (!args.trace.empty()) {
            emit(expand(args.trace, o.job.seed, name), o.jsonl);
        }
        if (!args.csv.empty()) {
            emit(expand(args.csv, o.job.seed, name), o.csv);
        }
        summaries.push_back(sim::summary_to_json(o.summary));
    }
    const std::string summary_doc = many ? dump(summaries) : dump(summaries.front());
    if (!args.summary.empty()) {
        emit(args.summary, summary_doc);
    }
    const bool stdout_busy = args.trace == "-" || args.csv == "-";
    if (!stdout_busy && args.summary != "-") {
        if (kinds.size() > 1) {
            std::cout << summary_table(outputs);
        } else if (args.summary.empty()) {
            std::cout << summary_doc;
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- schedule

struct ScheduleArgs {
    std::string jobs;
    std::string capacity;
    std::string policy = "smallest_first";
    std::uint64_t seed = 0;
    bool gantt = false;
    std::string output;
};

int cmd_schedule(const ScheduleArgs& args) {
    const auto doc = nlohmann::json::parse(read_text_file(args.jobs), nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError("'" + args.jobs + "' is not valid JSON");
    }
    const std::vector<TrainJob> jobs = jobs_from_json(doc);
    const Bytes capacity = cli::parse_bytes(args.capacity);
    std::vector<Policy> policies;
    if (args.policy == "all") {
        policies = {Policy::smallest_first, Policy::largest_first, Policy::random};
    } else {
        policies = {parse_policy(args.policy)};
    }
    std::string text;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (Policy p : policies) {
        const ScheduleResult result = schedule(jobs, capacity, SchedulePolicy{p, args.seed});
        spdlog::info("{}: makespan {} peak concurrency {}", result.policy, result.makespan, result.peak_concurrency);
        if (args.gantt) {
            text += result.policy + " (makespan " + std::to_string(result.makespan) + ")\n" + gantt_chart(result) + "\n";
        }
        results.push_back(schedule_to_json(result));
    }
    if (!args.gantt) {
        text = dump(policies.size() == 1 ? results.front() : results);
    }
    emit(args.output, text);
    return kOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::vector<std::string>& paths) {
    int status = kOk;
    for (const auto& path : paths) {
        const auto doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ParseError("'" + path + "' is not a JSON object");
        }
        const std::string format = doc.value("format", std::string{});
        if (format == kProfileFormat) {
            const DnnProfile profile = profile_from_json(doc);
            const auto violations = validate_profile(profile);
            for (const auto& v : violations) {
                std::fprintf(stderr, "%s: block %d descendant %d: %s\n", path.c_str(), v.block, v.descendant,
                             v.message.c_str());
            }
            if (!violations.empty()) {
                status = kValidation;
                continue;
            }
        } else if (format == kGraphFormat) {
            (void)graph_from_json(doc);
        } else if (format == kJobsFormat) {
            (void)jobs_from_json(doc);
        } else {
            throw ParseError("'" + path + "' has unknown format '" + format + "'");
        }
        std::cout << path << ": ok (" << format << ")\n";
    }
    return status;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    int blocks = 5;
    int descendants = 5;
    std::uint64_t seed = 0;
    std::string id = "synthetic";
    double size_growth = 1.0;
    double depth_sensitivity = 0.0;
    std::string output;
};

int cmd_generate(const GenerateArgs& args) {
    SyntheticOptions opts;
    opts.dnn_id = args.id;
    opts.size_growth = args.size_growth;
    opts.depth_sensitivity = args.depth_sensitivity;
    const DnnProfile profile = generate_synthetic(args.blocks, args.descendants, args.seed, opts);
    emit(args.output, serialize_profile(profile));
    return kOk;
}

// ---------------------------------------------------------------- space

int cmd_space(const std::vector<std::string>& paths) {
    std::vector<DnnProfile> profiles;
    for (const auto& path : paths) {
        profiles.push_back(load_profile(path));
        require_valid(profiles.back());
        std::cout << profiles.back().dnn_id << " " << scaling_space_size(profiles.back()) << "\n";
    }
    if (profiles.size() > 1) {
        const std::uint64_t combined = combined_space_size(profiles);
        std::cout << "combined " << (combined == UINT64_MAX ? std::string(">=18446744073709551615")
                                                            : std::to_string(combined))
                  << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Block-grained DNN scaling: partitioning, selection, scheduling and simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "legodnn 0.1.0");

    BlockifyArgs blockify;
    auto* sub_blockify = app.add_subcommand("blockify", "Partition a layer graph into blocks");
    sub_blockify->add_option("graph", blockify.graph, "Layer graph document (legodnn-graph/1)")->required()->check(CLI::ExistingFile);
    sub_blockify->add_option("-n,--num-blocks", blockify.num_blocks, "Merge down to this many blocks (0 keeps elementary blocks)")
        ->check(CLI::NonNegativeNumber);
    sub_blockify->add_flag("--check", blockify.check, "Verify the partition structurally; exit 2 on problems");
    sub_blockify->add_option("-o,--output", blockify.output, "Output path (default: standard output)");

    OptimizeArgs optimize;
    auto* sub_optimize = app.add_subcommand("optimize", "Select descendant blocks under latency and memory budgets");
    sub_optimize->add_option("profiles", optimize.profiles, "Profile documents (legodnn-profile/1), one per DNN")
        ->required()->check(CLI::ExistingFile);
    sub_optimize->add_option("--latency-max", optimize.latency_max,
                             "Per-DNN latency budget with unit (us, ms, s); one value or one per profile");
    sub_optimize->add_option("--memory-max", optimize.memory_max, "Shared memory budget in bytes (k, M, G, Ki, Mi, Gi)")
        ->required();
    sub_optimize->add_option("--accuracy-max", optimize.accuracy_max,
                             "Per-DNN accuracy-loss budget (min_latency mode); one value or one per profile");
    sub_optimize->add_option("--sigma", optimize.sigma, "Early-stop gap threshold")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub_optimize->add_option("--mode", optimize.mode, "max_accuracy, min_latency or balanced")->capture_default_str()
        ->check(CLI::IsMember({"max_accuracy", "min_latency", "balanced"}));
    sub_optimize->add_option("--balance-weight", optimize.balance_weight, "Latency weight in balanced mode")
        ->capture_default_str();
    sub_optimize->add_option("--us-per-mb", optimize.micros_per_mb,
                             "Original block latency per MB of block size")->capture_default_str();
    sub_optimize->add_option("--max-nodes", optimize.max_nodes, "Relaxation limit")->capture_default_str();
    sub_optimize->add_flag("--oracle", optimize.oracle, "Cross-check against exhaustive enumeration; exit 2 if the gap exceeds sigma");
    sub_optimize->add_flag("--timing", optimize.timing, "Include solve time in the output");
    sub_optimize->add_option("-o,--output", optimize.output, "Output path (default: standard output)");

    SimulateArgs simulate;
    auto* sub_simulate = app.add_subcommand("simulate", "Run the multi-DNN arrival/kill benchmark");
    sub_simulate->add_option("--load", simulate.load, "small (1-6), medium (2-8) or large (3-10) apps")
        ->capture_default_str()->check(CLI::IsMember({"small", "medium", "large"}));
    sub_simulate->add_option("--scenario", simulate.scenario, "max_accuracy, min_latency or balanced")
        ->capture_default_str()->check(CLI::IsMember({"max_accuracy", "min_latency", "balanced"}));
    sub_simulate->add_option("--duration", simulate.duration, "Simulated time with unit")->capture_default_str();
    sub_simulate->add_option("--interval", simulate.interval, "Event tick interval with unit")->capture_default_str();
    sub_simulate->add_option("--probability", simulate.probability, "Chance of an arrival or kill per tick")
        ->capture_default_str()->check(CLI::Range(0.0, 1.0));
    sub_simulate->add_option("--seed", simulate.seed, "Random seed")->capture_default_str();
    sub_simulate->add_option("--seeds", simulate.seeds, "Inclusive seed range a..b, run in parallel");
    sub_simulate->add_option("--strategy", simulate.strategy,
                             "block_grained, whole_model, nested_model, both or all")->capture_default_str()
        ->check(CLI::IsMember({"block_grained", "block", "whole_model", "whole", "nested_model", "nested", "both", "all"}));
    sub_simulate->add_option("--variants", simulate.variants, "Compressed variants for whole-model baselines")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sub_simulate->add_option("--memory", simulate.memory, "Device memory with unit (default 400MB)");
    sub_simulate->add_option("--latency-budget", simulate.latency_budget, "Per-app latency budget with unit (default 100ms)");
    sub_simulate->add_option("--accuracy-budget", simulate.accuracy_budget, "Per-app accuracy-loss budget in min_latency (default 0.05)");
    sub_simulate->add_option("--contention", simulate.contention, "linear or none")->capture_default_str();
    sub_simulate->add_option("--sigma", simulate.sigma, "Optimizer early-stop gap")->capture_default_str();
    sub_simulate->add_option("--max-nodes", simulate.max_nodes, "Relaxations per rescale")->capture_default_str();
    sub_simulate->add_option("--profile", simulate.profiles, "Catalog profile (repeatable; default: built-in catalog)")
        ->check(CLI::ExistingFile);
    sub_simulate->add_option("--trace", simulate.trace, "JSONL trace path; {seed} and {strategy} are substituted");
    sub_simulate->add_option("--csv", simulate.csv, "CSV series path; {seed} and {strategy} are substituted");
    sub_simulate->add_option("--summary", simulate.summary, "Summary document path (default: standard output)");
    sub_simulate->add_option("-j,--jobs", simulate.jobs, "Parallel runs (default: hardware threads)");

    ScheduleArgs sched;
    auto* sub_schedule = app.add_subcommand("schedule", "Schedule block re-training jobs in limited memory");
    sub_schedule->add_option("jobs", sched.jobs, "Job list document (legodnn-jobs/1)")->required()->check(CLI::ExistingFile);
    sub_schedule->add_option("--capacity", sched.capacity, "Memory capacity with unit")->required();
    sub_schedule->add_option("--policy", sched.policy, "smallest_first, largest_first, random or all")
        ->capture_default_str()->check(CLI::IsMember({"smallest_first", "largest_first", "random", "all"}));
    sub_schedule->add_option("--seed", sched.seed, "Seed for the random policy")->capture_default_str();
    sub_schedule->add_flag("--gantt", sched.gantt, "Print a text Gantt chart instead of JSON");
    sub_schedule->add_option("-o,--output", sched.output, "Output path (default: standard output)");

    std::vector<std::string> validate_paths;
    auto* sub_validate = app.add_subcommand("validate", "Check profile, graph or job documents");
    sub_validate->add_option("documents", validate_paths, "Documents to check")->required()->check(CLI::ExistingFile);

    GenerateArgs generate;
    auto* sub_generate = app.add_subcommand("generate", "Write a deterministic synthetic profile");
    sub_generate->add_option("--blocks", generate.blocks, "Blocks")->capture_default_str()->check(CLI::PositiveNumber);
    sub_generate->add_option("--descendants", generate.descendants, "Compressed descendants per block")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    sub_generate->add_option("--seed", generate.seed, "Random seed")->capture_default_str();
    sub_generate->add_option("--id", generate.id, "DNN id")->capture_default_str();
    sub_generate->add_option("--size-growth", generate.size_growth, "Per-block size growth factor")->capture_default_str();
    sub_generate->add_option("--depth-sensitivity", generate.depth_sensitivity,
                             "Loss scaling from first to last block")->capture_default_str();
    sub_generate->add_option("-o,--output", generate.output, "Output path (default: standard output)");

    std::vector<std::string> space_paths;
    auto* sub_space = app.add_subcommand("space", "Count the selectable models of each profile");
    sub_space->add_option("profiles", space_paths, "Profile documents")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (*sub_blockify) return cmd_blockify(blockify);
        if (*sub_optimize) return cmd_optimize(optimize);
        if (*sub_simulate) return cmd_simulate(simulate);
        if (*sub_schedule) return cmd_schedule(sched);
        if (*sub_validate) return cmd_validate(validate_paths);
        if (*sub_generate) return cmd_generate(generate);
        if (*sub_space) return cmd_space(space_paths);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kParse;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInfeasible;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidation;
    }
    return kOk;
}
