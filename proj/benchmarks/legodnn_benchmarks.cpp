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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "instances.hpp"
#include "legodnn/blockify.hpp"
#include "legodnn/lp.hpp"
#include "legodnn/optimizer.hpp"
#include "legodnn/random.hpp"
#include "legodnn/runtime_sim.hpp"
#include "legodnn/train_scheduler.hpp"

namespace {

using namespace legodnn;

void BM_Solve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::vector<ScalingRequest> requests;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        ScalingRequest req = testing::device_scale_instance(seed, m, kDefaultSigma);
        req.max_nodes = 20000;
        requests.push_back(std::move(req));
    }
    std::size_t k = 0;
    std::size_t nodes = 0;
    for (auto _ : state) {
        try {
            const ScalingDecision d = solve(requests[k++ % requests.size()]);
            nodes += d.nodes_explored;
            benchmark::DoNotOptimize(d.objective_value);
        } catch (const InfeasibleError&) {
        }
    }
    state.counters["nodes"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_Solve)->Arg(1)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

/// Relaxation of `groups` choice groups of 6 options under `rows` knapsack rows.
lp::GubProblem random_gub(std::size_t groups, std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    lp::GubProblem p;
    p.rows.assign(rows, {});
    p.rhs.assign(rows, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
        std::vector<std::size_t> members;
        for (int j = 0; j < 6; ++j) {
            members.push_back(p.objective.size());
            p.objective.push_back(rng.uniform(0.0, 1.0) * j);
            for (std::size_t r = 0; r < rows; ++r) {
                const double c = rng.uniform(1.0, 10.0) * (6 - j);
                p.rows[r].push_back(c);
            }
        }
        p.groups.push_back(std::move(members));
    }
    for (std::size_t r = 0; r < rows; ++r) {
        double lo = 0.0;
        double hi = 0.0;
        for (const auto& group : p.groups) {
            double gmin = 1e300;
            double gmax = 0.0;
            for (std::size_t v : group) {
                gmin = std::min(gmin, p.rows[r][v]);
                gmax = std::max(gmax, p.rows[r][v]);
            }
            lo += gmin;
            hi += gmax;
        }
        p.rhs[r] = lo + 0.4 * (hi - lo);
    }
    return p;
}

void BM_LpGub(benchmark::State& state) {
    const lp::GubProblem p = random_gub(static_cast<std::size_t>(state.range(0)), 11, 5);
    const lp::GubSolver solver(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve().objective);
    }
}
BENCHMARK(BM_LpGub)->Arg(10)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_LpDense(benchmark::State& state) {
    const lp::LpProblem p = lp::to_general(random_gub(static_cast<std::size_t>(state.range(0)), 11, 5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lp::solve_lp(p).objective);
    }
}
BENCHMARK(BM_LpDense)->Arg(10)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_Blockify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    std::vector<Layer> layers;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const bool conv = i % 3 == 0;
        layers.push_back({"l" + std::to_string(i), conv ? LayerKind::conv : LayerKind::other,
                          conv ? static_cast<std::int64_t>(1 + rng.below(1000)) : 0});
        if (i > 0) {
            edges.push_back({"l" + std::to_string(i - 1), "l" + std::to_string(i)});
        }
        if (i >= 3 && i % 3 == 2) {
            edges.push_back({"l" + std::to_string(i - 3), "l" + std::to_string(i)});
        }
    }
    const LayerGraph graph(layers, edges);
    for (auto _ : state) {
        const BlockPartition p = merge_blocks(graph, elementary_blocks(graph), 16);
        benchmark::DoNotOptimize(p.blocks.size());
    }
}
BENCHMARK(BM_Blockify)->Arg(300)->Arg(3000)->Unit(benchmark::kMicrosecond);

void BM_Schedule(benchmark::State& state) {
    const DnnProfile profile = generate_synthetic(static_cast<int>(state.range(0)), 5, 1);
    const auto jobs = jobs_from_profile(profile);
    Bytes largest = 0;
    for (const auto& j : jobs) {
        largest = std::max(largest, j.memory_demand);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(schedule(jobs, 2 * largest, {Policy::largest_first, 0}).makespan);
    }
}
BENCHMARK(BM_Schedule)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Simulate(benchmark::State& state) {
    sim::WorkloadConfig workload;
    workload.duration_s = 600.0;
    workload.load = sim::parse_load("medium");
    workload.catalog = sim::default_catalog();
    const sim::DeviceModel device;
    sim::Strategy strategy;
    strategy.kind = state.range(0) == 0 ? sim::StrategyKind::block_grained : sim::StrategyKind::whole_model;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::run(workload, device, strategy).events.size());
    }
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
