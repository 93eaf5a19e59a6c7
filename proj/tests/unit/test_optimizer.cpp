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

#include <cmath>
#include <optional>
#include <vector>

#include "instances.hpp"
#include "legodnn/error.hpp"
#include "legodnn/latency.hpp"
#include "legodnn/lp.hpp"
#include "legodnn/optimizer.hpp"
#include "legodnn/profile.hpp"
#include "pareto_oracle.hpp"

namespace legodnn {
namespace {

/// Block 1: sizes 100/60/30, losses 0/0.01/0.05. Block 2: sizes 50/20, losses 0/0.02. Residue 10.
DnnProfile hand_profile(const std::string& id = "hand") {
    DnnProfile p;
    p.dnn_id = id;
    p.base_size_bytes = 160;
    BlockProfile b1;
    b1.block_id = 1;
    b1.descendants = {{0, 0.0, 100, 0.0, 0}, {1, 0.01, 60, 0.4, 0}, {2, 0.05, 30, 0.7, 0}};
    BlockProfile b2;
    b2.block_id = 2;
    b2.descendants = {{0, 0.0, 50, 0.0, 0}, {1, 0.02, 20, 0.6, 0}};
    p.blocks = {b1, b2};
    derive_fields(p);
    return p;
}

/// Latency = size in microseconds.
ScalingRequest hand_request(Micros latency, Bytes memory) {
    ScalingRequest r;
    r.dnns = {hand_profile()};
    r.latencies = {proportional_latencies(r.dnns[0], 1.0)};
    r.latency_budgets = {latency};
    r.memory_budget = memory;
    return r;
}

TEST(Optimizer, HugeBudgetsKeepOriginals) {
    const ScalingDecision d = solve(hand_request(1e9, 1'000'000));
    EXPECT_EQ(d.selections[0], (Selection{{0, 0}}));
    EXPECT_EQ(d.objective_value, 0.0);
    EXPECT_EQ(d.bound_gap, 0.0);
}

TEST(Optimizer, HandOptimumUnderMemory) {
    // Options by memory (residue 10 included): (0,0)=160 loss 0, (1,0)=120 loss .01, (0,1)=130 loss .02,
    // (1,1)=90 loss .03, (2,0)=90 loss .05, (2,1)=60 loss .07. Budget 125 -> (1,0).
    EXPECT_EQ(solve(hand_request(1e9, 125)).selections[0], (Selection{{1, 0}}));
    // Budget 95 -> (1,1) with loss .03 beats (2,0) at .05.
    const ScalingDecision d = solve(hand_request(1e9, 95));
    EXPECT_EQ(d.selections[0], (Selection{{1, 1}}));
    EXPECT_NEAR(d.objective_value, 0.03, 1e-15);
    // Latency counts block bytes only: (1,1) and (2,0) take 80 us, so 75 us leaves (2,1) at 50 us.
    EXPECT_EQ(solve(hand_request(75, 1000)).selections[0], (Selection{{2, 1}}));
}

TEST(Optimizer, InfeasibleBudgetsThrow) {
    EXPECT_THROW(solve(hand_request(1e9, 59)), InfeasibleError);
    EXPECT_THROW(solve(hand_request(49, 1000)), InfeasibleError);
}

TEST(Optimizer, DefaultSigma) {
    EXPECT_EQ(ScalingRequest{}.sigma, 0.005);
    EXPECT_EQ(kDefaultSigma, 0.005);
}

TEST(Optimizer, ValidationErrors) {
    ScalingRequest r = hand_request(100, 100);
    r.sigma = -1.0;
    EXPECT_THROW(solve(r), ValidationError);
    r = hand_request(100, 100);
    r.latency_budgets.clear();
    EXPECT_THROW(solve(r), ValidationError);
    r = hand_request(100, 0);
    EXPECT_THROW(solve(r), ValidationError);
    r = hand_request(100, 100);
    r.current = {Selection{{5, 0}}};
    EXPECT_THROW(solve(r), ValidationError);
    EXPECT_THROW(solve(ScalingRequest{}), ValidationError);
}

TEST(Optimizer, MinLatencyMaximizesReduction) {
    ScalingRequest r = hand_request(0, 1000);
    r.mode = ObjectiveMode::min_latency;
    r.latency_budgets.clear();
    r.accuracy_budgets = {0.035};
    // Feasible by loss: (0,0) 0, (1,0) .01 -> .4, (0,1) .02 -> .6, (1,1) .03 -> 1.0. (2,0) .05 exceeds.
    const ScalingDecision d = solve(r);
    EXPECT_EQ(d.selections[0], (Selection{{1, 1}}));
    EXPECT_NEAR(d.objective_value, 1.0, 1e-15);
}

TEST(Optimizer, BalancedTradesLossForLatency) {
    ScalingRequest r = hand_request(150, 1000);
    r.mode = ObjectiveMode::balanced;
    r.balance_weight = 0.15;
    // loss + 0.15 * latency / 150: (0,0) .15, (1,0) .12, (0,1) .14, (1,1) .11, (2,0) .13, (2,1) .12.
    const ScalingDecision d = balanced_solve(r);
    EXPECT_EQ(d.selections[0], (Selection{{1, 1}}));
    EXPECT_NEAR(d.objective_value, 0.11, 1e-12);
}

TEST(Optimizer, OracleAgreesOnRandomInstances) {
    int compared = 0;
    for (std::uint64_t seed = 1000; seed < 1150; ++seed) {
        const ScalingRequest r = testing::small_instance(seed, 2, 4, 3);
        std::optional<ScalingDecision> exact;
        std::optional<ScalingDecision> got;
        try {
            exact = oracle_solve(r);
        } catch (const InfeasibleError&) {
        }
        try {
            got = solve(r);
        } catch (const InfeasibleError&) {
        }
        ASSERT_EQ(exact.has_value(), got.has_value()) << "seed " << seed;
        if (exact) {
            ++compared;
            EXPECT_EQ(got->objective_value, exact->objective_value) << "seed " << seed;
            EXPECT_TRUE(is_feasible(r, got->selections));
        }
    }
    EXPECT_GT(compared, 80);
}

TEST(Optimizer, ParetoOracleMatchesEnumeration) {
    for (std::uint64_t seed = 2000; seed < 2060; ++seed) {
        const ScalingRequest r = testing::small_instance(seed);
        if (combined_space_size(r.dnns) > kOracleLimit) {
            continue;
        }
        std::optional<ScalingDecision> exact;
        try {
            exact = oracle_solve(r);
        } catch (const InfeasibleError&) {
        }
        const auto merged = testing::pareto_oracle(r);
        ASSERT_EQ(exact.has_value(), merged.has_value()) << "seed " << seed;
        if (exact) {
            EXPECT_EQ(minimized_objective(r, *merged), minimized_objective(r, exact->selections)) << "seed " << seed;
        }
    }
}

TEST(Optimizer, SigmaBoundsTheTrueGap) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (double sigma : {1e-2, 1e-3}) {
            ScalingRequest r = testing::device_scale_instance(seed, 4, sigma);
            const auto best = testing::pareto_oracle(r);
            ASSERT_TRUE(best.has_value());
            const ScalingDecision d = solve(r);
            EXPECT_LT(d.bound_gap, sigma);
            EXPECT_LE(minimized_objective(r, d.selections) - minimized_objective(r, *best), sigma + 1e-12);
        }
    }
}

TEST(Optimizer, NodeCapReportsGap) {
    ScalingRequest r = testing::device_scale_instance(4, 10, 0.0);
    r.max_nodes = 50;
    const ScalingDecision d = solve(r);
    EXPECT_LE(d.nodes_explored, r.max_nodes + 2);
    EXPECT_GE(d.bound_gap, 0.0);
    EXPECT_TRUE(is_feasible(r, d.selections));
}

TEST(Optimizer, LpRelaxationBoundsIlp) {
    for (std::uint64_t seed = 3000; seed < 3100; ++seed) {
        const ScalingRequest r = testing::small_instance(seed);
        if (combined_space_size(r.dnns) > kOracleLimit) {
            continue;
        }
        ScalingDecision exact;
        try {
            exact = oracle_solve(r);
        } catch (const InfeasibleError&) {
            continue;
        }
        const IlpModel model = build_ilp(r);
        const lp::LpSolution relaxed = lp::solve_lp(model.relaxation);
        ASSERT_EQ(relaxed.status, lp::LpStatus::optimal);
        EXPECT_LE(relaxed.objective + model.objective_offset, minimized_objective(r, exact.selections) + 1e-9);
    }
}

TEST(Optimizer, IlpLayout) {
    const IlpModel m = build_ilp(hand_request(100, 100));
    EXPECT_EQ(m.vars.size(), 5u);
    EXPECT_EQ(m.group_start, (std::vector<std::size_t>{0, 3, 5}));
    ASSERT_EQ(m.inequality_rows.size(), 2u);
    EXPECT_EQ(m.inequality_rows[0].kind, RowKind::latency);
    EXPECT_EQ(m.inequality_rows[1].kind, RowKind::memory);
}

TEST(Optimizer, ConstraintReport) {
    const ScalingRequest r = hand_request(100, 100);
    const auto statuses = check_constraints(r, {Selection{{0, 0}}});
    int unsatisfied = 0;
    for (const auto& s : statuses) {
        unsatisfied += s.satisfied ? 0 : 1;
    }
    EXPECT_EQ(unsatisfied, 2);
    EXPECT_EQ(total_memory(r, {Selection{{2, 1}}}), 60);
    EXPECT_DOUBLE_EQ(dnn_latency(r, 0, Selection{{2, 1}}), 50.0);
}

TEST(Optimizer, DecisionJsonIsDeterministicWithoutTiming) {
    const ScalingRequest r = hand_request(100, 100);
    const ScalingDecision d = solve(r);
    const auto a = decision_to_json(r, d, false).dump();
    const auto b = decision_to_json(r, solve(r), false).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(decision_to_json(r, d, false)["format"], "legodnn-decision/1");
}

}  // namespace
}  // namespace legodnn
