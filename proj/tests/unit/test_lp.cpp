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
#include <vector>

#include "legodnn/error.hpp"
#include "legodnn/lp.hpp"
#include "legodnn/random.hpp"

namespace legodnn::lp {
namespace {

/// One block, original (loss 0, 10 bytes) or compressed (loss 0.1, 5 bytes), 7 bytes available.
/// 10 x0 + 5 x1 <= 7 with x0 + x1 = 1 forces x1 >= 0.6: optimum x = (0.4, 0.6), objective 0.06.
LpProblem hand_lp() {
    LpProblem p;
    p.objective = {0.0, 0.1};
    p.eq_rows = {{1.0, 1.0}};
    p.eq_rhs = {1.0};
    p.le_rows = {{10.0, 5.0}};
    p.le_rhs = {7.0};
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 1.0};
    return p;
}

GubProblem hand_gub() {
    GubProblem g;
    g.objective = {0.0, 0.1};
    g.groups = {{0, 1}};
    g.rows = {{10.0, 5.0}};
    g.rhs = {7.0};
    return g;
}

TEST(Lp, HandProblemDense) {
    const LpSolution s = solve_lp(hand_lp());
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.values[0], 0.4, 1e-12);
    EXPECT_NEAR(s.values[1], 0.6, 1e-12);
    EXPECT_NEAR(s.objective, 0.06, 1e-12);
}

TEST(Lp, HandProblemGub) {
    const LpSolution s = solve_gub(hand_gub());
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.values[0], 0.4, 1e-12);
    EXPECT_NEAR(s.values[1], 0.6, 1e-12);
    EXPECT_NEAR(s.objective, 0.06, 1e-12);
}

TEST(Lp, InfeasibleWhenBudgetBelowSmallest) {
    LpProblem p = hand_lp();
    p.le_rhs = {4.0};
    EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
    GubProblem g = hand_gub();
    g.rhs = {4.0};
    EXPECT_EQ(solve_gub(g).status, LpStatus::infeasible);
}

TEST(Lp, ExclusionPinsGroupMembers) {
    // Excluding the compressed variable leaves only x0 = 1, which needs 10 > 7 bytes.
    EXPECT_EQ(solve_gub(hand_gub(), {false, true}).status, LpStatus::infeasible);
    const LpSolution s = solve_gub(hand_gub(), {true, false});
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, 0.1, 1e-12);
}

TEST(Lp, BoundedVariablesAtUpperBound) {
    // min -x - y, x + y <= 3, 0 <= x <= 1, 0 <= y <= 5 -> x = 1, y = 2.
    LpProblem p;
    p.objective = {-1.0, -1.0};
    p.le_rows = {{1.0, 1.0}};
    p.le_rhs = {3.0};
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 5.0};
    const LpSolution s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, -3.0, 1e-12);
    EXPECT_LE(max_relative_violation(p, s.values), 1e-9);
}

TEST(Lp, MalformedProblemsRejected) {
    LpProblem p = hand_lp();
    p.upper = {1.0};
    EXPECT_THROW(check_problem(p), ValidationError);
    GubProblem g = hand_gub();
    g.groups = {{0}};
    EXPECT_THROW(check_problem(g), ValidationError);
}

TEST(Lp, DenseIsDeterministic) {
    const LpSolution a = solve_lp(hand_lp());
    const LpSolution b = solve_lp(hand_lp());
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.iterations, b.iterations);
}

GubProblem random_gub(Rng& rng) {
    GubProblem g;
    const int groups = 1 + static_cast<int>(rng.below(6));
    const int rows = 1 + static_cast<int>(rng.below(4));
    std::size_t n = 0;
    for (int k = 0; k < groups; ++k) {
        const int size = 1 + static_cast<int>(rng.below(5));
        std::vector<std::size_t> members;
        for (int j = 0; j < size; ++j) {
            members.push_back(n++);
            g.objective.push_back(rng.uniform(-1.0, 1.0));
        }
        g.groups.push_back(std::move(members));
    }
    for (int r = 0; r < rows; ++r) {
        std::vector<double> row(n);
        double lo = 0.0;
        double hi = 0.0;
        for (const auto& group : g.groups) {
            double gmin = 1e300;
            double gmax = -1e300;
            for (std::size_t v : group) {
                row[v] = rng.uniform(-1.0, 5.0) * (rng.bernoulli(0.2) ? 1000.0 : 1.0);
                gmin = std::min(gmin, row[v]);
                gmax = std::max(gmax, row[v]);
            }
            lo += gmin;
            hi += gmax;
        }
        g.rows.push_back(std::move(row));
        g.rhs.push_back(lo + (hi - lo) * rng.uniform(-0.1, 1.0));
    }
    return g;
}

TEST(Lp, GubAgreesWithDenseOnRandomProblems) {
    Rng rng(99);
    int optimal = 0;
    for (int k = 0; k < 1500; ++k) {
        const GubProblem g = random_gub(rng);
        const LpSolution dense = solve_lp(to_general(g));
        const LpSolution gub = solve_gub(g);
        ASSERT_EQ(gub.status, dense.status) << "problem " << k;
        if (dense.status == LpStatus::optimal) {
            ++optimal;
            EXPECT_NEAR(gub.objective, dense.objective, 1e-7 * std::max(1.0, std::abs(dense.objective)))
                << "problem " << k;
        }
    }
    EXPECT_GT(optimal, 300);
}

TEST(Lp, WarmStartsAgreeWithDense) {
    Rng rng(7);
    int checked = 0;
    for (int k = 0; k < 300; ++k) {
        const GubProblem g = random_gub(rng);
        const GubSolver solver(g);
        GubBasis parent;
        std::vector<bool> excluded(g.num_vars(), false);
        if (solver.solve(excluded, nullptr, &parent).status != LpStatus::optimal) {
            continue;
        }
        // Exclude variables one at a time, warm-starting from the previous basis.
        for (int step = 0; step < 4; ++step) {
            excluded[rng.below(g.num_vars())] = true;
            GubBasis child;
            const LpSolution warm = solver.solve(excluded, &parent, &child);
            const LpSolution dense = solve_lp(to_general(g, excluded));
            ASSERT_EQ(warm.status, dense.status) << "problem " << k << " step " << step;
            ++checked;
            if (dense.status != LpStatus::optimal) {
                break;
            }
            EXPECT_NEAR(warm.objective, dense.objective, 1e-7 * std::max(1.0, std::abs(dense.objective)));
            parent = child;
        }
    }
    EXPECT_GT(checked, 300);
}

}  // namespace
}  // namespace legodnn::lp
