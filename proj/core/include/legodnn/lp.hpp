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

#include <cstddef>
#include <string>
#include <vector>

#include "legodnn/error.hpp"

namespace legodnn::lp {

/// minimize objective . x
///   subject to  eq_rows x  = eq_rhs
///               le_rows x <= le_rhs
///               lower <= x <= upper   (finite bounds)
struct LpProblem {
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t num_vars() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;
    double objective = 0.0;
    int iterations = 0;
};

/// Raised when the simplex loses numerical control of a solve.
class NumericalError : public Error {
  public:
    using Error::Error;
};

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kOptimalityTolerance = 1e-9;
/// Smallest tableau entry the ratio test will pivot on.
inline constexpr double kPivotTolerance = 1e-9;

/// Throws ValidationError when dimensions disagree or a bound pair is inverted.
void check_problem(const LpProblem& problem);

/// Largest constraint or bound violation of `x`, each scaled by
/// max(1, |rhs|, sum |a_j x_j|).
double max_relative_violation(const LpProblem& problem, const std::vector<double>& x);

/// Dense bounded-variable primal simplex (two phases, Bland's rule).
/// Deterministic: the same problem always produces bit-identical output.
LpSolution solve_lp(const LpProblem& problem);

/// minimize objective . x
///   subject to  sum of x over each group = 1
///               rows x <= rhs
///               x >= 0
/// Every variable belongs to exactly one group.
struct GubProblem {
    std::vector<double> objective;
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;

    std::size_t num_vars() const { return objective.size(); }
};

/// Throws ValidationError when dimensions disagree or groups do not partition
/// the variables.
void check_problem(const GubProblem& problem);

/// Basis of a GubProblem: one key variable per group plus one working basic
/// column per row. Columns number structural variables first, then a slack
/// per row (n + k), then an artificial per row (n + rows + k).
struct GubBasis {
    std::vector<std::size_t> keys;
    /// Empty to start from the keys with slack or artificial working columns.
    std::vector<std::size_t> work;
};

/// Primal simplex with generalized upper bounding: the group rows are handled
/// implicitly through one key variable per group, so only a rows x rows
/// working basis is factorized. Construction validates and scales the problem
/// once; solve may then be called repeatedly with different exclusions.
class GubSolver {
  public:
    explicit GubSolver(GubProblem problem);

    const GubProblem& problem() const { return problem_; }

    /// `excluded` variables are held at zero. A `start` basis that was optimal
    /// for a less restricted problem is driven to feasibility by minimizing the
    /// newly excluded values; an unusable start falls back to a crash basis.
    /// `final_basis` receives the optimal basis. Throws NumericalError when the
    /// result fails verification.
    LpSolution solve(const std::vector<bool>& excluded = {}, const GubBasis* start = nullptr,
                     GubBasis* final_basis = nullptr) const;

    std::size_t group_of(std::size_t var) const { return group_of_[var]; }
    /// Row-scaled coefficient of `var` in row `row`.
    double scaled(std::size_t var, std::size_t row) const { return columns_[var * rows_ + row]; }
    double scaled_rhs(std::size_t row) const { return rhs_[row]; }

  private:
    GubProblem problem_;
    std::size_t rows_ = 0;
    std::vector<std::size_t> group_of_;
    std::vector<double> columns_;
    std::vector<double> rhs_;
};

/// One-shot convenience over GubSolver.
LpSolution solve_gub(const GubProblem& problem, const std::vector<bool>& excluded = {},
                     const GubBasis* start = nullptr, GubBasis* final_basis = nullptr);

/// The same problem in general form, for solve_lp.
LpProblem to_general(const GubProblem& problem, const std::vector<bool>& excluded = {});

std::string to_string(LpStatus status);

}  // namespace legodnn::lp
