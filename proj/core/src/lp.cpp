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

#include "legodnn/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace legodnn::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
/// Ratios closer than this are treated as ties and resolved by Bland's rule.
constexpr double kRatioTie = 1e-12;

enum class VarState : std::uint8_t { basic, at_lower, at_upper };

/// Working state of one solve. Columns are laid out as
/// [structural | slack per <= row | artificial per row].
class BoundedSimplex {
  public:
    explicit BoundedSimplex(const LpProblem& problem);

    LpSolution run();

  private:
    enum class Outcome { optimal, unbounded };

    Outcome iterate();
    void pivot(std::size_t row, std::size_t col);
    void set_costs(const std::vector<double>& costs);
    void recompute_basic_values();
    void drive_out_artificials();
    double nonbasic_value(std::size_t col) const {
        return state_[col] == VarState::at_upper ? upper_[col] : 0.0;
    }
    bool is_artificial(std::size_t col) const { return col >= n_ + m_le_; }

    const LpProblem& problem_;
    std::size_t n_ = 0;
    std::size_t m_le_ = 0;
    std::size_t m_ = 0;
    std::size_t cols_ = 0;

    std::vector<double> original_;  // m x cols, after scaling and sign flips
    std::vector<double> rhs_;       // shifted, scaled, sign-adjusted
    std::vector<double> tableau_;   // m x cols
    std::vector<double> beta_;      // basic values
    std::vector<double> reduced_;   // reduced costs
    std::vector<double> cost_;      // current phase costs
    std::vector<double> upper_;     // shifted upper bounds
    std::vector<std::size_t> basis_;
    std::vector<VarState> state_;
    int iterations_ = 0;
    int iteration_limit_ = 0;

    double& at(std::size_t r, std::size_t c) { return tableau_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return tableau_[r * cols_ + c]; }
};

BoundedSimplex::BoundedSimplex(const LpProblem& problem) : problem_(problem) {
    n_ = problem.num_vars();
    m_le_ = problem.le_rows.size();
    m_ = problem.eq_rows.size() + m_le_;
    cols_ = n_ + m_le_ + m_;
    original_.assign(m_ * cols_, 0.0);
    rhs_.assign(m_, 0.0);

    upper_.assign(cols_, kInf);
    for (std::size_t j = 0; j < n_; ++j) {
        upper_[j] = problem.upper[j] - problem.lower[j];
    }

    const std::size_t m_eq = problem.eq_rows.size();
    for (std::size_t r = 0; r < m_; ++r) {
        const bool is_eq = r < m_eq;
        const auto& row = is_eq ? problem.eq_rows[r] : problem.le_rows[r - m_eq];
        double b = is_eq ? problem.eq_rhs[r] : problem.le_rhs[r - m_eq];
        double scale = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            b -= row[j] * problem.lower[j];
            scale = std::max(scale, std::abs(row[j]));
        }
        if (scale == 0.0) {
            scale = 1.0;
        }
        const double sign = (b < 0.0) ? -1.0 : 1.0;
        double* dst = &original_[r * cols_];
        for (std::size_t j = 0; j < n_; ++j) {
            dst[j] = sign * row[j] / scale;
        }
        if (!is_eq) {
            dst[n_ + (r - m_eq)] = sign;
        }
        dst[n_ + m_le_ + r] = 1.0;
        rhs_[r] = sign * b / scale;
    }

    tableau_ = original_;
    beta_ = rhs_;
    basis_.resize(m_);
    state_.assign(cols_, VarState::at_lower);
    for (std::size_t r = 0; r < m_; ++r) {
        basis_[r] = n_ + m_le_ + r;
        state_[basis_[r]] = VarState::basic;
    }
    iteration_limit_ = static_cast<int>(200 * (m_ + cols_) + 1000);
}

void BoundedSimplex::set_costs(const std::vector<double>& costs) {
    cost_ = costs;
    reduced_ = costs;
    for (std::size_t r = 0; r < m_; ++r) {
        const double cb = cost_[basis_[r]];
        if (cb == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            reduced_[j] -= cb * at(r, j);
        }
    }
    for (std::size_t r = 0; r < m_; ++r) {
        reduced_[basis_[r]] = 0.0;
    }
}

void BoundedSimplex::pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    double* prow = &tableau_[row * cols_];
    for (std::size_t j = 0; j < cols_; ++j) {
        prow[j] /= p;
    }
    prow[col] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
        if (r == row) {
            continue;
        }
        const double f = at(r, col);
        if (f == 0.0) {
            continue;
        }
        double* dst = &tableau_[r * cols_];
        for (std::size_t j = 0; j < cols_; ++j) {
            dst[j] -= f * prow[j];
        }
        dst[col] = 0.0;
    }
    const double f = reduced_[col];
    if (f != 0.0) {
        for (std::size_t j = 0; j < cols_; ++j) {
            reduced_[j] -= f * prow[j];
        }
        reduced_[col] = 0.0;
    }
}

BoundedSimplex::Outcome BoundedSimplex::iterate() {
    while (true) {
        // Bland: lowest-index improving column.
        std::size_t enter = cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (state_[j] == VarState::at_lower && upper_[j] > 0.0 && reduced_[j] < -kOptimalityTolerance) {
                enter = j;
                break;
            }
            if (state_[j] == VarState::at_upper && reduced_[j] > kOptimalityTolerance) {
                enter = j;
                break;
            }
        }
        if (enter == cols_) {
            return Outcome::optimal;
        }
        if (++iterations_ > iteration_limit_) {
            throw NumericalError("degenerate: simplex iteration limit exceeded");
        }

        const double dir = state_[enter] == VarState::at_lower ? 1.0 : -1.0;
        double theta = upper_[enter];
        std::size_t leave = m_;
        bool leave_to_upper = false;
        for (std::size_t r = 0; r < m_; ++r) {
            const double alpha = dir * at(r, enter);
            double ratio = 0.0;
            bool to_upper = false;
            if (alpha > kPivotTolerance) {
                ratio = beta_[r] / alpha;
            } else if (alpha < -kPivotTolerance && upper_[basis_[r]] < kInf) {
                ratio = (upper_[basis_[r]] - beta_[r]) / (-alpha);
                to_upper = true;
            } else {
                continue;
            }
            ratio = std::max(ratio, 0.0);
            const bool better = ratio < theta - kRatioTie;
            const bool tie_wins = ratio <= theta + kRatioTie && leave < m_ && basis_[r] < basis_[leave];
            if (better || tie_wins) {
                theta = ratio;
                leave = r;
                leave_to_upper = to_upper;
            }
        }
        if (theta == kInf) {
            return Outcome::unbounded;
        }

        for (std::size_t r = 0; r < m_; ++r) {
            beta_[r] -= theta * dir * at(r, enter);
        }
        if (leave == m_) {
            state_[enter] = state_[enter] == VarState::at_lower ? VarState::at_upper : VarState::at_lower;
            continue;
        }
        const double entering_value = dir > 0 ? theta : upper_[enter] - theta;
        const std::size_t leaving = basis_[leave];
        state_[leaving] = leave_to_upper ? VarState::at_upper : VarState::at_lower;
        beta_[leave] = entering_value;
        pivot(leave, enter);
        basis_[leave] = enter;
        state_[enter] = VarState::basic;
    }
}

void BoundedSimplex::recompute_basic_values() {
    // B^-1 sits in the artificial columns of the tableau.
    std::vector<double> adjusted = rhs_;
    for (std::size_t j = 0; j < n_ + m_le_; ++j) {
        if (state_[j] == VarState::at_upper) {
            for (std::size_t r = 0; r < m_; ++r) {
                adjusted[r] -= original_[r * cols_ + j] * upper_[j];
            }
        }
    }
    for (std::size_t r = 0; r < m_; ++r) {
        double v = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
            v += at(r, n_ + m_le_ + k) * adjusted[k];
        }
        beta_[r] = v;
    }
}

void BoundedSimplex::drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
        if (!is_artificial(basis_[r])) {
            continue;
        }
        for (std::size_t j = 0; j < n_ + m_le_; ++j) {
            if (state_[j] != VarState::basic && std::abs(at(r, j)) > kPivotTolerance) {
                const std::size_t leaving = basis_[r];
                state_[leaving] = VarState::at_lower;
                beta_[r] = nonbasic_value(j);
                pivot(r, j);
                basis_[r] = j;
                state_[j] = VarState::basic;
                break;
            }
        }
    }
    // Artificials left in the basis sit on redundant rows; pin them at zero.
    for (std::size_t j = n_ + m_le_; j < cols_; ++j) {
        upper_[j] = 0.0;
    }
}

LpSolution BoundedSimplex::run() {
    LpSolution solution;

    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t j = n_ + m_le_; j < cols_; ++j) {
        phase1[j] = 1.0;
    }
    set_costs(phase1);
    iterate();
    recompute_basic_values();

    double infeasibility = 0.0;
    double rhs_scale = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
        if (is_artificial(basis_[r])) {
            infeasibility += std::max(beta_[r], 0.0);
        }
        rhs_scale = std::max(rhs_scale, std::abs(rhs_[r]));
    }
    if (infeasibility > kFeasibilityTolerance * rhs_scale) {
        solution.status = LpStatus::infeasible;
        solution.iterations = iterations_;
        return solution;
    }

    drive_out_artificials();
    std::vector<double> phase2(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        phase2[j] = problem_.objective[j];
    }
    set_costs(phase2);
    if (iterate() == Outcome::unbounded) {
        solution.status = LpStatus::unbounded;
        solution.iterations = iterations_;
        return solution;
    }
    recompute_basic_values();

    solution.values.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        solution.values[j] = state_[j] == VarState::at_upper ? upper_[j] : 0.0;
    }
    for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < n_) {
            solution.values[basis_[r]] = beta_[r];
        }
    }
    double objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double x = solution.values[j] + problem_.lower[j];
        x = std::clamp(x, problem_.lower[j], problem_.upper[j]);
        solution.values[j] = x;
        objective += problem_.objective[j] * x;
    }
    solution.objective = objective;
    solution.iterations = iterations_;
    solution.status = LpStatus::optimal;

    const double violation = max_relative_violation(problem_, solution.values);
    if (violation > kFeasibilityTolerance) {
        throw NumericalError("degenerate: optimal basis violates constraints by " + std::to_string(violation));
    }
    return solution;
}

}  // namespace

void check_problem(const LpProblem& problem) {
    const std::size_t n = problem.num_vars();
    auto fail = [](const std::string& msg) { throw ValidationError("malformed LP: " + msg); };
    if (problem.eq_rows.size() != problem.eq_rhs.size()) {
        fail("equality rows and right-hand sides differ in count");
    }
    if (problem.le_rows.size() != problem.le_rhs.size()) {
        fail("inequality rows and right-hand sides differ in count");
    }
    for (const auto& row : problem.eq_rows) {
        if (row.size() != n) {
            fail("equality row width differs from the objective");
        }
    }
    for (const auto& row : problem.le_rows) {
        if (row.size() != n) {
            fail("inequality row width differs from the objective");
        }
    }
    if (problem.lower.size() != n || problem.upper.size() != n) {
        fail("bounds size differs from the objective");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(problem.lower[j]) || !std::isfinite(problem.upper[j])) {
            fail("bounds must be finite");
        }
        if (problem.lower[j] > problem.upper[j]) {
            fail("lower bound above upper bound for variable " + std::to_string(j));
        }
    }
}

double max_relative_violation(const LpProblem& problem, const std::vector<double>& x) {
    double worst = 0.0;
    auto row_check = [&](const std::vector<double>& row, double rhs, bool equality) {
        double lhs = 0.0;
        double magnitude = std::max(1.0, std::abs(rhs));
        double abs_sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            lhs += row[j] * x[j];
            abs_sum += std::abs(row[j] * x[j]);
        }
        magnitude = std::max(magnitude, abs_sum);
        const double excess = equality ? std::abs(lhs - rhs) : std::max(0.0, lhs - rhs);
        worst = std::max(worst, excess / magnitude);
    };
    for (std::size_t r = 0; r < problem.eq_rows.size(); ++r) {
        row_check(problem.eq_rows[r], problem.eq_rhs[r], true);
    }
    for (std::size_t r = 0; r < problem.le_rows.size(); ++r) {
        row_check(problem.le_rows[r], problem.le_rhs[r], false);
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double below = problem.lower[j] - x[j];
        const double above = x[j] - problem.upper[j];
        const double excess = std::max({0.0, below, above});
        worst = std::max(worst, excess / std::max({1.0, std::abs(problem.lower[j]), std::abs(problem.upper[j])}));
    }
    return worst;
}

LpSolution solve_lp(const LpProblem& problem) {
    check_problem(problem);
    BoundedSimplex simplex(problem);
    return simplex.run();
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal:
            return "optimal";
        case LpStatus::infeasible:
            return "infeasible";
        case LpStatus::unbounded:
            return "unbounded";
    }
    return "unknown";
}

}  // namespace legodnn::lp
