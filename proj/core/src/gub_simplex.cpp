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
#include <cmath>
#include <limits>
#include <string>

#include "legodnn/lp.hpp"

namespace legodnn::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kRatioTie = 1e-12;
constexpr double kSingular = 1e-11;
constexpr int kDegenerateRunBeforeBland = 50;

/// Dense LU with partial pivoting of a small square matrix, column major.
class SmallLu {
  public:
    void factor(std::vector<double> a, std::size_t n) {
        n_ = n;
        lu_ = std::move(a);
        perm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            perm_[i] = i;
        }
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t pivot = c;
            for (std::size_t r = c + 1; r < n; ++r) {
                if (std::abs(at(r, c)) > std::abs(at(pivot, c))) {
                    pivot = r;
                }
            }
            if (std::abs(at(pivot, c)) < kSingular) {
                throw NumericalError("degenerate: singular working basis");
            }
            if (pivot != c) {
                for (std::size_t k = 0; k < n; ++k) {
                    std::swap(at(pivot, k), at(c, k));
                }
                std::swap(perm_[pivot], perm_[c]);
            }
            for (std::size_t r = c + 1; r < n; ++r) {
                at(r, c) /= at(c, c);
                const double f = at(r, c);
                if (f != 0.0) {
                    for (std::size_t k = c + 1; k < n; ++k) {
                        at(r, k) -= f * at(c, k);
                    }
                }
            }
        }
    }

    /// Solves A x = b.
    std::vector<double> solve(const std::vector<double>& b) const {
        std::vector<double> y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = b[perm_[i]];
            for (std::size_t k = 0; k < i; ++k) {
                s -= at(i, k) * y[k];
            }
            y[i] = s;
        }
        for (std::size_t i = n_; i-- > 0;) {
            double s = y[i];
            for (std::size_t k = i + 1; k < n_; ++k) {
                s -= at(i, k) * y[k];
            }
            y[i] = s / at(i, i);
        }
        return y;
    }

    /// Solves A^T x = b.
    std::vector<double> solve_transposed(const std::vector<double>& b) const {
        std::vector<double> z(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) {
                s -= at(k, i) * z[k];
            }
            z[i] = s / at(i, i);
        }
        std::vector<double> w(n_);
        for (std::size_t i = n_; i-- > 0;) {
            double s = z[i];
            for (std::size_t k = i + 1; k < n_; ++k) {
                s -= at(k, i) * w[k];
            }
            w[i] = s;
        }
        std::vector<double> x(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            x[perm_[i]] = w[i];
        }
        return x;
    }

  private:
    double& at(std::size_t r, std::size_t c) { return lu_[c * n_ + r]; }
    double at(std::size_t r, std::size_t c) const { return lu_[c * n_ + r]; }

    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
};

/// Columns: [structural | slack per row | artificial per row]. Slack k has
/// coefficient +1 in row k, artificial k has -1. Artificials and excluded
/// variables are "fixed at zero": they never enter, and phase 1 minimizes
/// their sum so a warm start may begin with some of them positive.
class GubSimplex {
  public:
    GubSimplex(const GubSolver& solver, const std::vector<bool>& excluded)
        : solver_(solver),
          problem_(solver.problem()),
          n_(problem_.num_vars()),
          rows_(problem_.rows.size()),
          groups_(problem_.groups.size()),
          excluded_(excluded.empty() ? std::vector<bool>(n_, false) : excluded) {}

    LpSolution run(const GubBasis* start, GubBasis* final_basis) {
        LpSolution out;
        const std::size_t columns = n_ + 2 * rows_;
        iteration_limit_ = 50 * static_cast<int>(columns) + 1000;
        if (!(start != nullptr && warm(*start)) && !crash()) {
            out.status = LpStatus::infeasible;
            return out;
        }

        // Phase 1: drive artificials and excluded variables to zero.
        cost_.assign(columns, 0.0);
        for (std::size_t col = 0; col < columns; ++col) {
            cost_[col] = fixed_at_zero(col) ? 1.0 : 0.0;
        }
        phase2_ = false;
        iterate();
        double rhs_scale = 1.0;
        for (std::size_t k = 0; k < rows_; ++k) {
            rhs_scale = std::max(rhs_scale, std::abs(solver_.scaled_rhs(k)));
        }
        if (infeasibility() > kFeasibilityTolerance * rhs_scale) {
            out.status = LpStatus::infeasible;
            out.iterations = iterations_;
            return out;
        }

        // Phase 2.
        cost_.assign(columns, 0.0);
        for (std::size_t v = 0; v < n_; ++v) {
            cost_[v] = problem_.objective[v];
        }
        phase2_ = true;
        iterate();

        out.values.assign(n_, 0.0);
        for (std::size_t t = 0; t < rows_; ++t) {
            if (work_[t] < n_) {
                out.values[work_[t]] = xw_[t];
            }
        }
        const auto keys = key_values();
        for (std::size_t g = 0; g < groups_; ++g) {
            out.values[key_[g]] = keys[g];
        }
        for (std::size_t v = 0; v < n_; ++v) {
            out.values[v] = excluded_[v] ? 0.0 : std::clamp(out.values[v], 0.0, 1.0);
        }
        verify(out.values);
        out.status = LpStatus::optimal;
        for (std::size_t v = 0; v < n_; ++v) {
            out.objective += problem_.objective[v] * out.values[v];
        }
        out.iterations = iterations_;
        if (final_basis != nullptr) {
            final_basis->keys = key_;
            final_basis->work = work_;
        }
        return out;
    }

  private:
    std::size_t slack(std::size_t k) const { return n_ + k; }
    std::size_t artificial(std::size_t k) const { return n_ + rows_ + k; }
    bool is_artificial(std::size_t col) const { return col >= n_ + rows_; }
    bool fixed_at_zero(std::size_t col) const {
        return col < n_ ? static_cast<bool>(excluded_[col]) : is_artificial(col);
    }

    /// Installs `start` when it is a nonsingular, primal feasible basis.
    bool warm(const GubBasis& start) {
        if (start.keys.size() != groups_ || start.work.size() != rows_) {
            return false;
        }
        const std::size_t columns = n_ + 2 * rows_;
        basic_.assign(columns, false);
        for (std::size_t g = 0; g < groups_; ++g) {
            const std::size_t key = start.keys[g];
            if (key >= n_ || solver_.group_of(key) != g || basic_[key]) {
                return false;
            }
            basic_[key] = true;
        }
        for (std::size_t col : start.work) {
            if (col >= columns || basic_[col]) {
                return false;
            }
            basic_[col] = true;
        }
        key_ = start.keys;
        work_ = start.work;
        try {
            factor_and_solve_primal();
        } catch (const NumericalError&) {
            return false;
        }
        for (std::size_t t = 0; t < rows_; ++t) {
            if (xw_[t] < -kFeasibilityTolerance) {
                return false;
            }
        }
        const auto keys = key_values();
        return std::all_of(keys.begin(), keys.end(), [](double k) { return k >= -kFeasibilityTolerance; });
    }

    /// Cheapest allowed variable keys each group; each row starts on its slack,
    /// or on its artificial when the slack would be negative.
    bool crash() {
        const std::size_t columns = n_ + 2 * rows_;
        key_.assign(groups_, kNone);
        for (std::size_t g = 0; g < groups_; ++g) {
            for (std::size_t v : problem_.groups[g]) {
                if (!excluded_[v] && (key_[g] == kNone || problem_.objective[v] < problem_.objective[key_[g]])) {
                    key_[g] = v;
                }
            }
            if (key_[g] == kNone) {
                return false;
            }
        }
        basic_.assign(columns, false);
        for (std::size_t g = 0; g < groups_; ++g) {
            basic_[key_[g]] = true;
        }
        const auto bbar = reduced_rhs();
        work_.resize(rows_);
        for (std::size_t k = 0; k < rows_; ++k) {
            work_[k] = bbar[k] >= 0.0 ? slack(k) : artificial(k);
            basic_[work_[k]] = true;
        }
        return true;
    }

    double coef(std::size_t k, std::size_t col) const {
        if (col < n_) {
            return solver_.scaled(col, k);
        }
        if (col < n_ + rows_) {
            return col - n_ == k ? 1.0 : 0.0;
        }
        return col - n_ - rows_ == k ? -1.0 : 0.0;
    }

    /// Column of `col` after eliminating its group's key.
    std::vector<double> reduced_column(std::size_t col) const {
        std::vector<double> c(rows_);
        for (std::size_t k = 0; k < rows_; ++k) {
            c[k] = coef(k, col);
        }
        if (col < n_) {
            const std::size_t key = key_[solver_.group_of(col)];
            for (std::size_t k = 0; k < rows_; ++k) {
                c[k] -= solver_.scaled(key, k);
            }
        }
        return c;
    }

    std::vector<double> reduced_rhs() const {
        std::vector<double> b(rows_);
        for (std::size_t k = 0; k < rows_; ++k) {
            b[k] = solver_.scaled_rhs(k);
        }
        for (std::size_t g = 0; g < groups_; ++g) {
            for (std::size_t k = 0; k < rows_; ++k) {
                b[k] -= solver_.scaled(key_[g], k);
            }
        }
        return b;
    }

    std::vector<double> key_values() const {
        std::vector<double> keys(groups_, 1.0);
        for (std::size_t t = 0; t < rows_; ++t) {
            if (work_[t] < n_) {
                keys[solver_.group_of(work_[t])] -= xw_[t];
            }
        }
        return keys;
    }

    double infeasibility() const {
        double total = 0.0;
        for (std::size_t t = 0; t < rows_; ++t) {
            if (fixed_at_zero(work_[t])) {
                total += std::max(0.0, xw_[t]);
            }
        }
        const auto keys = key_values();
        for (std::size_t g = 0; g < groups_; ++g) {
            if (excluded_[key_[g]]) {
                total += std::max(0.0, keys[g]);
            }
        }
        return total;
    }

    void factor_and_solve_primal() {
        std::vector<double> w(rows_ * rows_);
        for (std::size_t t = 0; t < rows_; ++t) {
            const auto col = reduced_column(work_[t]);
            std::copy(col.begin(), col.end(), w.begin() + static_cast<std::ptrdiff_t>(t * rows_));
        }
        lu_.factor(std::move(w), rows_);
        xw_ = rows_ > 0 ? lu_.solve(reduced_rhs()) : std::vector<double>{};
    }

    void factor_and_solve() {
        factor_and_solve_primal();
        std::vector<double> cbar(rows_);
        for (std::size_t t = 0; t < rows_; ++t) {
            const std::size_t col = work_[t];
            cbar[t] = cost_[col] - (col < n_ ? cost_[key_[solver_.group_of(col)]] : 0.0);
        }
        pi_ = rows_ > 0 ? lu_.solve_transposed(cbar) : std::vector<double>{};
    }

    void iterate() {
        int degenerate_run = 0;
        std::vector<double> u(n_, 0.0);
        while (true) {
            if (++iterations_ > iteration_limit_) {
                throw NumericalError("degenerate: simplex iteration limit exceeded");
            }
            factor_and_solve();

            // Pricing: d_v = (c_v - pi a_v) - (c_key - pi a_key).
            for (std::size_t v = 0; v < n_; ++v) {
                if (excluded_[v] && !basic_[v]) {
                    continue;
                }
                double s = cost_[v];
                for (std::size_t k = 0; k < rows_; ++k) {
                    s -= pi_[k] * solver_.scaled(v, k);
                }
                u[v] = s;
            }
            const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
            std::size_t entering = kNone;
            double best = 0.0;
            auto consider = [&](std::size_t col, double d) {
                if (d >= -kOptimalityTolerance) {
                    return;
                }
                if (entering == kNone || (!bland && d < best)) {
                    entering = col;
                    best = d;
                }
            };
            for (std::size_t v = 0; v < n_; ++v) {
                if (!excluded_[v] && !basic_[v]) {
                    consider(v, u[v] - u[key_[solver_.group_of(v)]]);
                }
            }
            for (std::size_t k = 0; k < rows_; ++k) {
                if (!basic_[slack(k)]) {
                    consider(slack(k), -pi_[k]);
                }
            }
            if (entering == kNone) {
                return;
            }

            // Ratio test over the working basics and the keys.
            const auto alpha = lu_.solve(reduced_column(entering));
            const std::size_t q_group = entering < n_ ? solver_.group_of(entering) : kNone;
            double theta = std::numeric_limits<double>::infinity();
            std::size_t leave = kNone;
            auto offer = [&](double ratio, std::size_t col) {
                if (ratio < theta - kRatioTie || (ratio <= theta + kRatioTie && col < leave)) {
                    theta = std::min(theta, ratio);
                    leave = col;
                }
            };
            std::vector<double> rate(groups_, 0.0);
            std::vector<double> key_value(groups_, 1.0);
            for (std::size_t t = 0; t < rows_; ++t) {
                const std::size_t col = work_[t];
                if (col < n_) {
                    rate[solver_.group_of(col)] += alpha[t];
                    key_value[solver_.group_of(col)] -= xw_[t];
                }
                if (phase2_ && fixed_at_zero(col)) {
                    if (std::abs(alpha[t]) > kPivotTolerance) {
                        offer(0.0, col);
                    }
                } else if (alpha[t] > kPivotTolerance) {
                    offer(std::max(xw_[t], 0.0) / alpha[t], col);
                }
            }
            if (q_group != kNone) {
                rate[q_group] -= 1.0;
            }
            for (std::size_t g = 0; g < groups_; ++g) {
                if (phase2_ && excluded_[key_[g]]) {
                    if (std::abs(rate[g]) > kPivotTolerance) {
                        offer(0.0, key_[g]);
                    }
                } else if (rate[g] < -kPivotTolerance) {
                    offer(std::max(key_value[g], 0.0) / -rate[g], key_[g]);
                }
            }
            if (leave == kNone) {
                throw NumericalError("degenerate: unbounded direction in a bounded problem");
            }
            degenerate_run = theta <= kRatioTie ? degenerate_run + 1 : 0;

            basic_[entering] = true;
            basic_[leave] = false;
            const auto slot = std::find(work_.begin(), work_.end(), leave);
            if (slot != work_.end()) {
                *slot = entering;
                continue;
            }
            // A key left: promote the lowest-index basic member of its group.
            const std::size_t g = solver_.group_of(leave);
            std::size_t promoted = q_group == g ? entering : kNone;
            for (std::size_t col : work_) {
                if (col < n_ && solver_.group_of(col) == g && col < promoted) {
                    promoted = col;
                }
            }
            if (promoted == kNone) {
                throw NumericalError("degenerate: group lost every basic variable");
            }
            key_[g] = promoted;
            if (promoted != entering) {
                *std::find(work_.begin(), work_.end(), promoted) = entering;
            }
        }
    }

    void verify(const std::vector<double>& x) const {
        for (std::size_t k = 0; k < rows_; ++k) {
            double lhs = 0.0;
            double magnitude = 0.0;
            for (std::size_t v = 0; v < n_; ++v) {
                lhs += problem_.rows[k][v] * x[v];
                magnitude += std::abs(problem_.rows[k][v] * x[v]);
            }
            const double scale = std::max({1.0, std::abs(problem_.rhs[k]), magnitude});
            if (lhs - problem_.rhs[k] > kFeasibilityTolerance * scale) {
                throw NumericalError("degenerate: row " + std::to_string(k) + " violated after solve");
            }
        }
    }

    const GubSolver& solver_;
    const GubProblem& problem_;
    std::size_t n_;
    std::size_t rows_;
    std::size_t groups_;
    std::vector<bool> excluded_;
    std::vector<std::size_t> key_;
    std::vector<std::size_t> work_;
    std::vector<bool> basic_;
    std::vector<double> cost_;
    bool phase2_ = false;
    SmallLu lu_;
    std::vector<double> xw_;
    std::vector<double> pi_;
    int iterations_ = 0;
    int iteration_limit_ = 0;
};

}  // namespace

void check_problem(const GubProblem& problem) {
    const std::size_t n = problem.num_vars();
    if (problem.rows.size() != problem.rhs.size()) {
        throw ValidationError("malformed LP: row and rhs counts differ");
    }
    for (const auto& row : problem.rows) {
        if (row.size() != n) {
            throw ValidationError("malformed LP: row length differs from variable count");
        }
    }
    std::vector<int> seen(n, 0);
    for (const auto& group : problem.groups) {
        if (group.empty()) {
            throw ValidationError("malformed LP: empty group");
        }
        for (std::size_t v : group) {
            if (v >= n) {
                throw ValidationError("malformed LP: group references an unknown variable");
            }
            ++seen[v];
        }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
        throw ValidationError("malformed LP: groups must partition the variables");
    }
}

GubSolver::GubSolver(GubProblem problem) : problem_(std::move(problem)) {
    check_problem(problem_);
    const std::size_t n = problem_.num_vars();
    rows_ = problem_.rows.size();
    group_of_.assign(n, 0);
    for (std::size_t g = 0; g < problem_.groups.size(); ++g) {
        for (std::size_t v : problem_.groups[g]) {
            group_of_[v] = g;
        }
    }
    columns_.assign(n * rows_, 0.0);
    rhs_.assign(rows_, 0.0);
    for (std::size_t k = 0; k < rows_; ++k) {
        double scale = 0.0;
        for (double x : problem_.rows[k]) {
            scale = std::max(scale, std::abs(x));
        }
        scale = scale > 0.0 ? scale : 1.0;
        for (std::size_t v = 0; v < n; ++v) {
            columns_[v * rows_ + k] = problem_.rows[k][v] / scale;
        }
        rhs_[k] = problem_.rhs[k] / scale;
    }
}

LpSolution GubSolver::solve(const std::vector<bool>& excluded, const GubBasis* start, GubBasis* final_basis) const {
    if (!excluded.empty() && excluded.size() != problem_.num_vars()) {
        throw ValidationError("malformed LP: exclusion mask length differs from variable count");
    }
    if (start != nullptr) {
        try {
            return GubSimplex(*this, excluded).run(start, final_basis);
        } catch (const NumericalError&) {
            // Retry from a crash basis.
        }
    }
    return GubSimplex(*this, excluded).run(nullptr, final_basis);
}

LpSolution solve_gub(const GubProblem& problem, const std::vector<bool>& excluded, const GubBasis* start,
                     GubBasis* final_basis) {
    return GubSolver(problem).solve(excluded, start, final_basis);
}

LpProblem to_general(const GubProblem& problem, const std::vector<bool>& excluded) {
    const std::size_t n = problem.num_vars();
    LpProblem out;
    out.objective = problem.objective;
    for (const auto& group : problem.groups) {
        std::vector<double> row(n, 0.0);
        for (std::size_t v : group) {
            row[v] = 1.0;
        }
        out.eq_rows.push_back(std::move(row));
        out.eq_rhs.push_back(1.0);
    }
    out.le_rows = problem.rows;
    out.le_rhs = problem.rhs;
    out.lower.assign(n, 0.0);
    out.upper.assign(n, 1.0);
    for (std::size_t v = 0; v < excluded.size(); ++v) {
        if (excluded[v]) {
            out.upper[v] = 0.0;
        }
    }
    return out;
}

}  // namespace legodnn::lp
