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

#include "legodnn/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <optional>
#include <queue>
#include <sstream>

namespace legodnn {

namespace {

constexpr double kIntegralityTolerance = 1e-9;
constexpr double kBudgetTolerance = 1e-9;

bool within_budget(double value, double budget) {
    return value <= budget + kBudgetTolerance * std::max(1.0, std::abs(budget));
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

/// Per-DNN partial sums of one selection, in block order. Shared by every
/// objective comparison.
struct DnnTotals {
    double loss = 0.0;
    double reduction = 0.0;
    double latency = 0.0;
    Bytes memory = 0;
};

DnnTotals dnn_totals(const ScalingRequest& request, int a, const Selection& selection) {
    const DnnProfile& dnn = request.dnns[a];
    DnnTotals t;
    t.memory = dnn.base_size_bytes;
    for (std::size_t i = 0; i < dnn.blocks.size(); ++i) {
        const int j = selection.choices[i];
        const auto& desc = dnn.blocks[i].descendants[j];
        t.loss += desc.accuracy_loss;
        t.reduction += desc.latency_reduction;
        t.latency += request.latencies[a][i][j];
        t.memory -= desc.size_reduction_bytes;
    }
    return t;
}

/// The DNN's contribution to the minimized objective.
double dnn_term(const ScalingRequest& request, int a, const DnnTotals& t) {
    switch (request.mode) {
        case ObjectiveMode::max_accuracy:
            return t.loss;
        case ObjectiveMode::min_latency:
            return t.reduction;
        case ObjectiveMode::balanced:
            return t.loss + request.balance_weight * t.latency / request.latency_budgets[a];
    }
    return 0.0;
}

double sum_terms(const ScalingRequest& request, const std::vector<double>& terms) {
    double total = 0.0;
    for (double term : terms) {
        total += term;
    }
    return request.mode == ObjectiveMode::min_latency ? -total : total;
}

bool feasible_totals(const ScalingRequest& request, const std::vector<DnnTotals>& totals) {
    Bytes memory = 0;
    for (std::size_t a = 0; a < totals.size(); ++a) {
        memory += totals[a].memory;
        if (request.mode == ObjectiveMode::max_accuracy &&
            !within_budget(totals[a].latency, request.latency_budgets[a])) {
            return false;
        }
        if (request.mode == ObjectiveMode::min_latency &&
            !within_budget(totals[a].loss, request.accuracy_budgets[a])) {
            return false;
        }
    }
    return memory <= request.memory_budget;
}

[[noreturn]] void throw_infeasible(const ScalingRequest& request) {
    std::vector<Selection> compressed;
    std::vector<Selection> original;
    for (const auto& dnn : request.dnns) {
        compressed.push_back(dnn.most_compressed_selection());
        original.push_back(dnn.original_selection());
    }
    for (const auto* candidate : {&compressed, &original}) {
        const auto statuses = check_constraints(request, *candidate);
        const ConstraintStatus* worst = nullptr;
        for (const auto& s : statuses) {
            if (!s.satisfied && (worst == nullptr || s.excess() > worst->excess())) {
                worst = &s;
            }
        }
        if (worst != nullptr) {
            const char* which = candidate == &compressed ? "every block at its most compressed descendant"
                                                         : "every block at its original";
            throw InfeasibleError("infeasible budgets: " + worst->describe() + " with " + which);
        }
    }
    throw InfeasibleError("infeasible budgets: no selection meets every constraint at once");
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

lp::GubProblem gub_form(const IlpModel& model) {
    lp::GubProblem gub;
    gub.objective = model.relaxation.objective;
    gub.rows = model.relaxation.le_rows;
    gub.rhs = model.relaxation.le_rhs;
    for (std::size_t g = 0; g + 1 < model.group_start.size(); ++g) {
        std::vector<std::size_t> members;
        for (std::size_t v = model.group_start[g]; v < model.group_start[g + 1]; ++v) {
            members.push_back(v);
        }
        gub.groups.push_back(std::move(members));
    }
    return gub;
}

class BranchAndBound {
  public:
    BranchAndBound(const ScalingRequest& request, const IlpModel& model)
        : request_(request), model_(model), solver_(gub_form(model)) {}

    ScalingDecision run();

  private:
    struct Node {
        std::vector<std::int8_t> pins;
        std::vector<double> values;
        double bound = 0.0;
        int depth = 0;
        std::size_t seq = 0;
        bool integral = false;
        /// Optimal relaxation basis; empty keys when the dense fallback solved the node.
        lp::GubBasis basis;
    };

    struct NodeOrder {
        bool operator()(const Node& a, const Node& b) const {
            // priority_queue pops the largest; invert for best-first.
            if (a.bound != b.bound) {
                return a.bound > b.bound;
            }
            if (a.depth != b.depth) {
                return a.depth < b.depth;
            }
            return a.seq > b.seq;
        }
    };

    std::optional<Node> evaluate(std::vector<std::int8_t> pins, int depth, const lp::GubBasis* parent_basis);
    lp::LpSolution relax(const std::vector<std::int8_t>& pins, const lp::GubBasis* parent_basis,
                         lp::GubBasis& basis) const;
    void try_incumbent(const Node& node);
    void try_candidate(const std::vector<std::size_t>& rounded);
    void seed_incumbents();
    std::optional<std::vector<std::size_t>> round_and_repair(const std::vector<double>& values) const;
    void polish(std::vector<std::size_t>& chosen) const;
    std::vector<Selection> to_selections(const std::vector<std::size_t>& chosen) const;
    bool prunable(double bound) const {
        return incumbent_ && bound >= incumbent_objective_ - 1e-12 * std::max(1.0, std::abs(incumbent_objective_));
    }
    std::size_t branching_variable(const Node& node) const;

    const ScalingRequest& request_;
    const IlpModel& model_;
    lp::GubSolver solver_;
    std::size_t nodes_ = 0;
    std::size_t next_seq_ = 0;
    std::optional<std::vector<Selection>> incumbent_;
    double incumbent_objective_ = 0.0;
};

lp::LpSolution BranchAndBound::relax(const std::vector<std::int8_t>& pins, const lp::GubBasis* parent_basis,
                                     lp::GubBasis& basis) const {
    std::vector<bool> excluded(pins.size(), false);
    for (std::size_t g = 0; g + 1 < model_.group_start.size(); ++g) {
        const std::size_t first = model_.group_start[g];
        const std::size_t last = model_.group_start[g + 1];
        std::size_t forced = last;
        for (std::size_t v = first; v < last; ++v) {
            excluded[v] = pins[v] == 0;
            if (pins[v] == 1) {
                forced = v;
            }
        }
        if (forced != last) {
            for (std::size_t v = first; v < last; ++v) {
                excluded[v] = v != forced;
            }
        }
    }
    const bool warm = parent_basis != nullptr && !parent_basis->keys.empty();
    try {
        return solver_.solve(excluded, warm ? parent_basis : nullptr, &basis);
    } catch (const lp::NumericalError&) {
        basis = {};
        lp::LpProblem problem = model_.relaxation;
        for (std::size_t v = 0; v < pins.size(); ++v) {
            if (pins[v] >= 0) {
                problem.lower[v] = problem.upper[v] = pins[v];
            }
        }
        return lp::solve_lp(problem);
    }
}

std::optional<BranchAndBound::Node> BranchAndBound::evaluate(std::vector<std::int8_t> pins, int depth,
                                                            const lp::GubBasis* parent_basis) {
    ++nodes_;
    lp::GubBasis basis;
    lp::LpSolution solution = relax(pins, parent_basis, basis);
    if (solution.status != lp::LpStatus::optimal) {
        return std::nullopt;
    }
    Node node;
    node.pins = std::move(pins);
    node.bound = solution.objective + model_.objective_offset;
    node.values = std::move(solution.values);
    node.depth = depth;
    node.seq = next_seq_++;
    node.integral = std::all_of(node.values.begin(), node.values.end(), [](double x) {
        return std::abs(x - std::round(x)) <= kIntegralityTolerance;
    });
    node.basis = std::move(basis);
    return node;
}

std::optional<std::vector<std::size_t>> BranchAndBound::round_and_repair(const std::vector<double>& values) const {
    const lp::GubProblem& gub = solver_.problem();
    const std::size_t groups = gub.groups.size();
    const std::size_t rows = gub.rows.size();
    std::vector<std::size_t> chosen(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t best = model_.group_start[g];
        for (std::size_t v = best + 1; v < model_.group_start[g + 1]; ++v) {
            if (values[v] > values[best]) {
                best = v;
            }
        }
        chosen[g] = best;
    }

    // Greedy repair: among blocks that appear in a violated row, push the one
    // with the cheapest loss per freed byte to its most compressed descendant.
    const int m = static_cast<int>(request_.dnns.size());
    while (true) {
        bool memory_bad = false;
        std::vector<bool> latency_bad(m, false);
        bool any_bad = false;
        for (std::size_t k = 0; k < rows; ++k) {
            double lhs = 0.0;
            double magnitude = 0.0;
            for (std::size_t g = 0; g < groups; ++g) {
                lhs += gub.rows[k][chosen[g]];
                magnitude += std::abs(gub.rows[k][chosen[g]]);
            }
            if (lhs - gub.rhs[k] <= 1e-9 * std::max({1.0, std::abs(gub.rhs[k]), magnitude})) {
                continue;
            }
            any_bad = true;
            const RowRef& ref = model_.inequality_rows[k];
            switch (ref.kind) {
                case RowKind::memory:
                    memory_bad = true;
                    break;
                case RowKind::latency:
                    latency_bad[ref.dnn] = true;
                    break;
                case RowKind::accuracy:
                    return std::nullopt;
            }
        }
        if (!any_bad) {
            return chosen;
        }
        std::size_t best_group = groups;
        double best_ratio = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
            const VarRef& ref = model_.vars[chosen[g]];
            if (!memory_bad && !latency_bad[ref.dnn]) {
                continue;
            }
            const BlockProfile& block = request_.dnns[ref.dnn].blocks[ref.block];
            const int cur = ref.descendant;
            const int tgt = block.most_compressed();
            if (cur == tgt) {
                continue;
            }
            const double dloss = block.descendants[tgt].accuracy_loss - block.descendants[cur].accuracy_loss;
            const auto dbytes =
                static_cast<double>(block.descendants[cur].size_bytes - block.descendants[tgt].size_bytes);
            const double ratio = dloss / dbytes;
            if (best_group == groups || ratio < best_ratio) {
                best_group = g;
                best_ratio = ratio;
            }
        }
        if (best_group == groups) {
            return std::nullopt;
        }
        const VarRef& ref = model_.vars[chosen[best_group]];
        chosen[best_group] = model_.group_start[best_group] +
                             static_cast<std::size_t>(request_.dnns[ref.dnn].blocks[ref.block].most_compressed());
    }
}

void BranchAndBound::polish(std::vector<std::size_t>& chosen) const {
    // Best-improvement single-block moves that keep every row satisfied.
    const lp::GubProblem& gub = solver_.problem();
    const std::size_t groups = gub.groups.size();
    const std::size_t rows = gub.rows.size();
    std::vector<double> activity(rows, 0.0);
    std::vector<double> tolerance(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        double magnitude = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
            activity[k] += gub.rows[k][chosen[g]];
            magnitude += std::abs(gub.rows[k][chosen[g]]);
        }
        tolerance[k] = 1e-9 * std::max({1.0, std::abs(gub.rhs[k]), magnitude});
    }
    const auto& cost = gub.objective;
    while (true) {
        double best_delta = -1e-12;
        std::size_t best_group = groups;
        std::size_t best_var = 0;
        for (std::size_t g = 0; g < groups; ++g) {
            const std::size_t cur = chosen[g];
            for (std::size_t v = model_.group_start[g]; v < model_.group_start[g + 1]; ++v) {
                const double delta = cost[v] - cost[cur];
                if (v == cur || !(delta < best_delta)) {
                    continue;
                }
                bool fits = true;
                for (std::size_t k = 0; k < rows && fits; ++k) {
                    fits = activity[k] + gub.rows[k][v] - gub.rows[k][cur] <= gub.rhs[k] + tolerance[k];
                }
                if (fits) {
                    best_delta = delta;
                    best_group = g;
                    best_var = v;
                }
            }
        }
        if (best_group == groups) {
            return;
        }
        for (std::size_t k = 0; k < rows; ++k) {
            activity[k] += gub.rows[k][best_var] - gub.rows[k][chosen[best_group]];
        }
        chosen[best_group] = best_var;
    }
}

std::vector<Selection> BranchAndBound::to_selections(const std::vector<std::size_t>& chosen) const {
    std::vector<Selection> out(request_.dnns.size());
    for (std::size_t v : chosen) {
        const VarRef& ref = model_.vars[v];
        out[static_cast<std::size_t>(ref.dnn)].choices.push_back(ref.descendant);
    }
    return out;
}

void BranchAndBound::try_incumbent(const Node& node) {
    if (auto rounded = round_and_repair(node.values)) {
        try_candidate(*rounded);
    }
}

void BranchAndBound::seed_incumbents() {
    // All-original and all-most-compressed selections, each polished.
    const std::size_t groups = model_.group_start.size() - 1;
    std::vector<std::size_t> first(groups);
    std::vector<std::size_t> last(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        first[g] = model_.group_start[g];
        last[g] = model_.group_start[g + 1] - 1;
    }
    try_candidate(first);
    try_candidate(last);
}

void BranchAndBound::try_candidate(const std::vector<std::size_t>& rounded) {
    auto improved = rounded;
    polish(improved);
    const auto& cost = solver_.problem().objective;
    auto value = [&](const std::vector<std::size_t>& chosen) {
        double total = 0.0;
        for (std::size_t v : chosen) {
            total += cost[v];
        }
        return total + model_.objective_offset;
    };
    // Cheap screen in LP units before the exact substitution check.
    if (incumbent_ && value(improved) >= incumbent_objective_ - 1e-12) {
        return;
    }
    std::vector<Selection> candidate = to_selections(improved);
    if (!is_feasible(request_, candidate)) {
        candidate = to_selections(rounded);
        if (!is_feasible(request_, candidate)) {
            return;
        }
    }
    const double objective = minimized_objective(request_, candidate);
    if (!incumbent_ || objective < incumbent_objective_) {
        incumbent_ = std::move(candidate);
        incumbent_objective_ = objective;
    }
}

std::size_t BranchAndBound::branching_variable(const Node& node) const {
    std::size_t best = node.values.size();
    double best_distance = 1.0;
    for (std::size_t v = 0; v < node.values.size(); ++v) {
        if (node.pins[v] >= 0) {
            continue;
        }
        const double x = node.values[v];
        if (std::abs(x - std::round(x)) <= kIntegralityTolerance) {
            continue;
        }
        const double distance = std::abs(x - 0.5);
        if (distance < best_distance) {
            best = v;
            best_distance = distance;
        }
    }
    return best;
}

ScalingDecision BranchAndBound::run() {
    ScalingDecision decision;
    const std::size_t num_vars = model_.vars.size();

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    auto root = evaluate(std::vector<std::int8_t>(num_vars, -1), 0, nullptr);
    if (!root) {
        throw_infeasible(request_);
    }
    seed_incumbents();
    try_incumbent(*root);
    if (!root->integral) {
        open.push(std::move(*root));
    }

    bool exhausted = true;
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (incumbent_ && incumbent_objective_ - node.bound < request_.sigma) {
            decision.bound_gap = std::max(0.0, incumbent_objective_ - node.bound);
            exhausted = false;
            break;
        }
        if (prunable(node.bound)) {
            continue;
        }
        if (nodes_ >= request_.max_nodes) {
            decision.bound_gap = incumbent_ ? std::max(0.0, incumbent_objective_ - node.bound)
                                            : std::numeric_limits<double>::infinity();
            exhausted = false;
            break;
        }
        const std::size_t var = branching_variable(node);
        if (var == num_vars) {
            continue;
        }
        for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
            auto pins = node.pins;
            pins[var] = value;
            auto child = evaluate(std::move(pins), node.depth + 1, &node.basis);
            if (!child || prunable(child->bound)) {
                continue;
            }
            try_incumbent(*child);
            if (!child->integral) {
                open.push(std::move(*child));
            }
        }
    }
    if (!incumbent_) {
        if (exhausted) {
            throw_infeasible(request_);
        }
        throw InfeasibleError("no feasible selection found within the node limit of " +
                              std::to_string(request_.max_nodes));
    }
    if (exhausted) {
        decision.bound_gap = 0.0;
    }
    decision.selections = std::move(*incumbent_);
    decision.objective_value = evaluate_objective(request_, decision.selections);
    decision.nodes_explored = nodes_;
    return decision;
}

}  // namespace

std::string to_string(ObjectiveMode mode) {
    switch (mode) {
        case ObjectiveMode::max_accuracy:
            return "max_accuracy";
        case ObjectiveMode::min_latency:
            return "min_latency";
        case ObjectiveMode::balanced:
            return "balanced";
    }
    return "unknown";
}

ObjectiveMode parse_objective_mode(std::string_view name) {
    if (name == "max_accuracy") {
        return ObjectiveMode::max_accuracy;
    }
    if (name == "min_latency") {
        return ObjectiveMode::min_latency;
    }
    if (name == "balanced") {
        return ObjectiveMode::balanced;
    }
    throw ValidationError("unknown objective mode '" + std::string(name) + "'");
}

void validate_request(const ScalingRequest& request) {
    const std::size_t m = request.dnns.size();
    if (m == 0) {
        throw ValidationError("scaling request has no DNNs");
    }
    for (const auto& dnn : request.dnns) {
        require_valid(dnn);
    }
    if (request.memory_budget <= 0) {
        throw ValidationError("memory budget must be positive");
    }
    if (!(request.sigma >= 0.0) || !std::isfinite(request.sigma)) {
        throw ValidationError("sigma must be a finite value >= 0");
    }
    if (request.mode != ObjectiveMode::min_latency) {
        if (request.latency_budgets.size() != m) {
            throw ValidationError("expected one latency budget per DNN");
        }
        for (double t : request.latency_budgets) {
            if (!(t > 0.0) || !std::isfinite(t)) {
                throw ValidationError("latency budgets must be positive");
            }
        }
    }
    if (request.mode == ObjectiveMode::min_latency) {
        if (request.accuracy_budgets.size() != m) {
            throw ValidationError("min_latency mode needs one accuracy budget per DNN");
        }
        for (double a : request.accuracy_budgets) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw ValidationError("accuracy budgets must be positive");
            }
        }
    }
    if (request.mode == ObjectiveMode::balanced && !(request.balance_weight >= 0.0)) {
        throw ValidationError("balance weight must be >= 0");
    }
    if (request.latencies.size() != m) {
        throw ValidationError("missing latency estimates: expected one table per DNN");
    }
    for (std::size_t a = 0; a < m; ++a) {
        const auto& dnn = request.dnns[a];
        if (request.latencies[a].size() != dnn.blocks.size()) {
            throw ValidationError("missing latency estimates for DNN '" + dnn.dnn_id + "'");
        }
        for (std::size_t i = 0; i < dnn.blocks.size(); ++i) {
            if (request.latencies[a][i].size() != dnn.blocks[i].descendants.size()) {
                throw ValidationError("missing latency estimates for block " + std::to_string(i + 1) + " of '" +
                                      dnn.dnn_id + "'");
            }
            for (double t : request.latencies[a][i]) {
                if (!(t > 0.0) || !std::isfinite(t)) {
                    throw ValidationError("latency estimates must be positive");
                }
            }
        }
    }
    if (!request.current.empty()) {
        if (request.current.size() != m) {
            throw ValidationError("expected one current selection per DNN");
        }
        for (std::size_t a = 0; a < m; ++a) {
            if (!request.current[a].choices.empty() && !selection_fits(request.dnns[a], request.current[a])) {
                throw ValidationError("current selection does not fit DNN '" + request.dnns[a].dnn_id + "'");
            }
        }
    }
}

IlpModel build_ilp(const ScalingRequest& request) {
    validate_request(request);
    IlpModel model;
    auto& lp = model.relaxation;
    const int m = static_cast<int>(request.dnns.size());

    for (int a = 0; a < m; ++a) {
        const auto& dnn = request.dnns[a];
        for (std::size_t i = 0; i < dnn.blocks.size(); ++i) {
            model.group_start.push_back(model.vars.size());
            const auto& block = dnn.blocks[i];
            for (std::size_t j = 0; j < block.descendants.size(); ++j) {
                model.vars.push_back({a, static_cast<int>(i), static_cast<int>(j)});
                const auto& desc = block.descendants[j];
                double c = 0.0;
                switch (request.mode) {
                    case ObjectiveMode::max_accuracy:
                        c = desc.accuracy_loss;
                        break;
                    case ObjectiveMode::min_latency:
                        c = -desc.latency_reduction;
                        break;
                    case ObjectiveMode::balanced:
                        c = desc.accuracy_loss +
                            request.balance_weight * request.latencies[a][i][j] / request.latency_budgets[a];
                        break;
                }
                lp.objective.push_back(c);
            }
        }
    }
    model.group_start.push_back(model.vars.size());
    const std::size_t n = model.vars.size();
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, 1.0);

    for (std::size_t g = 0; g + 1 < model.group_start.size(); ++g) {
        std::vector<double> row(n, 0.0);
        for (std::size_t v = model.group_start[g]; v < model.group_start[g + 1]; ++v) {
            row[v] = 1.0;
        }
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(1.0);
    }

    if (request.mode == ObjectiveMode::max_accuracy) {
        for (int a = 0; a < m; ++a) {
            std::vector<double> row(n, 0.0);
            for (std::size_t v = 0; v < n; ++v) {
                const auto& r = model.vars[v];
                if (r.dnn == a) {
                    row[v] = request.latencies[a][r.block][r.descendant];
                }
            }
            lp.le_rows.push_back(std::move(row));
            lp.le_rhs.push_back(request.latency_budgets[a]);
            model.inequality_rows.push_back({RowKind::latency, a});
        }
    }

    // sum_a (base_a - sum S * B) <= budget, with the constant moved right.
    {
        std::vector<double> row(n, 0.0);
        double base_total = 0.0;
        for (const auto& dnn : request.dnns) {
            base_total += static_cast<double>(dnn.base_size_bytes);
        }
        for (std::size_t v = 0; v < n; ++v) {
            const auto& r = model.vars[v];
            row[v] = -static_cast<double>(
                request.dnns[r.dnn].blocks[r.block].descendants[r.descendant].size_reduction_bytes);
        }
        lp.le_rows.push_back(std::move(row));
        lp.le_rhs.push_back(static_cast<double>(request.memory_budget) - base_total);
        model.inequality_rows.push_back({RowKind::memory, -1});
    }

    if (request.mode == ObjectiveMode::min_latency) {
        for (int a = 0; a < m; ++a) {
            std::vector<double> row(n, 0.0);
            for (std::size_t v = 0; v < n; ++v) {
                const auto& r = model.vars[v];
                if (r.dnn == a) {
                    row[v] = request.dnns[a].blocks[r.block].descendants[r.descendant].accuracy_loss;
                }
            }
            lp.le_rows.push_back(std::move(row));
            lp.le_rhs.push_back(request.accuracy_budgets[a]);
            model.inequality_rows.push_back({RowKind::accuracy, a});
        }
    }
    return model;
}

double minimized_objective(const ScalingRequest& request, const std::vector<Selection>& selections) {
    std::vector<double> terms;
    terms.reserve(selections.size());
    for (std::size_t a = 0; a < selections.size(); ++a) {
        terms.push_back(dnn_term(request, static_cast<int>(a), dnn_totals(request, static_cast<int>(a), selections[a])));
    }
    return sum_terms(request, terms);
}

double evaluate_objective(const ScalingRequest& request, const std::vector<Selection>& selections) {
    const double v = minimized_objective(request, selections);
    return request.mode == ObjectiveMode::min_latency ? -v : v;
}

double ConstraintStatus::excess() const {
    return (value - budget) / std::max(std::abs(budget), 1e-300);
}

std::string ConstraintStatus::describe() const {
    std::string unit;
    switch (row.kind) {
        case RowKind::latency:
            unit = " us";
            break;
        case RowKind::memory:
            unit = " bytes";
            break;
        case RowKind::accuracy:
            break;
    }
    return label + " is " + format_number(value) + unit + (satisfied ? " within budget " : " over budget ") +
           format_number(budget) + unit;
}

std::vector<ConstraintStatus> check_constraints(const ScalingRequest& request,
                                                const std::vector<Selection>& selections) {
    if (selections.size() != request.dnns.size()) {
        throw ValidationError("expected one selection per DNN");
    }
    std::vector<ConstraintStatus> out;
    Bytes memory = 0;
    for (std::size_t a = 0; a < selections.size(); ++a) {
        const auto& dnn = request.dnns[a];
        if (!selection_fits(dnn, selections[a])) {
            throw ValidationError("selection does not fit DNN '" + dnn.dnn_id + "'");
        }
        const DnnTotals t = dnn_totals(request, static_cast<int>(a), selections[a]);
        memory += t.memory;
        if (request.mode == ObjectiveMode::max_accuracy) {
            out.push_back({{RowKind::latency, static_cast<int>(a)},
                           "latency of '" + dnn.dnn_id + "'",
                           t.latency,
                           request.latency_budgets[a],
                           within_budget(t.latency, request.latency_budgets[a])});
        }
        if (request.mode == ObjectiveMode::min_latency) {
            out.push_back({{RowKind::accuracy, static_cast<int>(a)},
                           "accuracy loss of '" + dnn.dnn_id + "'",
                           t.loss,
                           request.accuracy_budgets[a],
                           within_budget(t.loss, request.accuracy_budgets[a])});
        }
    }
    out.push_back({{RowKind::memory, -1},
                   "memory",
                   static_cast<double>(memory),
                   static_cast<double>(request.memory_budget),
                   memory <= request.memory_budget});
    return out;
}

bool is_feasible(const ScalingRequest& request, const std::vector<Selection>& selections) {
    const auto statuses = check_constraints(request, selections);
    return std::all_of(statuses.begin(), statuses.end(), [](const ConstraintStatus& s) { return s.satisfied; });
}

Bytes total_memory(const ScalingRequest& request, const std::vector<Selection>& selections) {
    Bytes memory = 0;
    for (std::size_t a = 0; a < selections.size(); ++a) {
        memory += request.dnns[a].model_size(selections[a]);
    }
    return memory;
}

Micros dnn_latency(const ScalingRequest& request, int dnn, const Selection& selection) {
    return dnn_totals(request, dnn, selection).latency;
}

ScalingDecision solve(const ScalingRequest& request) {
    const auto start = Clock::now();
    IlpModel model = build_ilp(request);

    if (request.mode == ObjectiveMode::max_accuracy) {
        // All originals is the unique zero-loss point whenever it fits.
        std::vector<Selection> originals;
        for (const auto& dnn : request.dnns) {
            originals.push_back(dnn.original_selection());
        }
        if (is_feasible(request, originals)) {
            ScalingDecision decision;
            decision.selections = std::move(originals);
            decision.objective_value = evaluate_objective(request, decision.selections);
            decision.solve_time_ms = elapsed_ms(start);
            return decision;
        }
    }

    BranchAndBound search(request, model);
    ScalingDecision decision = search.run();
    decision.solve_time_ms = elapsed_ms(start);
    return decision;
}

ScalingDecision balanced_solve(const ScalingRequest& request) {
    ScalingRequest balanced = request;
    balanced.mode = ObjectiveMode::balanced;
    return solve(balanced);
}

ScalingDecision oracle_solve(const ScalingRequest& request) {
    const auto start = Clock::now();
    validate_request(request);
    const std::uint64_t space = combined_space_size(request.dnns);
    if (space > kOracleLimit) {
        throw ValidationError("oracle limit: " + std::to_string(space) + " selections exceed " +
                              std::to_string(kOracleLimit));
    }

    const int m = static_cast<int>(request.dnns.size());
    // Mixed-radix counter over (dnn, block); the last block of the last DNN
    // moves fastest, so the first optimum found is lexicographically smallest.
    struct Digit {
        int dnn;
        int block;
        int radix;
    };
    std::vector<Digit> digits;
    for (int a = 0; a < m; ++a) {
        for (std::size_t i = 0; i < request.dnns[a].blocks.size(); ++i) {
            digits.push_back({a, static_cast<int>(i), static_cast<int>(request.dnns[a].blocks[i].descendants.size())});
        }
    }

    std::vector<Selection> current(m);
    for (int a = 0; a < m; ++a) {
        current[a] = request.dnns[a].original_selection();
    }
    std::vector<DnnTotals> totals(m);
    std::vector<double> terms(m);
    for (int a = 0; a < m; ++a) {
        totals[a] = dnn_totals(request, a, current[a]);
        terms[a] = dnn_term(request, a, totals[a]);
    }
    std::vector<bool> dirty(m, false);

    std::optional<std::vector<Selection>> best;
    double best_objective = 0.0;
    std::uint64_t visited = 0;
    while (true) {
        ++visited;
        if (feasible_totals(request, totals)) {
            const double objective = sum_terms(request, terms);
            if (!best || objective < best_objective) {
                best = current;
                best_objective = objective;
            }
        }
        int pos = static_cast<int>(digits.size()) - 1;
        while (pos >= 0) {
            const Digit& d = digits[pos];
            int& c = current[d.dnn].choices[d.block];
            dirty[d.dnn] = true;
            if (++c < d.radix) {
                break;
            }
            c = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        for (int a = 0; a < m; ++a) {
            if (dirty[a]) {
                totals[a] = dnn_totals(request, a, current[a]);
                terms[a] = dnn_term(request, a, totals[a]);
                dirty[a] = false;
            }
        }
    }
    if (!best) {
        throw_infeasible(request);
    }
    ScalingDecision decision;
    decision.selections = std::move(*best);
    decision.objective_value = evaluate_objective(request, decision.selections);
    decision.bound_gap = 0.0;
    decision.nodes_explored = visited;
    decision.solve_time_ms = elapsed_ms(start);
    return decision;
}

nlohmann::ordered_json decision_to_json(const ScalingRequest& request, const ScalingDecision& decision,
                                        bool include_timing) {
    nlohmann::ordered_json doc;
    doc["format"] = "legodnn-decision/1";
    doc["mode"] = to_string(request.mode);
    doc["objective"] = decision.objective_value;
    doc["bound_gap"] = decision.bound_gap;
    doc["sigma"] = request.sigma;
    doc["nodes_explored"] = decision.nodes_explored;
    if (include_timing) {
        doc["solve_time_ms"] = decision.solve_time_ms;
    }
    doc["memory_bytes"] = total_memory(request, decision.selections);
    doc["memory_budget_bytes"] = request.memory_budget;
    auto selections = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < decision.selections.size(); ++a) {
        const auto& dnn = request.dnns[a];
        const auto& sel = decision.selections[a];
        nlohmann::ordered_json js;
        js["dnn_id"] = dnn.dnn_id;
        js["choices"] = sel.choices;
        js["accuracy_loss"] = dnn.accuracy_loss(sel);
        js["latency_us"] = dnn_latency(request, static_cast<int>(a), sel);
        if (request.mode != ObjectiveMode::min_latency) {
            js["latency_budget_us"] = request.latency_budgets[a];
        }
        js["model_bytes"] = dnn.model_size(sel);
        selections.push_back(std::move(js));
    }
    doc["selections"] = std::move(selections);
    return doc;
}

}  // namespace legodnn
