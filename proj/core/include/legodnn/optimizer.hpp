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
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"
#include "legodnn/lp.hpp"
#include "legodnn/profile.hpp"

namespace legodnn {

enum class ObjectiveMode {
    /// Minimize total accuracy loss under per-DNN latency and shared memory budgets.
    max_accuracy,
    /// Maximize total latency reduction under per-DNN accuracy-loss budgets.
    min_latency,
    /// Minimize loss + weight * latency / latency_budget under the memory budget only.
    balanced,
};

std::string to_string(ObjectiveMode mode);
ObjectiveMode parse_objective_mode(std::string_view name);

/// Early-stop threshold used when none is given.
inline constexpr double kDefaultSigma = 0.005;

struct ScalingRequest {
    std::vector<DnnProfile> dnns;
    /// Per-DNN latency budget. A hard cap except in balanced mode, where it normalizes.
    std::vector<Micros> latency_budgets;
    /// Shared by all DNNs.
    Bytes memory_budget = 0;
    /// Deployed selection per DNN; the list or any entry may be empty. Not used by the search itself.
    std::vector<Selection> current;
    /// Estimated latency per [dnn][block][descendant].
    std::vector<std::vector<std::vector<Micros>>> latencies;
    ObjectiveMode mode = ObjectiveMode::max_accuracy;
    /// Per-DNN accuracy-loss budget, min_latency mode only.
    std::vector<double> accuracy_budgets;
    double sigma = kDefaultSigma;
    /// Latency weight in balanced mode.
    double balance_weight = 1.0;
    /// Hard cap on LP relaxations per solve; the decision then reports its gap.
    std::size_t max_nodes = 200'000;
};

struct ScalingDecision {
    std::vector<Selection> selections;
    /// Total accuracy loss (max_accuracy), total latency reduction (min_latency)
    /// or the weighted objective (balanced).
    double objective_value = 0.0;
    /// Incumbent minus the best remaining bound at termination, in minimized units.
    double bound_gap = 0.0;
    std::size_t nodes_explored = 0;
    double solve_time_ms = 0.0;
};

/// Throws ValidationError on inconsistent requests.
void validate_request(const ScalingRequest& request);

/// Location of one ILP variable.
struct VarRef {
    int dnn = 0;
    int block = 0;
    int descendant = 0;
};

enum class RowKind { latency, memory, accuracy };

struct RowRef {
    RowKind kind = RowKind::memory;
    /// Owning DNN for latency and accuracy rows, -1 for the shared memory row.
    int dnn = -1;
};

/// The block-selection ILP: the LP relaxation plus the variable layout.
/// Every variable is binary; equality rows are one per (dnn, block).
struct IlpModel {
    lp::LpProblem relaxation;
    std::vector<VarRef> vars;
    /// first variable of each (dnn, block), followed by a final sentinel.
    std::vector<std::size_t> group_start;
    std::vector<RowRef> inequality_rows;
    /// Constant added to relaxation.objective . x to give the minimized objective.
    double objective_offset = 0.0;
};

IlpModel build_ilp(const ScalingRequest& request);

/// Branch-and-bound over the LP relaxation with early stopping at gap < sigma.
ScalingDecision solve(const ScalingRequest& request);

/// solve() with the mode forced to balanced.
ScalingDecision balanced_solve(const ScalingRequest& request);

/// Exhaustive enumeration; exact, lexicographically first among ties.
/// Throws ValidationError("oracle limit ...") past kOracleLimit selections.
ScalingDecision oracle_solve(const ScalingRequest& request);

inline constexpr std::uint64_t kOracleLimit = 10'000'000;

/// Reported objective of `selections` (see ScalingDecision::objective_value).
double evaluate_objective(const ScalingRequest& request, const std::vector<Selection>& selections);

/// The minimized form of evaluate_objective; equal to it except in min_latency mode.
double minimized_objective(const ScalingRequest& request, const std::vector<Selection>& selections);

struct ConstraintStatus {
    RowRef row;
    /// e.g. "latency of 'vgg16'" or "memory".
    std::string label;
    double value = 0.0;
    double budget = 0.0;
    bool satisfied = true;

    /// Relative excess over the budget; <= 0 when satisfied.
    double excess() const;
    std::string describe() const;
};

/// Direct substitution into every resource constraint of the request.
std::vector<ConstraintStatus> check_constraints(const ScalingRequest& request,
                                                const std::vector<Selection>& selections);

bool is_feasible(const ScalingRequest& request, const std::vector<Selection>& selections);

/// Total memory of `selections`, exact.
Bytes total_memory(const ScalingRequest& request, const std::vector<Selection>& selections);

/// Latency of one DNN under its selection.
Micros dnn_latency(const ScalingRequest& request, int dnn, const Selection& selection);

nlohmann::ordered_json decision_to_json(const ScalingRequest& request,
                                        const ScalingDecision& decision,
                                        bool include_timing = true);

}  // namespace legodnn
