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

// Exact optimum of requests too large for exhaustive enumeration. The
// objective is a sum of per-DNN terms and only memory couples the DNNs, so
// each DNN's feasible selections are reduced to a (memory, term) Pareto
// frontier; frontiers are then merged pairwise, keeping only non-dominated
// partial combinations that still fit the memory budget.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "legodnn/optimizer.hpp"

namespace legodnn::testing {

struct FrontierPoint {
    Bytes memory = 0;
    double loss = 0.0;
    /// Index into the per-DNN option list of each merged DNN.
    std::vector<std::uint32_t> picks;
};

struct DnnOption {
    Bytes memory = 0;
    /// Minimized objective term of the DNN.
    double loss = 0.0;
    Selection selection;
};

inline std::vector<FrontierPoint> pareto(std::vector<FrontierPoint> points) {
    std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        if (a.memory != b.memory) {
            return a.memory < b.memory;
        }
        return a.loss < b.loss;
    });
    std::vector<FrontierPoint> out;
    for (auto& p : points) {
        if (out.empty() || p.loss < out.back().loss) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

/// Single-DNN view of DNN `a`: same mode, budgets and shared memory budget.
inline ScalingRequest single_dnn_request(const ScalingRequest& req, int a) {
    ScalingRequest sub;
    sub.mode = req.mode;
    sub.memory_budget = req.memory_budget;
    sub.balance_weight = req.balance_weight;
    sub.dnns = {req.dnns[a]};
    sub.latencies = {req.latencies[a]};
    if (!req.latency_budgets.empty()) {
        sub.latency_budgets = {req.latency_budgets[a]};
    }
    if (!req.accuracy_budgets.empty()) {
        sub.accuracy_budgets = {req.accuracy_budgets[a]};
    }
    return sub;
}

/// (memory, objective term) frontier of one DNN over the selections that meet
/// its own latency or accuracy budget, by enumeration.
inline std::vector<DnnOption> dnn_frontier(const ScalingRequest& req, int a) {
    const ScalingRequest sub = single_dnn_request(req, a);
    const DnnProfile& p = req.dnns[a];
    const std::size_t n = p.blocks.size();
    std::vector<Selection> one{Selection{std::vector<int>(n, 0)}};
    std::vector<int>& digits = one[0].choices;
    std::vector<DnnOption> all;
    while (true) {
        if (is_feasible(sub, one)) {
            all.push_back({p.model_size(one[0]), minimized_objective(sub, one), one[0]});
        }
        std::size_t k = n;
        bool done = true;
        while (k > 0) {
            --k;
            if (++digits[k] < static_cast<int>(p.blocks[k].descendants.size())) {
                done = false;
                break;
            }
            digits[k] = 0;
        }
        if (done) {
            break;
        }
    }
    std::sort(all.begin(), all.end(), [](const DnnOption& x, const DnnOption& y) {
        if (x.memory != y.memory) {
            return x.memory < y.memory;
        }
        return x.loss < y.loss;
    });
    std::vector<DnnOption> out;
    for (auto& o : all) {
        if (out.empty() || o.loss < out.back().loss) {
            out.push_back(std::move(o));
        }
    }
    return out;
}

/// Optimal selections, or nullopt when nothing fits.
inline std::optional<std::vector<Selection>> pareto_oracle(const ScalingRequest& req) {
    const int m = static_cast<int>(req.dnns.size());
    std::vector<std::vector<DnnOption>> options(m);
    for (int a = 0; a < m; ++a) {
        options[a] = dnn_frontier(req, a);
        if (options[a].empty()) {
            return std::nullopt;
        }
    }
    std::vector<FrontierPoint> merged{FrontierPoint{}};
    for (int a = 0; a < m; ++a) {
        std::vector<FrontierPoint> next;
        for (const auto& f : merged) {
            for (std::uint32_t k = 0; k < options[a].size(); ++k) {
                const Bytes mem = f.memory + options[a][k].memory;
                if (mem > req.memory_budget) {
                    break;
                }
                FrontierPoint p{mem, f.loss + options[a][k].loss, f.picks};
                p.picks.push_back(k);
                next.push_back(std::move(p));
            }
        }
        merged = pareto(std::move(next));
        if (merged.empty()) {
            return std::nullopt;
        }
    }
    const auto best = std::min_element(merged.begin(), merged.end(), [](const FrontierPoint& x, const FrontierPoint& y) {
        return x.loss < y.loss;
    });
    std::vector<Selection> out;
    for (int a = 0; a < m; ++a) {
        out.push_back(options[a][best->picks[a]].selection);
    }
    return out;
}

}  // namespace legodnn::testing
