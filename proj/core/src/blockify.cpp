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

#include "legodnn/blockify.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "legodnn/profile_io.hpp"

namespace legodnn {

LayerGraph::LayerGraph(std::vector<Layer> layers, std::vector<Edge> edges)
    : layers_(std::move(layers)), edges_(std::move(edges)) {
    const std::size_t n = layers_.size();
    std::unordered_map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (layers_[i].id.empty()) {
            throw ValidationError("layer " + std::to_string(i) + " has an empty id");
        }
        if (!ids.emplace(layers_[i].id, i).second) {
            throw ValidationError("duplicate layer id '" + layers_[i].id + "'");
        }
        if (layers_[i].param_count < 0) {
            throw ValidationError("layer '" + layers_[i].id + "' has a negative parameter count");
        }
    }
    succ_.resize(n);
    pred_.resize(n);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges_) {
        auto from = ids.find(e.from);
        auto to = ids.find(e.to);
        if (from == ids.end() || to == ids.end()) {
            throw ValidationError("edge " + e.from + " -> " + e.to + " references an unknown layer");
        }
        if (from->second == to->second) {
            throw ValidationError("graph has a cycle: self edge on '" + e.from + "'");
        }
        if (seen.emplace(from->second, to->second).second) {
            succ_[from->second].push_back(to->second);
            pred_[to->second].push_back(from->second);
        }
    }
    for (auto& s : succ_) {
        std::sort(s.begin(), s.end());
    }
    for (auto& p : pred_) {
        std::sort(p.begin(), p.end());
    }

    // Kahn's algorithm; the longest-path depth falls out of the same sweep.
    std::vector<std::size_t> indegree(n);
    for (std::size_t i = 0; i < n; ++i) {
        indegree[i] = pred_[i].size();
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    depth_.assign(n, 0);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t u = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t v : succ_[u]) {
            depth_[v] = std::max(depth_[v], depth_[u] + 1);
            if (--indegree[v] == 0) {
                ready.push_back(v);
            }
        }
    }
    if (visited != n) {
        throw ValidationError("graph has a cycle");
    }
    topo_.resize(n);
    std::iota(topo_.begin(), topo_.end(), std::size_t{0});
    std::stable_sort(topo_.begin(), topo_.end(), [&](std::size_t a, std::size_t b) { return depth_[a] < depth_[b]; });
}

std::size_t LayerGraph::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].id == id) {
            return i;
        }
    }
    throw ValidationError("unknown layer '" + std::string(id) + "'");
}

namespace {

/// Layers every input-to-output path passes through ("cuts"), found as the
/// dominators of a virtual sink. Returns, per layer, whether it is a cut and
/// the nearest cut dominating it (or `none` when only the virtual source does).
struct CutStructure {
    static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<bool> is_cut;
    std::vector<std::size_t> owner;
    /// Next cut after a cut, indexed by layer; `none` after the last cut.
    std::vector<std::size_t> next_cut;
    std::size_t first_cut = none;
};

CutStructure find_cuts(const LayerGraph& graph) {
    const std::size_t n = graph.size();
    const std::size_t source = n;
    const std::size_t sink = n + 1;
    std::vector<std::size_t> idom(n + 2, CutStructure::none);
    std::vector<int> dom_depth(n + 2, 0);
    idom[source] = source;

    auto intersect = [&](std::size_t a, std::size_t b) {
        while (a != b) {
            if (dom_depth[a] > dom_depth[b]) {
                a = idom[a];
            } else if (dom_depth[b] > dom_depth[a]) {
                b = idom[b];
            } else {
                a = idom[a];
                b = idom[b];
            }
        }
        return a;
    };
    auto assign = [&](std::size_t v, const std::vector<std::size_t>& preds) {
        std::size_t d = preds.empty() ? source : preds.front();
        for (std::size_t k = 1; k < preds.size(); ++k) {
            d = intersect(d, preds[k]);
        }
        idom[v] = d;
        dom_depth[v] = dom_depth[d] + 1;
    };

    for (std::size_t v : graph.topological_order()) {
        assign(v, graph.predecessors(v));
    }
    std::vector<std::size_t> sinks;
    for (std::size_t v = 0; v < n; ++v) {
        if (graph.successors(v).empty()) {
            sinks.push_back(v);
        }
    }
    assign(sink, sinks);

    CutStructure cuts;
    cuts.is_cut.assign(n, false);
    cuts.owner.assign(n, CutStructure::none);
    cuts.next_cut.assign(n, CutStructure::none);
    std::size_t after = CutStructure::none;
    for (std::size_t c = idom[sink]; c != source; c = idom[c]) {
        cuts.is_cut[c] = true;
        cuts.next_cut[c] = after;
        after = c;
    }
    cuts.first_cut = after;
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t c = idom[v];
        while (c != source && !cuts.is_cut[c]) {
            c = idom[c];
        }
        cuts.owner[v] = (c == source) ? CutStructure::none : c;
    }
    return cuts;
}

std::vector<std::size_t> topo_positions(const LayerGraph& graph) {
    std::vector<std::size_t> pos(graph.size());
    const auto& order = graph.topological_order();
    for (std::size_t k = 0; k < order.size(); ++k) {
        pos[order[k]] = k;
    }
    return pos;
}

void sort_topologically(std::vector<std::size_t>& layers, const std::vector<std::size_t>& pos) {
    std::sort(layers.begin(), layers.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
}

}  // namespace

BlockPartition elementary_blocks(const LayerGraph& graph) {
    const std::size_t n = graph.size();
    auto is_conv = [&](std::size_t v) { return graph.layer(v).kind == LayerKind::conv; };
    if (std::none_of(graph.layers().begin(), graph.layers().end(),
                     [](const Layer& l) { return l.kind == LayerKind::conv; })) {
        throw ValidationError("no blocks identifiable: graph has no conv layers");
    }

    // Conv ancestors of every layer (a conv counts as its own ancestor).
    std::vector<std::vector<std::size_t>> conv_ancestors(n);
    for (std::size_t v : graph.topological_order()) {
        std::set<std::size_t> acc;
        for (std::size_t p : graph.predecessors(v)) {
            acc.insert(conv_ancestors[p].begin(), conv_ancestors[p].end());
        }
        if (is_conv(v)) {
            acc.insert(v);
        }
        conv_ancestors[v].assign(acc.begin(), acc.end());
    }

    const CutStructure cuts = find_cuts(graph);
    std::map<std::size_t, std::vector<std::size_t>> segment_members;
    for (std::size_t v = 0; v < n; ++v) {
        if (!cuts.is_cut[v]) {
            segment_members[cuts.owner[v]].push_back(v);
        }
    }
    const auto pos = topo_positions(graph);

    std::vector<bool> assigned(n, false);
    BlockPartition partition;
    while (true) {
        std::size_t seed = n;
        for (std::size_t v : graph.topological_order()) {
            if (!assigned[v] && is_conv(v)) {
                seed = v;
                break;
            }
        }
        if (seed == n) {
            break;
        }

        std::vector<bool> in_block(n, false);
        std::vector<std::size_t> members;
        auto add = [&](std::size_t v) {
            if (!in_block[v] && !assigned[v]) {
                in_block[v] = true;
                members.push_back(v);
                return true;
            }
            return false;
        };
        auto free_of_foreign_convs = [&](std::size_t v) {
            return std::all_of(conv_ancestors[v].begin(), conv_ancestors[v].end(),
                               [&](std::size_t c) { return assigned[c] || in_block[c]; });
        };
        add(seed);

        bool grew = true;
        while (grew) {
            grew = false;
            // Closure: dependants that no other unassigned conv feeds.
            for (std::size_t k = 0; k < members.size(); ++k) {
                for (std::size_t w : graph.successors(members[k])) {
                    if (in_block[w] || assigned[w] || is_conv(w) || !free_of_foreign_convs(w)) {
                        continue;
                    }
                    add(w);
                }
            }
            // A block may not stop in the middle of a branching region: pull in
            // every layer up to the closing cut.
            const std::size_t count = members.size();
            for (std::size_t k = 0; k < count; ++k) {
                const std::size_t u = members[k];
                if (cuts.is_cut[u]) {
                    continue;
                }
                const std::size_t owner = cuts.owner[u];
                for (std::size_t w : segment_members[owner]) {
                    grew |= add(w);
                }
                const std::size_t closing = owner == CutStructure::none ? cuts.first_cut : cuts.next_cut[owner];
                if (closing != CutStructure::none) {
                    grew |= add(closing);
                }
            }
        }
        for (std::size_t v : members) {
            assigned[v] = true;
        }
        sort_topologically(members, pos);
        partition.blocks.push_back(std::move(members));
    }
    for (std::size_t v : graph.topological_order()) {
        if (!assigned[v]) {
            partition.residue.push_back(v);
        }
    }
    return partition;
}

std::int64_t block_param_count(const LayerGraph& graph, const std::vector<std::size_t>& block) {
    std::int64_t total = 0;
    for (std::size_t v : block) {
        total += graph.layer(v).param_count;
    }
    return total;
}

BlockPartition merge_blocks(const LayerGraph& graph, const BlockPartition& partition, int target_count) {
    const int count = static_cast<int>(partition.blocks.size());
    if (target_count < 1) {
        throw ValidationError("target block count must be at least 1");
    }
    if (target_count > count) {
        throw ValidationError("target exceeds elementary blocks (" + std::to_string(target_count) + " > " +
                              std::to_string(count) + ")");
    }
    std::vector<std::int64_t> weight(count);
    std::vector<std::int64_t> prefix(count + 1, 0);
    for (int k = 0; k < count; ++k) {
        weight[k] = block_param_count(graph, partition.blocks[k]);
        prefix[k + 1] = prefix[k] + weight[k];
    }

    // best[g][k]: smallest achievable maximum group weight for the first k
    // blocks split into g contiguous groups.
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::vector<std::int64_t>> best(target_count + 1, std::vector<std::int64_t>(count + 1, kInf));
    best[0][0] = 0;
    for (int g = 1; g <= target_count; ++g) {
        for (int k = g; k <= count; ++k) {
            for (int s = g - 1; s < k; ++s) {
                if (best[g - 1][s] == kInf) {
                    continue;
                }
                best[g][k] = std::min(best[g][k], std::max(best[g - 1][s], prefix[k] - prefix[s]));
            }
        }
    }
    const std::int64_t cap = best[target_count][count];

    // Left-to-right greedy fill under the optimal cap, leaving at least one
    // block for each remaining group. Deterministic and optimal.
    const auto pos = topo_positions(graph);
    BlockPartition merged;
    merged.residue = partition.residue;
    int next = 0;
    for (int g = 0; g < target_count; ++g) {
        const int groups_after = target_count - g - 1;
        int end = next + 1;
        std::int64_t sum = weight[next];
        if (groups_after == 0) {
            end = count;
        } else {
            while (end < count - groups_after && sum + weight[end] <= cap) {
                sum += weight[end];
                ++end;
            }
        }
        std::vector<std::size_t> layers;
        for (int k = next; k < end; ++k) {
            layers.insert(layers.end(), partition.blocks[k].begin(), partition.blocks[k].end());
        }
        sort_topologically(layers, pos);
        merged.blocks.push_back(std::move(layers));
        next = end;
    }
    return merged;
}

std::vector<std::string> check_partition(const LayerGraph& graph, const BlockPartition& partition) {
    std::vector<std::string> problems;
    const std::size_t n = graph.size();
    constexpr std::size_t kResidue = std::numeric_limits<std::size_t>::max() - 1;
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> owner(n, kUnset);

    auto claim = [&](std::size_t v, std::size_t who) {
        if (v >= n) {
            problems.push_back("layer index " + std::to_string(v) + " out of range");
            return;
        }
        if (owner[v] != kUnset) {
            problems.push_back("layer '" + graph.layer(v).id + "' appears more than once");
            return;
        }
        owner[v] = who;
    };
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        if (partition.blocks[b].empty()) {
            problems.push_back("block " + std::to_string(b + 1) + " is empty");
        }
        for (std::size_t v : partition.blocks[b]) {
            claim(v, b);
        }
    }
    for (std::size_t v : partition.residue) {
        claim(v, kResidue);
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (owner[v] == kUnset) {
            problems.push_back("layer '" + graph.layer(v).id + "' is in no block and not in the residue");
        }
    }
    if (!problems.empty()) {
        return problems;
    }

    // Interleaving: no edge may run from a later block back to an earlier one,
    // and blocks plus residue layers must contract to an acyclic graph.
    const std::size_t nb = partition.blocks.size();
    auto node_of = [&](std::size_t v) { return owner[v] == kResidue ? nb + v : owner[v]; };
    std::vector<std::set<std::size_t>> contracted(nb + n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v : graph.successors(u)) {
            const std::size_t a = node_of(u);
            const std::size_t b = node_of(v);
            if (a == b) {
                continue;
            }
            if (a < nb && b < nb && b < a) {
                problems.push_back("edge " + graph.layer(u).id + " -> " + graph.layer(v).id + " runs from block " +
                                   std::to_string(a + 1) + " back to block " + std::to_string(b + 1));
            }
            contracted[a].insert(b);
        }
    }
    {
        std::vector<int> color(nb + n, 0);
        bool cyclic = false;
        std::vector<std::pair<std::size_t, std::set<std::size_t>::const_iterator>> stack;
        for (std::size_t s = 0; s < nb + n && !cyclic; ++s) {
            if (color[s] != 0) {
                continue;
            }
            color[s] = 1;
            stack.emplace_back(s, contracted[s].begin());
            while (!stack.empty() && !cyclic) {
                auto& [node, it] = stack.back();
                if (it == contracted[node].end()) {
                    color[node] = 2;
                    stack.pop_back();
                    continue;
                }
                const std::size_t next = *it++;
                if (color[next] == 1) {
                    cyclic = true;
                } else if (color[next] == 0) {
                    color[next] = 1;
                    stack.emplace_back(next, contracted[next].begin());
                }
            }
        }
        if (cyclic) {
            problems.push_back("blocks interleave: no topological order keeps every block contiguous");
        }
    }

    // Single entry, single exit: one outside producer feeds the block and one
    // member feeds the outside.
    for (std::size_t b = 0; b < nb; ++b) {
        std::set<std::size_t> producers;
        std::set<std::size_t> exits;
        for (std::size_t v : partition.blocks[b]) {
            for (std::size_t p : graph.predecessors(v)) {
                if (owner[p] != b) {
                    producers.insert(p);
                }
            }
            for (std::size_t s : graph.successors(v)) {
                if (owner[s] != b) {
                    exits.insert(v);
                }
            }
        }
        auto names = [&](const std::set<std::size_t>& set) {
            std::string out;
            for (std::size_t v : set) {
                out += (out.empty() ? "" : ", ") + graph.layer(v).id;
            }
            return out;
        };
        if (producers.size() > 1) {
            problems.push_back("block " + std::to_string(b + 1) + " is entered from several layers: " + names(producers));
        }
        if (exits.size() > 1) {
            problems.push_back("block " + std::to_string(b + 1) + " is left from several layers: " + names(exits));
        }
    }
    return problems;
}

LayerGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("format") || doc["format"] != kGraphFormat) {
        throw ParseError("graph: expected an object with format \"" + std::string(kGraphFormat) + "\"");
    }
    if (!doc.contains("layers") || !doc["layers"].is_array()) {
        throw ParseError("graph: field 'layers' must be an array");
    }
    if (!doc.contains("edges") || !doc["edges"].is_array()) {
        throw ParseError("graph: field 'edges' must be an array");
    }
    std::vector<Layer> layers;
    for (std::size_t k = 0; k < doc["layers"].size(); ++k) {
        const auto& jl = doc["layers"][k];
        const std::string where = "graph: layers[" + std::to_string(k) + "]";
        if (!jl.is_object() || !jl.contains("id") || !jl["id"].is_string()) {
            throw ParseError(where + ": string 'id' required");
        }
        if (!jl.contains("kind") || !jl["kind"].is_string()) {
            throw ParseError(where + ": string 'kind' required");
        }
        Layer layer;
        layer.id = jl["id"].get<std::string>();
        layer.kind = jl["kind"].get<std::string>() == "conv" ? LayerKind::conv : LayerKind::other;
        if (jl.contains("param_count")) {
            if (!jl["param_count"].is_number_integer()) {
                throw ParseError(where + ": 'param_count' must be an integer");
            }
            layer.param_count = jl["param_count"].get<std::int64_t>();
        }
        layers.push_back(std::move(layer));
    }
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
        const auto& je = doc["edges"][k];
        if (!je.is_object() || !je.contains("from") || !je["from"].is_string() || !je.contains("to") ||
            !je["to"].is_string()) {
            throw ParseError("graph: edges[" + std::to_string(k) + "] needs string 'from' and 'to'");
        }
        edges.push_back({je["from"].get<std::string>(), je["to"].get<std::string>()});
    }
    return LayerGraph(std::move(layers), std::move(edges));
}

LayerGraph parse_graph(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("graph: ") + e.what());
    }
    return graph_from_json(doc);
}

LayerGraph load_graph(const std::filesystem::path& path) {
    try {
        return parse_graph(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

nlohmann::ordered_json graph_to_json(const LayerGraph& graph) {
    nlohmann::ordered_json doc;
    doc["format"] = kGraphFormat;
    auto layers = nlohmann::ordered_json::array();
    for (const auto& l : graph.layers()) {
        layers.push_back({{"id", l.id}, {"kind", l.kind == LayerKind::conv ? "conv" : "other"}, {"param_count", l.param_count}});
    }
    doc["layers"] = std::move(layers);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back({{"from", e.from}, {"to", e.to}});
    }
    doc["edges"] = std::move(edges);
    return doc;
}

nlohmann::ordered_json partition_to_json(const LayerGraph& graph, const BlockPartition& partition) {
    nlohmann::ordered_json doc;
    doc["format"] = kPartitionFormat;
    auto blocks = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        nlohmann::ordered_json jb;
        jb["block_id"] = b + 1;
        jb["param_count"] = block_param_count(graph, partition.blocks[b]);
        auto ids = nlohmann::ordered_json::array();
        for (std::size_t v : partition.blocks[b]) {
            ids.push_back(graph.layer(v).id);
        }
        jb["layers"] = std::move(ids);
        blocks.push_back(std::move(jb));
    }
    doc["blocks"] = std::move(blocks);
    auto residue = nlohmann::ordered_json::array();
    for (std::size_t v : partition.residue) {
        residue.push_back(graph.layer(v).id);
    }
    doc["residue"] = std::move(residue);
    return doc;
}

}  // namespace legodnn
