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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "legodnn/error.hpp"

namespace legodnn {

enum class LayerKind { conv, other };

struct Layer {
    std::string id;
    LayerKind kind = LayerKind::other;
    std::int64_t param_count = 0;
};

struct Edge {
    std::string from;
    std::string to;
};

/// Layer-dependency DAG. Edges point from producer to consumer.
class LayerGraph {
  public:
    /// Throws ValidationError on duplicate ids, unknown edge endpoints or cycles.
    LayerGraph(std::vector<Layer> layers, std::vector<Edge> edges);

    std::size_t size() const { return layers_.size(); }
    const std::vector<Layer>& layers() const { return layers_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Layer& layer(std::size_t index) const { return layers_[index]; }

    /// Index of `id`, or throws ValidationError.
    std::size_t index_of(std::string_view id) const;

    const std::vector<std::size_t>& successors(std::size_t index) const { return succ_[index]; }
    const std::vector<std::size_t>& predecessors(std::size_t index) const { return pred_[index]; }

    /// Longest path from any input layer; inputs have depth 0.
    int depth(std::size_t index) const { return depth_[index]; }

    /// Layers ordered by (depth, declaration order). Always a topological order.
    const std::vector<std::size_t>& topological_order() const { return topo_; }

  private:
    std::vector<Layer> layers_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;
    std::vector<int> depth_;
    std::vector<std::size_t> topo_;
};

/// Blocks hold layer indices into the owning graph, sorted topologically.
struct BlockPartition {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> residue;
};

/// Phase 1: repeatedly take the shallowest unassigned conv layer and grow a
/// block from every unassigned layer depending on it, stopping at other conv
/// layers. Growth then continues until the block ends on a layer every
/// input-to-output path passes through, so skip connections stay inside.
BlockPartition elementary_blocks(const LayerGraph& graph);

/// Phase 2: merge adjacent blocks down to `target_count`, minimizing the
/// largest merged parameter count.
BlockPartition merge_blocks(const LayerGraph& graph, const BlockPartition& partition,
                            int target_count);

std::int64_t block_param_count(const LayerGraph& graph, const std::vector<std::size_t>& block);

/// Structural problems of a partition: overlap or missing layers, blocks
/// interleaving in topological order, and blocks with more than one external
/// producer feeding them or more than one member feeding the outside.
std::vector<std::string> check_partition(const LayerGraph& graph, const BlockPartition& partition);

inline constexpr std::string_view kGraphFormat = "legodnn-graph/1";
inline constexpr std::string_view kPartitionFormat = "legodnn-partition/1";

LayerGraph parse_graph(std::string_view text);
LayerGraph graph_from_json(const nlohmann::json& doc);
LayerGraph load_graph(const std::filesystem::path& path);
nlohmann::ordered_json graph_to_json(const LayerGraph& graph);

nlohmann::ordered_json partition_to_json(const LayerGraph& graph, const BlockPartition& partition);

}  // namespace legodnn
