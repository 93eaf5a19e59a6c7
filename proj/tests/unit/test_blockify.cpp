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

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "legodnn/blockify.hpp"
#include "legodnn/error.hpp"

namespace legodnn {
namespace {

std::vector<std::string> ids(const LayerGraph& g, const std::vector<std::size_t>& block) {
    std::vector<std::string> out;
    for (std::size_t i : block) {
        out.push_back(g.layer(i).id);
    }
    return out;
}

/// input -> c1 -> r1 -> c2 -> r2 -> c3 -> r3 -> fc
LayerGraph chain() {
    return LayerGraph({{"input", LayerKind::other, 0},
                       {"c1", LayerKind::conv, 10},
                       {"r1", LayerKind::other, 0},
                       {"c2", LayerKind::conv, 20},
                       {"r2", LayerKind::other, 0},
                       {"c3", LayerKind::conv, 30},
                       {"r3", LayerKind::other, 0},
                       {"fc", LayerKind::other, 40}},
                      {{"input", "c1"}, {"c1", "r1"}, {"r1", "c2"}, {"c2", "r2"}, {"r2", "c3"}, {"c3", "r3"}, {"r3", "fc"}});
}

/// stem conv, then a residual unit whose skip edge joins at `add`.
LayerGraph residual() {
    return LayerGraph({{"input", LayerKind::other, 0},
                       {"stem", LayerKind::conv, 5},
                       {"a", LayerKind::conv, 10},
                       {"b", LayerKind::conv, 10},
                       {"add", LayerKind::other, 0},
                       {"head", LayerKind::other, 7}},
                      {{"input", "stem"}, {"stem", "a"}, {"a", "b"}, {"b", "add"}, {"stem", "add"}, {"add", "head"}});
}

TEST(Blockify, ChainSplitsAtEveryConv) {
    const LayerGraph g = chain();
    const BlockPartition p = elementary_blocks(g);
    ASSERT_EQ(p.blocks.size(), 3u);
    EXPECT_EQ(ids(g, p.blocks[0]), (std::vector<std::string>{"c1", "r1"}));
    EXPECT_EQ(ids(g, p.blocks[1]), (std::vector<std::string>{"c2", "r2"}));
    EXPECT_EQ(ids(g, p.blocks[2]), (std::vector<std::string>{"c3", "r3", "fc"}));
    EXPECT_EQ(ids(g, p.residue), (std::vector<std::string>{"input"}));
    EXPECT_TRUE(check_partition(g, p).empty());
}

TEST(Blockify, SkipConnectionStaysInsideOneBlock) {
    const LayerGraph g = residual();
    const BlockPartition p = elementary_blocks(g);
    EXPECT_TRUE(check_partition(g, p).empty());
    // Whichever block holds "a" must also hold "b" and "add": the skip edge from stem joins there.
    for (const auto& block : p.blocks) {
        const auto names = ids(g, block);
        if (std::find(names.begin(), names.end(), "a") != names.end()) {
            EXPECT_NE(std::find(names.begin(), names.end(), "b"), names.end());
            EXPECT_NE(std::find(names.begin(), names.end(), "add"), names.end());
        }
    }
}

TEST(Blockify, MergeToTarget) {
    const LayerGraph g = chain();
    const BlockPartition p = merge_blocks(g, elementary_blocks(g), 2);
    ASSERT_EQ(p.blocks.size(), 2u);
    EXPECT_TRUE(check_partition(g, p).empty());
    // Weights 10, 20, 70: best split {10,20}{70}, largest 70.
    EXPECT_EQ(block_param_count(g, p.blocks[0]), 30);
    EXPECT_EQ(block_param_count(g, p.blocks[1]), 70);
}

/// Chain of convs with the given parameter counts.
LayerGraph conv_chain(const std::vector<std::int64_t>& params) {
    std::vector<Layer> layers;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < params.size(); ++i) {
        layers.push_back({"c" + std::to_string(i), LayerKind::conv, params[i]});
        if (i > 0) {
            edges.push_back({"c" + std::to_string(i - 1), "c" + std::to_string(i)});
        }
    }
    return LayerGraph(layers, edges);
}

/// Smallest achievable largest group over every split of `w` into k contiguous groups.
std::int64_t brute_force_min_max(const std::vector<std::int64_t>& w, int k) {
    const int n = static_cast<int>(w.size());
    std::int64_t best = -1;
    // Bit i set: a cut after position i.
    for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != k - 1) {
            continue;
        }
        std::int64_t largest = 0;
        std::int64_t run = 0;
        for (int i = 0; i < n; ++i) {
            run += w[static_cast<std::size_t>(i)];
            if (i == n - 1 || (mask >> i & 1)) {
                largest = std::max(largest, run);
                run = 0;
            }
        }
        if (best < 0 || largest < best) {
            best = largest;
        }
    }
    return best;
}

TEST(Blockify, MergeMatchesBruteForce) {
    const std::vector<std::vector<std::int64_t>> cases{
        {1, 1, 4, 1, 1, 1}, {5, 1, 1, 1, 5}, {3, 3, 3, 3}, {9, 1, 1, 1, 1, 1, 1, 1}, {2, 7, 1, 8, 2, 8, 1, 8}};
    for (const auto& w : cases) {
        const LayerGraph g = conv_chain(w);
        const BlockPartition elementary = elementary_blocks(g);
        ASSERT_EQ(elementary.blocks.size(), w.size());
        for (int k = 1; k <= static_cast<int>(w.size()); ++k) {
            const BlockPartition merged = merge_blocks(g, elementary, k);
            ASSERT_EQ(merged.blocks.size(), static_cast<std::size_t>(k));
            std::int64_t largest = 0;
            for (const auto& b : merged.blocks) {
                largest = std::max(largest, block_param_count(g, b));
            }
            EXPECT_EQ(largest, brute_force_min_max(w, k)) << "k=" << k;
            EXPECT_TRUE(check_partition(g, merged).empty());
        }
    }
    // [1,1,4,1,1,1] into 3: {1,1}{4}{1,1,1}, largest 4.
    EXPECT_EQ(brute_force_min_max({1, 1, 4, 1, 1, 1}, 3), 4);
}

TEST(Blockify, MergeErrors) {
    const LayerGraph g = chain();
    const BlockPartition p = elementary_blocks(g);
    try {
        merge_blocks(g, p, 4);
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("target exceeds elementary blocks"), std::string::npos);
    }
    EXPECT_THROW(merge_blocks(g, p, 0), ValidationError);
}

TEST(Blockify, GraphErrors) {
    EXPECT_THROW(LayerGraph({{"a", LayerKind::conv, 1}, {"b", LayerKind::conv, 1}}, {{"a", "b"}, {"b", "a"}}),
                 ValidationError);
    EXPECT_THROW(LayerGraph({{"a", LayerKind::conv, 1}}, {{"a", "a"}}), ValidationError);
    EXPECT_THROW(LayerGraph({{"a", LayerKind::conv, 1}, {"a", LayerKind::conv, 1}}, {}), ValidationError);
    EXPECT_THROW(LayerGraph({{"a", LayerKind::conv, 1}}, {{"a", "zz"}}), ValidationError);
    try {
        elementary_blocks(LayerGraph({{"a", LayerKind::other, 1}, {"b", LayerKind::other, 1}}, {{"a", "b"}}));
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("no blocks identifiable"), std::string::npos);
    }
}

TEST(Blockify, CheckFindsBrokenPartitions) {
    const LayerGraph g = chain();
    BlockPartition p = elementary_blocks(g);
    BlockPartition overlap = p;
    overlap.blocks[1].push_back(p.blocks[0][0]);
    EXPECT_FALSE(check_partition(g, overlap).empty());
    BlockPartition missing = p;
    missing.blocks[2].pop_back();
    EXPECT_FALSE(check_partition(g, missing).empty());
    BlockPartition reversed = p;
    std::swap(reversed.blocks[0], reversed.blocks[2]);
    EXPECT_FALSE(check_partition(g, reversed).empty());
}

TEST(Blockify, TopologicalOrderAndDepth) {
    const LayerGraph g = residual();
    const auto& order = g.topological_order();
    std::vector<std::size_t> position(g.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        position[order[k]] = k;
    }
    for (const auto& e : g.edges()) {
        EXPECT_LT(position[g.index_of(e.from)], position[g.index_of(e.to)]);
    }
    EXPECT_EQ(g.depth(g.index_of("add")), 4);
    EXPECT_THROW(g.index_of("missing"), ValidationError);
}

TEST(Blockify, JsonRoundTrip) {
    const LayerGraph g = residual();
    const LayerGraph h = parse_graph(graph_to_json(g).dump());
    EXPECT_EQ(h.size(), g.size());
    EXPECT_EQ(h.edges().size(), g.edges().size());
    EXPECT_THROW(parse_graph("{"), ParseError);
    EXPECT_THROW(parse_graph(R"({"format":"legodnn-graph/9","layers":[],"edges":[]})"), ParseError);
    const auto doc = partition_to_json(g, elementary_blocks(g));
    EXPECT_EQ(doc["format"], std::string(kPartitionFormat));
}

}  // namespace
}  // namespace legodnn
