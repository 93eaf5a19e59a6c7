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

#include "legodnn/error.hpp"
#include "legodnn/exchange.hpp"
#include "legodnn/profile.hpp"
#include "legodnn/random.hpp"

namespace legodnn {
namespace {

/// Two blocks with four descendants each; block 2 sizes 40/30/20/10; residue 5.
DnnProfile two_blocks() {
    DnnProfile p;
    p.dnn_id = "two";
    p.base_size_bytes = 105;
    BlockProfile b1;
    b1.block_id = 1;
    b1.descendants = {{0, 0.0, 60, 0.0, 0}, {1, 0.01, 45, 0.25, 0}, {2, 0.02, 30, 0.5, 0}, {3, 0.04, 15, 0.75, 0}};
    BlockProfile b2;
    b2.block_id = 2;
    b2.descendants = {{0, 0.0, 40, 0.0, 0}, {1, 0.01, 30, 0.25, 0}, {2, 0.02, 20, 0.5, 0}, {3, 0.04, 10, 0.75, 0}};
    p.blocks = {b1, b2};
    derive_fields(p);
    return p;
}

TEST(Exchange, SwapsOnlyChangedBlocks) {
    // current [0,3] -> target [0,1]: one swap on block 2, in = s(2,1) = 30, out = s(2,3) = 10.
    const ExchangePlan plan = diff(Selection{{0, 3}}, Selection{{0, 1}}, two_blocks());
    ASSERT_EQ(plan.swaps.size(), 1u);
    EXPECT_EQ(plan.swaps[0].block_id, 2);
    EXPECT_EQ(plan.swaps[0].from_descendant, 3);
    EXPECT_EQ(plan.swaps[0].to_descendant, 1);
    EXPECT_EQ(plan.bytes_in, 30);
    EXPECT_EQ(plan.bytes_out, 10);
}

TEST(Exchange, IdentityIsEmpty) {
    const ExchangePlan plan = diff(Selection{{2, 1}}, Selection{{2, 1}}, two_blocks());
    EXPECT_TRUE(plan.empty());
    EXPECT_EQ(plan.total_bytes(), 0);
    EXPECT_EQ(plan.energy_joules, 0.0);
}

TEST(Exchange, ReversalSwapsDirections) {
    const DnnProfile p = two_blocks();
    const Selection a{{1, 3}};
    const Selection b{{2, 0}};
    const ExchangePlan ab = diff(a, b, p);
    const ExchangePlan ba = diff(b, a, p);
    EXPECT_EQ(ab.bytes_in, ba.bytes_out);
    EXPECT_EQ(ab.bytes_out, ba.bytes_in);
    EXPECT_EQ(ab.swaps.size(), ba.swaps.size());
}

TEST(Exchange, BlockPlanBeatsWholeModelWhenTwoOfFiveChange) {
    const DnnProfile p = generate_synthetic(5, 3, 8);
    const Selection a{{0, 1, 2, 3, 0}};
    const Selection b{{0, 2, 2, 1, 0}};
    const ExchangePlan block = diff(a, b, p);
    const ExchangePlan whole = whole_model_cost(p.model_size(a), p.model_size(b));
    EXPECT_EQ(block.swaps.size(), 2u);
    const Bytes expected = p.blocks[1].descendants[1].size_bytes + p.blocks[1].descendants[2].size_bytes +
                           p.blocks[3].descendants[3].size_bytes + p.blocks[3].descendants[1].size_bytes;
    EXPECT_EQ(block.total_bytes(), expected);
    EXPECT_LT(block.total_bytes(), whole.total_bytes());
}

TEST(Exchange, EqualityNeedsEveryBlockAndNoResidue) {
    DnnProfile p = two_blocks();
    p.base_size_bytes = 100;
    derive_fields(p);
    ASSERT_EQ(p.residue_bytes(), 0);
    const Selection a{{0, 0}};
    const Selection b{{3, 3}};
    EXPECT_EQ(diff(a, b, p).total_bytes(), whole_model_cost(p.model_size(a), p.model_size(b)).total_bytes());
    const Selection c{{3, 0}};
    EXPECT_LT(diff(a, c, p).total_bytes(), whole_model_cost(p.model_size(a), p.model_size(c)).total_bytes());
}

TEST(Exchange, RandomPairsNeverExceedWholeModel) {
    Rng rng(31);
    for (int k = 0; k < 500; ++k) {
        const DnnProfile p = generate_synthetic(1 + static_cast<int>(rng.below(8)), 3, rng.next());
        Selection a;
        Selection b;
        for (const auto& block : p.blocks) {
            a.choices.push_back(static_cast<int>(rng.below(block.descendants.size())));
            b.choices.push_back(static_cast<int>(rng.below(block.descendants.size())));
        }
        EXPECT_LT(diff(a, b, p).total_bytes(), whole_model_cost(p.model_size(a), p.model_size(b)).total_bytes());
    }
}

TEST(Exchange, WholeModelCost) {
    const ExchangePlan plan = whole_model_cost(50'000'000, 30'000'000);
    EXPECT_EQ(plan.bytes_in, 30'000'000);
    EXPECT_EQ(plan.bytes_out, 50'000'000);
    const ExchangePlan same = whole_model_cost(7, 7);
    EXPECT_EQ(same.bytes_in, same.bytes_out);
    EXPECT_THROW(whole_model_cost(0, 5), ValidationError);
}

TEST(Exchange, NestedModelPagesTheDifference) {
    EnergyModel energy;
    const ExchangePlan down = nested_model_cost(50, 30, energy);
    EXPECT_EQ(down.bytes_in, 0);
    EXPECT_EQ(down.bytes_out, 20);
    const ExchangePlan up = nested_model_cost(30, 50, energy);
    EXPECT_EQ(up.bytes_in, 20);
    EXPECT_EQ(up.bytes_out, 0);
    EXPECT_DOUBLE_EQ(up.energy_joules, energy_for_bytes(20, energy) + energy.reconstruction_joules_per_switch);
    EXPECT_EQ(nested_model_cost(30, 30, energy).energy_joules, 0.0);
}

TEST(Exchange, EnergyIsLinearInBytes) {
    EnergyModel energy;
    EXPECT_DOUBLE_EQ(energy_for_bytes(2'000'000, energy), 2.0 * energy.joules_per_mb);
    EXPECT_DOUBLE_EQ(energy_for_bytes(4'000'000, energy), 2.0 * energy_for_bytes(2'000'000, energy));
    const ExchangePlan plan = diff(Selection{{0, 3}}, Selection{{0, 1}}, two_blocks(), energy);
    EXPECT_DOUBLE_EQ(plan.energy_joules, energy_for_bytes(40, energy));
}

TEST(Exchange, MismatchedSelectionsRejected) {
    EXPECT_THROW(diff(Selection{{0}}, Selection{{0, 1}}, two_blocks()), ValidationError);
    EXPECT_THROW(diff(Selection{{0, 4}}, Selection{{0, 1}}, two_blocks()), ValidationError);
}

TEST(Exchange, PlanJson) {
    const auto doc = plan_to_json(diff(Selection{{0, 3}}, Selection{{0, 1}}, two_blocks()));
    EXPECT_EQ(doc["bytes_in"], 30);
    EXPECT_EQ(doc["bytes_out"], 10);
    ASSERT_EQ(doc["swaps"].size(), 1u);
    EXPECT_EQ(doc["swaps"][0]["block_id"], 2);
}

}  // namespace
}  // namespace legodnn
