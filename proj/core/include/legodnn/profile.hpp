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
#include <span>
#include <string>
#include <vector>

#include "legodnn/error.hpp"

namespace legodnn {

/// One compressed variant of a block. Index 0 is the uncompressed original.
struct DescendantProfile {
    int descendant_index = 0;
    double accuracy_loss = 0.0;
    Bytes size_bytes = 0;
    /// Fraction of the original block's latency removed, in [0, 1).
    double latency_reduction = 0.0;
    /// Original block size minus this descendant's size. Derived, never stored.
    Bytes size_reduction_bytes = 0;
};

struct BlockProfile {
    int block_id = 0;
    Bytes original_size_bytes = 0;
    std::vector<DescendantProfile> descendants;

    /// Number of compressed descendants, excluding the original.
    int compressed_count() const { return static_cast<int>(descendants.size()) - 1; }
    int most_compressed() const { return compressed_count(); }
};

struct Selection {
    /// choices[i] is the descendant index picked for the i-th block.
    std::vector<int> choices;

    bool operator==(const Selection&) const = default;
};

struct DnnProfile {
    std::string dnn_id;
    /// Whole model size with every block at its original, including non-block layers.
    Bytes base_size_bytes = 0;
    /// Accuracy of the unscaled model; losses are reported relative to it.
    double original_accuracy = 1.0;
    std::vector<BlockProfile> blocks;

    /// Bytes held by layers outside every block.
    Bytes residue_bytes() const;
    /// Model size with `selection` applied: base minus the summed size reductions.
    Bytes model_size(const Selection& selection) const;
    /// Additive accuracy loss of `selection`.
    double accuracy_loss(const Selection& selection) const;

    Selection original_selection() const;
    Selection most_compressed_selection() const;
};

struct Violation {
    /// 0-based block position, or -1 for profile-level problems.
    int block = -1;
    /// 0-based descendant position, or -1 for block-level problems.
    int descendant = -1;
    std::string message;
};

/// Every invariant violation in `profile`. Empty means valid.
std::vector<Violation> validate_profile(const DnnProfile& profile);

/// Throws ValidationError listing every violation.
void require_valid(const DnnProfile& profile);

/// True when `selection` has one in-range choice per block.
bool selection_fits(const DnnProfile& profile, const Selection& selection);

/// Product of (descendants per block). Throws std::overflow_error past 2^64 - 1.
std::uint64_t scaling_space_size(const DnnProfile& profile);

/// Like scaling_space_size over several profiles, saturating at UINT64_MAX.
std::uint64_t combined_space_size(std::span<const DnnProfile> profiles);

/// Recomputes descendant indices, original block sizes and size reductions
/// from the stored descendant sizes. Used after loading or hand-building a profile.
void derive_fields(DnnProfile& profile);

struct SyntheticOptions {
    Bytes min_block_bytes = 500'000;
    Bytes max_block_bytes = 8'000'000;
    /// Non-block layers as a fraction of the summed block sizes.
    double min_residue_fraction = 0.05;
    double max_residue_fraction = 0.25;
    /// Loss of the most compressed descendant is drawn from this range per block.
    double min_max_loss = 0.01;
    double max_max_loss = 0.12;
    /// Block b's drawn size is scaled by size_growth^b, normalized to keep the mean.
    double size_growth = 1.0;
    /// Block b's loss range is scaled by 1 + depth_sensitivity * (0.5 - b / (n - 1)).
    double depth_sensitivity = 0.0;
    std::string dnn_id = "synthetic";
};

/// Deterministic random profile: sizes strictly decreasing, losses
/// non-decreasing, latency reductions derived from sizes.
DnnProfile generate_synthetic(int n_blocks, int n_descendants, std::uint64_t seed,
                              const SyntheticOptions& options = {});

/// Mean of per-context accuracy losses, clamped to [0, 1].
double average_accuracy_loss(std::span<const double> measurements);

/// Number of representative sparsities averaged per descendant by default.
inline constexpr int kDefaultContextSparsities = 3;

}  // namespace legodnn
