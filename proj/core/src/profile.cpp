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

#include "legodnn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "legodnn/latency.hpp"
#include "legodnn/random.hpp"

namespace legodnn {

Bytes DnnProfile::residue_bytes() const {
    Bytes blocks_total = 0;
    for (const auto& block : blocks) {
        blocks_total += block.original_size_bytes;
    }
    return base_size_bytes - blocks_total;
}

Bytes DnnProfile::model_size(const Selection& selection) const {
    Bytes size = base_size_bytes;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        size -= blocks[i].descendants[selection.choices[i]].size_reduction_bytes;
    }
    return size;
}

double DnnProfile::accuracy_loss(const Selection& selection) const {
    double loss = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        loss += blocks[i].descendants[selection.choices[i]].accuracy_loss;
    }
    return loss;
}

Selection DnnProfile::original_selection() const {
    return Selection{std::vector<int>(blocks.size(), 0)};
}

Selection DnnProfile::most_compressed_selection() const {
    Selection selection;
    selection.choices.reserve(blocks.size());
    for (const auto& block : blocks) {
        selection.choices.push_back(block.most_compressed());
    }
    return selection;
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

}  // namespace

std::vector<Violation> validate_profile(const DnnProfile& profile) {
    std::vector<Violation> out;
    auto add = [&](int b, int d, std::string msg) { out.push_back({b, d, std::move(msg)}); };

    if (profile.dnn_id.empty()) {
        add(-1, -1, "dnn_id must not be empty");
    }
    if (profile.base_size_bytes <= 0) {
        add(-1, -1, "base size must be positive");
    }
    if (!(profile.original_accuracy > 0.0 && profile.original_accuracy <= 1.0)) {
        add(-1, -1, "original accuracy must be in (0, 1]");
    }
    if (profile.blocks.empty()) {
        add(-1, -1, "profile has no blocks");
    }

    const int n = static_cast<int>(profile.blocks.size());
    std::set<int> seen_ids;
    Bytes blocks_total = 0;
    for (int b = 0; b < n; ++b) {
        const BlockProfile& block = profile.blocks[b];
        if (block.block_id < 1 || block.block_id > n) {
            add(b, -1, "block id " + std::to_string(block.block_id) + " outside 1.." + std::to_string(n));
        }
        if (!seen_ids.insert(block.block_id).second) {
            add(b, -1, "duplicate block id " + std::to_string(block.block_id));
        }
        if (block.original_size_bytes <= 0) {
            add(b, -1, "original block size must be positive");
        }
        blocks_total += block.original_size_bytes;
        if (block.descendants.empty()) {
            add(b, -1, "block has no descendants (descendant 0 is the original)");
            continue;
        }
        if (block.descendants[0].size_bytes != block.original_size_bytes) {
            add(b, 0, "descendant 0 size must equal the original block size");
        }
        for (int d = 0; d < static_cast<int>(block.descendants.size()); ++d) {
            const DescendantProfile& desc = block.descendants[d];
            if (desc.descendant_index != d) {
                add(b, d, "descendant index " + std::to_string(desc.descendant_index) + " at position " +
                              std::to_string(d));
            }
            if (!(desc.accuracy_loss >= 0.0 && desc.accuracy_loss <= 1.0)) {
                add(b, d, "accuracy loss " + fmt_double(desc.accuracy_loss) + " outside [0, 1]");
            }
            if (!(desc.latency_reduction >= 0.0 && desc.latency_reduction < 1.0)) {
                add(b, d, "latency reduction " + fmt_double(desc.latency_reduction) + " outside [0, 1)");
            }
            if (desc.size_bytes < 0) {
                add(b, d, "size must be non-negative");
            }
            if (desc.size_reduction_bytes != block.original_size_bytes - desc.size_bytes ||
                desc.size_reduction_bytes < 0) {
                add(b, d, "size reduction must equal original size minus descendant size");
            }
            if (d == 0) {
                if (desc.accuracy_loss != 0.0) {
                    add(b, d, "original block must have zero loss");
                }
                if (desc.latency_reduction != 0.0) {
                    add(b, d, "original block must have zero latency reduction");
                }
            } else if (desc.size_bytes >= block.descendants[d - 1].size_bytes) {
                add(b, d, "sizes not decreasing");
            }
        }
    }
    if (!profile.blocks.empty() && profile.base_size_bytes < blocks_total) {
        add(-1, -1, "base size " + std::to_string(profile.base_size_bytes) +
                        " smaller than the summed original block sizes " + std::to_string(blocks_total));
    }
    return out;
}

void require_valid(const DnnProfile& profile) {
    const auto violations = validate_profile(profile);
    if (violations.empty()) {
        return;
    }
    std::ostringstream msg;
    msg << "profile '" << profile.dnn_id << "' is invalid:";
    for (const auto& v : violations) {
        msg << "\n  ";
        if (v.block >= 0) {
            msg << "block " << v.block;
            if (v.descendant >= 0) {
                msg << " descendant " << v.descendant;
            }
            msg << ": ";
        }
        msg << v.message;
    }
    throw ValidationError(msg.str());
}

bool selection_fits(const DnnProfile& profile, const Selection& selection) {
    if (selection.choices.size() != profile.blocks.size()) {
        return false;
    }
    for (std::size_t i = 0; i < selection.choices.size(); ++i) {
        const int c = selection.choices[i];
        if (c < 0 || c >= static_cast<int>(profile.blocks[i].descendants.size())) {
            return false;
        }
    }
    return true;
}

std::uint64_t scaling_space_size(const DnnProfile& profile) {
    std::uint64_t total = 1;
    for (const auto& block : profile.blocks) {
        const auto options = static_cast<std::uint64_t>(block.descendants.size());
        if (options != 0 && total > std::numeric_limits<std::uint64_t>::max() / options) {
            throw std::overflow_error("scaling space of '" + profile.dnn_id + "' exceeds 2^64 - 1");
        }
        total *= options;
    }
    return total;
}

std::uint64_t combined_space_size(std::span<const DnnProfile> profiles) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 1;
    for (const auto& profile : profiles) {
        for (const auto& block : profile.blocks) {
            const auto options = static_cast<std::uint64_t>(block.descendants.size());
            if (options != 0 && total > kMax / options) {
                return kMax;
            }
            total *= options;
        }
    }
    return total;
}

void derive_fields(DnnProfile& profile) {
    for (auto& block : profile.blocks) {
        if (!block.descendants.empty()) {
            block.original_size_bytes = block.descendants.front().size_bytes;
        }
        for (std::size_t d = 0; d < block.descendants.size(); ++d) {
            auto& desc = block.descendants[d];
            desc.descendant_index = static_cast<int>(d);
            desc.size_reduction_bytes = block.original_size_bytes - desc.size_bytes;
        }
    }
}

DnnProfile generate_synthetic(int n_blocks, int n_descendants, std::uint64_t seed,
                              const SyntheticOptions& options) {
    if (n_blocks < 1 || n_descendants < 0) {
        throw ValidationError("generate_synthetic needs n_blocks >= 1 and n_descendants >= 0");
    }
    if (options.min_block_bytes < 2L * (n_descendants + 1) || options.max_block_bytes < options.min_block_bytes) {
        throw ValidationError("synthetic block size range too small for the descendant count");
    }
    if (!(options.size_growth > 0.0) || !(std::abs(options.depth_sensitivity) < 2.0)) {
        throw ValidationError("synthetic size_growth must be positive and |depth_sensitivity| < 2");
    }
    double growth_mean = 0.0;
    for (int b = 0; b < n_blocks; ++b) {
        growth_mean += std::pow(options.size_growth, b);
    }
    growth_mean /= n_blocks;
    Rng rng(seed);
    DnnProfile profile;
    profile.dnn_id = options.dnn_id;
    profile.original_accuracy = 1.0;

    Bytes blocks_total = 0;
    for (int b = 0; b < n_blocks; ++b) {
        BlockProfile block;
        block.block_id = b + 1;
        const double drawn = rng.uniform(static_cast<double>(options.min_block_bytes),
                                         static_cast<double>(options.max_block_bytes));
        const double growth = std::pow(options.size_growth, b) / growth_mean;
        const auto original = std::max<Bytes>(
            2L * (n_descendants + 1), static_cast<Bytes>(std::llround(drawn * growth)));
        const double depth = n_blocks > 1 ? static_cast<double>(b) / (n_blocks - 1) : 0.5;
        const double sensitivity = 1.0 + options.depth_sensitivity * (0.5 - depth);
        const double max_loss = rng.uniform(options.min_max_loss, options.max_max_loss) * sensitivity;
        // Convex loss curve: mild pruning is cheap, aggressive pruning is not.
        const double curvature = rng.uniform(1.2, 2.5);

        block.descendants.push_back({0, 0.0, original, 0.0, 0});
        double keep = 1.0;
        double prev_loss = 0.0;
        const double mean_step = 0.9 / std::max(1, n_descendants);
        for (int j = 1; j <= n_descendants; ++j) {
            keep -= mean_step * rng.uniform(0.5, 1.0);
            Bytes size = static_cast<Bytes>(std::floor(static_cast<double>(original) * keep));
            size = std::clamp<Bytes>(size, 1, block.descendants.back().size_bytes - 1);
            const double pruned = 1.0 - static_cast<double>(size) / static_cast<double>(original);
            double loss = max_loss * std::pow(pruned / 0.9, curvature) * rng.uniform(0.9, 1.1);
            loss = std::clamp(loss, prev_loss, 1.0);
            prev_loss = loss;
            block.descendants.push_back({j, loss, size, latency_reduction(original, size), 0});
        }
        blocks_total += original;
        profile.blocks.push_back(std::move(block));
    }
    const double residue = rng.uniform(options.min_residue_fraction, options.max_residue_fraction);
    profile.base_size_bytes = blocks_total + static_cast<Bytes>(std::llround(residue * static_cast<double>(blocks_total)));
    derive_fields(profile);
    return profile;
}

double average_accuracy_loss(std::span<const double> measurements) {
    if (measurements.empty()) {
        throw ValidationError("no measurements");
    }
    for (double m : measurements) {
        if (!(m >= -1.0 && m <= 1.0)) {
            throw ValidationError("accuracy loss measurement outside [-1, 1]");
        }
    }
    const double mean = std::accumulate(measurements.begin(), measurements.end(), 0.0) /
                        static_cast<double>(measurements.size());
    return std::clamp(mean, 0.0, 1.0);
}

}  // namespace legodnn
