// Copyright 2026 The mcvqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mcvqc {

enum class SplitTag : std::uint8_t { Train, Val, Test };

const char* to_string(SplitTag tag);

struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<std::vector<double>> targets;  // class index (size 1) or a feature copy
    std::vector<int> labels;                   // empty when unlabeled
    std::vector<SplitTag> split;               // empty until split() runs
    int num_classes = 0;

    std::size_t size() const { return features.size(); }
    std::size_t dim() const { return features.empty() ? 0 : features.front().size(); }
    void validate() const;
    /// Rows carrying `tag`, in order.
    Dataset subset(SplitTag tag) const;
    std::vector<std::size_t> indices(SplitTag tag) const;
};

/// Sets targets to a copy of the features.
Dataset as_reconstruction(Dataset ds);

struct IdxImages {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> pixels;
};

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);
void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

/// Pixels scaled to [0, 1]; targets hold the class index.
Dataset parse_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Header row required. Non-target columns become features.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column);

/// Maps [0, 1] onto [0, pi]. Out-of-range values are clamped; the count is returned through `clamped`.
std::vector<double> scale_to_angles(std::span<const double> features, std::size_t* clamped = nullptr);

Dataset synthetic_blobs(std::size_t n_samples, std::size_t dim, int n_classes, std::uint64_t seed,
                        double separation = 10.0);
Dataset synthetic_spatiotemporal(std::size_t n_samples, std::size_t channels, std::size_t timesteps,
                                 std::uint64_t seed, int n_classes = 2);
/// 8x8 handwritten-style digit images in [0, 1], ten classes.
Dataset synthetic_digits(std::size_t n_samples, std::uint64_t seed);

/// 28x28 rows to 8x8: zero-pad to 32x32, then 4x4 block means.
Dataset downsample_mnist(const Dataset& ds);

/// Rescales every feature column to [0, 1] using min/max over all rows.
void minmax_normalize(Dataset& ds);

Dataset split(Dataset ds, const std::array<double, 3>& fractions, std::uint64_t seed);

/// Index batches covering the tagged rows exactly once, shuffled by `seed`.
std::vector<std::vector<std::size_t>> batches(const Dataset& ds, SplitTag tag, std::size_t batch_size,
                                              std::uint64_t seed);

}  // namespace mcvqc
