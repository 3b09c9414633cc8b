// Copyright 2026 The HBS Authors
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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "csv.hpp"
#include "hbs/hashing.hpp"

namespace hbs::experiments {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::uint64_t repetitions = 10'000;
};

// Independent stream per (seed, trial); output never depends on how trials
// are scheduled.
[[nodiscard]] std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) noexcept;
[[nodiscard]] std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);
// Uniform on (0, 1), never exactly 0 or 1.
[[nodiscard]] double uniform01(std::mt19937_64& rng);

// Hash of the i-th distinct element of a stream keyed by `key`.
[[nodiscard]] inline std::uint64_t element_hash(std::uint64_t key, std::uint64_t i) noexcept {
  return seeded_hash(i, key);
}

// ---- dist -----------------------------------------------------------------

struct DistRow {
  double lambda = 0;
  int rank = 0;
  double probability = 0;
  bool r_star = false;
  bool mode = false;
};

[[nodiscard]] std::vector<DistRow> dist(std::span<const double> lambdas);
[[nodiscard]] Csv dist_csv(std::span<const DistRow> rows);

// ---- bucket sizes -------------------------------------------------------------

struct BucketSizeRow {
  std::uint32_t registers = 0;
  double lambda = 0;
  std::uint64_t reps = 0;
  double mean_bits = 0;
  std::uint64_t min_bits = 0;
  std::uint64_t max_bits = 0;
};

// Draws `reps` buckets of B registers from the rank model at `lambda` and
// encodes each with the codebook for that lambda.
[[nodiscard]] BucketSizeRow sample_bucket_sizes(std::uint32_t registers, double lambda, std::uint64_t reps,
                                                std::uint64_t seed);

[[nodiscard]] std::vector<BucketSizeRow> bucket_size(double n, double m, std::span<const std::uint32_t> registers,
                                                     const ExperimentConfig& config);
[[nodiscard]] std::vector<BucketSizeRow> bucket_size_vs_lambda(std::span<const std::uint32_t> registers,
                                                               std::span<const double> lambdas,
                                                               const ExperimentConfig& config);
[[nodiscard]] Csv bucket_size_csv(std::span<const BucketSizeRow> rows);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double max_relative_residual = 0;
};

[[nodiscard]] LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

// Largest (max - min) / min of mean_bits over rows with lambda >= min_lambda,
// taken per B.
[[nodiscard]] double plateau_variation(std::span<const BucketSizeRow> rows, double min_lambda);

// ---- fixed-budget size model -------------------------------------------------

inline constexpr std::uint64_t kTreeBits = 127;
inline constexpr std::uint64_t kEncodeTableBits = 4416;
inline constexpr std::uint64_t kDecodeTableBits = 4800;
inline constexpr double kVarianceConstant = 1.075;

struct MvpReference {
  double small_bits;
  double big_bits;
  double mvp_small;
};

struct MvpRow {
  std::uint64_t m = 0;
  std::uint32_t budget = 0;
  std::uint32_t registers = 0;
  std::uint64_t small_bits = 0;
  std::uint64_t big_bits = 0;
  double mvp_small = 0;
  double mvp_big = 0;
  std::optional<MvpReference> reference;
};

[[nodiscard]] unsigned ceil_log2(std::uint64_t x) noexcept;
[[nodiscard]] std::uint64_t small_sketch_bits(std::uint64_t m, std::uint32_t budget, std::uint32_t registers);
[[nodiscard]] std::uint64_t big_sketch_bits(std::uint64_t m, std::uint32_t budget, std::uint32_t registers);
[[nodiscard]] double memory_variance_product(std::uint64_t bits, std::uint64_t m);
// Known sizes for the three standard configurations at m = 2^15.
[[nodiscard]] std::optional<MvpReference> reference_sizes(std::uint64_t m, std::uint32_t budget,
                                                           std::uint32_t registers) noexcept;
[[nodiscard]] MvpRow mvp_row(std::uint64_t m, std::uint32_t budget, std::uint32_t registers);
[[nodiscard]] Csv mvp_csv(std::span<const MvpRow> rows);

// ---- tree changes -------------------------------------------------------------

struct OctaveCount {
  int octave = 0;  // changes with lambda in [2^octave, 2^(octave+1))
  std::uint64_t changes = 0;
};

struct TreeChangeResult {
  std::uint64_t m = 0;
  std::uint64_t n_max = 0;
  std::vector<std::uint64_t> change_points;  // n such that T(n/m) != T((n-1)/m)
  std::vector<OctaveCount> per_octave;
  [[nodiscard]] std::uint64_t total() const noexcept { return change_points.size(); }
  // total / log2(n_max)
  [[nodiscard]] double constant() const noexcept;
  [[nodiscard]] std::uint64_t max_per_octave() const noexcept;
};

// Dense sweep over every n in [1, n_max].
[[nodiscard]] TreeChangeResult tree_changes(std::uint64_t m, std::uint64_t n_max);
[[nodiscard]] Csv tree_changes_csv(const TreeChangeResult& result);
[[nodiscard]] Csv tree_octaves_csv(const TreeChangeResult& result);

// ---- update costs -------------------------------------------------------------

struct UpdateCostRow {
  std::uint64_t n = 0;
  std::uint64_t ordinary_updates = 0;
  std::uint64_t register_writes = 0;
  std::uint64_t min_recomputes = 0;
  std::uint64_t rebuilds = 0;
  std::uint64_t tree_changes = 0;
  double estimate = 0;
};

// Counters at n = 1, 2, 4, ... and at n_max.
[[nodiscard]] std::vector<UpdateCostRow> update_costs(const SketchParams& params, std::uint64_t n_max,
                                                      std::uint64_t seed);
[[nodiscard]] Csv update_costs_csv(std::span<const UpdateCostRow> rows);

// ---- accuracy -------------------------------------------------------------------

struct AccuracyRow {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double mean_relative_error = 0;
  double relative_standard_error = 0;  // root mean square of the relative error
  std::uint64_t oracle_mismatches = 0;  // trials where HBS and HLL disagree
};

[[nodiscard]] std::vector<AccuracyRow> accuracy(const SketchParams& params, std::span<const std::uint64_t> ns,
                                                std::uint64_t trials, std::uint64_t seed);
[[nodiscard]] Csv accuracy_csv(std::span<const AccuracyRow> rows);

}  // namespace hbs::experiments
