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

#include "experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hbs/huffman.hpp"
#include "hbs/rank_model.hpp"

namespace hbs::experiments {
namespace {

TEST(Csv, FormatAndDeterminism) {
  Csv csv({"a", "b"});
  csv.row() << 1 << 0.5;
  csv.row() << "x" << 1e-300;
  EXPECT_EQ(csv.str(), "a,b\n1,0.5\nx,1e-300\n");
}

TEST(Rng, StreamsDependOnSeedAndTrial) {
  auto a = trial_rng(1, 0), b = trial_rng(1, 0), c = trial_rng(1, 1), d = trial_rng(2, 0);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(a);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Dist, RowsAndMarkers) {
  const double lambdas[] = {0.0, 32768.0};
  const auto rows = dist(lambdas);
  ASSERT_EQ(rows.size(), 128u);
  EXPECT_EQ(rows[0].probability, 1.0);
  double sum = 0;
  int mode = -1, r_star = -1;
  for (std::size_t i = 64; i < 128; ++i) {
    sum += rows[i].probability;
    if (rows[i].mode) mode = rows[i].rank;
    if (rows[i].r_star) r_star = rows[i].rank;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(r_star, 15);
  EXPECT_GE(mode, 14);
  EXPECT_LE(mode, 16);
  const double bad[] = {-1.0};
  EXPECT_ANY_THROW((void)dist(bad));
}

TEST(BucketSize, DeterministicAndCsvStable) {
  const std::uint32_t bs[] = {10, 40};
  const ExperimentConfig config{7, 500};
  const auto a = bucket_size_csv(bucket_size(std::ldexp(1.0, 30), std::ldexp(1.0, 15), bs, config)).str();
  const auto b = bucket_size_csv(bucket_size(std::ldexp(1.0, 30), std::ldexp(1.0, 15), bs, config)).str();
  EXPECT_EQ(a, b);
  const auto c = bucket_size_csv(bucket_size(std::ldexp(1.0, 30), std::ldexp(1.0, 15), bs, {8, 500})).str();
  EXPECT_NE(a, c);
}

TEST(BucketSize, MeanNearExpectedCodeLength) {
  const double lambda = 4096;
  const auto row = sample_bucket_sizes(100, lambda, 4000, 3);
  const RankModel model(lambda);
  const double per_register = HuffmanCodebook::build(model).expected_length(model.pmf());
  // Standard error of the mean is well under 0.5 bit here.
  EXPECT_NEAR(row.mean_bits, 100 * per_register, 2.0);
  EXPECT_LE(row.min_bits, row.max_bits);
}

TEST(Fit, ExactLine) {
  const double xs[] = {1, 2, 3, 4};
  const double ys[] = {3, 5, 7, 9};
  const auto fit = fit_linear(xs, ys);
  EXPECT_NEAR(fit.slope, 2, 1e-12);
  EXPECT_NEAR(fit.intercept, 1, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1, 1e-12);
  EXPECT_NEAR(fit.max_relative_residual, 0, 1e-12);
}

TEST(Mvp, SizeFormulas) {
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(10), 4u);
  EXPECT_EQ(ceil_log2(16), 4u);
  EXPECT_EQ(ceil_log2(313), 9u);
  // 3277 buckets of 64 + 6 + 4 bits, plus the tree.
  EXPECT_EQ(small_sketch_bits(32768, 64, 10), 3277u * 74u + 127u);
  EXPECT_EQ(big_sketch_bits(32768, 64, 10), 3277u * 74u + 127u + 3277u * 3u * 6u + 4416u + 4800u);
  const auto row = mvp_row(32768, 1024, 313);
  EXPECT_EQ(row.mvp_small, static_cast<double>(row.small_bits) * 1.075 / 32768);
  ASSERT_TRUE(row.reference.has_value());
  EXPECT_NEAR(row.mvp_small, row.reference->mvp_small, 0.02 * row.reference->mvp_small);
  EXPECT_FALSE(mvp_row(32768, 100, 10).reference.has_value());
}

TEST(TreeChanges, MatchesDirectComparison) {
  const auto result = tree_changes(16, 2000);
  std::vector<std::uint64_t> direct;
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    const auto a = HuffmanCodebook::build(RankModel((n - 1) / 16.0));
    const auto b = HuffmanCodebook::build(RankModel(n / 16.0));
    if (!trees_equal(a, b)) direct.push_back(n);
  }
  EXPECT_EQ(result.change_points, direct);
  std::uint64_t sum = 0;
  for (const auto& o : result.per_octave) sum += o.changes;
  EXPECT_EQ(sum, result.total());
  EXPECT_GT(result.total(), 0u);
}

TEST(UpdateCosts, Checkpoints) {
  const auto rows = update_costs(SketchParams::make(256, 16), 5000, 1);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().n, 1u);
  EXPECT_EQ(rows.back().n, 5000u);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) EXPECT_EQ(rows[i].n, rows[i - 1].n * 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].ordinary_updates, rows[i - 1].ordinary_updates);
    EXPECT_GE(rows[i].rebuilds, rows[i - 1].rebuilds);
  }
}

TEST(Accuracy, OracleAgreementAndEmptyStream) {
  const std::uint64_t ns[] = {0, 10000, 1000};
  const auto rows = accuracy(SketchParams::make(1024, 32), ns, 10, 1);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].n, 0u);
  EXPECT_EQ(rows[0].relative_standard_error, 0.0);
  for (const auto& r : rows) EXPECT_EQ(r.oracle_mismatches, 0u);
  EXPECT_LT(rows[2].relative_standard_error, 0.15);
}

}  // namespace
}  // namespace hbs::experiments
