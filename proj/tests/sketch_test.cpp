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

#include "hbs/sketch.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hbs/errors.hpp"
#include "hbs/hll.hpp"
#include "hbs/rank_model.hpp"
#include "oracles.hpp"

namespace hbs {
namespace {

struct Fed {
  HbsSketch hbs;
  HllSketch hll;
};

Fed feed(const SketchParams& p, std::uint64_t n, std::uint64_t seed, const HbsOptions& options = {},
         std::uint64_t offset = 0) {
  Fed f{HbsSketch(p, options), HllSketch(p)};
  for (std::uint64_t i = offset; i < offset + n; ++i) {
    const auto h = seeded_hash(i, seed);
    f.hbs.insert(h);
    f.hll.insert(h);
  }
  return f;
}

TEST(RebuildTrigger, Rule) {
  EXPECT_TRUE(rebuild_trigger(0.7, 0));
  EXPECT_FALSE(rebuild_trigger(0, 0));
  EXPECT_FALSE(rebuild_trigger(1500, 1000));
  EXPECT_TRUE(rebuild_trigger(2000, 1000));
  EXPECT_FALSE(rebuild_trigger(1.2, 0.6));
  EXPECT_TRUE(rebuild_trigger(1.6, 0.6));
}

TEST(HbsSketch, FreshState) {
  const auto p = SketchParams::make(4096, 64);
  const HbsSketch s(p);
  EXPECT_EQ(s.estimate(), 0.0);
  EXPECT_EQ(s.n_hat_old(), 0.0);
  EXPECT_EQ(s.to_hll(), HllSketch(p));
  EXPECT_EQ(s.codebook().lengths()[0], 1);
  EXPECT_EQ(s.codebook().lengths()[62], 63);
  EXPECT_NO_THROW(s.check_invariants());
}

TEST(HbsSketch, SingleInsertUpdatesOneRegister) {
  const auto p = SketchParams::make(256, 16);
  HbsSketch s(p);
  // Rank 1: bit 47 set.
  const std::uint64_t h = (std::uint64_t{5} << 32) | (std::uint64_t{1} << 47);
  const SplitHash split = split_hash(h, p);
  ASSERT_EQ(split.rank, 1);
  s.insert(h);
  EXPECT_EQ(s.peek(split.address), 1);
  EXPECT_EQ(s.buckets()[split.address.bucket].c_min(), 15u);
  EXPECT_GT(s.estimate(), 0.0);
  EXPECT_EQ(s.counters().register_writes, 1u);
  EXPECT_EQ(s.counters().rebuilds, 1u);
  s.check_invariants();
}

TEST(HbsSketch, DuplicateInsertIsIdempotent) {
  const auto p = SketchParams::make(1024, 32);
  auto f = feed(p, 2000, 1);
  const HbsSketch before = f.hbs;
  for (std::uint64_t i = 0; i < 2000; ++i) f.hbs.insert(seeded_hash(i, 1));
  EXPECT_EQ(f.hbs.to_hll(), before.to_hll());
  EXPECT_EQ(f.hbs.estimate(), before.estimate());
  EXPECT_EQ(f.hbs.codebook(), before.codebook());
  EXPECT_EQ(f.hbs.counters().register_writes, before.counters().register_writes);
}

TEST(HbsSketch, LosslessAgainstOracle) {
  for (auto [m, b] : {std::pair<std::uint64_t, std::uint32_t>{4096, 64}, {256, 10}, {1000, 313}, {64, 64}, {5, 1}}) {
    for (bool skip : {false, true}) {
      const auto p = SketchParams::make(m, b);
      auto f = feed(p, 100000, m + b, HbsOptions{0, skip});
      ASSERT_EQ(f.hbs.to_hll(), f.hll) << m << "/" << b;
      EXPECT_EQ(f.hbs.estimate(), f.hll.estimate());
      f.hbs.check_invariants();
      oracle::Registers ref(m, b);
      for (std::uint64_t i = 0; i < 100000; ++i) ref.add(seeded_hash(i, m + b));
      EXPECT_TRUE(std::equal(ref.r.begin(), ref.r.end(), f.hbs.to_hll().registers().begin()));
    }
  }
}

TEST(HbsSketch, EstimateTracksEveryInsert) {
  const auto p = SketchParams::make(512, 32);
  HbsSketch s(p);
  HllSketch h(p);
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const auto x = seeded_hash(i, 9);
    s.insert(x);
    h.insert(x);
    if (i % 97 == 0) {
      ASSERT_EQ(s.estimate(), h.estimate());
      ASSERT_EQ(s.estimate(), s.estimator().corrected_estimate());
    }
  }
}

TEST(HbsSketch, RebuildCountLogarithmic) {
  const auto p = SketchParams::make(4096, 64);
  auto f = feed(p, 1000000, 3);
  EXPECT_LE(f.hbs.counters().rebuilds, 2 * std::log2(1e6) + 4);
  EXPECT_LE(f.hbs.counters().min_recomputes, p.register_count() * 64);
  EXPECT_EQ(f.hbs.to_hll(), f.hll);
  const auto& c = f.hbs.counters();
  EXPECT_LE(c.register_writes, c.ordinary_updates);
  EXPECT_LE(c.tree_changes, c.rebuilds);
}

TEST(HbsSketch, CodebookFollowsLoad) {
  const auto p = SketchParams::make(1024, 32);
  auto f = feed(p, 1 << 20, 5);
  const double lambda = f.hbs.n_hat_old() / static_cast<double>(p.register_count());
  EXPECT_EQ(f.hbs.codebook(), HuffmanCodebook::build(RankModel(lambda)));
  EXPECT_GE(f.hbs.estimate(), f.hbs.n_hat_old());
  EXPECT_LT(f.hbs.estimate(), 2 * f.hbs.n_hat_old());
}

TEST(HbsSketch, MergeMatchesWholeStream) {
  const auto p = SketchParams::make(4096, 64);
  // Disjoint halves.
  auto left = feed(p, 50000, 11, {}, 0);
  auto right = feed(p, 50000, 11, {}, 50000);
  auto whole = feed(p, 100000, 11);
  const auto merged = HbsSketch::merge(left.hbs, right.hbs);
  EXPECT_EQ(merged.to_hll(), whole.hll);
  EXPECT_EQ(merged.estimate(), whole.hbs.estimate());
  merged.check_invariants();
}

TEST(HbsSketch, MergeAlgebra) {
  const auto p = SketchParams::make(512, 16);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = feed(p, rng() % 20000, rng()).hbs;
    const auto b = feed(p, rng() % 20000, rng()).hbs;
    const auto c = feed(p, rng() % 20000, rng()).hbs;
    EXPECT_EQ(HbsSketch::merge(a, b).to_hll(), HbsSketch::merge(b, a).to_hll());
    EXPECT_EQ(HbsSketch::merge(HbsSketch::merge(a, b), c).to_hll(),
              HbsSketch::merge(a, HbsSketch::merge(b, c)).to_hll());
    EXPECT_EQ(HbsSketch::merge(a, a).to_hll(), a.to_hll());
    EXPECT_EQ(HbsSketch::merge(a, HbsSketch(p)).to_hll(), a.to_hll());
    HbsSketch::merge(a, b).check_invariants();
  }
}

TEST(HbsSketch, MergeReusesBookWithoutDoubling) {
  const auto p = SketchParams::make(1024, 32);
  const auto big = feed(p, 100000, 1).hbs;
  const auto small = feed(p, 100, 2).hbs;
  const auto merged = HbsSketch::merge(big, small);
  EXPECT_EQ(merged.codebook(), big.codebook());
  EXPECT_EQ(merged.n_hat_old(), big.n_hat_old());
}

TEST(HbsSketch, MergeRejectsParamMismatch) {
  EXPECT_THROW((void)HbsSketch::merge(HbsSketch(SketchParams::make(1024, 32)), HbsSketch(SketchParams::make(1024, 16))),
               ParamMismatchError);
}

TEST(HbsSketch, InsertAfterMergeStaysLossless) {
  const auto p = SketchParams::make(1024, 32);
  auto a = feed(p, 30000, 21);
  auto b = feed(p, 30000, 22);
  auto merged = HbsSketch::merge(a.hbs, b.hbs);
  auto oracle = HllSketch::merge(a.hll, b.hll);
  for (std::uint64_t i = 0; i < 200000; ++i) {
    const auto h = seeded_hash(i, 23);
    merged.insert(h);
    oracle.insert(h);
  }
  EXPECT_EQ(merged.to_hll(), oracle);
  merged.check_invariants();
}

TEST(HbsSketch, HllRoundTrips) {
  std::mt19937_64 rng(31);
  const auto p = SketchParams::make(2048, 64);
  for (int t = 0; t < 20; ++t) {
    std::vector<RankValue> regs(p.register_count());
    const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 30)) * 0.7;
    for (auto& r : regs) r = sample_register(lambda, (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53);
    const auto hll = HllSketch::from_registers(p, regs);
    const auto hbs = HbsSketch::from_hll(hll);
    EXPECT_EQ(hbs.to_hll(), hll);
    EXPECT_EQ(hbs.estimate(), hll.estimate());
    hbs.check_invariants();
    EXPECT_EQ(HbsSketch::from_hll(hbs.to_hll()).to_hll(), hll);
  }
}

TEST(HbsSketch, FromHllWithHint) {
  const auto p = SketchParams::make(1024, 32);
  const auto f = feed(p, 50000, 41);
  const auto hint = std::make_shared<const HuffmanCodebook>(HuffmanCodebook::build(RankModel(0)));
  const auto hbs = HbsSketch::from_hll(f.hll, hint);
  EXPECT_EQ(hbs.codebook(), *hint);
  EXPECT_EQ(hbs.to_hll(), f.hll);
  const double narrow[] = {0.5, 0.5};
  EXPECT_THROW((void)HbsSketch::from_hll(f.hll, std::make_shared<const HuffmanCodebook>(HuffmanCodebook::build(narrow))),
               ConfigError);
}

TEST(HbsSketch, CompressedSizeBelowRawRegisters) {
  const std::uint64_t m = 1 << 15;
  const auto p = SketchParams::make(m, 64);
  std::mt19937_64 rng(43);
  std::vector<RankValue> regs(p.register_count());
  for (auto& r : regs) r = sample_register(32768, (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53);
  const auto hbs = HbsSketch::from_hll(HllSketch::from_registers(p, regs));
  const auto stats = hbs.stats();
  EXPECT_LT(stats.codeword_bits, 6 * m);
  EXPECT_LT(static_cast<double>(stats.codeword_bits) / m, 2.83196 + 0.1);
  EXPECT_EQ(stats.registers, p.register_count());
  EXPECT_EQ(stats.unary_bits, stats.codeword_bits + p.register_count());
  EXPECT_EQ(stats.tree_bits, 127u);
}

TEST(HbsSketch, BudgetOverflowGoesToSideTable) {
  const auto p = SketchParams::make(4096, 64);
  auto tight = feed(p, 200000, 51, HbsOptions{100, false});
  auto loose = feed(p, 200000, 51, HbsOptions{100000, false});
  EXPECT_EQ(tight.hbs.to_hll(), tight.hll);
  const auto ts = tight.hbs.stats();
  EXPECT_GT(ts.overflowed_buckets, 0u);
  EXPECT_GT(ts.side_table_bits, 0u);
  std::uint64_t counted = 0;
  for (std::uint32_t b = 0; b < p.num_buckets(); ++b) {
    const bool over = tight.hbs.buckets()[b].bits().codeword_bits > 100;
    EXPECT_EQ(tight.hbs.overflowed(b), over);
    counted += over;
  }
  EXPECT_EQ(counted, ts.overflowed_buckets);
  EXPECT_EQ(loose.hbs.stats().overflowed_buckets, 0u);
  EXPECT_EQ(loose.hbs.stats().side_table_bits, 0u);
  EXPECT_GT(loose.hbs.stats().budgeted_bits, 0u);
  EXPECT_EQ(HbsSketch(p).stats().budgeted_bits, 0u);
}

TEST(HbsSketch, BucketEstimatesSumSensibly) {
  const auto p = SketchParams::make(4096, 64);
  const auto f = feed(p, 1000000, 61);
  double sum = 0;
  for (std::uint32_t b = 0; b < p.num_buckets(); ++b) sum += f.hbs.bucket_estimate(b);
  EXPECT_NEAR(sum / 1e6, 1.0, 0.1);
  EXPECT_THROW((void)f.hbs.bucket_estimate(static_cast<std::uint32_t>(p.num_buckets())), DomainError);
}

TEST(HbsSketch, CappedMaxRank) {
  const auto p = SketchParams::make(256, 16, 48, 20);
  auto f = feed(p, 50000, 71);
  EXPECT_EQ(f.hbs.codebook().alphabet_size(), 21u);
  EXPECT_EQ(f.hbs.to_hll(), f.hll);
}

}  // namespace
}  // namespace hbs
