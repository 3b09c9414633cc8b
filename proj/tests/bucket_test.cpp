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

#include "hbs/bucket.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hbs/errors.hpp"
#include "hbs/huffman.hpp"
#include "hbs/rank_model.hpp"

namespace hbs {
namespace {

std::vector<RankValue> random_ranks(std::mt19937_64& rng, std::uint32_t b, double lambda) {
  const RankModel model(lambda);
  std::vector<RankValue> out(b);
  for (auto& r : out) r = model.sample((static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53);
  return out;
}

std::pair<RankValue, std::uint32_t> min_and_count(const std::vector<RankValue>& v) {
  const RankValue lo = *std::min_element(v.begin(), v.end());
  return {lo, static_cast<std::uint32_t>(std::count(v.begin(), v.end(), lo))};
}

TEST(Bucket, FreshBucket) {
  const auto book = HuffmanCodebook::build(RankModel(0));
  const Bucket b = Bucket::fresh(10, book);
  EXPECT_EQ(b.registers(), 10u);
  EXPECT_EQ(b.r_min(), 0);
  EXPECT_EQ(b.c_min(), 10u);
  EXPECT_EQ(b.bits().codeword_bits, 10u);
  EXPECT_EQ(b.bits().unary_bits, 20u);
  EXPECT_EQ(b.bits().metadata_bits, 6u + 4u);
  for (std::uint32_t j = 0; j < 10; ++j) EXPECT_EQ(b.peek(j, book), 0);
}

TEST(Bucket, MetadataBits) {
  EXPECT_EQ(bucket_metadata_bits(1), 6u);
  EXPECT_EQ(bucket_metadata_bits(2), 7u);
  EXPECT_EQ(bucket_metadata_bits(10), 10u);
  EXPECT_EQ(bucket_metadata_bits(144), 14u);
  EXPECT_EQ(bucket_metadata_bits(313), 15u);
}

TEST(Bucket, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(1);
  for (double lambda : {0.5, 100.0, 32768.0}) {
    const auto book = HuffmanCodebook::build(RankModel(lambda));
    for (std::uint32_t b : {1u, 2u, 7u, 64u, 313u}) {
      const auto ranks = random_ranks(rng, b, lambda);
      const Bucket bucket = Bucket::encode(ranks, book);
      EXPECT_EQ(bucket.decode_all(book), ranks);
      const auto [lo, count] = min_and_count(ranks);
      EXPECT_EQ(bucket.r_min(), lo);
      EXPECT_EQ(bucket.c_min(), count);
      std::size_t total = 0;
      for (auto r : ranks) total += book.lengths()[r];
      EXPECT_EQ(bucket.bits().codeword_bits, total);
      EXPECT_EQ(bucket.bits().unary_bits, total + b);
      EXPECT_NO_THROW(bucket.check_consistency(book));
    }
  }
}

// Every slot, every rank, against a plain array.
TEST(Bucket, ExhaustivePokePeekB8) {
  std::mt19937_64 rng(8);
  for (bool skip : {false, true}) {
    const auto book = HuffmanCodebook::build(RankModel(20));
    auto model = random_ranks(rng, 8, 20);
    Bucket bucket = Bucket::encode(model, book, skip);
    for (std::uint32_t slot = 0; slot < 8; ++slot) {
      for (int r = 0; r <= 63; ++r) {
        bucket.poke(slot, static_cast<RankValue>(r), book);
        model[slot] = static_cast<RankValue>(r);
        for (std::uint32_t j = 0; j < 8; ++j) ASSERT_EQ(bucket.peek(j, book), model[j]);
        ASSERT_EQ(bucket.decode_all(book), model);
      }
    }
    bucket.recompute_min(book);
    EXPECT_NO_THROW(bucket.check_consistency(book));
    EXPECT_EQ(bucket, Bucket::encode(model, book, skip));
  }
}

TEST(Bucket, RandomPokeFuzzWithMinTracking) {
  std::mt19937_64 rng(3);
  const auto book = HuffmanCodebook::build(RankModel(300));
  for (std::uint32_t b : {5u, 64u, 200u}) {
    for (bool skip : {false, true}) {
      auto model = random_ranks(rng, b, 300);
      Bucket bucket = Bucket::encode(model, book, skip);
      for (int step = 0; step < 3000; ++step) {
        const auto slot = static_cast<std::uint32_t>(rng() % b);
        const auto old = model[slot];
        if (old >= 63) continue;
        const auto r = static_cast<RankValue>(old + 1 + rng() % (63 - old));
        bucket.poke(slot, r, book);
        model[slot] = r;
        if (old == bucket.r_min()) (void)bucket.on_min_register_raised(book);
        const auto [lo, count] = min_and_count(model);
        ASSERT_EQ(bucket.r_min(), lo);
        ASSERT_EQ(bucket.c_min(), count);
        ASSERT_EQ(bucket.peek(slot, book), r);
      }
      EXPECT_EQ(bucket.decode_all(book), model);
      EXPECT_NO_THROW(bucket.check_consistency(book));
    }
  }
}

TEST(Bucket, SkipIndexAgreesWithLinearScan) {
  std::mt19937_64 rng(4);
  const auto book = HuffmanCodebook::build(RankModel(4096));
  const auto ranks = random_ranks(rng, 313, 4096);
  Bucket plain = Bucket::encode(ranks, book, false);
  Bucket indexed = Bucket::encode(ranks, book, true);
  EXPECT_TRUE(indexed.has_skip_index());
  EXPECT_FALSE(plain.has_skip_index());
  for (int step = 0; step < 2000; ++step) {
    const auto slot = static_cast<std::uint32_t>(rng() % 313);
    const auto r = static_cast<RankValue>(rng() % 64);
    plain.poke(slot, r, book);
    indexed.poke(slot, r, book);
    const auto probe = static_cast<std::uint32_t>(rng() % 313);
    ASSERT_EQ(plain.peek(probe, book), indexed.peek(probe, book));
  }
  EXPECT_EQ(plain.decode_all(book), indexed.decode_all(book));
  EXPECT_EQ(plain.codewords(), indexed.codewords());
}

TEST(Bucket, ReencodeKeepsRegisters) {
  std::mt19937_64 rng(6);
  const auto small = HuffmanCodebook::build(RankModel(2));
  const auto big = HuffmanCodebook::build(RankModel(1 << 20));
  const auto ranks = random_ranks(rng, 64, 2);
  Bucket bucket = Bucket::encode(ranks, small);
  const auto r_min = bucket.r_min();
  const auto c_min = bucket.c_min();
  bucket.reencode(small, big);
  EXPECT_EQ(bucket.decode_all(big), ranks);
  EXPECT_EQ(bucket.r_min(), r_min);
  EXPECT_EQ(bucket.c_min(), c_min);
  EXPECT_NO_THROW(bucket.check_consistency(big));
  const Bucket copy = bucket;
  bucket.reencode(big, big);
  EXPECT_EQ(bucket, copy);
}

TEST(Bucket, OutOfRangeSlot) {
  const auto book = HuffmanCodebook::build(RankModel(1));
  Bucket b = Bucket::fresh(4, book);
  EXPECT_THROW((void)b.peek(4, book), DomainError);
  EXPECT_THROW(b.poke(4, 1, book), DomainError);
}

TEST(Bucket, FromPartsValidates) {
  const auto book = HuffmanCodebook::build(RankModel(100));
  const std::vector<RankValue> ranks{3, 7, 7, 9};
  const Bucket good = Bucket::encode(ranks, book);
  EXPECT_NO_THROW((void)Bucket::from_parts(good.codewords(), good.unary(), 3, 1, 4, book));
  EXPECT_THROW((void)Bucket::from_parts(good.codewords(), good.unary(), 7, 1, 4, book), CorruptionError);
  EXPECT_THROW((void)Bucket::from_parts(good.codewords(), good.unary(), 3, 2, 4, book), CorruptionError);
  EXPECT_THROW((void)Bucket::from_parts(good.codewords(), good.unary(), 3, 1, 5, book), CorruptionError);

  BitVector bad_unary = good.unary();
  bad_unary.write(0, bad_unary.test(0) ? 0 : 1, 1);
  EXPECT_THROW((void)Bucket::from_parts(good.codewords(), bad_unary, 3, 1, 4, book), CorruptionError);

  BitVector extra = good.codewords();
  extra.append(0, 1);
  EXPECT_THROW((void)Bucket::from_parts(extra, good.unary(), 3, 1, 4, book), CorruptionError);
}

}  // namespace
}  // namespace hbs
