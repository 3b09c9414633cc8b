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

#include "hbs/huffman.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hbs/bit_vector.hpp"
#include "hbs/errors.hpp"
#include "hbs/rank_model.hpp"
#include "oracles.hpp"

namespace hbs {
namespace {

std::vector<double> lambda_grid() {
  std::vector<double> out{0.0, 1e-6, 0.01, 0.3, 1.0, 1.3863, 2.0};
  for (int i = 0; i <= 160; ++i) out.push_back(std::ldexp(1.0, -2) * std::pow(2.0, i / 4.0));
  return out;
}

std::vector<oracle::Code> codes_of(const HuffmanCodebook& book) {
  std::vector<oracle::Code> out;
  for (std::size_t r = 0; r < book.alphabet_size(); ++r) {
    out.push_back({book.code(static_cast<RankValue>(r)).bits, book.code(static_cast<RankValue>(r)).length});
  }
  return out;
}

TEST(Huffman, DegenerateModelGivesComb) {
  const auto book = HuffmanCodebook::build(RankModel(0));
  for (int r = 0; r < 63; ++r) EXPECT_EQ(book.lengths()[r], r + 1) << r;
  EXPECT_EQ(book.lengths()[63], 63);
  EXPECT_EQ(book.encode(0).length, 1u);
  EXPECT_EQ(book.kraft_sum(), 1.0);
}

TEST(Huffman, UniformFourSymbols) {
  const double pmf[] = {0.25, 0.25, 0.25, 0.25};
  const auto book = HuffmanCodebook::build(pmf);
  ASSERT_EQ(book.alphabet_size(), 4u);
  for (auto len : book.lengths()) EXPECT_EQ(len, 2);
  EXPECT_EQ(book.code(0).bits, 0u);
  EXPECT_EQ(book.code(3).bits, 3u);
}

TEST(Huffman, TiesSendLowerSymbolsDeeper) {
  const double pmf[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto book = HuffmanCodebook::build(pmf);
  EXPECT_EQ(book.lengths()[0], 2);
  EXPECT_EQ(book.lengths()[1], 2);
  EXPECT_EQ(book.lengths()[2], 1);
}

TEST(Huffman, Deterministic) {
  for (double lambda : {0.0, 5.0, 32768.0}) {
    const auto a = HuffmanCodebook::build(RankModel(lambda));
    const auto b = HuffmanCodebook::build(RankModel(lambda));
    EXPECT_TRUE(trees_equal(a, b));
    EXPECT_EQ(a.serialize_tree().structure, b.serialize_tree().structure);
  }
}

TEST(Huffman, CodebookPropertiesOverGrid) {
  for (double lambda : lambda_grid()) {
    const RankModel model(lambda);
    const auto book = HuffmanCodebook::build(model);
    const auto pmf = model.pmf();
    ASSERT_EQ(book.kraft_sum(), 1.0) << lambda;
    ASSERT_TRUE(oracle::prefix_free(codes_of(book))) << lambda;

    const double expected = book.expected_length(pmf);
    EXPECT_LE(expected, model.entropy_bits() + 1) << lambda;

    std::vector<long double> weights(pmf.begin(), pmf.end());
    EXPECT_NEAR(expected, static_cast<double>(oracle::optimal_expected_length(weights)), 1e-9) << lambda;

    const auto argmax = std::max_element(pmf.begin(), pmf.end()) - pmf.begin();
    EXPECT_EQ(book.lengths()[argmax], book.min_length()) << lambda;
  }
}

TEST(Huffman, LengthBoundAboveSmallLoads) {
  for (double lambda : lambda_grid()) {
    if (lambda <= 2 * std::numbers::ln2) continue;
    const RankModel model(lambda);
    const auto book = HuffmanCodebook::build(model);
    for (int r = 0; r < 64; ++r) {
      const double p = model.pmf_at(r);
      if (p > 0) EXPECT_LE(book.lengths()[r], -1.44041 * std::log2(p)) << lambda << " " << r;
    }
  }
}

TEST(Huffman, TwoSymbolStreamDecodes) {
  const auto book = HuffmanCodebook::build(RankModel(1000));
  BitVector bits;
  bits.append(book.code(5).bits, book.code(5).length);
  bits.append(book.code(7).bits, book.code(7).length);
  const auto first = book.decode(bits, 0, bits.size());
  EXPECT_EQ(first.symbol, 5);
  const auto second = book.decode(bits, first.length, bits.size());
  EXPECT_EQ(second.symbol, 7);
  EXPECT_EQ(first.length + second.length, bits.size());
}

TEST(Huffman, EmptyStreamIsCorrupt) {
  const auto book = HuffmanCodebook::build(RankModel(1000));
  BitVector bits;
  EXPECT_THROW((void)book.decode(bits, 0, 0), CorruptionError);
  EXPECT_THROW((void)book.decode_tree_walk(bits, 0, 0), CorruptionError);
}

TEST(Huffman, TruncatedCodewordIsCorrupt) {
  const auto book = HuffmanCodebook::build(RankModel(0));
  BitVector bits;
  bits.append(book.code(40).bits, book.code(40).length);
  EXPECT_THROW((void)book.decode(bits, 0, bits.size() - 1), CorruptionError);
}

TEST(Huffman, RandomSymbolsRoundTrip) {
  std::mt19937_64 rng(2);
  for (double lambda : {0.0, 0.5, 100.0, 32768.0, 1e12}) {
    const auto book = HuffmanCodebook::build(RankModel(lambda));
    std::vector<RankValue> symbols(10000);
    for (auto& s : symbols) s = static_cast<RankValue>(rng() % 64);
    BitVector bits;
    for (auto s : symbols) bits.append(book.code(s).bits, book.code(s).length);
    std::size_t pos = 0, pos_walk = 0;
    for (auto s : symbols) {
      const auto d = book.decode(bits, pos, bits.size());
      const auto w = book.decode_tree_walk(bits, pos_walk, bits.size());
      ASSERT_EQ(d.symbol, s);
      ASSERT_EQ(w.symbol, s);
      ASSERT_EQ(d.length, w.length);
      pos += d.length;
      pos_walk += w.length;
    }
    EXPECT_EQ(pos, bits.size());
  }
}

TEST(Huffman, EncodeRejectsOutOfAlphabet) {
  const double pmf[] = {0.5, 0.5};
  const auto book = HuffmanCodebook::build(pmf);
  EXPECT_THROW((void)book.encode(2), DomainError);
}

TEST(Huffman, InvalidPmf) {
  const double short_mass[] = {0.5, 0.4};
  const double negative[] = {1.5, -0.5};
  EXPECT_THROW((void)HuffmanCodebook::build(short_mass), ModelError);
  EXPECT_THROW((void)HuffmanCodebook::build(negative), ModelError);
  EXPECT_THROW((void)HuffmanCodebook::build(std::span<const double>{}), ModelError);
}

TEST(Huffman, FromLengthsChecksKraft) {
  const std::uint8_t ok[] = {1, 2, 2};
  const std::uint8_t over[] = {1, 1, 2};
  const std::uint8_t under[] = {2, 2, 2};
  EXPECT_NO_THROW((void)HuffmanCodebook::from_lengths(ok));
  EXPECT_THROW((void)HuffmanCodebook::from_lengths(over), CorruptionError);
  EXPECT_THROW((void)HuffmanCodebook::from_lengths(under), CorruptionError);
}

TEST(TreeSerialization, SixtyFourLeavesUse127Bits) {
  for (double lambda : {0.0, 1.0, 32768.0}) {
    const auto book = HuffmanCodebook::build(RankModel(lambda));
    const TreeEncoding enc = book.serialize_tree();
    EXPECT_EQ(enc.structure.size(), 127u);
    EXPECT_EQ(enc.leaf_symbols.size(), 64u);
    const auto back = HuffmanCodebook::deserialize_tree(enc);
    EXPECT_TRUE(trees_equal(book, back));
  }
}

TEST(TreeSerialization, RoundTripOverGrid) {
  for (double lambda : lambda_grid()) {
    const auto book = HuffmanCodebook::build(RankModel(lambda));
    EXPECT_TRUE(trees_equal(HuffmanCodebook::deserialize_tree(book.serialize_tree()), book)) << lambda;
  }
}

TEST(TreeSerialization, RejectsMalformed) {
  const auto book = HuffmanCodebook::build(RankModel(32768));
  const TreeEncoding good = book.serialize_tree();

  TreeEncoding truncated = good;
  truncated.structure.resize(126);
  EXPECT_THROW((void)HuffmanCodebook::deserialize_tree(truncated), CorruptionError);

  int rejected = 0;
  for (std::size_t i = 0; i < good.structure.size(); ++i) {
    TreeEncoding flipped = good;
    flipped.structure.write(i, good.structure.test(i) ? 0 : 1, 1);
    try {
      (void)HuffmanCodebook::deserialize_tree(flipped);
    } catch (const CorruptionError&) {
      ++rejected;
    }
  }
  EXPECT_EQ(rejected, 127);

  TreeEncoding duplicate = good;
  duplicate.leaf_symbols[1] = duplicate.leaf_symbols[0];
  EXPECT_THROW((void)HuffmanCodebook::deserialize_tree(duplicate), CorruptionError);

  // Two leaves at the same depth out of symbol order.
  TreeEncoding swapped = good;
  const auto lengths = book.lengths();
  bool found = false;
  for (std::size_t i = 0; i + 1 < swapped.leaf_symbols.size() && !found; ++i) {
    if (lengths[swapped.leaf_symbols[i]] == lengths[swapped.leaf_symbols[i + 1]]) {
      std::swap(swapped.leaf_symbols[i], swapped.leaf_symbols[i + 1]);
      found = true;
    }
  }
  ASSERT_TRUE(found);
  EXPECT_THROW((void)HuffmanCodebook::deserialize_tree(swapped), CorruptionError);
}

TEST(TreesEqual, DetectsModeShift) {
  const auto a = HuffmanCodebook::build(RankModel(1000.3));
  EXPECT_TRUE(trees_equal(a, a));
  EXPECT_TRUE(trees_equal(a, HuffmanCodebook::build(RankModel(1000.3 * (1 + 1e-9)))));
  EXPECT_FALSE(
      trees_equal(HuffmanCodebook::build(RankModel(1 << 10)), HuffmanCodebook::build(RankModel(1 << 20))));
}

}  // namespace
}  // namespace hbs
