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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hbs/bit_vector.hpp"
#include "hbs/hashing.hpp"

namespace hbs {

class RankModel;

struct Codeword {
  std::uint64_t bits = 0;  // right-aligned, first bit most significant
  unsigned length = 0;

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

struct DecodedSymbol {
  RankValue symbol = 0;
  unsigned length = 0;
};

// Preorder shape of a full binary tree (1 = internal node, 0 = leaf) plus the
// symbols carried by the leaves in that order. A 64-leaf tree has exactly 127
// structure bits.
struct TreeEncoding {
  BitVector structure;
  std::vector<RankValue> leaf_symbols;

  friend bool operator==(const TreeEncoding&, const TreeEncoding&) = default;
};

// Canonical Huffman code over a small alphabet (at most 64 symbols).
//
// Construction uses the two-queue method over leaves sorted by (weight,
// symbol). When the front of both queues weigh the same, the leaf wins, so
// ties always go to the node created earlier. Symbols of probability zero get
// infinitesimal weights below every positive weight, geometrically spaced so
// that they collapse into a comb: left of the mode the lowest symbol is the
// rarest, right of the mode the highest one is. Codes are then reassigned
// canonically from the lengths, so two books with equal lengths are identical.
class HuffmanCodebook {
 public:
  // Degenerate one-symbol book; used only as a placeholder before assignment.
  HuffmanCodebook();

  static HuffmanCodebook build(const RankModel& model);
  // Throws ModelError unless every entry is in [0, 1] and the sum is 1 within 1e-9.
  static HuffmanCodebook build(std::span<const double> pmf);
  // Throws CorruptionError unless the lengths satisfy Kraft equality.
  static HuffmanCodebook from_lengths(std::span<const std::uint8_t> lengths);

  [[nodiscard]] std::size_t alphabet_size() const noexcept { return lengths_.size(); }
  [[nodiscard]] std::span<const std::uint8_t> lengths() const noexcept { return lengths_; }
  [[nodiscard]] unsigned min_length() const noexcept { return min_length_; }
  [[nodiscard]] unsigned max_length() const noexcept { return max_length_; }

  // Unchecked: r must be below alphabet_size().
  [[nodiscard]] const Codeword& code(RankValue r) const noexcept { return codes_[r]; }
  // Throws DomainError for symbols outside the alphabet.
  [[nodiscard]] const Codeword& encode(RankValue r) const;

  // Decodes one codeword from bits[pos, end). Throws CorruptionError if no
  // codeword matches before `end`.
  [[nodiscard]] DecodedSymbol decode(const BitVector& bits, std::size_t pos, std::size_t end) const;
  // Same contract, walking the explicit tree one bit at a time.
  [[nodiscard]] DecodedSymbol decode_tree_walk(const BitVector& bits, std::size_t pos, std::size_t end) const;

  [[nodiscard]] double expected_length(std::span<const double> pmf) const noexcept;
  // Sum of 2^-length over the alphabet.
  [[nodiscard]] double kraft_sum() const noexcept;

  [[nodiscard]] TreeEncoding serialize_tree() const;
  // Throws CorruptionError for shapes that are not full binary trees, leaf
  // lists that are not a permutation, or non-canonical leaf order.
  static HuffmanCodebook deserialize_tree(const TreeEncoding& encoding);

  friend bool operator==(const HuffmanCodebook& a, const HuffmanCodebook& b) noexcept {
    return a.lengths_ == b.lengths_;
  }

 private:
  struct Node {
    std::int32_t child[2] = {-1, -1};
    std::int32_t symbol = -1;
  };
  struct LutEntry {
    RankValue symbol = 0;
    std::uint8_t length = 0;  // 0: not resolvable from the lookup prefix
  };
  static constexpr unsigned kLutBits = 8;

  explicit HuffmanCodebook(std::vector<std::uint8_t> lengths);
  void emit_preorder(std::int32_t node, TreeEncoding& out) const;

  std::vector<std::uint8_t> lengths_;
  std::vector<Codeword> codes_;
  unsigned min_length_ = 0;
  unsigned max_length_ = 0;

  // Canonical decode tables keyed by (length, index within length).
  std::array<std::uint64_t, 65> first_code_{};
  std::array<std::uint32_t, 65> count_{};
  std::array<std::uint32_t, 65> offset_{};
  std::vector<RankValue> sorted_symbols_;
  std::array<LutEntry, std::size_t{1} << kLutBits> lut_{};

  std::vector<Node> tree_;
};

// Structural equality: identical canonical lengths.
[[nodiscard]] inline bool trees_equal(const HuffmanCodebook& a, const HuffmanCodebook& b) noexcept {
  return a == b;
}

}  // namespace hbs
