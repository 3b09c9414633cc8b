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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hbs/bit_vector.hpp"
#include "hbs/hashing.hpp"
#include "hbs/huffman.hpp"

namespace hbs {

struct BucketBits {
  std::size_t codeword_bits = 0;  // L, the sum of codeword lengths
  std::size_t unary_bits = 0;     // L + B
  std::size_t metadata_bits = 0;  // r_min (6 bits) + c_min (ceil(log2 B) bits)

  friend bool operator==(const BucketBits&, const BucketBits&) = default;
};

// Bits needed for r_min and c_min of a bucket with B registers.
[[nodiscard]] std::size_t bucket_metadata_bits(std::uint32_t registers) noexcept;

// B registers stored as concatenated Huffman codewords, with a unary array
// recording each codeword length as 1^len 0, and the bucket minimum rank with
// its multiplicity.
//
// The bucket does not own a codebook; every operation takes the book the
// bucket is currently encoded with. r_min/c_min are maintained by the insert
// flow through on_min_register_raised(); poke() leaves them alone.
//
// The optional skip index records the unary and codeword offsets of
// ceil(log2 B) - 1 equally spaced registers so peek only scans from the
// nearest one.
class Bucket {
 public:
  Bucket() = default;

  static Bucket fresh(std::uint32_t registers, const HuffmanCodebook& book, bool skip_index = false);
  static Bucket encode(std::span<const RankValue> ranks, const HuffmanCodebook& book, bool skip_index = false);
  // Assembles a bucket from stored parts and validates it against the book.
  // Throws CorruptionError if the parts are inconsistent.
  static Bucket from_parts(BitVector codewords, BitVector unary, RankValue r_min, std::uint32_t c_min,
                           std::uint32_t registers, const HuffmanCodebook& book, bool skip_index = false);

  [[nodiscard]] std::uint32_t registers() const noexcept { return registers_; }
  [[nodiscard]] RankValue r_min() const noexcept { return r_min_; }
  [[nodiscard]] std::uint32_t c_min() const noexcept { return c_min_; }
  [[nodiscard]] bool has_skip_index() const noexcept { return skip_enabled_; }

  [[nodiscard]] RankValue peek(std::uint32_t slot, const HuffmanCodebook& book) const;
  void poke(std::uint32_t slot, RankValue r, const HuffmanCodebook& book);

  void recompute_min(const HuffmanCodebook& book);
  // Called after a register equal to r_min was raised. Returns true if the
  // count dropped to zero and the minimum was recomputed.
  bool on_min_register_raised(const HuffmanCodebook& book);

  void reencode(const HuffmanCodebook& old_book, const HuffmanCodebook& new_book);

  void decode_all(const HuffmanCodebook& book, std::span<RankValue> out) const;
  [[nodiscard]] std::vector<RankValue> decode_all(const HuffmanCodebook& book) const;

  // Throws CorruptionError unless every invariant holds under `book`.
  void check_consistency(const HuffmanCodebook& book) const;

  [[nodiscard]] BucketBits bits() const noexcept;
  [[nodiscard]] const BitVector& codewords() const noexcept { return codewords_; }
  [[nodiscard]] const BitVector& unary() const noexcept { return unary_; }

  friend bool operator==(const Bucket&, const Bucket&) = default;

 private:
  struct Locator {
    std::uint32_t slot = 0;
    std::size_t unary_pos = 0;
    std::size_t code_pos = 0;

    friend bool operator==(const Locator&, const Locator&) = default;
  };

  [[nodiscard]] Locator locate(std::uint32_t slot) const;
  void set_skip_index(bool enabled);
  void rebuild_skip_index();

  BitVector codewords_;
  BitVector unary_;
  RankValue r_min_ = 0;
  std::uint32_t c_min_ = 0;
  std::uint32_t registers_ = 0;
  bool skip_enabled_ = false;
  std::vector<Locator> skip_;
};

}  // namespace hbs
