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

#include <algorithm>
#include <bit>
#include <string>

#include "hbs/errors.hpp"

namespace hbs {

std::size_t bucket_metadata_bits(std::uint32_t registers) noexcept {
  const auto ceil_log2 = registers <= 1 ? 0U : static_cast<unsigned>(std::bit_width(registers - 1));
  return 6 + ceil_log2;
}

Bucket Bucket::fresh(std::uint32_t registers, const HuffmanCodebook& book, bool skip_index) {
  std::vector<RankValue> zeros(registers, 0);
  return encode(zeros, book, skip_index);
}

Bucket Bucket::encode(std::span<const RankValue> ranks, const HuffmanCodebook& book, bool skip_index) {
  Bucket b;
  b.registers_ = static_cast<std::uint32_t>(ranks.size());
  std::size_t total = 0;
  for (const RankValue r : ranks) {
    total += book.encode(r).length;
  }
  b.codewords_.reserve(total);
  b.unary_.reserve(total + ranks.size());
  for (const RankValue r : ranks) {
    const Codeword& cw = book.code(r);
    b.codewords_.append(cw.bits, cw.length);
    b.unary_.append_run(true, cw.length);
    b.unary_.append(0, 1);
  }
  b.recompute_min(book);
  b.set_skip_index(skip_index);
  return b;
}

Bucket Bucket::from_parts(BitVector codewords, BitVector unary, RankValue r_min, std::uint32_t c_min,
                          std::uint32_t registers, const HuffmanCodebook& book, bool skip_index) {
  Bucket b;
  b.codewords_ = std::move(codewords);
  b.unary_ = std::move(unary);
  b.r_min_ = r_min;
  b.c_min_ = c_min;
  b.registers_ = registers;
  b.check_consistency(book);
  b.set_skip_index(skip_index);
  return b;
}

Bucket::Locator Bucket::locate(std::uint32_t slot) const {
  Locator from;
  if (!skip_.empty()) {
    // Last sample at or before `slot`.
    auto it = std::upper_bound(skip_.begin(), skip_.end(), slot,
                               [](std::uint32_t s, const Locator& l) { return s < l.slot; });
    if (it != skip_.begin()) {
      from = *std::prev(it);
    }
  }
  const std::size_t records = slot - from.slot;
  const std::size_t unary_pos = unary_.skip_zeros(from.unary_pos, records);
  if (unary_pos > unary_.size()) {
    throw CorruptionError("unary array holds fewer than " + std::to_string(slot + 1) + " records");
  }
  const std::size_t code_pos = from.code_pos + (unary_pos - from.unary_pos) - records;
  return Locator{slot, unary_pos, code_pos};
}

RankValue Bucket::peek(std::uint32_t slot, const HuffmanCodebook& book) const {
  if (slot >= registers_) {
    throw DomainError("slot " + std::to_string(slot) + " outside bucket of " + std::to_string(registers_));
  }
  const Locator at = locate(slot);
  const std::size_t len = unary_.ones_run(at.unary_pos);
  const DecodedSymbol d = book.decode(codewords_, at.code_pos, at.code_pos + len);
  if (d.length != len) {
    throw CorruptionError("codeword length disagrees with unary record for slot " + std::to_string(slot));
  }
  return d.symbol;
}

void Bucket::poke(std::uint32_t slot, RankValue r, const HuffmanCodebook& book) {
  if (slot >= registers_) {
    throw DomainError("slot " + std::to_string(slot) + " outside bucket of " + std::to_string(registers_));
  }
  const Codeword& cw = book.encode(r);
  const Locator at = locate(slot);
  const std::size_t old_len = unary_.ones_run(at.unary_pos);
  codewords_.splice(at.code_pos, old_len, cw.bits, cw.length);
  unary_.splice(at.unary_pos, old_len, ~std::uint64_t{0}, cw.length);
  if (old_len != cw.length) {
    const auto delta = static_cast<std::ptrdiff_t>(cw.length) - static_cast<std::ptrdiff_t>(old_len);
    for (Locator& l : skip_) {
      if (l.slot > slot) {
        l.unary_pos = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(l.unary_pos) + delta);
        l.code_pos = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(l.code_pos) + delta);
      }
    }
  }
}

void Bucket::recompute_min(const HuffmanCodebook& book) {
  RankValue lo = kMaxRank;
  std::uint32_t count = 0;
  std::size_t pos = 0;
  for (std::uint32_t j = 0; j < registers_; ++j) {
    const DecodedSymbol d = book.decode(codewords_, pos, codewords_.size());
    pos += d.length;
    if (j == 0 || d.symbol < lo) {
      lo = d.symbol;
      count = 1;
    } else if (d.symbol == lo) {
      ++count;
    }
  }
  r_min_ = registers_ == 0 ? 0 : lo;
  c_min_ = count;
}

bool Bucket::on_min_register_raised(const HuffmanCodebook& book) {
  if (c_min_ > 1) {
    --c_min_;
    return false;
  }
  recompute_min(book);
  return true;
}

void Bucket::reencode(const HuffmanCodebook& old_book, const HuffmanCodebook& new_book) {
  if (old_book == new_book) {
    return;
  }
  const std::vector<RankValue> ranks = decode_all(old_book);
  const RankValue r_min = r_min_;
  const std::uint32_t c_min = c_min_;
  *this = encode(ranks, new_book, skip_enabled_);
  r_min_ = r_min;
  c_min_ = c_min;
}

void Bucket::decode_all(const HuffmanCodebook& book, std::span<RankValue> out) const {
  std::size_t pos = 0;
  for (std::uint32_t j = 0; j < registers_; ++j) {
    const DecodedSymbol d = book.decode(codewords_, pos, codewords_.size());
    out[j] = d.symbol;
    pos += d.length;
  }
  if (pos != codewords_.size()) {
    throw CorruptionError("codeword array has trailing bits");
  }
}

std::vector<RankValue> Bucket::decode_all(const HuffmanCodebook& book) const {
  std::vector<RankValue> out(registers_);
  decode_all(book, out);
  return out;
}

void Bucket::check_consistency(const HuffmanCodebook& book) const {
  std::size_t code_pos = 0;
  std::size_t unary_pos = 0;
  RankValue lo = 0;
  std::uint32_t count = 0;
  for (std::uint32_t j = 0; j < registers_; ++j) {
    if (unary_pos >= unary_.size()) {
      throw CorruptionError("unary array too short");
    }
    const std::size_t len = unary_.ones_run(unary_pos);
    if (unary_pos + len >= unary_.size()) {
      throw CorruptionError("unary record " + std::to_string(j) + " is not terminated");
    }
    const DecodedSymbol d = book.decode(codewords_, code_pos, codewords_.size());
    if (d.length != len) {
      throw CorruptionError("codeword length disagrees with unary record " + std::to_string(j));
    }
    code_pos += len;
    unary_pos += len + 1;
    if (j == 0 || d.symbol < lo) {
      lo = d.symbol;
      count = 1;
    } else if (d.symbol == lo) {
      ++count;
    }
  }
  if (code_pos != codewords_.size() || unary_pos != unary_.size()) {
    throw CorruptionError("bucket arrays have trailing bits");
  }
  if (registers_ > 0 && (lo != r_min_ || count != c_min_)) {
    throw CorruptionError("stored bucket minimum does not match its registers");
  }
}

BucketBits Bucket::bits() const noexcept {
  return BucketBits{codewords_.size(), unary_.size(), bucket_metadata_bits(registers_)};
}

void Bucket::set_skip_index(bool enabled) {
  skip_enabled_ = enabled;
  rebuild_skip_index();
}

void Bucket::rebuild_skip_index() {
  skip_.clear();
  if (!skip_enabled_ || registers_ < 4) {
    return;
  }
  const auto samples = static_cast<std::uint32_t>(bucket_metadata_bits(registers_) - 6 - 1);
  std::size_t unary_pos = 0;
  std::size_t code_pos = 0;
  std::uint32_t slot = 0;
  for (std::uint32_t i = 1; i <= samples; ++i) {
    const auto target = static_cast<std::uint32_t>(std::uint64_t{i} * registers_ / (samples + 1));
    while (slot < target) {
      const std::size_t len = unary_.ones_run(unary_pos);
      unary_pos += len + 1;
      code_pos += len;
      ++slot;
    }
    skip_.push_back(Locator{slot, unary_pos, code_pos});
  }
}

}  // namespace hbs
