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

namespace hbs {

// Growable bit vector, MSB-first: bit 0 is the most significant bit of the
// first word. Multi-bit values are read and written with their first bit as
// the most significant bit of the value. Bits past size() are kept zero so
// that equality is a word comparison.
class BitVector {
 public:
  BitVector() = default;

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool test(std::size_t pos) const noexcept {
    return ((words_[pos >> 6] >> (63 - (pos & 63))) & 1U) != 0;
  }

  // Reads len <= 64 bits starting at pos. Requires pos + len <= size().
  [[nodiscard]] std::uint64_t read(std::size_t pos, unsigned len) const noexcept;

  // Reads up to 64 bits starting at pos, left-aligned in the result; bits
  // past the end read as zero.
  [[nodiscard]] std::uint64_t peek_window(std::size_t pos) const noexcept;

  // Overwrites len <= 64 bits at pos with the low len bits of value.
  void write(std::size_t pos, std::uint64_t value, unsigned len) noexcept;

  void append(std::uint64_t value, unsigned len);
  void append_run(bool bit, std::size_t count);

  // Replaces the old_len bits at pos with the low new_len (<= 64) bits of
  // value, shifting the tail as needed.
  void splice(std::size_t pos, std::size_t old_len, std::uint64_t value, unsigned new_len);

  void resize(std::size_t n);
  void clear() noexcept {
    words_.clear();
    size_ = 0;
  }
  void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

  // Position of the first bit following `count` zero bits, scanning from pos.
  // Returns size() + 1 if the range holds fewer zeros.
  [[nodiscard]] std::size_t skip_zeros(std::size_t pos, std::size_t count) const noexcept;

  // Number of consecutive one bits starting at pos.
  [[nodiscard]] std::size_t ones_run(std::size_t pos) const noexcept;

  // Bytes of the vector, MSB-first, zero padded to a byte boundary.
  [[nodiscard]] std::vector<std::uint8_t> to_bytes() const;
  // Inverse of to_bytes(). Padding bits must be zero; returns false otherwise.
  static bool from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits, BitVector& out);

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace hbs
