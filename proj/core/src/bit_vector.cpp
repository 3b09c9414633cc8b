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

#include "hbs/bit_vector.hpp"

#include <bit>

namespace hbs {

namespace {

constexpr std::uint64_t low_mask(unsigned len) noexcept {
  return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
}

}  // namespace

std::uint64_t BitVector::read(std::size_t pos, unsigned len) const noexcept {
  if (len == 0) {
    return 0;
  }
  return peek_window(pos) >> (64 - len);
}

std::uint64_t BitVector::peek_window(std::size_t pos) const noexcept {
  if (pos >= size_) {
    return 0;
  }
  const std::size_t w = pos >> 6;
  const unsigned off = pos & 63;
  std::uint64_t v = words_[w] << off;
  if (off != 0 && w + 1 < words_.size()) {
    v |= words_[w + 1] >> (64 - off);
  }
  return v;
}

void BitVector::write(std::size_t pos, std::uint64_t value, unsigned len) noexcept {
  if (len == 0) {
    return;
  }
  value &= low_mask(len);
  const std::size_t w = pos >> 6;
  const unsigned off = pos & 63;
  const unsigned first = 64 - off;  // bits available in word w
  if (len <= first) {
    const unsigned shift = first - len;
    const std::uint64_t mask = low_mask(len) << shift;
    words_[w] = (words_[w] & ~mask) | (value << shift);
  } else {
    const unsigned rest = len - first;
    words_[w] = (words_[w] & ~low_mask(first)) | (value >> rest);
    const unsigned shift = 64 - rest;
    const std::uint64_t mask = low_mask(rest) << shift;
    words_[w + 1] = (words_[w + 1] & ~mask) | ((value & low_mask(rest)) << shift);
  }
}

void BitVector::resize(std::size_t n) {
  words_.resize((n + 63) / 64, 0);
  size_ = n;
  if ((n & 63) != 0) {
    words_.back() &= ~low_mask(64 - (n & 63));
  }
}

void BitVector::append(std::uint64_t value, unsigned len) {
  const std::size_t pos = size_;
  resize(size_ + len);
  write(pos, value, len);
}

void BitVector::append_run(bool bit, std::size_t count) {
  const std::uint64_t fill = bit ? ~std::uint64_t{0} : 0;
  while (count >= 64) {
    append(fill, 64);
    count -= 64;
  }
  append(fill, static_cast<unsigned>(count));
}

void BitVector::splice(std::size_t pos, std::size_t old_len, std::uint64_t value, unsigned new_len) {
  if (old_len == new_len) {
    write(pos, value, new_len);
    return;
  }
  const std::size_t tail_begin = pos + old_len;
  const std::size_t tail_len = size_ - tail_begin;
  const std::size_t new_size = size_ - old_len + new_len;
  if (new_len > old_len) {
    // Grow, then move the tail right, copying from the back.
    resize(new_size);
    const std::size_t shift = new_len - old_len;
    std::size_t remaining = tail_len;
    while (remaining > 0) {
      const unsigned chunk = remaining >= 64 ? 64 : static_cast<unsigned>(remaining);
      const std::size_t src = tail_begin + remaining - chunk;
      write(src + shift, read(src, chunk), chunk);
      remaining -= chunk;
    }
  } else {
    // Move the tail left, copying from the front, then shrink.
    const std::size_t shift = old_len - new_len;
    std::size_t done = 0;
    while (done < tail_len) {
      const unsigned chunk = tail_len - done >= 64 ? 64 : static_cast<unsigned>(tail_len - done);
      const std::size_t src = tail_begin + done;
      write(src - shift, read(src, chunk), chunk);
      done += chunk;
    }
    resize(new_size);
  }
  write(pos, value, new_len);
}

std::size_t BitVector::skip_zeros(std::size_t pos, std::size_t count) const noexcept {
  if (count == 0) {
    return pos;
  }
  while (pos < size_) {
    const std::size_t avail = size_ - pos;
    const unsigned len = avail >= 64 ? 64 : static_cast<unsigned>(avail);
    // Zeros of the window become ones; bits past the end stay zero.
    std::uint64_t zeros = ~peek_window(pos) & ~low_mask(64 - len);
    const auto n = static_cast<std::size_t>(std::popcount(zeros));
    if (n < count) {
      count -= n;
      pos += len;
      continue;
    }
    for (std::size_t k = 1; k < count; ++k) {
      zeros &= ~(std::uint64_t{1} << (63 - std::countl_zero(zeros)));
    }
    return pos + static_cast<std::size_t>(std::countl_zero(zeros)) + 1;
  }
  return size_ + 1;
}

std::size_t BitVector::ones_run(std::size_t pos) const noexcept {
  std::size_t run = 0;
  while (pos < size_) {
    const std::size_t avail = size_ - pos;
    const unsigned len = avail >= 64 ? 64 : static_cast<unsigned>(avail);
    const auto ones = static_cast<unsigned>(std::countl_one(peek_window(pos)));
    if (ones < len) {
      return run + ones;
    }
    run += len;
    pos += len;
  }
  return run;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (56 - 8 * (i & 7)));
  }
  return out;
}

bool BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits, BitVector& out) {
  if (bytes.size() != (bits + 7) / 8) {
    return false;
  }
  BitVector v;
  v.resize(bits);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    v.words_[i >> 3] |= std::uint64_t{bytes[i]} << (56 - 8 * (i & 7));
  }
  if ((bits & 7) != 0) {
    const std::uint8_t pad = bytes.back() & static_cast<std::uint8_t>(low_mask(8 - (bits & 7)));
    if (pad != 0) {
      return false;
    }
  }
  out = std::move(v);
  return true;
}

}  // namespace hbs
