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

namespace hbs {

// A register value: the rho-rank of a hash suffix, 0 for an untouched register.
using RankValue = std::uint8_t;

inline constexpr RankValue kMaxRank = 63;
inline constexpr unsigned kAlphabetSize = kMaxRank + 1;
inline constexpr unsigned kDefaultRankWidth = 48;

// Shape of a sketch: m registers grouped into buckets of B registers.
//
// The register array has num_buckets() * B entries, which can exceed m when
// B does not divide m. Both the HLL oracle and the compressed sketch use that
// padded count so that their register arrays line up exactly.
struct SketchParams {
  std::uint64_t m = 4096;
  std::uint32_t registers_per_bucket = 64;
  unsigned rank_width = kDefaultRankWidth;
  RankValue max_rank = kMaxRank;

  // Throws ConfigError on invalid combinations.
  static SketchParams make(std::uint64_t m, std::uint32_t registers_per_bucket,
                           unsigned rank_width = kDefaultRankWidth,
                           RankValue max_rank = kMaxRank);

  void validate() const;

  [[nodiscard]] std::uint64_t num_buckets() const noexcept {
    return (m + registers_per_bucket - 1) / registers_per_bucket;
  }
  [[nodiscard]] std::uint64_t register_count() const noexcept {
    return num_buckets() * registers_per_bucket;
  }

  friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

struct RegisterAddress {
  std::uint32_t bucket = 0;
  std::uint32_t slot = 0;

  // Canonical register identity shared with the HLL oracle.
  [[nodiscard]] std::uint64_t flat(std::uint32_t registers_per_bucket) const noexcept {
    return std::uint64_t{bucket} * registers_per_bucket + slot;
  }

  friend bool operator==(const RegisterAddress&, const RegisterAddress&) = default;
};

struct SplitHash {
  RegisterAddress address;
  RankValue rank = 0;

  friend bool operator==(const SplitHash&, const SplitHash&) = default;
};

// 1 + number of leading zeros in the low `width` bits of `bits`; width + 1 for an
// all-zero window. Clamped to max_rank. width is clamped to [1, 64].
[[nodiscard]] RankValue rank_of(std::uint64_t bits, unsigned width,
                                RankValue max_rank = kMaxRank) noexcept;

// Bucket from the high 32 bits, slot from the next 16, both by fixed-point
// multiplication so that B need not be a power of two. Rank from the low
// rank_width bits.
[[nodiscard]] SplitHash split_hash(std::uint64_t h, const SketchParams& params) noexcept;

// SplitMix64 finalizer. Bijective, so distinct inputs give distinct hashes.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seeded element hash used by the CLI and tests: mix64(value ^ mix64(seed)).
[[nodiscard]] constexpr std::uint64_t seeded_hash(std::uint64_t value, std::uint64_t seed) noexcept {
  return mix64(value ^ mix64(seed));
}

}  // namespace hbs
