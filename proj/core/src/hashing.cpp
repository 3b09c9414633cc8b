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

#include "hbs/hashing.hpp"

#include <bit>

#include "hbs/errors.hpp"

namespace hbs {

SketchParams SketchParams::make(std::uint64_t m, std::uint32_t registers_per_bucket,
                                unsigned rank_width, RankValue max_rank) {
  SketchParams p{m, registers_per_bucket, rank_width, max_rank};
  p.validate();
  return p;
}

void SketchParams::validate() const {
  if (m == 0) {
    throw ConfigError("m must be positive");
  }
  if (registers_per_bucket == 0) {
    throw ConfigError("registers per bucket must be positive");
  }
  if (registers_per_bucket > m) {
    throw ConfigError("registers per bucket exceeds m");
  }
  // The slot index is drawn from 16 hash bits.
  if (registers_per_bucket > (1U << 16)) {
    throw ConfigError("registers per bucket exceeds 65536");
  }
  // The bucket index is drawn from 32 hash bits.
  if (num_buckets() > (std::uint64_t{1} << 32)) {
    throw ConfigError("bucket count exceeds 2^32");
  }
  if (rank_width < 1 || rank_width > 64) {
    throw ConfigError("rank width must be in [1, 64]");
  }
  if (max_rank < 1 || max_rank > kMaxRank) {
    throw ConfigError("max rank must be in [1, 63]");
  }
}

RankValue rank_of(std::uint64_t bits, unsigned width, RankValue max_rank) noexcept {
  if (width == 0) {
    width = 1;
  } else if (width > 64) {
    width = 64;
  }
  const std::uint64_t window = width == 64 ? bits : bits & ((std::uint64_t{1} << width) - 1);
  unsigned rank;
  if (window == 0) {
    rank = width + 1;
  } else {
    rank = static_cast<unsigned>(std::countl_zero(window)) - (64 - width) + 1;
  }
  return static_cast<RankValue>(rank > max_rank ? max_rank : rank);
}

SplitHash split_hash(std::uint64_t h, const SketchParams& params) noexcept {
  const std::uint64_t hi = h >> 32;
  const std::uint64_t mid = (h >> 16) & 0xFFFFU;
  SplitHash out;
  out.address.bucket = static_cast<std::uint32_t>((hi * params.num_buckets()) >> 32);
  out.address.slot = static_cast<std::uint32_t>((mid * params.registers_per_bucket) >> 16);
  out.rank = rank_of(h, params.rank_width, params.max_rank);
  return out;
}

}  // namespace hbs
