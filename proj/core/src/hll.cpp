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

#include "hbs/hll.hpp"

#include <algorithm>

#include "hbs/errors.hpp"
#include "hbs/wire.hpp"

namespace hbs {

HllSketch::HllSketch(const SketchParams& params) : params_(params) {
  params_.validate();
  registers_.assign(params_.register_count(), 0);
}

HllSketch HllSketch::from_registers(const SketchParams& params, std::vector<RankValue> registers) {
  HllSketch s(params);
  if (registers.size() != s.registers_.size()) {
    throw ConfigError("register array has the wrong size");
  }
  if (std::any_of(registers.begin(), registers.end(), [&](RankValue r) { return r > params.max_rank; })) {
    throw ConfigError("register value exceeds max rank");
  }
  s.registers_ = std::move(registers);
  return s;
}

void HllSketch::insert(std::uint64_t hash) noexcept {
  const SplitHash s = split_hash(hash, params_);
  RankValue& reg = registers_[s.address.flat(params_.registers_per_bucket)];
  reg = std::max(reg, s.rank);
}

void HllSketch::merge_in(const HllSketch& other) {
  if (!(params_ == other.params_)) {
    throw ParamMismatchError("cannot merge HLL sketches with different parameters");
  }
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    registers_[i] = std::max(registers_[i], other.registers_[i]);
  }
}

HllSketch HllSketch::merge(const HllSketch& a, const HllSketch& b) {
  HllSketch out = a;
  out.merge_in(b);
  return out;
}

std::vector<std::uint8_t> HllSketch::serialize() const {
  wire::Writer w;
  wire::write_header(w, wire::FormatTag::kHll, params_);
  w.u64(registers_.size());
  w.bytes(registers_);
  return std::move(w).take();
}

HllSketch HllSketch::deserialize(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const SketchParams params = wire::read_header(r, wire::FormatTag::kHll);
  const std::size_t count_at = r.offset();
  const std::uint64_t count = r.u64();
  if (count != params.register_count()) {
    throw FormatError("register count does not match parameters", count_at);
  }
  const std::size_t regs_at = r.offset();
  const auto regs = r.bytes(count);
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (regs[i] > params.max_rank) {
      throw FormatError("register value exceeds max rank", regs_at + i);
    }
  }
  if (!r.done()) {
    r.fail("trailing bytes after register array");
  }
  HllSketch s(params);
  s.registers_.assign(regs.begin(), regs.end());
  return s;
}

}  // namespace hbs
