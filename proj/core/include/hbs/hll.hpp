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
#include <span>
#include <vector>

#include "hbs/estimator.hpp"
#include "hbs/hashing.hpp"

namespace hbs {

// Plain HyperLogLog with one byte per register. This is the reference the
// compressed sketch must decompress to, register for register.
class HllSketch {
 public:
  explicit HllSketch(const SketchParams& params);
  // Throws ConfigError if the size is wrong or a value exceeds max_rank.
  static HllSketch from_registers(const SketchParams& params, std::vector<RankValue> registers);

  void insert(std::uint64_t hash) noexcept;

  [[nodiscard]] RankValue at(std::uint64_t flat) const { return registers_.at(flat); }
  [[nodiscard]] RankValue at(RegisterAddress a) const { return at(a.flat(params_.registers_per_bucket)); }
  [[nodiscard]] std::span<const RankValue> registers() const noexcept { return registers_; }
  [[nodiscard]] const SketchParams& params() const noexcept { return params_; }

  // Elementwise maximum. Throws ParamMismatchError.
  void merge_in(const HllSketch& other);
  [[nodiscard]] static HllSketch merge(const HllSketch& a, const HllSketch& b);

  [[nodiscard]] EstimatorState estimator_state() const { return EstimatorState::from_ranks(registers_); }
  [[nodiscard]] double estimate() const { return estimator_state().corrected_estimate(); }

  // Header (see wire.hpp), then u64 register count and one byte per register.
  [[nodiscard]] std::vector<std::uint8_t> serialize() const;
  static HllSketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const HllSketch&, const HllSketch&) = default;

 private:
  SketchParams params_;
  std::vector<RankValue> registers_;
};

}  // namespace hbs
