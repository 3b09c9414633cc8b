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

#include "hbs/hashing.hpp"

namespace hbs {

inline constexpr double kLinearCountingThreshold = 2.5;

// alpha_m = 0.7213 / (1 + 1.079 / m)
[[nodiscard]] double hll_alpha(double registers) noexcept;

// Vanilla HLL estimate: alpha_m * m^2 / sum_j 2^-R_j.
[[nodiscard]] double raw_estimate(double registers, double harmonic_sum);

// Linear counting m ln(m / zeros) whenever the raw estimate is at most
// threshold * m and some register is still zero; the raw estimate otherwise.
[[nodiscard]] double corrected_estimate(double registers, double harmonic_sum, std::uint64_t zero_count,
                                        double threshold = kLinearCountingThreshold);

// Incrementally maintained inputs of the vanilla estimator.
//
// The harmonic sum is kept in 2^-63 fixed point, so updates are exact and the
// result does not depend on the order registers changed in. Any two states
// over the same register multiset are bit-identical.
class EstimatorState {
 public:
  EstimatorState() = default;
  // All registers zero.
  explicit EstimatorState(std::uint64_t register_count);

  static EstimatorState from_ranks(std::span<const RankValue> ranks);

  // r_new > r_old is required; throws DomainError otherwise.
  void on_register_change(RankValue r_old, RankValue r_new);

  // Adds the registers of another disjoint register range.
  void absorb(const EstimatorState& part) noexcept;

  [[nodiscard]] std::uint64_t register_count() const noexcept { return registers_; }
  [[nodiscard]] std::uint64_t zero_count() const noexcept { return zeros_; }
  [[nodiscard]] double harmonic_sum() const noexcept;

  [[nodiscard]] double raw_estimate() const;
  [[nodiscard]] double corrected_estimate(double threshold = kLinearCountingThreshold) const;

  friend bool operator==(const EstimatorState&, const EstimatorState&) = default;

 private:
  unsigned __int128 fixed_sum_ = 0;  // sum_j 2^(63 - R_j)
  std::uint64_t registers_ = 0;
  std::uint64_t zeros_ = 0;
};

}  // namespace hbs
