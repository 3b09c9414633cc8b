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

#include "hbs/estimator.hpp"

#include <cmath>

#include "hbs/errors.hpp"

namespace hbs {

namespace {

constexpr unsigned __int128 term(RankValue r) noexcept { return static_cast<unsigned __int128>(1) << (63 - r); }

}  // namespace

double hll_alpha(double registers) noexcept { return 0.7213 / (1.0 + 1.079 / registers); }

double raw_estimate(double registers, double harmonic_sum) {
  if (!(harmonic_sum > 0.0)) {
    throw CorruptionError("harmonic sum must be positive");
  }
  return hll_alpha(registers) * registers * registers / harmonic_sum;
}

double corrected_estimate(double registers, double harmonic_sum, std::uint64_t zero_count, double threshold) {
  const double raw = raw_estimate(registers, harmonic_sum);
  if (raw <= threshold * registers && zero_count > 0) {
    return registers * std::log(registers / static_cast<double>(zero_count));
  }
  return raw;
}

EstimatorState::EstimatorState(std::uint64_t register_count)
    : fixed_sum_(static_cast<unsigned __int128>(register_count) * term(0)),
      registers_(register_count),
      zeros_(register_count) {}

EstimatorState EstimatorState::from_ranks(std::span<const RankValue> ranks) {
  EstimatorState s;
  s.registers_ = ranks.size();
  for (const RankValue r : ranks) {
    s.fixed_sum_ += term(r);
    s.zeros_ += r == 0 ? 1 : 0;
  }
  return s;
}

void EstimatorState::on_register_change(RankValue r_old, RankValue r_new) {
  if (r_new <= r_old || r_new > kMaxRank) {
    throw DomainError("register changes must strictly increase the rank");
  }
  fixed_sum_ -= term(r_old) - term(r_new);
  if (r_old == 0) {
    --zeros_;
  }
}

void EstimatorState::absorb(const EstimatorState& part) noexcept {
  fixed_sum_ += part.fixed_sum_;
  registers_ += part.registers_;
  zeros_ += part.zeros_;
}

double EstimatorState::harmonic_sum() const noexcept {
  const auto hi = static_cast<std::uint64_t>(fixed_sum_ >> 64);
  const auto lo = static_cast<std::uint64_t>(fixed_sum_);
  // hi * 2^64 + lo, scaled by 2^-63.
  return std::ldexp(static_cast<double>(hi), 1) + std::ldexp(static_cast<double>(lo), -63);
}

double EstimatorState::raw_estimate() const {
  return hbs::raw_estimate(static_cast<double>(registers_), harmonic_sum());
}

double EstimatorState::corrected_estimate(double threshold) const {
  return hbs::corrected_estimate(static_cast<double>(registers_), harmonic_sum(), zeros_, threshold);
}

}  // namespace hbs
