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

#include <array>
#include <cstdint>
#include <span>

#include "hbs/hashing.hpp"

namespace hbs {

// Register-value distribution under the Poisson model with load factor
// lambda = n/m. With x_r = lambda * 2^-r and g(x) = e^-x (1 - e^-x):
//
//   P[R <= r] = e^{-x_r}
//   P[R = 0]  = e^{-lambda}
//   P[R = r]  = g(x_r)                 for 1 <= r < max_rank
//   P[R = max_rank] = 1 - e^{-x_{max_rank-1}}   (right tail folded in)
//
// Exponent arguments above kUnderflowCutoff evaluate to exactly zero.
inline constexpr double kUnderflowCutoff = 700.0;

// P[R <= r] for r >= 0 (unfolded).
[[nodiscard]] double cdf_at(double lambda, int r) noexcept;

// Folded pmf. Throws DomainError if r is outside [0, max_rank] or lambda < 0.
[[nodiscard]] double pmf_at(double lambda, int r, RankValue max_rank = kMaxRank);

struct ModeBracket {
  int r_star = 0;  // ceil(log2 lambda)
  int mode = 0;    // argmax of the folded pmf (lowest index on ties)

  // mode in {r*-1, r*, r*+1}, or mode == 0 when lambda <= 2 ln 2.
  [[nodiscard]] bool holds(double lambda) const noexcept;
};

// Throws DomainError for lambda <= 0.
[[nodiscard]] ModeBracket mode_bracket(double lambda, RankValue max_rank = kMaxRank);

// Shannon entropy in bits of the folded distribution.
[[nodiscard]] double entropy_bits(double lambda, RankValue max_rank = kMaxRank);

// Smallest r with cdf_at(lambda, r) >= u, capped at max_rank.
[[nodiscard]] RankValue sample_register(double lambda, double u, RankValue max_rank = kMaxRank) noexcept;

// Upper bounds on P[R > r* + k] and P[R <= r* - k] respectively.
[[nodiscard]] double right_tail_bound(int k) noexcept;
[[nodiscard]] double left_tail_bound(int k) noexcept;

// True tails evaluated from cdf_at, for checking against the bounds above.
[[nodiscard]] double right_tail(double lambda, int k);
[[nodiscard]] double left_tail(double lambda, int k);

// Precomputed distribution for a fixed lambda.
class RankModel {
 public:
  explicit RankModel(double lambda, RankValue max_rank = kMaxRank);

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] RankValue max_rank() const noexcept { return max_rank_; }
  [[nodiscard]] std::span<const double> pmf() const noexcept {
    return std::span<const double>(pmf_.data(), std::size_t{max_rank_} + 1);
  }
  [[nodiscard]] double pmf_at(int r) const;
  [[nodiscard]] double entropy_bits() const noexcept;

  // Table-driven equivalent of sample_register(lambda(), u, max_rank()).
  [[nodiscard]] RankValue sample(double u) const noexcept;

 private:
  double lambda_;
  RankValue max_rank_;
  std::array<double, kAlphabetSize> pmf_{};
  std::array<double, kAlphabetSize> cdf_{};
};

}  // namespace hbs
