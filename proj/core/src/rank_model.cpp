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

#include "hbs/rank_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hbs/errors.hpp"

namespace hbs {

namespace {

double load_at(double lambda, int r) noexcept { return std::ldexp(lambda, -r); }

// g(x) = e^-x (1 - e^-x)
double g(double x) noexcept {
  if (x > kUnderflowCutoff) {
    return 0.0;
  }
  return std::exp(-x) * -std::expm1(-x);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || std::isinf(lambda)) {
    throw DomainError("lambda must be a finite non-negative number");
  }
}

}  // namespace

double cdf_at(double lambda, int r) noexcept {
  const double x = load_at(lambda, r);
  if (x > kUnderflowCutoff) {
    return 0.0;
  }
  return std::exp(-x);
}

double pmf_at(double lambda, int r, RankValue max_rank) {
  check_lambda(lambda);
  if (r < 0 || r > max_rank) {
    throw DomainError("rank " + std::to_string(r) + " outside [0, " + std::to_string(max_rank) + "]");
  }
  if (r == max_rank) {
    const double x = load_at(lambda, r - 1);
    return x > kUnderflowCutoff ? 1.0 : -std::expm1(-x);
  }
  if (r == 0) {
    return cdf_at(lambda, 0);
  }
  return g(load_at(lambda, r));
}

bool ModeBracket::holds(double lambda) const noexcept {
  if (lambda <= 2.0 * std::numbers::ln2) {
    return mode == 0;
  }
  return mode >= r_star - 1 && mode <= r_star + 1;
}

ModeBracket mode_bracket(double lambda, RankValue max_rank) {
  if (!(lambda > 0.0)) {
    throw DomainError("mode bracket requires lambda > 0");
  }
  const RankModel model(lambda, max_rank);
  const auto pmf = model.pmf();
  int mode = 0;
  for (int r = 1; r <= max_rank; ++r) {
    if (pmf[r] > pmf[mode]) {
      mode = r;
    }
  }
  return ModeBracket{static_cast<int>(std::ceil(std::log2(lambda))), mode};
}

double entropy_bits(double lambda, RankValue max_rank) { return RankModel(lambda, max_rank).entropy_bits(); }

RankValue sample_register(double lambda, double u, RankValue max_rank) noexcept {
  for (int r = 0; r < max_rank; ++r) {
    if (cdf_at(lambda, r) >= u) {
      return static_cast<RankValue>(r);
    }
  }
  return max_rank;
}

double right_tail_bound(int k) noexcept { return std::ldexp(1.0, -k); }

double left_tail_bound(int k) noexcept { return std::exp(-std::ldexp(1.0, k - 1)); }

double right_tail(double lambda, int k) {
  const auto [r_star, mode] = mode_bracket(lambda);
  (void)mode;
  const double x = load_at(lambda, r_star + k);
  return -std::expm1(-x);
}

double left_tail(double lambda, int k) {
  if (!(lambda > 1.0)) {
    throw DomainError("left tail bound requires lambda > 1");
  }
  const auto [r_star, mode] = mode_bracket(lambda);
  (void)mode;
  const int r = r_star - k;
  return r < 0 ? 0.0 : cdf_at(lambda, r);
}

RankModel::RankModel(double lambda, RankValue max_rank) : lambda_(lambda), max_rank_(max_rank) {
  check_lambda(lambda);
  if (max_rank < 1 || max_rank > kMaxRank) {
    throw DomainError("max rank must be in [1, 63]");
  }
  for (int r = 0; r <= max_rank; ++r) {
    pmf_[r] = hbs::pmf_at(lambda, r, max_rank);
    cdf_[r] = r < max_rank ? cdf_at(lambda, r) : 1.0;
  }
}

double RankModel::pmf_at(int r) const {
  if (r < 0 || r > max_rank_) {
    throw DomainError("rank " + std::to_string(r) + " outside [0, " + std::to_string(max_rank_) + "]");
  }
  return pmf_[r];
}

double RankModel::entropy_bits() const noexcept {
  double h = 0.0;
  for (const double p : pmf()) {
    if (p > 0.0) {
      h -= p * std::log2(p);
    }
  }
  return h;
}

RankValue RankModel::sample(double u) const noexcept {
  for (int r = 0; r < max_rank_; ++r) {
    if (cdf_[r] >= u) {
      return static_cast<RankValue>(r);
    }
  }
  return max_rank_;
}

}  // namespace hbs
