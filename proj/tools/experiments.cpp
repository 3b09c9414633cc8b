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

#include "experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "hbs/bucket.hpp"
#include "hbs/errors.hpp"
#include "hbs/hll.hpp"
#include "hbs/huffman.hpp"
#include "hbs/rank_model.hpp"
#include "hbs/sketch.hpp"

namespace hbs::experiments {

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) noexcept {
  return mix64(mix64(seed) ^ (trial + 0x9e3779b97f4a7c15ULL));
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(trial_key(seed, trial));
}

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

// ---- dist -----------------------------------------------------------------

std::vector<DistRow> dist(std::span<const double> lambdas) {
  std::vector<DistRow> rows;
  rows.reserve(lambdas.size() * kAlphabetSize);
  for (double lambda : lambdas) {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 0");
    const RankModel model(lambda);
    int r_star = -1;
    int mode = 0;
    if (lambda > 0) {
      const ModeBracket b = mode_bracket(lambda);
      r_star = b.r_star;
      mode = b.mode;
    }
    for (int r = 0; r < static_cast<int>(kAlphabetSize); ++r) {
      rows.push_back({lambda, r, model.pmf_at(r), r == r_star, r == mode});
    }
  }
  return rows;
}

Csv dist_csv(std::span<const DistRow> rows) {
  Csv csv({"lambda", "rank", "probability", "is_r_star", "is_mode"});
  for (const DistRow& r : rows) {
    csv.row() << r.lambda << r.rank << r.probability << (r.r_star ? 1 : 0) << (r.mode ? 1 : 0);
  }
  return csv;
}

// ---- bucket sizes -------------------------------------------------------------

BucketSizeRow sample_bucket_sizes(std::uint32_t registers, double lambda, std::uint64_t reps,
                                  std::uint64_t seed) {
  if (registers == 0) throw ConfigError("B must be positive");
  const RankModel model(lambda);
  const HuffmanCodebook book = HuffmanCodebook::build(model);
  const std::uint64_t key = trial_key(seed, static_cast<std::uint64_t>(registers) << 32 ^
                                                std::bit_cast<std::uint64_t>(lambda));
  std::mt19937_64 rng(key);

  BucketSizeRow row;
  row.registers = registers;
  row.lambda = lambda;
  row.reps = reps;
  row.min_bits = std::numeric_limits<std::uint64_t>::max();
  std::vector<RankValue> ranks(registers);
  double total = 0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    for (RankValue& r : ranks) r = model.sample(uniform01(rng));
    const Bucket bucket = Bucket::encode(ranks, book);
    const std::uint64_t bits = bucket.bits().codeword_bits;
    total += static_cast<double>(bits);
    row.min_bits = std::min(row.min_bits, bits);
    row.max_bits = std::max(row.max_bits, bits);
  }
  if (reps == 0) row.min_bits = 0;
  row.mean_bits = reps == 0 ? 0.0 : total / static_cast<double>(reps);
  return row;
}

std::vector<BucketSizeRow> bucket_size(double n, double m, std::span<const std::uint32_t> registers,
                                       const ExperimentConfig& config) {
  if (!(m > 0)) throw ConfigError("m must be positive");
  std::vector<BucketSizeRow> rows;
  for (std::uint32_t b : registers) {
    rows.push_back(sample_bucket_sizes(b, n / m, config.repetitions, config.seed));
  }
  return rows;
}

std::vector<BucketSizeRow> bucket_size_vs_lambda(std::span<const std::uint32_t> registers,
                                                 std::span<const double> lambdas,
                                                 const ExperimentConfig& config) {
  std::vector<BucketSizeRow> rows;
  for (std::uint32_t b : registers) {
    for (double lambda : lambdas) {
      rows.push_back(sample_bucket_sizes(b, lambda, config.repetitions, config.seed));
    }
  }
  return rows;
}

Csv bucket_size_csv(std::span<const BucketSizeRow> rows) {
  Csv csv({"B", "lambda", "reps", "mean_bits", "min_bits", "max_bits"});
  for (const BucketSizeRow& r : rows) {
    csv.row() << r.registers << r.lambda << r.reps << r.mean_bits << r.min_bits << r.max_bits;
  }
  return csv;
}

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ConfigError("fit needs at least two points");
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw ConfigError("fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double predicted = fit.intercept + fit.slope * xs[i];
    const double residual = ys[i] - predicted;
    sse += residual * residual;
    if (ys[i] != 0) fit.max_relative_residual = std::max(fit.max_relative_residual, std::abs(residual / ys[i]));
  }
  fit.r_squared = syy == 0 ? 1.0 : 1.0 - sse / syy;
  return fit;
}

double plateau_variation(std::span<const BucketSizeRow> rows, double min_lambda) {
  std::map<std::uint32_t, std::pair<double, double>> range;  // B -> (min, max)
  for (const BucketSizeRow& r : rows) {
    if (r.lambda < min_lambda) continue;
    auto [it, fresh] = range.try_emplace(r.registers, r.mean_bits, r.mean_bits);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.mean_bits);
      it->second.second = std::max(it->second.second, r.mean_bits);
    }
  }
  double worst = 0;
  for (const auto& [b, mm] : range) {
    if (mm.first > 0) worst = std::max(worst, (mm.second - mm.first) / mm.first);
  }
  return worst;
}

// ---- fixed-budget size model -------------------------------------------------

unsigned ceil_log2(std::uint64_t x) noexcept {
  return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

std::uint64_t small_sketch_bits(std::uint64_t m, std::uint32_t budget, std::uint32_t registers) {
  if (registers == 0 || m == 0) throw ConfigError("m and B must be positive");
  const std::uint64_t buckets = (m + registers - 1) / registers;
  return buckets * (budget + 6 + ceil_log2(registers)) + kTreeBits;
}

std::uint64_t big_sketch_bits(std::uint64_t m, std::uint32_t budget, std::uint32_t registers) {
  const std::uint64_t buckets = (m + registers - 1) / registers;
  const unsigned locators = ceil_log2(registers) == 0 ? 0 : ceil_log2(registers) - 1;
  return small_sketch_bits(m, budget, registers) + buckets * locators * ceil_log2(budget) + kEncodeTableBits +
         kDecodeTableBits;
}

double memory_variance_product(std::uint64_t bits, std::uint64_t m) {
  return static_cast<double>(bits) * kVarianceConstant / static_cast<double>(m);
}

std::optional<MvpReference> reference_sizes(std::uint64_t m, std::uint32_t budget,
                                             std::uint32_t registers) noexcept {
  if (m != 32768) return std::nullopt;
  if (budget == 64 && registers == 10) return MvpReference{242679, 310800, 7.961};
  if (budget == 512 && registers == 144) return MvpReference{119657, 143111, 3.926};
  if (budget == 1024 && registers == 313) return MvpReference{108311, 125784, 3.553};
  return std::nullopt;
}

MvpRow mvp_row(std::uint64_t m, std::uint32_t budget, std::uint32_t registers) {
  MvpRow row;
  row.m = m;
  row.budget = budget;
  row.registers = registers;
  row.small_bits = small_sketch_bits(m, budget, registers);
  row.big_bits = big_sketch_bits(m, budget, registers);
  row.mvp_small = memory_variance_product(row.small_bits, m);
  row.mvp_big = memory_variance_product(row.big_bits, m);
  row.reference = reference_sizes(m, budget, registers);
  return row;
}

Csv mvp_csv(std::span<const MvpRow> rows) {
  Csv csv({"m", "budget_bits", "B", "small_bits", "big_bits", "mvp_small", "mvp_big", "ref_small_bits",
           "ref_big_bits", "ref_mvp_small"});
  for (const MvpRow& r : rows) {
    auto& out = csv.row();
    out << r.m << r.budget << r.registers << r.small_bits << r.big_bits << r.mvp_small << r.mvp_big;
    if (r.reference) {
      out << r.reference->small_bits << r.reference->big_bits << r.reference->mvp_small;
    } else {
      out << "" << "" << "";
    }
  }
  return csv;
}

// ---- tree changes -------------------------------------------------------------

double TreeChangeResult::constant() const noexcept {
  return n_max < 2 ? 0.0 : static_cast<double>(total()) / std::log2(static_cast<double>(n_max));
}

std::uint64_t TreeChangeResult::max_per_octave() const noexcept {
  std::uint64_t best = 0;
  for (const OctaveCount& o : per_octave) best = std::max(best, o.changes);
  return best;
}

namespace {

int octave_of(double lambda) { return static_cast<int>(std::floor(std::log2(lambda))); }

}  // namespace

TreeChangeResult tree_changes(std::uint64_t m, std::uint64_t n_max) {
  if (m == 0) throw ConfigError("m must be positive");
  TreeChangeResult result;
  result.m = m;
  result.n_max = n_max;
  if (n_max == 0) return result;

  const double dm = static_cast<double>(m);
  std::map<int, std::uint64_t> octaves;
  for (int o = octave_of(1.0 / dm); o <= octave_of(static_cast<double>(n_max) / dm); ++o) octaves[o] = 0;

  std::vector<std::uint8_t> previous;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double lambda = static_cast<double>(n) / dm;
    const HuffmanCodebook book = HuffmanCodebook::build(RankModel(lambda));
    const auto lengths = book.lengths();
    if (!previous.empty() && !std::equal(lengths.begin(), lengths.end(), previous.begin(), previous.end())) {
      result.change_points.push_back(n);
      ++octaves[octave_of(lambda)];
    }
    previous.assign(lengths.begin(), lengths.end());
  }
  for (const auto& [o, c] : octaves) result.per_octave.push_back({o, c});
  return result;
}

Csv tree_changes_csv(const TreeChangeResult& result) {
  Csv csv({"n", "lambda", "changed"});
  const double dm = static_cast<double>(result.m);
  for (std::uint64_t n : result.change_points) {
    csv.row() << n << static_cast<double>(n) / dm << 1;
  }
  return csv;
}

Csv tree_octaves_csv(const TreeChangeResult& result) {
  Csv csv({"octave", "lambda_lo", "lambda_hi", "changes"});
  for (const OctaveCount& o : result.per_octave) {
    csv.row() << o.octave << std::ldexp(1.0, o.octave) << std::ldexp(1.0, o.octave + 1) << o.changes;
  }
  return csv;
}

// ---- update costs -------------------------------------------------------------

std::vector<UpdateCostRow> update_costs(const SketchParams& params, std::uint64_t n_max, std::uint64_t seed) {
  HbsSketch sketch(params);
  const std::uint64_t key = trial_key(seed, 0);
  std::vector<UpdateCostRow> rows;
  auto snapshot = [&](std::uint64_t n) {
    const HbsCounters& c = sketch.counters();
    rows.push_back({n, c.ordinary_updates, c.register_writes, c.min_recomputes, c.rebuilds, c.tree_changes,
                    sketch.estimate()});
  };
  std::uint64_t next = 1;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    sketch.insert(element_hash(key, i));
    const std::uint64_t n = i + 1;
    if (n == next) {
      snapshot(n);
      next *= 2;
    } else if (n == n_max) {
      snapshot(n);
    }
  }
  return rows;
}

Csv update_costs_csv(std::span<const UpdateCostRow> rows) {
  Csv csv({"n", "ordinary_updates", "register_writes", "min_recomputes", "rebuilds", "tree_changes",
           "ordinary_per_element", "estimate"});
  for (const UpdateCostRow& r : rows) {
    csv.row() << r.n << r.ordinary_updates << r.register_writes << r.min_recomputes << r.rebuilds << r.tree_changes
              << static_cast<double>(r.ordinary_updates) / static_cast<double>(r.n) << r.estimate;
  }
  return csv;
}

// ---- accuracy -------------------------------------------------------------------

std::vector<AccuracyRow> accuracy(const SketchParams& params, std::span<const std::uint64_t> ns,
                                  std::uint64_t trials, std::uint64_t seed) {
  std::vector<std::uint64_t> sorted(ns.begin(), ns.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  struct Acc {
    double sum = 0;
    double sum_sq = 0;
    std::uint64_t mismatches = 0;
  };
  std::vector<Acc> acc(sorted.size());

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    HbsSketch hbs(params);
    HllSketch hll(params);
    std::uint64_t inserted = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      for (; inserted < sorted[k]; ++inserted) {
        const std::uint64_t h = element_hash(key, inserted);
        hbs.insert(h);
        hll.insert(h);
      }
      const double estimate = hbs.estimate();
      if (estimate != hll.estimate() || hbs.to_hll() != hll) ++acc[k].mismatches;
      const double n = static_cast<double>(sorted[k]);
      const double err = sorted[k] == 0 ? estimate : (estimate - n) / n;
      acc[k].sum += err;
      acc[k].sum_sq += err * err;
    }
  }

  std::vector<AccuracyRow> rows;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    AccuracyRow row;
    row.n = sorted[k];
    row.trials = trials;
    if (trials > 0) {
      const double t = static_cast<double>(trials);
      row.mean_relative_error = acc[k].sum / t;
      row.relative_standard_error = std::sqrt(acc[k].sum_sq / t);
    }
    row.oracle_mismatches = acc[k].mismatches;
    rows.push_back(row);
  }
  return rows;
}

Csv accuracy_csv(std::span<const AccuracyRow> rows) {
  Csv csv({"n", "trials", "mean_relative_error", "relative_standard_error", "oracle_mismatches"});
  for (const AccuracyRow& r : rows) {
    csv.row() << r.n << r.trials << r.mean_relative_error << r.relative_standard_error << r.oracle_mismatches;
  }
  return csv;
}

}  // namespace hbs::experiments
