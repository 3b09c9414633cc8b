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
#include <memory>
#include <span>
#include <vector>

#include "hbs/bucket.hpp"
#include "hbs/estimator.hpp"
#include "hbs/hashing.hpp"
#include "hbs/hll.hpp"
#include "hbs/huffman.hpp"

namespace hbs {

struct HbsOptions {
  // Codeword bit budget per bucket; 0 leaves buckets unbounded. Buckets whose
  // codewords exceed the budget are flagged as living in a side table and
  // accounted for separately.
  std::uint32_t bit_budget = 0;
  bool skip_index = false;

  friend bool operator==(const HbsOptions&, const HbsOptions&) = default;
};

// Operation counts, exposed so amortized-cost behaviour can be measured.
struct HbsCounters {
  std::uint64_t ordinary_updates = 0;  // inserts with rank above the bucket minimum
  std::uint64_t register_writes = 0;   // inserts that raised a register
  std::uint64_t min_recomputes = 0;    // full bucket scans for r_min/c_min
  std::uint64_t rebuilds = 0;          // rebuild trigger firings
  std::uint64_t tree_changes = 0;      // rebuilds that produced a different code

  friend bool operator==(const HbsCounters&, const HbsCounters&) = default;
};

struct SketchStats {
  std::uint64_t buckets = 0;
  std::uint64_t registers = 0;
  std::uint64_t codeword_bits = 0;
  std::uint64_t unary_bits = 0;
  std::uint64_t metadata_bits = 0;
  std::uint64_t max_bucket_codeword_bits = 0;
  std::uint64_t tree_bits = 0;      // preorder shape only
  std::uint64_t estimate_bits = 0;  // n_hat and n_hat_old
  std::uint64_t overflowed_buckets = 0;
  std::uint64_t side_table_bits = 0;
  // Codewords + unary arrays + metadata + tree + estimates.
  std::uint64_t unbounded_bits = 0;
  // buckets * (budget + metadata) + tree + side table; 0 without a budget.
  std::uint64_t budgeted_bits = 0;
};

// Bits charged per side-table entry on top of its codewords: a 32-bit bucket
// index and a 16-bit length.
inline constexpr std::uint64_t kSideTableEntryOverheadBits = 48;

// Rebuild when the estimate has doubled since the last codebook build. From
// n_hat_old = 0 any positive estimate triggers; otherwise the estimate must
// also have grown by at least one.
[[nodiscard]] bool rebuild_trigger(double n_hat, double n_hat_old) noexcept;

// Huffman-Bucket Sketch: a HyperLogLog whose registers are stored in buckets
// of Huffman codewords under one global codebook. The codebook is derived
// from the current cardinality estimate and rebuilt when it doubles, so the
// code tracks the register distribution as the stream grows.
//
// Not internally synchronized: one writer, or any number of readers between
// writes.
class HbsSketch {
 public:
  // Throws ConfigError for invalid parameters.
  explicit HbsSketch(const SketchParams& params, const HbsOptions& options = {});

  void insert(std::uint64_t hash);

  [[nodiscard]] double estimate() const noexcept { return n_hat_; }
  [[nodiscard]] RankValue peek(RegisterAddress a) const;

  // Throws ParamMismatchError.
  [[nodiscard]] static HbsSketch merge(const HbsSketch& a, const HbsSketch& b);

  // With a hint, registers are encoded with that book instead of one derived
  // from the estimate. Throws ConfigError if the hint's alphabet does not
  // match max_rank.
  [[nodiscard]] static HbsSketch from_hll(const HllSketch& hll,
                                          std::shared_ptr<const HuffmanCodebook> hint = nullptr,
                                          const HbsOptions& options = {});
  [[nodiscard]] HllSketch to_hll() const;

  [[nodiscard]] std::vector<std::uint8_t> serialize() const;
  // Throws FormatError; never returns a partially built sketch.
  [[nodiscard]] static HbsSketch deserialize(std::span<const std::uint8_t> bytes);

  [[nodiscard]] SketchStats stats() const;

  // Local estimate of a single bucket from its own registers.
  [[nodiscard]] double bucket_estimate(std::uint32_t bucket) const;

  // Throws CorruptionError unless every bucket decodes under the codebook with
  // consistent metadata and the estimator matches the registers.
  void check_invariants() const;

  [[nodiscard]] const SketchParams& params() const noexcept { return params_; }
  [[nodiscard]] const HbsOptions& options() const noexcept { return options_; }
  [[nodiscard]] const std::vector<Bucket>& buckets() const noexcept { return buckets_; }
  [[nodiscard]] const HuffmanCodebook& codebook() const noexcept { return *book_; }
  [[nodiscard]] std::shared_ptr<const HuffmanCodebook> shared_codebook() const noexcept { return book_; }
  [[nodiscard]] double n_hat_old() const noexcept { return n_hat_old_; }
  [[nodiscard]] const EstimatorState& estimator() const noexcept { return est_; }
  [[nodiscard]] const HbsCounters& counters() const noexcept { return counters_; }
  [[nodiscard]] bool overflowed(std::uint32_t bucket) const { return overflowed_.at(bucket); }

  friend bool operator==(const HbsSketch& a, const HbsSketch& b);

 private:
  HbsSketch(const SketchParams& params, const HbsOptions& options, std::shared_ptr<const HuffmanCodebook> book);

  [[nodiscard]] double load_factor(double n_hat) const noexcept;
  [[nodiscard]] std::shared_ptr<const HuffmanCodebook> book_for(double n_hat) const;
  void rebuild_codebook();
  void refresh_overflow(std::size_t bucket);
  void encode_registers(std::span<const RankValue> ranks);

  SketchParams params_;
  HbsOptions options_;
  std::vector<Bucket> buckets_;
  std::shared_ptr<const HuffmanCodebook> book_;
  double n_hat_ = 0.0;
  double n_hat_old_ = 0.0;
  EstimatorState est_;
  HbsCounters counters_;
  std::vector<bool> overflowed_;
  std::uint64_t overflow_count_ = 0;
};

}  // namespace hbs
