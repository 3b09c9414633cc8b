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

#include "hbs/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbs/errors.hpp"
#include "hbs/rank_model.hpp"
#include "hbs/wire.hpp"

namespace hbs {

namespace {

constexpr std::uint8_t kFlagSkipIndex = 0x01;

}  // namespace

bool rebuild_trigger(double n_hat, double n_hat_old) noexcept {
  if (n_hat_old <= 0.0) {
    return n_hat > 0.0;
  }
  return n_hat >= std::max(2.0 * n_hat_old, n_hat_old + 1.0);
}

HbsSketch::HbsSketch(const SketchParams& params, const HbsOptions& options)
    : HbsSketch(params, options, nullptr) {}

HbsSketch::HbsSketch(const SketchParams& params, const HbsOptions& options,
                     std::shared_ptr<const HuffmanCodebook> book)
    : params_(params), options_(options), book_(std::move(book)) {
  params_.validate();
  if (!book_) {
    book_ = book_for(0.0);
  }
  const Bucket fresh = Bucket::fresh(params_.registers_per_bucket, *book_, options_.skip_index);
  buckets_.assign(params_.num_buckets(), fresh);
  est_ = EstimatorState(params_.register_count());
  overflowed_.assign(buckets_.size(), false);
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    refresh_overflow(b);
  }
}

double HbsSketch::load_factor(double n_hat) const noexcept {
  return n_hat / static_cast<double>(params_.register_count());
}

std::shared_ptr<const HuffmanCodebook> HbsSketch::book_for(double n_hat) const {
  return std::make_shared<const HuffmanCodebook>(
      HuffmanCodebook::build(RankModel(load_factor(n_hat), params_.max_rank)));
}

void HbsSketch::refresh_overflow(std::size_t bucket) {
  if (options_.bit_budget == 0) {
    return;
  }
  const bool over = buckets_[bucket].codewords().size() > options_.bit_budget;
  if (over != overflowed_[bucket]) {
    overflowed_[bucket] = over;
    if (over) {
      ++overflow_count_;
    } else {
      --overflow_count_;
    }
  }
}

void HbsSketch::insert(std::uint64_t hash) {
  const SplitHash s = split_hash(hash, params_);
  Bucket& bucket = buckets_[s.address.bucket];
  if (s.rank <= bucket.r_min()) {
    return;
  }
  ++counters_.ordinary_updates;
  const RankValue r_old = bucket.peek(s.address.slot, *book_);
  if (s.rank <= r_old) {
    return;
  }
  bucket.poke(s.address.slot, s.rank, *book_);
  ++counters_.register_writes;
  if (r_old == bucket.r_min() && bucket.on_min_register_raised(*book_)) {
    ++counters_.min_recomputes;
  }
  refresh_overflow(s.address.bucket);

  est_.on_register_change(r_old, s.rank);
  n_hat_ = est_.corrected_estimate();
  if (rebuild_trigger(n_hat_, n_hat_old_)) {
    rebuild_codebook();
  }
}

void HbsSketch::rebuild_codebook() {
  auto next = book_for(n_hat_);
  ++counters_.rebuilds;
  if (!(*next == *book_)) {
    ++counters_.tree_changes;
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      buckets_[b].reencode(*book_, *next);
      refresh_overflow(b);
    }
  }
  book_ = std::move(next);
  n_hat_old_ = n_hat_;
}

RankValue HbsSketch::peek(RegisterAddress a) const {
  if (a.bucket >= buckets_.size()) {
    throw DomainError("bucket " + std::to_string(a.bucket) + " out of range");
  }
  return buckets_[a.bucket].peek(a.slot, *book_);
}

void HbsSketch::encode_registers(std::span<const RankValue> ranks) {
  const std::uint32_t width = params_.registers_per_bucket;
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    buckets_[b] = Bucket::encode(ranks.subspan(b * width, width), *book_, options_.skip_index);
    refresh_overflow(b);
  }
}

HbsSketch HbsSketch::merge(const HbsSketch& a, const HbsSketch& b) {
  if (!(a.params_ == b.params_)) {
    throw ParamMismatchError("cannot merge sketches with different parameters");
  }
  const std::uint32_t width = a.params_.registers_per_bucket;
  std::vector<RankValue> ranks(a.params_.register_count());
  std::vector<RankValue> other(width);
  for (std::size_t k = 0; k < a.buckets_.size(); ++k) {
    const std::span<RankValue> dst(ranks.data() + k * width, width);
    a.buckets_[k].decode_all(*a.book_, dst);
    b.buckets_[k].decode_all(*b.book_, other);
    for (std::uint32_t j = 0; j < width; ++j) {
      dst[j] = std::max(dst[j], other[j]);
    }
  }
  const EstimatorState est = EstimatorState::from_ranks(ranks);
  const double n_hat = est.corrected_estimate();
  const double old = std::max(a.n_hat_old_, b.n_hat_old_);

  HbsCounters counters;
  counters.ordinary_updates = a.counters_.ordinary_updates + b.counters_.ordinary_updates;
  counters.register_writes = a.counters_.register_writes + b.counters_.register_writes;
  counters.min_recomputes = a.counters_.min_recomputes + b.counters_.min_recomputes;
  counters.rebuilds = a.counters_.rebuilds + b.counters_.rebuilds;
  counters.tree_changes = a.counters_.tree_changes + b.counters_.tree_changes;

  // Reuse the book of the operand whose codebook was built most recently.
  std::shared_ptr<const HuffmanCodebook> book = a.n_hat_old_ >= b.n_hat_old_ ? a.book_ : b.book_;
  double n_hat_old = old;
  if (rebuild_trigger(n_hat, old)) {
    auto next = a.book_for(n_hat);
    ++counters.rebuilds;
    if (!(*next == *book)) {
      ++counters.tree_changes;
    }
    book = std::move(next);
    n_hat_old = n_hat;
  }

  HbsSketch out(a.params_, a.options_, std::move(book));
  out.encode_registers(ranks);
  out.est_ = est;
  out.n_hat_ = n_hat;
  out.n_hat_old_ = n_hat_old;
  out.counters_ = counters;
  return out;
}

HbsSketch HbsSketch::from_hll(const HllSketch& hll, std::shared_ptr<const HuffmanCodebook> hint,
                              const HbsOptions& options) {
  const SketchParams& params = hll.params();
  if (hint && hint->alphabet_size() != std::size_t{params.max_rank} + 1) {
    throw ConfigError("codebook alphabet does not match max rank");
  }
  const EstimatorState est = hll.estimator_state();
  const double n_hat = est.corrected_estimate();
  const bool hinted = hint != nullptr;
  HbsSketch out(params, options, std::move(hint));
  if (!hinted) {
    out.book_ = out.book_for(n_hat);
  }
  out.encode_registers(hll.registers());
  out.est_ = est;
  out.n_hat_ = n_hat;
  out.n_hat_old_ = n_hat;
  return out;
}

HllSketch HbsSketch::to_hll() const {
  std::vector<RankValue> ranks(params_.register_count());
  const std::uint32_t width = params_.registers_per_bucket;
  for (std::size_t b = 0; b < buckets_.size(); ++b) {
    buckets_[b].decode_all(*book_, std::span<RankValue>(ranks.data() + b * width, width));
  }
  return HllSketch::from_registers(params_, std::move(ranks));
}

double HbsSketch::bucket_estimate(std::uint32_t bucket) const {
  if (bucket >= buckets_.size()) {
    throw DomainError("bucket " + std::to_string(bucket) + " out of range");
  }
  const std::vector<RankValue> ranks = buckets_.at(bucket).decode_all(*book_);
  return EstimatorState::from_ranks(ranks).corrected_estimate();
}

void HbsSketch::check_invariants() const {
  std::vector<RankValue> all;
  all.reserve(params_.register_count());
  for (const Bucket& b : buckets_) {
    if (b.registers() != params_.registers_per_bucket) {
      throw CorruptionError("bucket has the wrong register count");
    }
    b.check_consistency(*book_);
    const std::vector<RankValue> ranks = b.decode_all(*book_);
    all.insert(all.end(), ranks.begin(), ranks.end());
  }
  if (!(EstimatorState::from_ranks(all) == est_)) {
    throw CorruptionError("estimator state does not match the registers");
  }
  if (est_.corrected_estimate() != n_hat_) {
    throw CorruptionError("estimate is stale");
  }
}

SketchStats HbsSketch::stats() const {
  SketchStats s;
  s.buckets = buckets_.size();
  s.registers = params_.register_count();
  for (std::size_t k = 0; k < buckets_.size(); ++k) {
    const BucketBits bits = buckets_[k].bits();
    s.codeword_bits += bits.codeword_bits;
    s.unary_bits += bits.unary_bits;
    s.metadata_bits += bits.metadata_bits;
    s.max_bucket_codeword_bits = std::max<std::uint64_t>(s.max_bucket_codeword_bits, bits.codeword_bits);
    if (overflowed_[k]) {
      s.side_table_bits += kSideTableEntryOverheadBits + bits.codeword_bits;
    }
  }
  s.tree_bits = book_->serialize_tree().structure.size();
  s.estimate_bits = 2 * 64;
  s.overflowed_buckets = overflow_count_;
  s.unbounded_bits = s.codeword_bits + s.unary_bits + s.metadata_bits + s.tree_bits + s.estimate_bits;
  if (options_.bit_budget != 0) {
    s.budgeted_bits =
        s.buckets * (options_.bit_budget + bucket_metadata_bits(params_.registers_per_bucket)) + s.tree_bits +
        s.side_table_bits;
  }
  return s;
}

bool operator==(const HbsSketch& a, const HbsSketch& b) {
  return a.params_ == b.params_ && a.options_ == b.options_ && *a.book_ == *b.book_ && a.buckets_ == b.buckets_ &&
         a.n_hat_ == b.n_hat_ && a.n_hat_old_ == b.n_hat_old_ && a.est_ == b.est_ && a.counters_ == b.counters_ &&
         a.overflowed_ == b.overflowed_;
}

// Body after the shared header:
//   u32 bit budget, u8 flags
//   f64 n_hat, f64 n_hat_old
//   u8 leaf count, u16 tree bit count, tree bytes, leaf symbols (1 byte each)
//   u64 x5 counters
//   u64 bucket count, then per bucket:
//     u16 codeword bits, codeword bytes, u16 unary bits, unary bytes, u8 r_min, u16 c_min
std::vector<std::uint8_t> HbsSketch::serialize() const {
  wire::Writer w;
  wire::write_header(w, wire::FormatTag::kHbs, params_);
  w.u32(options_.bit_budget);
  w.u8(options_.skip_index ? kFlagSkipIndex : 0);
  w.f64(n_hat_);
  w.f64(n_hat_old_);

  const TreeEncoding tree = book_->serialize_tree();
  w.u8(static_cast<std::uint8_t>(tree.leaf_symbols.size()));
  w.u16(static_cast<std::uint16_t>(tree.structure.size()));
  w.bytes(tree.structure.to_bytes());
  w.bytes(tree.leaf_symbols);

  w.u64(counters_.ordinary_updates);
  w.u64(counters_.register_writes);
  w.u64(counters_.min_recomputes);
  w.u64(counters_.rebuilds);
  w.u64(counters_.tree_changes);

  w.u64(buckets_.size());
  for (const Bucket& b : buckets_) {
    if (b.unary().size() > 0xFFFF) {
      throw ConfigError("bucket too large for the container's 16-bit length fields");
    }
    w.u16(static_cast<std::uint16_t>(b.codewords().size()));
    w.bytes(b.codewords().to_bytes());
    w.u16(static_cast<std::uint16_t>(b.unary().size()));
    w.bytes(b.unary().to_bytes());
    w.u8(b.r_min());
    w.u16(static_cast<std::uint16_t>(b.c_min()));
  }
  return std::move(w).take();
}

HbsSketch HbsSketch::deserialize(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes);
  const SketchParams params = wire::read_header(r, wire::FormatTag::kHbs);
  HbsOptions options;
  options.bit_budget = r.u32();
  const std::uint8_t flags = r.u8();
  if ((flags & ~kFlagSkipIndex) != 0) {
    r.fail("unknown option flags");
  }
  options.skip_index = (flags & kFlagSkipIndex) != 0;
  const std::size_t estimates_at = r.offset();
  const double n_hat = r.f64();
  const double n_hat_old = r.f64();
  if (!(n_hat >= 0.0 && n_hat_old >= 0.0) || std::isinf(n_hat) || std::isinf(n_hat_old)) {
    throw FormatError("estimates must be finite and non-negative", estimates_at);
  }

  const std::size_t tree_at = r.offset();
  TreeEncoding tree;
  const std::uint8_t leaves = r.u8();
  const std::uint16_t tree_bits = r.u16();
  if (!BitVector::from_bytes(r.bytes((tree_bits + 7U) / 8U), tree_bits, tree.structure)) {
    throw FormatError("nonzero padding in tree bits", tree_at);
  }
  const auto symbols = r.bytes(leaves);
  tree.leaf_symbols.assign(symbols.begin(), symbols.end());
  std::shared_ptr<const HuffmanCodebook> book;
  try {
    book = std::make_shared<const HuffmanCodebook>(HuffmanCodebook::deserialize_tree(tree));
  } catch (const CorruptionError& e) {
    throw FormatError(std::string("bad codebook: ") + e.what(), tree_at);
  }
  if (book->alphabet_size() != std::size_t{params.max_rank} + 1) {
    throw FormatError("codebook alphabet does not match max rank", tree_at);
  }

  HbsCounters counters;
  counters.ordinary_updates = r.u64();
  counters.register_writes = r.u64();
  counters.min_recomputes = r.u64();
  counters.rebuilds = r.u64();
  counters.tree_changes = r.u64();

  const std::size_t count_at = r.offset();
  if (r.u64() != params.num_buckets()) {
    throw FormatError("bucket count does not match parameters", count_at);
  }
  HbsSketch out(params, options, book);
  std::vector<RankValue> ranks;
  ranks.reserve(params.register_count());
  for (std::size_t k = 0; k < out.buckets_.size(); ++k) {
    const std::size_t at = r.offset();
    BitVector codewords;
    BitVector unary;
    const std::uint16_t code_len = r.u16();
    if (!BitVector::from_bytes(r.bytes((code_len + 7U) / 8U), code_len, codewords)) {
      throw FormatError("nonzero padding in codeword bits", at);
    }
    const std::uint16_t unary_len = r.u16();
    if (!BitVector::from_bytes(r.bytes((unary_len + 7U) / 8U), unary_len, unary)) {
      throw FormatError("nonzero padding in unary bits", at);
    }
    const RankValue r_min = r.u8();
    const std::uint16_t c_min = r.u16();
    try {
      out.buckets_[k] = Bucket::from_parts(std::move(codewords), std::move(unary), r_min, c_min,
                                           params.registers_per_bucket, *book, options.skip_index);
      const std::vector<RankValue> decoded = out.buckets_[k].decode_all(*book);
      ranks.insert(ranks.end(), decoded.begin(), decoded.end());
    } catch (const CorruptionError& e) {
      throw FormatError(std::string("bad bucket ") + std::to_string(k) + ": " + e.what(), at);
    }
    out.refresh_overflow(k);
  }
  if (!r.done()) {
    r.fail("trailing bytes after bucket array");
  }
  if (std::any_of(ranks.begin(), ranks.end(), [&](RankValue v) { return v > params.max_rank; })) {
    throw FormatError("register value exceeds max rank", count_at);
  }
  out.est_ = EstimatorState::from_ranks(ranks);
  if (out.est_.corrected_estimate() != n_hat) {
    throw FormatError("stored estimate does not match the registers", estimates_at);
  }
  out.n_hat_ = n_hat;
  out.n_hat_old_ = n_hat_old;
  out.counters_ = counters;
  return out;
}

}  // namespace hbs
