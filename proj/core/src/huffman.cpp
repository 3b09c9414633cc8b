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

#include "hbs/huffman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "hbs/errors.hpp"
#include "hbs/rank_model.hpp"

namespace hbs {

namespace {

// Construction weight: a real probability plus an infinitesimal part that
// only breaks ties among zero-probability symbols.
struct Weight {
  double p = 0.0;
  double eps = 0.0;

  friend bool operator<(const Weight& a, const Weight& b) noexcept {
    return std::tie(a.p, a.eps) < std::tie(b.p, b.eps);
  }
  friend Weight operator+(const Weight& a, const Weight& b) noexcept { return {a.p + b.p, a.eps + b.eps}; }
};

std::vector<Weight> construction_weights(std::span<const double> pmf) {
  const std::size_t n = pmf.size();
  std::size_t mode = 0;
  for (std::size_t r = 1; r < n; ++r) {
    if (pmf[r] > pmf[mode]) {
      mode = r;
    }
  }
  // Rarest first: left of the mode ascending, right of the mode descending.
  std::vector<std::size_t> zeros;
  for (std::size_t r = 0; r < mode; ++r) {
    if (pmf[r] == 0.0) {
      zeros.push_back(r);
    }
  }
  for (std::size_t r = n; r-- > mode + 1;) {
    if (pmf[r] == 0.0) {
      zeros.push_back(r);
    }
  }
  std::vector<Weight> w(n);
  for (std::size_t r = 0; r < n; ++r) {
    w[r].p = pmf[r];
  }
  const auto k = static_cast<int>(zeros.size());
  for (int i = 0; i < k; ++i) {
    w[zeros[i]].eps = std::ldexp(1.0, i - k);
  }
  return w;
}

std::vector<std::uint8_t> huffman_lengths(std::span<const double> pmf) {
  const std::size_t n = pmf.size();
  if (n == 1) {
    return {0};
  }
  const std::vector<Weight> weights = construction_weights(pmf);

  std::vector<std::uint32_t> leaves(n);
  std::iota(leaves.begin(), leaves.end(), 0U);
  std::sort(leaves.begin(), leaves.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (weights[a] < weights[b]) return true;
    if (weights[b] < weights[a]) return false;
    return a < b;
  });

  // Nodes 0..n-1 are leaves (indexed by symbol), n.. are internal in
  // creation order, so the internal queue is just a moving index.
  std::vector<Weight> node_weight(weights);
  node_weight.reserve(2 * n - 1);
  std::vector<std::uint32_t> parent(2 * n - 1, 0);
  std::size_t next_leaf = 0;
  std::size_t next_internal = n;

  auto pop = [&]() -> std::uint32_t {
    const bool have_leaf = next_leaf < n;
    const bool have_internal = next_internal < node_weight.size();
    if (have_leaf && (!have_internal || !(node_weight[next_internal] < node_weight[leaves[next_leaf]]))) {
      return leaves[next_leaf++];
    }
    return static_cast<std::uint32_t>(next_internal++);
  };

  for (std::size_t merges = 0; merges + 1 < n; ++merges) {
    const std::uint32_t a = pop();
    const std::uint32_t b = pop();
    const auto id = static_cast<std::uint32_t>(node_weight.size());
    node_weight.push_back(node_weight[a] + node_weight[b]);
    parent[a] = id;
    parent[b] = id;
  }

  const std::size_t root = node_weight.size() - 1;
  std::vector<std::uint8_t> depth(node_weight.size(), 0);
  for (std::size_t v = root; v-- > 0;) {
    depth[v] = static_cast<std::uint8_t>(depth[parent[v]] + 1);
  }
  return {depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

HuffmanCodebook::HuffmanCodebook() : HuffmanCodebook(std::vector<std::uint8_t>{0}) {}

HuffmanCodebook HuffmanCodebook::build(const RankModel& model) { return build(model.pmf()); }

HuffmanCodebook HuffmanCodebook::build(std::span<const double> pmf) {
  if (pmf.empty() || pmf.size() > kAlphabetSize) {
    throw ModelError("pmf must have between 1 and 64 entries");
  }
  double total = 0.0;
  for (const double p : pmf) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ModelError("pmf entries must lie in [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ModelError("pmf does not sum to 1");
  }
  return HuffmanCodebook(huffman_lengths(pmf));
}

HuffmanCodebook HuffmanCodebook::from_lengths(std::span<const std::uint8_t> lengths) {
  if (lengths.empty() || lengths.size() > kAlphabetSize) {
    throw CorruptionError("codebook must have between 1 and 64 symbols");
  }
  if (lengths.size() == 1) {
    if (lengths[0] != 0) {
      throw CorruptionError("single-symbol codebook must have an empty codeword");
    }
    return HuffmanCodebook(std::vector<std::uint8_t>{0});
  }
  unsigned __int128 kraft = 0;
  for (const std::uint8_t len : lengths) {
    if (len == 0 || len > 63) {
      throw CorruptionError("codeword length " + std::to_string(len) + " outside [1, 63]");
    }
    kraft += static_cast<unsigned __int128>(1) << (63 - len);
  }
  if (kraft != static_cast<unsigned __int128>(1) << 63) {
    throw CorruptionError("codeword lengths violate Kraft equality");
  }
  return HuffmanCodebook(std::vector<std::uint8_t>(lengths.begin(), lengths.end()));
}

HuffmanCodebook::HuffmanCodebook(std::vector<std::uint8_t> lengths) : lengths_(std::move(lengths)) {
  const std::size_t n = lengths_.size();
  codes_.assign(n, Codeword{});
  sorted_symbols_.resize(n);
  std::iota(sorted_symbols_.begin(), sorted_symbols_.end(), RankValue{0});
  std::stable_sort(sorted_symbols_.begin(), sorted_symbols_.end(),
                   [&](RankValue a, RankValue b) { return lengths_[a] < lengths_[b]; });

  min_length_ = lengths_[sorted_symbols_.front()];
  max_length_ = lengths_[sorted_symbols_.back()];
  for (const RankValue s : sorted_symbols_) {
    ++count_[lengths_[s]];
  }

  std::uint64_t code = 0;
  std::uint32_t offset = 0;
  for (unsigned len = 1; len <= 64; ++len) {
    code = (code + count_[len - 1]) << 1;
    if (len == 1) {
      code = 0;
    }
    first_code_[len] = code;
    offset_[len] = offset + count_[0];
    offset += count_[len];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const RankValue s = sorted_symbols_[i];
    const unsigned len = lengths_[s];
    const std::size_t index = i - offset_[len];
    codes_[s] = Codeword{first_code_[len] + index, len};
  }

  tree_.assign(1, Node{});
  if (n == 1) {
    tree_[0].symbol = 0;
  } else {
    for (std::size_t s = 0; s < n; ++s) {
      const Codeword& cw = codes_[s];
      std::int32_t v = 0;
      for (unsigned k = 0; k < cw.length; ++k) {
        const unsigned bit = (cw.bits >> (cw.length - 1 - k)) & 1U;
        if (tree_[v].child[bit] < 0) {
          tree_[v].child[bit] = static_cast<std::int32_t>(tree_.size());
          tree_.push_back(Node{});
        }
        v = tree_[v].child[bit];
      }
      tree_[v].symbol = static_cast<std::int32_t>(s);
    }
  }

  for (std::size_t s = 0; s < n; ++s) {
    const Codeword& cw = codes_[s];
    if (cw.length == 0 || cw.length > kLutBits) {
      continue;
    }
    const unsigned free_bits = kLutBits - cw.length;
    const std::size_t base = static_cast<std::size_t>(cw.bits) << free_bits;
    for (std::size_t k = 0; k < (std::size_t{1} << free_bits); ++k) {
      lut_[base + k] = LutEntry{static_cast<RankValue>(s), static_cast<std::uint8_t>(cw.length)};
    }
  }
}

const Codeword& HuffmanCodebook::encode(RankValue r) const {
  if (r >= codes_.size()) {
    throw DomainError("rank " + std::to_string(r) + " outside the codebook alphabet");
  }
  return codes_[r];
}

DecodedSymbol HuffmanCodebook::decode(const BitVector& bits, std::size_t pos, std::size_t end) const {
  if (max_length_ == 0) {
    return DecodedSymbol{0, 0};
  }
  const std::size_t available = end > pos ? end - pos : 0;
  const std::uint64_t window = bits.peek_window(pos);
  const LutEntry& hit = lut_[window >> (64 - kLutBits)];
  if (hit.length != 0 && hit.length <= available) {
    return DecodedSymbol{hit.symbol, hit.length};
  }
  for (unsigned len = min_length_; len <= max_length_ && len <= available; ++len) {
    if (count_[len] == 0) {
      continue;
    }
    const std::uint64_t code = window >> (64 - len);
    if (code >= first_code_[len] && code - first_code_[len] < count_[len]) {
      return DecodedSymbol{sorted_symbols_[offset_[len] + (code - first_code_[len])], len};
    }
  }
  throw CorruptionError("bit stream ends inside a codeword at bit " + std::to_string(pos));
}

DecodedSymbol HuffmanCodebook::decode_tree_walk(const BitVector& bits, std::size_t pos, std::size_t end) const {
  std::int32_t v = 0;
  unsigned len = 0;
  while (tree_[v].symbol < 0) {
    if (pos + len >= end) {
      throw CorruptionError("bit stream ends inside a codeword at bit " + std::to_string(pos));
    }
    v = tree_[v].child[bits.test(pos + len) ? 1 : 0];
    ++len;
  }
  return DecodedSymbol{static_cast<RankValue>(tree_[v].symbol), len};
}

double HuffmanCodebook::expected_length(std::span<const double> pmf) const noexcept {
  double e = 0.0;
  for (std::size_t r = 0; r < pmf.size() && r < lengths_.size(); ++r) {
    e += pmf[r] * lengths_[r];
  }
  return e;
}

double HuffmanCodebook::kraft_sum() const noexcept {
  if (lengths_.size() == 1) {
    return 1.0;
  }
  unsigned __int128 k = 0;  // in units of 2^-63
  for (const std::uint8_t len : lengths_) {
    k += static_cast<unsigned __int128>(1) << (63 - len);
  }
  return std::ldexp(static_cast<double>(k), -63);
}

void HuffmanCodebook::emit_preorder(std::int32_t node, TreeEncoding& out) const {
  const Node& nd = tree_[node];
  if (nd.symbol >= 0) {
    out.structure.append(0, 1);
    out.leaf_symbols.push_back(static_cast<RankValue>(nd.symbol));
    return;
  }
  out.structure.append(1, 1);
  emit_preorder(nd.child[0], out);
  emit_preorder(nd.child[1], out);
}

TreeEncoding HuffmanCodebook::serialize_tree() const {
  TreeEncoding out;
  out.structure.reserve(2 * lengths_.size() - 1);
  emit_preorder(0, out);
  return out;
}

HuffmanCodebook HuffmanCodebook::deserialize_tree(const TreeEncoding& encoding) {
  const BitVector& bits = encoding.structure;
  const std::size_t leaves = encoding.leaf_symbols.size();
  if (leaves == 0 || leaves > kAlphabetSize) {
    throw CorruptionError("tree must have between 1 and 64 leaves");
  }
  if (bits.size() != 2 * leaves - 1) {
    throw CorruptionError("tree shape has " + std::to_string(bits.size()) + " bits, expected " +
                          std::to_string(2 * leaves - 1));
  }
  // Stack of depths of nodes still waiting to be read.
  std::vector<std::uint8_t> pending{0};
  std::vector<std::uint8_t> depths;
  std::size_t pos = 0;
  while (!pending.empty()) {
    if (pos >= bits.size()) {
      throw CorruptionError("tree shape ends before the tree is complete");
    }
    const std::uint8_t d = pending.back();
    pending.pop_back();
    if (bits.test(pos++)) {
      if (d >= 63) {
        throw CorruptionError("tree deeper than 63 levels");
      }
      pending.push_back(static_cast<std::uint8_t>(d + 1));
      pending.push_back(static_cast<std::uint8_t>(d + 1));
    } else {
      depths.push_back(d);
    }
  }
  if (pos != bits.size() || depths.size() != leaves) {
    throw CorruptionError("tree shape and leaf list disagree");
  }
  std::vector<std::uint8_t> lengths(leaves, 0xFF);
  for (std::size_t i = 0; i < leaves; ++i) {
    const RankValue s = encoding.leaf_symbols[i];
    if (s >= leaves || lengths[s] != 0xFF) {
      throw CorruptionError("leaf symbols are not a permutation");
    }
    lengths[s] = depths[i];
  }
  HuffmanCodebook book = from_lengths(lengths);
  if (!(book.serialize_tree() == encoding)) {
    throw CorruptionError("tree is not in canonical form");
  }
  return book;
}

}  // namespace hbs
