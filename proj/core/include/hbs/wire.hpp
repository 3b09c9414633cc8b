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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hbs/hashing.hpp"

namespace hbs::wire {

// Container layout shared by both sketch kinds (all integers little-endian):
//
//   [4]  magic "HBS1"
//   [1]  format tag (FormatTag)
//   [8]  m
//   [4]  registers per bucket
//   [1]  rank width
//   [1]  max rank
//   ...  format-specific body
inline constexpr std::uint8_t kMagic[4] = {'H', 'B', 'S', '1'};

enum class FormatTag : std::uint8_t {
  kHll = 1,
  kHbs = 2,
};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  [[nodiscard]] std::vector<std::uint8_t> take() && { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

// Bounds-checked reader; every failure throws FormatError with the offset.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::span<const std::uint8_t> bytes(std::size_t n);

  [[nodiscard]] std::size_t offset() const noexcept { return pos_; }
  [[nodiscard]] bool done() const noexcept { return pos_ == in_.size(); }
  [[noreturn]] void fail(const char* what) const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, FormatTag tag, const SketchParams& params);
// Validates magic and tag and returns the decoded parameters.
SketchParams read_header(Reader& r, FormatTag expected);

}  // namespace hbs::wire
