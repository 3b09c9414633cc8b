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

#include "hbs/wire.hpp"

#include <bit>
#include <cstring>

#include "hbs/errors.hpp"

namespace hbs::wire {

void Writer::u16(std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Writer::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void Reader::need(std::size_t n) const {
  if (in_.size() - pos_ < n) {
    throw FormatError("truncated container", pos_);
  }
}

void Reader::fail(const char* what) const { throw FormatError(what, pos_); }

std::uint8_t Reader::u8() {
  need(1);
  return in_[pos_++];
}

std::uint16_t Reader::u16() {
  need(2);
  std::uint16_t v = 0;
  for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(in_[pos_++] << (8 * i));
  return v;
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

std::span<const std::uint8_t> Reader::bytes(std::size_t n) {
  need(n);
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void write_header(Writer& w, FormatTag tag, const SketchParams& params) {
  w.bytes(kMagic);
  w.u8(static_cast<std::uint8_t>(tag));
  w.u64(params.m);
  w.u32(params.registers_per_bucket);
  w.u8(static_cast<std::uint8_t>(params.rank_width));
  w.u8(params.max_rank);
}

SketchParams read_header(Reader& r, FormatTag expected) {
  const auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic", 0);
  }
  const std::size_t tag_at = r.offset();
  const std::uint8_t tag = r.u8();
  if (tag != static_cast<std::uint8_t>(expected)) {
    throw FormatError("unexpected format tag " + std::to_string(tag), tag_at);
  }
  const std::size_t params_at = r.offset();
  SketchParams p;
  p.m = r.u64();
  p.registers_per_bucket = r.u32();
  p.rank_width = r.u8();
  p.max_rank = r.u8();
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid parameters: ") + e.what(), params_at);
  }
  return p;
}

}  // namespace hbs::wire
