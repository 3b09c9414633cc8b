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
#include <iosfwd>
#include <string>
#include <vector>

namespace hbs::experiments {

// Comma-separated, header row first, LF line endings. Numbers are written in
// their shortest round-trip form so output is byte-stable.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(const std::string& v);
    Row& operator<<(const char* v) { return *this << std::string(v); }
    Row& operator<<(double v);
    Row& operator<<(std::uint64_t v);
    Row& operator<<(std::int64_t v);
    Row& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
    Row& operator<<(unsigned v) { return *this << static_cast<std::uint64_t>(v); }

   private:
    friend class Csv;
    std::vector<std::string> cells_;
  };

  Row& row();

  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

  void write(std::ostream& os) const;
  // Space-aligned columns for terminals.
  void write_table(std::ostream& os) const;
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

[[nodiscard]] std::string format_number(double v);

}  // namespace hbs::experiments
