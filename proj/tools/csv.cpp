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

#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace hbs::experiments {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Csv::Row& Csv::Row::operator<<(const std::string& v) {
  cells_.push_back(v);
  return *this;
}

Csv::Row& Csv::Row::operator<<(double v) {
  cells_.push_back(format_number(v));
  return *this;
}

Csv::Row& Csv::Row::operator<<(std::uint64_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

Csv::Row& Csv::Row::operator<<(std::int64_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

Csv::Row& Csv::row() { return rows_.emplace_back(); }

void Csv::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(header_);
  for (const Row& r : rows_) line(r.cells_);
}

void Csv::write_table(std::ostream& os) const {
  std::vector<std::size_t> width(header_.size(), 0);
  for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
  for (const Row& r : rows_) {
    for (std::size_t i = 0; i < r.cells_.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r.cells_[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) os << "  ";
      os << std::string(width[i] - std::min(width[i], cells[i].size()), ' ') << cells[i];
    }
    os << '\n';
  };
  line(header_);
  for (const Row& r : rows_) line(r.cells_);
}

std::string Csv::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace hbs::experiments
