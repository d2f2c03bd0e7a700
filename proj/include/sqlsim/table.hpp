// Copyright 2026 The sqlsim Authors
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

#include <string>
#include <variant>
#include <vector>

namespace sqlsim {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

// Comma-separated table with a header row; doubles use shortest round-trip
// formatting so identical runs produce byte-identical files.
class Table {
  public:
    using Cell = std::variant<double, long long, unsigned long long, bool, std::string>;

    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<Cell> cells);
    std::string to_csv() const;
    void write_csv(const std::string& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sqlsim
