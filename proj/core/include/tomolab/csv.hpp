// Copyright 2026 The tomolab Authors
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
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace tomolab {

/// One CSV cell. Doubles are written in shortest round-trip form, so output is
/// byte-stable for identical inputs.
using CsvCell = std::variant<std::string, std::int64_t, std::uint64_t, double>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(std::initializer_list<CsvCell> cells);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

/// Parsed CSV file: header plus rows of raw cell text. Used by tests and tooling.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace tomolab
