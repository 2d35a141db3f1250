// Copyright 2026 The selmer-ff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELMER_TOOLS_CLI_HPP
#define SELMER_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "selmer/lattice.hpp"

namespace selmer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitValidation = 2;

inline constexpr const char* kReportSchema = "selmer-report/1";

/// Parses and dispatches one command line. Reports go to --out or to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct AverageRow {
  std::uint32_t n = 1;
  unsigned d = 2;
  std::uint64_t value = 0;
  std::string provenance;
  /// Orbit decomposition backing the row, when one fits the budget.
  std::optional<OrbitReport> evidence;
};

/// d = 1 rows count W(E8) orbits; d >= 2 rows take sigma(n) and attach an
/// exhaustive orbit count when n^(12d-4) fits `vector_budget`.
AverageRow average_row(std::uint32_t n, unsigned d, std::uint64_t vector_budget,
                       std::uint64_t seed);

}  // namespace selmer::cli

#endif  // SELMER_TOOLS_CLI_HPP
