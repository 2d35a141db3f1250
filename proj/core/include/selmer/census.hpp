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

// Statistics over the parameter space A^(12d+3)(F_q) of short Weierstrass
// equations of height d.

#ifndef SELMER_CENSUS_HPP
#define SELMER_CENSUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selmer/field.hpp"
#include "selmer/rng.hpp"
#include "selmer/weierstrass.hpp"

namespace selmer {

/// Number of coordinates, 12d + 3.
inline unsigned parameter_dimension(unsigned d) { return 12 * d + 3; }

/// q^e, or BudgetExceeded when it does not fit in 64 bits.
std::uint64_t checked_power(std::uint64_t q, unsigned e);

/// Model number `index` in the fixed enumeration order: coordinates as in
/// WeierstrassModel::from_coordinates, coordinate 0 (a_{2,0}) varying fastest.
WeierstrassModel model_at_index(const Field& f, unsigned d, std::uint64_t index);
std::uint64_t index_of(const WeierstrassModel& m);

/// Uniform over all coordinate vectors.
WeierstrassModel random_model(const Field& f, unsigned d, SplitMix64& rng);
/// Uniform over minimal models, by rejection.
WeierstrassModel random_minimal_model(const Field& f, unsigned d, SplitMix64& rng);
/// Uniform over smooth minimal models, by rejection.
WeierstrassModel random_smooth_model(const Field& f, unsigned d, SplitMix64& rng);
/// Model i of a seeded run: random_smooth_model on SplitMix64::stream(seed, i).
WeierstrassModel seeded_smooth_model(const Field& f, unsigned d,
                                     std::uint64_t seed, std::uint64_t i = 0);

enum class CensusMode { kExhaustive, kSample };
std::string to_string(CensusMode mode);

struct Proportion {
  std::uint64_t count = 0;
  double value = 0;
  double radius = 0;  // 95% normal-approximation half width; 0 when exact
};

struct CensusOptions {
  CensusMode mode = CensusMode::kSample;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t exhaustive_budget = std::uint64_t{1} << 28;
};

struct CensusReport {
  std::string field;
  unsigned d = 0;
  CensusMode mode = CensusMode::kSample;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;  // models examined
  Proportion minimal;
  Proportion smooth;           // minimal with every fiber I_0, I_1 or II
  Proportion squarefree_disc;  // disc a nonzero squarefree form
  /// #minimal / #G(F_q); estimated from the minimal fraction when sampling.
  double stacky_count = 0;
  std::uint64_t group_order = 0;
  double seconds = 0;
};

/// Requires p >= 5. Exhaustive mode needs q^(12d+3) <= exhaustive_budget;
/// sampling needs at least 10^4 samples.
CensusReport run_census(const Field& f, unsigned d, const CensusOptions& opts);

/// The three affine-linear conditions on the 12d+3 coordinates saying that
/// (x0, 0) is a singular point of the surface over the rational point P.
struct IncidenceMark {
  Fq x0;
  std::optional<Fq> t0;  // nullopt: the point at infinity
  /// Rows are [coefficients..., right-hand side].
  std::vector<std::vector<Fq>> equations;
  unsigned rank = 0;
};

IncidenceMark incidence_constraints(const Field& f, unsigned d, Fq x0,
                                    std::optional<Fq> t0);

struct DivisorCountOptions {
  unsigned threads = 1;
  std::uint64_t mark_budget_bits = std::uint64_t{1} << 31;  // 256 MB
  std::uint64_t fallback_samples = 100000;
  std::uint64_t seed = 0;
};

struct DivisorCountReport {
  std::string field;
  unsigned d = 0;
  std::uint64_t total = 0;  // q^(12d+3)
  /// Union of the marked codimension-3 subspaces, when the marks fit.
  std::optional<std::uint64_t> image_count;
  double image_ratio = 0;  // image_count / q^(12d+2)
  double log_q_image = 0;
  std::uint64_t base_points = 0;
  std::uint64_t mark_bytes = 0;

  /// Exhaustive direct search when marks fit, otherwise a sample.
  bool direct_sampled = false;
  std::uint64_t direct_examined = 0;
  std::uint64_t direct_count = 0;       // singular surfaces
  std::uint64_t rational_singular = 0;  // with a singular point over P^1(F_q)
  std::uint64_t generic_singular = 0;   // disc identically zero
  std::uint64_t minimal_count = 0;

  // Containment audit, exhaustive only.
  std::uint64_t marked_not_singular = 0;     // must be 0
  std::uint64_t marked_not_rational = 0;     // must be 0
  std::uint64_t rational_not_marked = 0;     // must be 0
  std::uint64_t singular_only_irrational = 0;
  bool audit_passed = false;
  double seconds = 0;
};

/// Incidence count plus direct count. Any odd characteristic: at p = 3 only
/// linear algebra and the Jacobian search run, never the Kodaira table.
DivisorCountReport singular_divisor_count(const Field& f, unsigned d,
                                          const DivisorCountOptions& opts);

struct AuditEntry {
  std::vector<std::uint64_t> coordinates;
  std::uint64_t orbit_size = 0;
  std::uint64_t stabilizer_enumerated = 0;
  std::uint64_t stabilizer_formula = 0;
  bool passed = false;
};

struct StabilizerAudit {
  std::string field;
  unsigned d = 0;
  std::uint64_t group_order = 0;
  std::vector<AuditEntry> entries;
  /// Over the union S of the enumerated orbits: sum of |Stab| over S equals
  /// #orbits * |G|, i.e. sum over S of 1/|orbit| counts the orbits.
  std::uint64_t distinct_orbits = 0;
  bool weighted_sum_passed = false;
  bool passed = false;
};

/// Enumerates the full G(F_q)-orbit of `count` random minimal models.
StabilizerAudit orbit_stabilizer_audit(const Field& f, unsigned d, unsigned count,
                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace selmer

#endif  // SELMER_CENSUS_HPP
