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

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "doctest.h"
#include "selmer/census.hpp"
#include "selmer/errors.hpp"
#include "test_support.hpp"

using namespace selmer;
using selmer::testing::form;

namespace {

// f, f_x and f_t at (x0, t0) straight from the forms. At infinity the
// t-derivative is taken in the chart s = 1/t.
bool singular_at(const WeierstrassModel& m, Fq x0, std::optional<Fq> t0) {
  const Field& F = m.field();
  auto chart = [&](const BinaryForm& a) {
    return t0 ? a.dehomogenize() : a.dehomogenize_at_infinity();
  };
  const Fq t = t0.value_or(F.zero());
  const UniPoly a2 = chart(m.a2()), a4 = chart(m.a4()), a6 = chart(m.a6());
  const Fq A2 = a2.eval(t), A4 = a4.eval(t), A6 = a6.eval(t);
  const Fq x2 = F.mul(x0, x0);
  const Fq fv = F.add(F.add(F.add(F.mul(x2, x0), F.mul(A2, x2)), F.mul(A4, x0)), A6);
  const Fq fx = F.add(F.add(F.mul(F.from_int(3), x2), F.mul(F.from_int(2), F.mul(A2, x0))), A4);
  const Fq ft = F.add(F.add(F.mul(a2.derivative().eval(t), x2),
                            F.mul(a4.derivative().eval(t), x0)),
                      a6.derivative().eval(t));
  return fv == F.zero() && fx == F.zero() && ft == F.zero();
}

bool satisfies(const Field& F, const IncidenceMark& mark, const std::vector<std::uint64_t>& c) {
  for (const auto& row : mark.equations) {
    Fq s = F.zero();
    for (std::size_t j = 0; j < c.size(); ++j) s = F.add(s, F.mul(row[j], F.element(c[j])));
    if (s != row.back()) return false;
  }
  return true;
}

std::vector<std::optional<Fq>> rational_points(const Field& F) {
  std::vector<std::optional<Fq>> out;
  for (std::uint64_t i = 0; i < F.order(); ++i) out.push_back(F.element(i));
  out.push_back(std::nullopt);
  return out;
}

}  // namespace

TEST_CASE("enumeration order") {
  Field f = Field::make(5);
  CHECK(model_at_index(f, 1, 1).coordinates()[0] == 1);  // a_{2,0} fastest
  CHECK(model_at_index(f, 1, 5).coordinates()[1] == 1);
  SplitMix64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t idx = rng.below(checked_power(5, 15));
    CHECK(index_of(model_at_index(f, 1, idx)) == idx);
  }
  CHECK_THROWS_AS(model_at_index(f, 0, 125), PreconditionError);
  CHECK_THROWS_AS(checked_power(5, 40), BudgetExceeded);
}

TEST_CASE("incidence constraints have rank 3 and cut out singular points") {
  for (std::uint64_t p : {3, 5, 7}) {
    Field F = Field::make_odd(p);
    for (unsigned d : {1u, 2u}) {
      for (auto t0 : rational_points(F)) {
        for (std::uint64_t xi = 0; xi < p; ++xi) {
          const IncidenceMark mark = incidence_constraints(F, d, F.element(xi), t0);
          CHECK(mark.rank == 3);
        }
      }
    }
  }
  // Oracle: direct evaluation of the Jacobian at every rational base point.
  Field F = Field::make(5);
  SplitMix64 rng(2);
  int singular_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    WeierstrassModel m = random_model(F, 1, rng);
    const auto c = m.coordinates();
    bool any = false;
    for (auto t0 : rational_points(F)) {
      for (std::uint64_t xi = 0; xi < 5; ++xi) {
        const Fq x0 = F.element(xi);
        const bool want = singular_at(m, x0, t0);
        CHECK(satisfies(F, incidence_constraints(F, 1, x0, t0), c) == want);
        any = any || want;
      }
    }
    singular_seen += any;
    const SingularSearch s = singular_point_search(m);
    CHECK(s.rational == any);
    if (any) CHECK(s.singular);
  }
  CHECK(singular_seen > 10);
}

TEST_CASE("forced node at t = 0 with x0 = 1 is marked and found") {
  // Random model, then a_{4,0}, a_{6,0}, a_{6,1} solved so that
  // f(1) = f_x(1) = f_t(1) = 0 over t = 0.
  Field F = Field::make(7);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    WeierstrassModel base = random_model(F, 1, rng);
    auto c = base.coordinates();
    const Fq x0 = F.one();
    auto at = [&](std::size_t i) { return F.element(c[i]); };
    // Offsets: a2 at 0..2, a4 at 3..7, a6 at 8..14.
    // f_x(1) = 3 + 2 a_{2,0} + a_{4,0} = 0.
    const Fq a40 = F.neg(F.add(F.from_int(3), F.mul(F.from_int(2), at(0))));
    c[3] = a40.raw;
    // f(1) = 1 + a_{2,0} + a_{4,0} + a_{6,0} = 0.
    c[8] = F.neg(F.add(F.add(F.one(), at(0)), at(3))).raw;
    // f_t(1) = a_{2,1} + a_{4,1} + a_{6,1} = 0.
    c[9] = F.neg(F.add(at(1), at(4))).raw;
    WeierstrassModel m = WeierstrassModel::from_coordinates(F, 1, c);
    CHECK(singular_at(m, x0, F.zero()));
    CHECK(satisfies(F, incidence_constraints(F, 1, x0, F.zero()), c));
    const SingularSearch s = singular_point_search(m);
    CHECK(s.singular);
    CHECK(s.rational);
    if (is_minimal(m)) CHECK(!is_smooth_surface(m));
  }
}

TEST_CASE("squarefree discriminant: not marked and not singular") {
  Field F = Field::make(5);
  SplitMix64 rng(4);
  int seen = 0;
  while (seen < 50) {
    WeierstrassModel m = random_model(F, 1, rng);
    const BinaryForm disc = discriminant_form(m);
    if (disc.is_zero() || disc[12] == F.zero() || !is_squarefree(disc.dehomogenize())) continue;
    ++seen;
    CHECK(!singular_point_search(m).singular);
    for (auto t0 : rational_points(F)) {
      for (std::uint64_t xi = 0; xi < 5; ++xi) {
        CHECK(!satisfies(F, incidence_constraints(F, 1, F.element(xi), t0), m.coordinates()));
      }
    }
  }
}

TEST_CASE("direct search agrees with the Kodaira route") {
  Field F = Field::make(5);
  SplitMix64 rng(5);
  int singular = 0;
  for (int i = 0; i < 500; ++i) {
    WeierstrassModel m = random_minimal_model(F, 1, rng);
    const bool direct = singular_point_search(m).singular;
    CHECK(is_smooth_surface(m) == !direct);
    singular += direct;
  }
  CHECK(singular > 20);
}

TEST_CASE("exhaustive census at d = 0") {
  Field F = Field::make(5);
  CensusOptions opts;
  opts.mode = CensusMode::kExhaustive;
  const CensusReport r = run_census(F, 0, opts);
  CHECK(r.total == 125);
  // Oracle: constant models are minimal unless zero, and smooth exactly
  // when the integer discriminant formula is nonzero mod 5.
  std::uint64_t nonsingular = 0;
  for (std::int64_t a2 = 0; a2 < 5; ++a2)
    for (std::int64_t a4 = 0; a4 < 5; ++a4)
      for (std::int64_t a6 = 0; a6 < 5; ++a6) {
        const std::int64_t disc = -16 * (4 * a2 * a2 * a2 * a6 - a2 * a2 * a4 * a4 +
                                         4 * a4 * a4 * a4 + 27 * a6 * a6 - 18 * a2 * a4 * a6);
        nonsingular += disc % 5 != 0;
      }
  CHECK(r.minimal.count == 124);
  CHECK(r.smooth.count == nonsingular);
  CHECK(r.squarefree_disc.count == nonsingular);
  CHECK(r.minimal.radius == 0);
  CHECK(r.group_order == 20);
  CHECK(std::abs(r.stacky_count * 20 - 124) < 1e-9);
}

TEST_CASE("sampled census") {
  Field F = Field::make(5);
  CensusOptions opts;
  opts.samples = 10000;
  opts.seed = 1;
  const CensusReport a = run_census(F, 1, opts);
  // Non-minimal models are (q+1)(q^3-1)+1 of q^15 at d = 1, about 2e-8 at
  // q = 5, so a sample of this size is almost surely all minimal.
  CHECK(a.minimal.value > 0.5);
  CHECK(a.minimal.value <= 1.0);
  CHECK(a.smooth.value > 0.5);
  CHECK(a.smooth.value < 1.0);
  CHECK(a.smooth.count <= a.minimal.count);
  CHECK(a.squarefree_disc.count <= a.smooth.count);
  CHECK(a.smooth.radius > 0);
  opts.seed = 2;
  opts.threads = 3;
  const CensusReport b = run_census(F, 1, opts);
  auto se = [](const Proportion& p) { return p.radius / 1.96; };
  for (auto [x, y] : {std::pair{a.smooth, b.smooth}, std::pair{a.squarefree_disc, b.squarefree_disc}}) {
    CHECK(std::abs(x.value - y.value) <= 3 * std::hypot(se(x), se(y)));
  }
  opts.seed = 1;
  const CensusReport c = run_census(F, 1, opts);
  CHECK(c.smooth.count == a.smooth.count);
  CHECK(std::abs(a.stacky_count * a.group_order -
                 a.minimal.value * std::pow(5.0, 15)) < 1e-3 * std::pow(5.0, 15));

  opts.samples = 9999;
  CHECK_THROWS_AS(run_census(F, 1, opts), PreconditionError);
  opts.samples = 10000;
  CHECK_THROWS_AS(run_census(Field::make_odd(3), 1, opts), PreconditionError);
  opts.mode = CensusMode::kExhaustive;
  CHECK_THROWS_AS(run_census(F, 1, opts), BudgetExceeded);
}

TEST_CASE("divisor count falls back to sampling when marks do not fit") {
  DivisorCountOptions opts;
  opts.mark_budget_bits = 1000;
  opts.fallback_samples = 2000;
  const DivisorCountReport r = singular_divisor_count(Field::make_odd(3), 1, opts);
  CHECK(!r.image_count.has_value());
  CHECK(r.direct_sampled);
  CHECK(r.direct_examined == 2000);
  CHECK(r.direct_count >= r.rational_singular);
  CHECK(r.direct_count > 0);
  CHECK(!r.audit_passed);
  CHECK_THROWS_AS(singular_divisor_count(Field::make(5), 0, opts), PreconditionError);
}

TEST_CASE("orbit-stabilizer audit") {
  const StabilizerAudit a = orbit_stabilizer_audit(Field::make(5), 1, 20, 7);
  CHECK(a.group_order == 500);
  CHECK(a.passed);
  CHECK(a.weighted_sum_passed);
  for (const auto& e : a.entries) {
    CHECK(e.orbit_size * e.stabilizer_enumerated == 500);
    CHECK(e.stabilizer_enumerated == e.stabilizer_formula);
  }
  // A generic model has orbit 250 and stabilizer {(0, +-1)}.
  CHECK(a.entries[0].orbit_size == 250);
  CHECK_THROWS_AS(orbit_stabilizer_audit(Field::make_odd(3), 1, 1, 0), PreconditionError);
}

TEST_CASE("seeded smooth models") {
  Field F = Field::make(5);
  const WeierstrassModel a = seeded_smooth_model(F, 1, 0);
  CHECK(a == seeded_smooth_model(F, 1, 0));
  CHECK(is_minimal(a));
  CHECK(is_smooth_surface(a));
  CHECK(!(a == seeded_smooth_model(F, 1, 0, 1)));
}
