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

#include <cstdint>
#include <vector>

#include "doctest.h"
#include "selmer/errors.hpp"
#include "selmer/localdata.hpp"
#include "selmer/weierstrass.hpp"
#include "test_support.hpp"

using namespace selmer;
using selmer::testing::form;
using selmer::testing::random_form;
using selmer::testing::random_model;

namespace {

// Discriminant evaluated from coefficient values, term by term.
Fq disc_value(const Field& K, Fq a2, Fq a4, Fq a6) {
  auto c = [&](std::int64_t v) { return K.from_int(v); };
  Fq t1 = K.mul(c(4), K.mul(K.mul(K.sqr(a2), a2), a6));
  Fq t2 = K.mul(K.sqr(a2), K.sqr(a4));
  Fq t3 = K.mul(c(4), K.mul(K.sqr(a4), a4));
  Fq t4 = K.mul(c(27), K.sqr(a6));
  Fq t5 = K.mul(c(18), K.mul(K.mul(a2, a4), a6));
  Fq inner = K.sub(K.add(K.add(K.sub(t1, t2), t3), t4), t5);
  return K.mul(c(-16), inner);
}

Fq eval_embedded(const BinaryForm& f, const Embedding& e, Fq s, Fq t) {
  const Field& K = e.target();
  Fq acc = K.zero();
  for (unsigned j = 0; j <= f.degree(); ++j) {
    acc = K.add(acc, K.mul(e(f[j]), K.mul(K.pow(t, j), K.pow(s, f.degree() - j))));
  }
  return acc;
}

// Lowest power of (t - c) in the form's dehomogenization, via Taylor
// coefficients computed by synthetic division; infinite for zero.
unsigned brute_ord(const BinaryForm& f, std::int64_t c, bool infinity) {
  if (f.is_zero()) return 1000;
  const Field& F = f.field();
  if (infinity) {
    unsigned k = 0;
    while (f[f.degree() - k] == F.zero()) ++k;
    return k;
  }
  std::vector<Fq> p(f.coeffs());
  unsigned k = 0;
  const Fq r = F.from_int(c);
  while (true) {
    // Divide by (t - r): remainder is p(r).
    Fq rem = F.zero();
    std::vector<Fq> q(p.size(), F.zero());
    for (std::size_t i = p.size(); i-- > 0;) {
      rem = F.add(F.mul(rem, r), p[i]);
      if (i) q[i - 1] = rem;
    }
    if (rem != F.zero()) return k;
    q.pop_back();
    p = q;
    ++k;
  }
}

bool brute_minimal_d1(const WeierstrassModel& m) {
  const auto q = static_cast<std::int64_t>(m.field().order());
  for (std::int64_t c = 0; c <= q; ++c) {
    const bool inf = c == q;
    if (brute_ord(m.a2(), c, inf) >= 2 && brute_ord(m.a4(), c, inf) >= 4 &&
        brute_ord(m.a6(), c, inf) >= 6) {
      return false;
    }
  }
  return true;
}

BinaryForm power(const BinaryForm& f, unsigned e) {
  BinaryForm out = form(f.field(), 0, {1});
  for (unsigned i = 0; i < e; ++i) out = out * f;
  return out;
}

GroupElement random_group_element(const Field& f, unsigned d, SplitMix64& rng) {
  return {random_form(f, 2 * d, rng), f.element(1 + rng.below(f.order() - 1))};
}

// Stabilizer by enumerating all of G(F_q).
std::uint64_t brute_stabilizer(const WeierstrassModel& m) {
  const Field& f = m.field();
  const unsigned d = m.height();
  std::uint64_t count = 0;
  std::uint64_t nr = 1;
  for (unsigned i = 0; i < 2 * d + 1; ++i) nr *= f.order();
  for (std::uint64_t l = 1; l < f.order(); ++l) {
    for (std::uint64_t idx = 0; idx < nr; ++idx) {
      std::vector<Fq> r;
      std::uint64_t v = idx;
      for (unsigned i = 0; i < 2 * d + 1; ++i) {
        r.push_back(f.element(v % f.order()));
        v /= f.order();
      }
      GroupElement g{BinaryForm(f, 2 * d, r), f.element(l)};
      if (act(g, m) == m) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("model construction validates degrees") {
  Field f = Field::make(5);
  CHECK_THROWS_AS(WeierstrassModel(1, form(f, 2, {}), form(f, 3, {}), form(f, 6, {})),
                  PreconditionError);
  CHECK_THROWS_AS(WeierstrassModel::from_coordinates(f, 1, {1, 2}),
                  PreconditionError);
  SplitMix64 rng(1);
  auto m = random_model(f, 2, rng);
  CHECK(WeierstrassModel::from_coordinates(f, 2, m.coordinates()) == m);
}

TEST_CASE("discriminant special cases") {
  Field f = Field::make(5);
  SplitMix64 rng(2);
  BinaryForm g = random_form(f, 6, rng);
  WeierstrassModel m1(1, form(f, 2, {}), form(f, 4, {}), g);
  CHECK(discriminant_form(m1) == (g * g).scaled(f.from_int(-16 * 27)));
  BinaryForm h = random_form(f, 4, rng);
  WeierstrassModel m2(1, form(f, 2, {}), h, form(f, 6, {}));
  CHECK(discriminant_form(m2) == (h * h * h).scaled(f.from_int(-16 * 4)));
  WeierstrassModel zero(1, form(f, 2, {}), form(f, 4, {}), form(f, 6, {}));
  CHECK_THROWS_WITH_AS(discriminant(zero), "singular generic fiber",
                       PreconditionError);
}

TEST_CASE("discriminant agrees with pointwise expansion over F_25") {
  Field f = Field::make(5);
  Field K = Field::make(5, 2);
  Embedding e(f, K);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_model(f, 1, rng);
    BinaryForm disc = discriminant_form(m);
    CHECK(disc.degree() == 12);
    // 13 points of P^1(F_25) determine a degree-12 form.
    std::vector<std::pair<Fq, Fq>> pts = {{K.zero(), K.one()}};
    for (std::uint64_t i = 0; pts.size() < 13; i += 2) {
      pts.push_back({K.one(), K.element(i)});
    }
    for (auto [s, t] : pts) {
      Fq want = disc_value(K, eval_embedded(m.a2(), e, s, t),
                           eval_embedded(m.a4(), e, s, t),
                           eval_embedded(m.a6(), e, s, t));
      CHECK(eval_embedded(disc, e, s, t) == want);
    }
  }
}

TEST_CASE("c4, c6 and disc satisfy 1728 disc = c4^3 - c6^2") {
  Field f = Field::make(11);
  SplitMix64 rng(4);
  for (int i = 0; i < 50; ++i) {
    auto m = random_model(f, 1, rng);
    BinaryForm c4 = c4_form(m), c6 = c6_form(m);
    CHECK(discriminant_form(m).scaled(f.from_int(1728)) == c4 * c4 * c4 - c6 * c6);
  }
}

TEST_CASE("is_minimal examples") {
  Field f = Field::make(5);
  SplitMix64 rng(5);
  BinaryForm t = form(f, 1, {0, 1});
  BinaryForm s = form(f, 1, {1});
  WeierstrassModel nonmin(1, power(t, 2).scaled(f.from_int(2)),
                          power(t, 4).scaled(f.from_int(3)),
                          power(t, 6).scaled(f.from_int(1)));
  CHECK_FALSE(is_minimal(nonmin));
  WeierstrassModel at_inf(1, power(s, 2), form(f, 4, {}), power(s, 6));
  CHECK_FALSE(is_minimal(at_inf));
  // a6 squarefree of degree 6 forces minimality.
  for (int i = 0; i < 100; ++i) {
    auto m = random_model(f, 1, rng);
    if (m.a6()[6] != f.zero() && is_squarefree(m.a6().dehomogenize())) {
      CHECK(is_minimal(m));
    }
  }
}

TEST_CASE("is_minimal matches brute-force place enumeration") {
  Field f = Field::make(5);
  SplitMix64 rng(6);
  int nonminimal = 0;
  for (int i = 0; i < 10000; ++i) {
    WeierstrassModel m = random_model(f, 1, rng);
    if (rng.below(2)) {
      // Plant a non-minimal place, then maybe perturb one coefficient.
      BinaryForm l = rng.below(6) == 5 ? form(f, 1, {1})
                                       : form(f, 1, {static_cast<std::int64_t>(rng.below(5)), 1});
      auto coords = WeierstrassModel(1, power(l, 2) * random_form(f, 0, rng),
                                     power(l, 4) * random_form(f, 0, rng),
                                     power(l, 6) * random_form(f, 0, rng))
                        .coordinates();
      if (rng.below(2)) coords[rng.below(coords.size())] = rng.below(5);
      m = WeierstrassModel::from_coordinates(f, 1, coords);
    }
    const bool want = brute_minimal_d1(m);
    nonminimal += !want;
    REQUIRE(is_minimal(m) == want);
  }
  CHECK(nonminimal > 1000);
}

TEST_CASE("group action laws") {
  Field f = Field::make(7);
  SplitMix64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const unsigned d = 1 + static_cast<unsigned>(rng.below(2));
    auto m = random_model(f, d, rng);
    CHECK(act(group_identity(f, d), m) == m);
    CHECK(act({BinaryForm(f, 2 * d), f.from_int(-1)}, m) == m);
    auto g1 = random_group_element(f, d, rng);
    auto g2 = random_group_element(f, d, rng);
    CHECK(act(g1, act(g2, m)) == act(compose(g1, g2), m));
    const Fq l12 = f.pow(g1.lambda, 12);
    CHECK(discriminant_form(act(g1, m)) == discriminant_form(m).scaled(l12));
  }
}

TEST_CASE("action preserves minimality of c4/c6-minimal models") {
  Field f = Field::make(5);
  SplitMix64 rng(8);
  int tested = 0;
  while (tested < 200) {
    auto m = random_model(f, 1, rng);
    if (!is_minimal(m) || discriminant_form(m).is_zero()) continue;
    bool truly = true;
    try {
      global_summary(m);
    } catch (const PreconditionError&) {
      truly = false;
    }
    if (!truly) continue;
    ++tested;
    CHECK(is_minimal(act(random_group_element(f, 1, rng), m)));
  }
}

TEST_CASE("stabilizer orders") {
  Field f5 = Field::make(5);
  Field f7 = Field::make(7);
  SplitMix64 rng(9);
  // Generic model: only (0, +-1).
  auto generic = random_model(f5, 1, rng);
  while (stabilizer_order(generic) != 2 || generic.a2().is_zero()) {
    generic = random_model(f5, 1, rng);
  }
  CHECK(brute_stabilizer(generic) == 2);
  // a2 = a6 = 0 over F_5: lambda^4 = 1.
  WeierstrassModel m4(1, form(f5, 2, {}), random_form(f5, 4, rng), form(f5, 6, {}));
  CHECK(stabilizer_order(m4) == 4);
  CHECK(brute_stabilizer(m4) == 4);
  // a2 = a4 = 0 over F_7: lambda^6 = 1.
  WeierstrassModel m6(1, form(f7, 2, {}), form(f7, 4, {}), form(f7, 6, {1, 0, 0, 0, 0, 0, 1}));
  CHECK(stabilizer_order(m6) == 6);
  CHECK(brute_stabilizer(m6) == 6);
  // Random models against enumeration, including translates of special ones.
  for (int i = 0; i < 30; ++i) {
    auto m = random_model(f5, 1, rng);
    if (i % 3 == 0) m = act(random_group_element(f5, 1, rng), m4);
    CHECK(stabilizer_order(m) == brute_stabilizer(m));
  }
  CHECK(group_order(f5, 1) == 500);
}

TEST_CASE("smooth surface examples") {
  Field f = Field::make(5);
  SplitMix64 rng(10);
  int checked = 0;
  while (checked < 50) {
    auto m = random_model(f, 1, rng);
    BinaryForm disc = discriminant_form(m);
    if (disc.is_zero() || disc[12] == f.zero() ||
        !is_squarefree(disc.dehomogenize()) || !is_minimal(m)) {
      continue;
    }
    ++checked;
    CHECK(is_smooth_surface(m));
  }
  // d = 0 constant model with nonzero discriminant.
  WeierstrassModel c(0, form(f, 0, {1}), form(f, 0, {1}), form(f, 0, {2}));
  REQUIRE_FALSE(discriminant_form(c).is_zero());
  CHECK(is_smooth_surface(c));
  // Nodal fiber at t = 0 with node x = 1: x^3 - 3x + 2 = (x - 1)^2 (x + 2)
  // and no linear terms in t, so the surface is singular at (1, 0, t = 0).
  WeierstrassModel i2(1, form(f, 2, {0, 0, 1}), form(f, 4, {-3, 0, 2, 1, 1}),
                      form(f, 6, {2, 0, 1, 3, 0, 1, 4}));
  REQUIRE(is_minimal(i2));
  auto pd = local_data_at(i2, Place::finite(UniPoly::x(f)));
  CHECK(pd.kodaira.to_string() == "I2");
  CHECK_FALSE(is_smooth_surface(i2));
  WeierstrassModel nonmin(1, form(f, 2, {}), form(f, 4, {}), form(f, 6, {0, 0, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(is_smooth_surface(nonmin), PreconditionError);
}

TEST_CASE("two-torsion of x^3 + a4 x") {
  Field f = Field::make(5);
  SplitMix64 rng(11);
  for (int i = 0; i < 20; ++i) {
    BinaryForm a4 = random_form(f, 4, rng);
    if (a4.is_zero()) continue;
    WeierstrassModel m(1, form(f, 2, {}), a4, form(f, 6, {}));
    auto secs = torsion_section_search(m, 2);
    REQUIRE(!secs.empty());
    CHECK(secs.front().x.is_zero());
    CHECK(secs.front().y.is_zero());
    // Extra sections are exactly the square roots of -a4.
    for (std::size_t k = 1; k < secs.size(); ++k) {
      CHECK(secs[k].x * secs[k].x == a4.scaled(f.from_int(-1)));
    }
  }
  // x (x - s^2)(x + t^2) has three rational 2-torsion sections.
  BinaryForm r1 = form(f, 2, {1}), r2 = form(f, 2, {0, 0, -1});
  WeierstrassModel three(1, (r1 + r2).scaled(f.from_int(-1)), r1 * r2,
                         form(f, 6, {}));
  CHECK(torsion_section_search(three, 2).size() == 3);
}

TEST_CASE("torsion search over a tiny field needs an extension") {
  // q + 1 = 6 < 2d + 1 = 7 for d = 3: points come from F_25.
  Field f = Field::make(5);
  BinaryForm r = form(f, 6, {1, 2, 0, 0, 3, 0, 1});
  BinaryForm u = form(f, 6, {2, 0, 1, 0, 0, 4, 1});
  WeierstrassModel m(3, (r + u).scaled(f.from_int(-1)), r * u, form(f, 18, {}));
  CHECK(torsion_section_search(m, 2).size() == 3);
}

TEST_CASE("the F_7 curve has a 3-torsion section at x = 0") {
  Field f = Field::make(7);
  auto m = WeierstrassModel::from_long_form(1, form(f, 1, {0, 1}), form(f, 2, {}),
                                            form(f, 3, {3, 0, 0, 1}),
                                            form(f, 4, {}), form(f, 6, {}));
  auto secs = torsion_section_search(m, 3);
  REQUIRE(secs.size() == 2);
  for (const auto& s : secs) {
    CHECK(s.x.is_zero());
    // (0, 0) in long form becomes y = a3/2 after completing the square.
    const BinaryForm half_a3 = form(f, 3, {3, 0, 0, 1}).scaled(f.inv(f.from_int(2)));
    CHECK((s.y == half_a3 || s.y == half_a3.scaled(f.from_int(-1))));
  }
  CHECK(torsion_section_search(m, 2).empty());
  CHECK_THROWS_AS(torsion_section_search(m, 5), PreconditionError);
}

TEST_CASE("random smooth models have no 2- or 3-torsion") {
  Field f = Field::make(5);
  SplitMix64 rng(12);
  for (int i = 0; i < 30; ++i) {
    auto m = selmer::testing::random_smooth_model(f, 1 + i % 2, rng);
    CHECK(torsion_section_search(m, 2).empty());
    CHECK(torsion_section_search(m, 3).empty());
  }
}
