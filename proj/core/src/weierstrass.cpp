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

#include "selmer/weierstrass.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>

#include "selmer/errors.hpp"
#include "selmer/localdata.hpp"
#include "selmer/unipoly.hpp"
#include "residue.hpp"

namespace selmer {

namespace {

BinaryForm times(const BinaryForm& f, std::int64_t c) {
  return f.scaled(f.field().from_int(c));
}

BinaryForm pow_form(const BinaryForm& f, unsigned e) {
  BinaryForm out(f.field(), 0, {f.field().one()});
  for (unsigned i = 0; i < e; ++i) out = out * f;
  return out;
}

void check_degree(const BinaryForm& f, unsigned want, const char* name) {
  if (f.degree() != want) {
    throw PreconditionError(std::string(name) + " must have degree " +
                            std::to_string(want) + ", got " +
                            std::to_string(f.degree()));
  }
}

BinaryForm form_from(const Field& f, unsigned deg,
                     const std::vector<std::uint64_t>& c, std::size_t& pos) {
  std::vector<Fq> v;
  for (unsigned j = 0; j <= deg; ++j) v.push_back(f.element(c.at(pos++)));
  return BinaryForm(f, deg, std::move(v));
}

// ord at a place, but infinite for the zero form.
bool ord_at_least(const BinaryForm& f, const Place& v, unsigned bound) {
  return f.is_zero() || ord_at(f, v) >= bound;
}

}  // namespace

WeierstrassModel::WeierstrassModel(unsigned d, BinaryForm a2, BinaryForm a4,
                                   BinaryForm a6)
    : d_(d), a2_(std::move(a2)), a4_(std::move(a4)), a6_(std::move(a6)) {
  check_degree(a2_, 2 * d, "a2");
  check_degree(a4_, 4 * d, "a4");
  check_degree(a6_, 6 * d, "a6");
  if (!a2_.field().same_as(a4_.field()) || !a2_.field().same_as(a6_.field())) {
    throw PreconditionError("coefficients over different fields");
  }
}

WeierstrassModel WeierstrassModel::from_coordinates(
    const Field& f, unsigned d, const std::vector<std::uint64_t>& c) {
  if (c.size() != 12 * d + 3) {
    throw PreconditionError("expected " + std::to_string(12 * d + 3) +
                            " coordinates");
  }
  for (auto x : c) {
    if (x >= f.order()) throw PreconditionError("coordinate out of range");
  }
  std::size_t pos = 0;
  BinaryForm a2 = form_from(f, 2 * d, c, pos);
  BinaryForm a4 = form_from(f, 4 * d, c, pos);
  BinaryForm a6 = form_from(f, 6 * d, c, pos);
  return WeierstrassModel(d, std::move(a2), std::move(a4), std::move(a6));
}

WeierstrassModel WeierstrassModel::from_long_form(
    unsigned d, const BinaryForm& a1, const BinaryForm& a2,
    const BinaryForm& a3, const BinaryForm& a4, const BinaryForm& a6) {
  check_degree(a1, d, "a1");
  check_degree(a3, 3 * d, "a3");
  const Field& f = a1.field();
  if (f.characteristic() == 2) throw PreconditionError("need odd p");
  // (y + (a1 x + a3)/2)^2 = x^3 + (a2 + a1^2/4) x^2 + (a4 + a1 a3/2) x
  //                         + (a6 + a3^2/4).
  const Fq quarter = f.inv(f.from_int(4));
  const Fq half = f.inv(f.from_int(2));
  return WeierstrassModel(d, a2 + (a1 * a1).scaled(quarter),
                          a4 + (a1 * a3).scaled(half),
                          a6 + (a3 * a3).scaled(quarter));
}

std::vector<std::uint64_t> WeierstrassModel::coordinates() const {
  std::vector<std::uint64_t> out;
  out.reserve(12 * d_ + 3);
  for (const BinaryForm* a : {&a2_, &a4_, &a6_}) {
    for (Fq c : a->coeffs()) out.push_back(c.raw);
  }
  return out;
}

GroupElement group_identity(const Field& f, unsigned d) {
  return {BinaryForm(f, 2 * d), f.one()};
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  // S_a T_r S_b T_u = S_{ab} T_{r/b^2 + u}.
  const Field& f = g.r.field();
  const Fq inv_b2 = f.inv(f.sqr(h.lambda));
  return {h.r + g.r.scaled(inv_b2), f.mul(g.lambda, h.lambda)};
}

WeierstrassModel act(const GroupElement& g, const WeierstrassModel& m) {
  const Field& f = m.field();
  if (g.lambda == f.zero()) throw PreconditionError("lambda must be nonzero");
  if (g.r.degree() != 2 * m.height()) {
    throw PreconditionError("r must have degree 2d");
  }
  const BinaryForm& r = g.r;
  const BinaryForm r2 = r * r;
  const Fq l2 = f.sqr(g.lambda);
  const Fq l4 = f.sqr(l2);
  const Fq l6 = f.mul(l4, l2);
  BinaryForm a2 = m.a2() + times(r, 3);
  BinaryForm a4 = m.a4() + times(r * m.a2(), 2) + times(r2, 3);
  BinaryForm a6 = m.a6() + r * m.a4() + r2 * m.a2() + r2 * r;
  return WeierstrassModel(m.height(), a2.scaled(l2), a4.scaled(l4),
                          a6.scaled(l6));
}

BinaryForm discriminant_form(const WeierstrassModel& m) {
  const BinaryForm& a2 = m.a2();
  const BinaryForm& a4 = m.a4();
  const BinaryForm& a6 = m.a6();
  const BinaryForm a2sq = a2 * a2;
  BinaryForm inner = times(a2sq * a2 * a6, 4);
  inner -= a2sq * a4 * a4;
  inner += times(a4 * a4 * a4, 4);
  inner += times(a6 * a6, 27);
  inner -= times(a2 * a4 * a6, 18);
  return times(inner, -16);
}

BinaryForm discriminant(const WeierstrassModel& m) {
  BinaryForm disc = discriminant_form(m);
  if (disc.is_zero()) throw PreconditionError("singular generic fiber");
  return disc;
}

BinaryForm c4_form(const WeierstrassModel& m) {
  return times(m.a2() * m.a2() - times(m.a4(), 3), 16);
}

BinaryForm c6_form(const WeierstrassModel& m) {
  const BinaryForm& a2 = m.a2();
  BinaryForm out = times(a2 * a2 * a2, -64);
  out += times(a2 * m.a4(), 288);
  out -= times(m.a6(), 864);
  return out;
}

bool is_minimal(const WeierstrassModel& m) {
  const Field& f = m.field();
  const std::array<std::pair<const BinaryForm*, unsigned>, 3> parts = {
      {{&m.a2(), 2}, {&m.a4(), 4}, {&m.a6(), 6}}};
  auto bad_at = [&](const Place& v) {
    return std::all_of(parts.begin(), parts.end(), [&](const auto& pr) {
      return ord_at_least(*pr.first, v, pr.second);
    });
  };
  if (bad_at(Place::infinity(f))) return false;
  // A bad finite place divides every nonzero coefficient.
  std::optional<UniPoly> g;
  for (const auto& [a, w] : parts) {
    if (a->is_zero()) continue;
    UniPoly h = a->dehomogenize();
    g = g ? gcd(*g, h) : h.monic();
  }
  if (!g) return false;  // all coefficients vanish
  if (g->degree() <= 0) return true;
  for (const auto& [pi, mult] : factor(*g).factors) {
    if (bad_at(Place::from_irreducible(pi))) return false;
  }
  return true;
}

std::uint64_t group_order(const Field& f, unsigned d) {
  const std::uint64_t q = f.order();
  unsigned __int128 n = q - 1;
  for (unsigned i = 0; i < 2 * d + 1; ++i) {
    n *= q;
    if (n >> 63) throw BudgetExceeded("group order exceeds 2^63");
  }
  return static_cast<std::uint64_t>(n);
}

std::uint64_t stabilizer_order(const WeierstrassModel& m) {
  const Field& f = m.field();
  if (f.characteristic() == 3) throw PreconditionError("need p != 3");
  // Translating x by -a2/3 leaves A = a4 - a2^2/3, B = a6 - a2 a4/3 + 2a2^3/27,
  // on which (r, lambda) acts through (lambda^4, lambda^6). The translation
  // part of a stabilizing element is then forced: r = (lambda^-2 - 1) a2 / 3.
  const Fq third = f.inv(f.from_int(3));
  const BinaryForm& a2 = m.a2();
  const BinaryForm A = m.a4() - (a2 * a2).scaled(third);
  const BinaryForm B = m.a6() - (a2 * m.a4()).scaled(third) +
                       pow_form(a2, 3).scaled(f.div(f.from_int(2), f.from_int(27)));
  std::uint64_t e = 0;
  if (!A.is_zero()) e = std::gcd(e, std::uint64_t{4});
  if (!B.is_zero()) e = std::gcd(e, std::uint64_t{6});
  const std::uint64_t qm1 = f.order() - 1;
  return e == 0 ? qm1 : std::gcd(e, qm1);
}

bool is_smooth_surface(const WeierstrassModel& m) {
  if (!is_minimal(m)) throw PreconditionError("model is not minimal");
  const BinaryForm disc = discriminant_form(m);
  if (disc.is_zero()) return false;
  // Places with ord disc = 1 are I_1; only repeated factors need the table.
  auto ok = [&](const Place& v) {
    const LocalValuations val = local_valuations(m, v);
    if (val.c4 >= 4 && val.c6 >= 6) return false;
    const KodairaType k = kodaira_from_valuations(val);
    return k.symbol == Kodaira::I0 ||
           (k.symbol == Kodaira::In && k.n == 1) || k.symbol == Kodaira::II;
  };
  if (ord_at(disc, Place::infinity(m.field())) >= 2 &&
      !ok(Place::infinity(m.field()))) {
    return false;
  }
  const UniPoly g = disc.dehomogenize();
  const UniPoly rep = gcd(g, g.derivative());
  if (rep.degree() <= 0) return true;
  for (const auto& [pi, mult] : factor(rep).factors) {
    if (!ok(Place::from_irreducible(pi))) return false;
  }
  return true;
}

namespace {

// A singular point over v needs a common root of the fiber cubic and its x-
// and t-derivatives in kappa(v). Repeated roots of a cubic over a perfect
// field are rational, so a nonconstant gcd means such a root exists.
bool singular_over(const WeierstrassModel& m, const Place& v) {
  const detail::Residue r = detail::residue_at(v);
  const Field& K = r.kappa;
  const UniPoly a2 = detail::expand(m.a2(), v, r);
  const UniPoly a4 = detail::expand(m.a4(), v, r);
  const UniPoly a6 = detail::expand(m.a6(), v, r);
  const UniPoly f(K, {a6[0], a4[0], a2[0], K.one()});
  const UniPoly ft(K, {a6[1], a4[1], a2[1]});
  return gcd(gcd(f, f.derivative()), ft).degree() >= 1;
}

}  // namespace

// If (x0, 0) is singular over v, translating x0 to 0 gives pi | a4, a6 and
// pi^2 | a6; every term of disc is then divisible by pi^2.
SingularSearch singular_point_search(const WeierstrassModel& m) {
  const Field& F = m.field();
  SingularSearch out;
  auto visit = [&](const Place& v) {
    if (!singular_over(m, v)) return;
    out.singular = true;
    if (v.degree() == 1) out.rational = true;
    out.places.push_back(v);
  };
  const BinaryForm disc = discriminant_form(m);
  if (disc.is_zero()) {
    out.singular = true;
    out.generic_fiber_singular = true;
    for (std::uint64_t i = 0; i < F.order(); ++i) {
      visit(Place::from_irreducible(UniPoly(F, {F.neg(F.element(i)), F.one()})));
    }
    visit(Place::infinity(F));
    return out;
  }
  const UniPoly g = disc.dehomogenize();
  const UniPoly rep = gcd(g, g.derivative());
  if (rep.degree() >= 1) {
    for (const auto& [pi, mult] : factor(rep).factors) {
      visit(Place::from_irreducible(pi));
    }
  }
  if (static_cast<unsigned>(g.degree()) + 2 <= disc.degree()) {
    visit(Place::infinity(F));
  }
  return out;
}

namespace {

// Coefficients c_0..c_D of the degree-D form through the given values.
// Points are [s : t]; at most one has s = 0.
std::vector<Fq> interpolate_form(const Field& K, unsigned D,
                                 const std::vector<std::pair<Fq, Fq>>& pts,
                                 const std::vector<Fq>& vals) {
  std::vector<Fq> ts, ys;
  std::optional<Fq> top;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].first == K.zero()) {
      top = vals[i];  // f(0, 1) = c_D
    } else {
      ts.push_back(pts[i].second);  // s = 1 by construction
      ys.push_back(vals[i]);
    }
  }
  if (top) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      ys[i] = K.sub(ys[i], K.mul(*top, K.pow(ts[i], D)));
    }
  }
  UniPoly acc(K);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    UniPoly basis = UniPoly::constant(K, K.one());
    Fq denom = K.one();
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (j == i) continue;
      basis = basis * UniPoly(K, {K.neg(ts[j]), K.one()});
      denom = K.mul(denom, K.sub(ts[i], ts[j]));
    }
    acc += basis.scaled(K.div(ys[i], denom));
  }
  std::vector<Fq> c(D + 1, K.zero());
  for (int j = 0; j <= acc.degree(); ++j) c[j] = acc[j];
  if (top) c[D] = K.add(c[D], *top);
  return c;
}

// Square root of a polynomial, if it is a square; picks one sign.
std::optional<UniPoly> poly_sqrt(const UniPoly& r) {
  const Field& f = r.field();
  if (r.is_zero()) return r;
  if (r.degree() % 2) return std::nullopt;
  const int m = r.degree() / 2;
  auto lead = f.sqrt(r.leading());
  if (!lead) return std::nullopt;
  std::vector<Fq> y(m + 1, f.zero());
  y[m] = *lead;
  const Fq inv2y = f.inv(f.add(*lead, *lead));
  for (int k = 1; k <= m; ++k) {
    // Coefficient of x^{2m-k} in y^2 is 2 y_m y_{m-k} + sum of known terms.
    Fq known = f.zero();
    for (int i = m - k + 1; i < m; ++i) {
      const int j = 2 * m - k - i;
      if (j > m - k && j < m + 1 && j != m) known = f.add(known, f.mul(y[i], y[j]));
    }
    y[m - k] = f.mul(f.sub(r[2 * m - k], known), inv2y);
  }
  UniPoly out(f, y);
  if (!(out * out == r)) return std::nullopt;
  return out;
}

}  // namespace

std::vector<Section> torsion_section_search(const WeierstrassModel& m,
                                            unsigned n) {
  if (n != 2 && n != 3) throw PreconditionError("torsion level must be 2 or 3");
  const Field& F = m.field();
  const unsigned d = m.height();
  const unsigned D = 2 * d;

  // Work in F_{q^e} when P^1(F_q) has fewer than D + 1 points.
  unsigned e = 1;
  while (true) {
    std::uint64_t qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= F.order();
    if (qe + 1 >= D + 1) break;
    ++e;
  }
  const Field K = e == 1 ? F : F.extension(e);
  const Embedding emb(F, K);
  // Images of base elements, for pulling interpolated coefficients back.
  std::vector<std::pair<Fq, Fq>> back;  // (image, source)
  if (e > 1) {
    for (std::uint64_t i = 0; i < F.order(); ++i) {
      back.emplace_back(emb(F.element(i)), F.element(i));
    }
    std::sort(back.begin(), back.end());
  }
  auto pull = [&](Fq a) -> std::optional<Fq> {
    if (e == 1) return a;
    auto it = std::lower_bound(back.begin(), back.end(),
                               std::make_pair(a, Fq{0}));
    if (it == back.end() || it->first != a) return std::nullopt;
    return it->second;
  };
  auto eval_at = [&](const BinaryForm& a, Fq s, Fq t) {
    Fq acc = K.zero();
    for (unsigned j = a.degree() + 1; j-- > 0;) {
      acc = K.add(K.mul(acc, t), K.mul(emb(a[j]), K.pow(s, a.degree() - j)));
    }
    return acc;
  };

  struct Candidate {
    std::pair<Fq, Fq> pt;
    std::vector<Fq> roots;
  };
  std::vector<Candidate> cands;
  auto consider = [&](Fq s, Fq t) {
    const Fq a2 = eval_at(m.a2(), s, t);
    const Fq a4 = eval_at(m.a4(), s, t);
    const Fq a6 = eval_at(m.a6(), s, t);
    UniPoly P(K);
    if (n == 2) {
      P = UniPoly(K, {a6, a4, a2, K.one()});
    } else {
      P = UniPoly(K, {K.sub(K.scale(K.mul(a2, a6), 4), K.sqr(a4)),
                      K.scale(a6, 12), K.scale(a4, 6), K.scale(a2, 4),
                      K.from_int(3)});
    }
    cands.push_back({{s, t}, roots(P)});
  };
  consider(K.zero(), K.one());
  for (std::uint64_t i = 0; i < K.order() && cands.size() < 4 * (D + 1) + 8;
       ++i) {
    consider(K.one(), K.element(i));
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.roots.size() < b.roots.size();
                   });
  if (cands.front().roots.empty()) return {};
  cands.resize(D + 1);

  std::vector<BinaryForm> xs;
  std::vector<std::size_t> idx(D + 1, 0);
  std::vector<std::pair<Fq, Fq>> pts;
  for (const auto& c : cands) pts.push_back(c.pt);
  while (true) {
    std::vector<Fq> vals;
    for (unsigned i = 0; i <= D; ++i) vals.push_back(cands[i].roots[idx[i]]);
    const auto coeffs = interpolate_form(K, D, pts, vals);
    std::vector<Fq> base;
    bool rational = true;
    for (Fq c : coeffs) {
      auto b = pull(c);
      if (!b) {
        rational = false;
        break;
      }
      base.push_back(*b);
    }
    if (rational) {
      BinaryForm x(F, D, base);
      BinaryForm val(F, 6 * d);
      if (n == 2) {
        val = x * x * x + m.a2() * x * x + m.a4() * x + m.a6();
      } else {
        val = times(pow_form(x, 4), 3) + times(m.a2() * x * x * x, 4) +
              times(m.a4() * x * x, 6) + times(m.a6() * x, 12) +
              times(m.a2() * m.a6(), 4) - m.a4() * m.a4();
      }
      if (val.is_zero()) xs.push_back(std::move(x));
    }
    // Odometer over the root choices.
    unsigned i = 0;
    while (i <= D && ++idx[i] == cands[i].roots.size()) idx[i++] = 0;
    if (i > D) break;
  }

  std::vector<Section> out;
  for (const BinaryForm& x : xs) {
    if (n == 2) {
      out.push_back({x, BinaryForm(F, 3 * d)});
      continue;
    }
    const BinaryForm R = x * x * x + m.a2() * x * x + m.a4() * x + m.a6();
    if (R.is_zero()) continue;  // 2-torsion x; cannot also be 3-torsion
    const UniPoly r = R.dehomogenize();
    if ((6 * d - r.degree()) % 2) continue;
    auto y = poly_sqrt(r);
    if (!y) continue;
    for (const UniPoly& yy : {*y, -*y}) {
      std::vector<Fq> c(3 * d + 1, F.zero());
      for (int j = 0; j <= yy.degree(); ++j) c[j] = yy[j];
      out.push_back({x, BinaryForm(F, 3 * d, c)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Section& a, const Section& b) {
    if (a.x.coeffs() != b.x.coeffs()) return a.x.coeffs() < b.x.coeffs();
    return a.y.coeffs() < b.y.coeffs();
  });
  return out;
}

}  // namespace selmer
