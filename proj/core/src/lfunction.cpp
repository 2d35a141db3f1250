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

#include "selmer/lfunction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "selmer/errors.hpp"
#include "selmer/parallel.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RatPoly = std::vector<Rational>;  // low degree first, trimmed

constexpr double kRootTolerance = 1e-6;

std::uint64_t power(std::uint64_t q, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > kPointCountBudget) throw BudgetExceeded("q^e exceeds the point-count budget");
    r *= q;
  }
  if (r > kPointCountBudget) throw BudgetExceeded("q^e exceeds the point-count budget");
  return r;
}

// --- Rational polynomials, only what the square-free split needs ----------

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<int>(i));
  trim(d);
  return d;
}

// Quotient and remainder; b nonzero.
std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  RatPoly quo(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    quo[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    trim(a);
  }
  trim(quo);
  return {quo, a};
}

RatPoly monic(RatPoly p) {
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.empty()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

// Yun: p = prod s_i^i with s_i squarefree and pairwise coprime.
std::vector<std::pair<RatPoly, unsigned>> squarefree_split(const RatPoly& p) {
  std::vector<std::pair<RatPoly, unsigned>> out;
  RatPoly a0 = gcd(p, derivative(p));
  RatPoly b = divmod(p, a0).first;
  RatPoly c = divmod(derivative(p), a0).first;
  RatPoly d = c;
  {
    RatPoly db = derivative(b);
    d.resize(std::max(d.size(), db.size()));
    for (std::size_t i = 0; i < db.size(); ++i) d[i] -= db[i];
    trim(d);
  }
  for (unsigned i = 1; b.size() > 1; ++i) {
    RatPoly a = gcd(b, d);
    if (a.size() > 1) out.emplace_back(a, i);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    RatPoly db = derivative(b);
    d = c;
    d.resize(std::max(d.size(), db.size()));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    trim(d);
  }
  return out;
}

// Roots of a squarefree polynomial: companion eigenvalues, then Newton.
std::vector<std::complex<double>> simple_roots(const RatPoly& p) {
  using Real = long double;
  using Cx = std::complex<Real>;
  const RatPoly m = monic(p);
  const int n = static_cast<int>(m.size()) - 1;
  std::vector<Real> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) c[i] = static_cast<Real>(m[i]);
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> comp =
      Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<decltype(comp)> solver(comp, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) {
    Cx z = solver.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      Cx f = 0, df = 0;
      for (std::size_t k = c.size(); k-- > 0;) {
        df = df * z + f;
        f = f * z + c[k];
      }
      if (std::abs(df) == 0) break;
      z -= f / df;
    }
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

bool multiset_close(std::vector<std::complex<double>> a,
                    std::vector<std::complex<double>> b, double scale) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](auto u, auto v) {
      return std::abs(u - x) < std::abs(v - x);
    });
    if (it == b.end() || std::abs(*it - x) > kRootTolerance * scale) return false;
    b.erase(it);
  }
  return true;
}

// p_k from c_1..c_k and p_1..p_(k-1) by Newton's identity.
__int128 power_sum(const std::vector<__int128>& c, const std::vector<__int128>& p,
                   std::size_t k) {
  __int128 s = -static_cast<__int128>(k) * c[k];
  for (std::size_t i = 1; i < k; ++i) s -= p[i] * c[k - i];
  return s;
}


// Integer polynomials for the cyclotomic test below, low degree first.
using IntPoly = std::vector<__int128>;

IntPoly cyclotomic(unsigned m) {
  IntPoly num(m + 1, 0);  // u^m - 1
  num[0] = -1;
  num[m] = 1;
  for (unsigned k = 1; k < m; ++k) {
    if (m % k != 0) continue;
    const IntPoly phi = cyclotomic(k);
    IntPoly quo(num.size() - phi.size() + 1, 0);
    for (std::size_t i = quo.size(); i-- > 0;) {
      quo[i] = num[i + phi.size() - 1];  // phi is monic
      for (std::size_t j = 0; j < phi.size(); ++j) num[i + j] -= quo[i] * phi[j];
    }
    num = quo;
  }
  return num;
}

// Exact division by a monic polynomial, if it divides.
bool divide_exact(IntPoly& a, const IntPoly& b) {
  if (a.size() < b.size()) return false;
  IntPoly r = a;
  IntPoly quo(a.size() - b.size() + 1, 0);
  for (std::size_t i = quo.size(); i-- > 0;) {
    quo[i] = r[i + b.size() - 1];
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= quo[i] * b[j];
  }
  for (const auto& x : r) {
    if (x != 0) return false;
  }
  a = std::move(quo);
  return true;
}

// For d = 1 and a smooth model, H^2 is spanned by U and an E8 lattice on
// which Frobenius acts through O(E8) = W(E8). So L(u/q) must be integral
// and a product of cyclotomic Phi_m, with m dividing a degree of W(E8).
bool weyl_admissible(const std::vector<__int128>& c, std::int64_t q) {
  IntPoly rev(c.size());  // reversal of L(u/q): monic, with roots alpha/q
  __int128 qi = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] % qi != 0) return false;
    rev[c.size() - 1 - i] = c[i] / qi;
    qi *= q;
  }
  constexpr unsigned kDegrees[] = {2, 8, 12, 14, 18, 20, 24, 30};
  for (unsigned m = 1; m <= 30 && rev.size() > 1; ++m) {
    if (std::none_of(std::begin(kDegrees), std::end(kDegrees),
                     [m](unsigned deg) { return deg % m == 0; })) {
      continue;
    }
    const IntPoly phi = cyclotomic(m);
    while (divide_exact(rev, phi)) {
    }
  }
  return rev.size() == 1;
}

}  // namespace

std::uint64_t surface_point_count(const WeierstrassModel& m, unsigned e,
                                  unsigned threads) {
  if (e == 0) throw PreconditionError("extension degree must be positive");
  const Field& F = m.field();
  const std::uint64_t Q = power(F.order(), e);
  const Field K = e == 1 ? F : F.extension(e);
  const Embedding emb(F, K);

  // chi(z) + 1 is the number of y with y^2 = z.
  std::vector<std::int8_t> chi(Q, -1);
  chi[0] = 0;
  for (std::uint64_t i = 1; i < Q; ++i) {
    const Fq x = K.element(i);
    chi[K.mul(x, x).raw] = 1;
  }

  const BinaryForm disc = discriminant_form(m);
  const UniPoly a2 = m.a2().dehomogenize(emb), a4 = m.a4().dehomogenize(emb),
                a6 = m.a6().dehomogenize(emb), dd = disc.dehomogenize(emb);
  const UniPoly a2i = m.a2().dehomogenize_at_infinity(emb),
                a4i = m.a4().dehomogenize_at_infinity(emb),
                a6i = m.a6().dehomogenize_at_infinity(emb),
                ddi = disc.dehomogenize_at_infinity(emb);

  // Away from characteristic 3, x -> x - A/3 removes the x^2 term and the
  // loop needs one multiplication per x against a table of cubes.
  const bool depress = F.characteristic() != 3;
  std::vector<std::uint64_t> cube;
  Fq third{}, ninth{}, two_27th{};
  if (depress && !K.data().tables) {
    cube.resize(Q);
    for (std::uint64_t i = 0; i < Q; ++i) {
      const Fq x = K.element(i);
      cube[i] = K.mul(K.mul(x, x), x).raw;
    }
  }
  if (depress) {
    third = K.inv(K.from_int(3));
    ninth = K.mul(third, third);
    two_27th = K.mul(K.from_int(2), K.mul(ninth, third));
  }

  // With log tables, sum_x chi(x^3 + b x + c) runs on logarithms: x = g^i,
  // sums through the Zech table, and chi is the parity of the final log.
  const auto& fd = K.data();
  const bool log_domain = depress && fd.tables;
  auto log_domain_sum = [&](Fq b, Fq c) {
    const std::uint32_t M = static_cast<std::uint32_t>(Q - 1);
    constexpr std::uint32_t kNone = detail::FieldData::kNoZech;
    const std::uint32_t lb = b.raw ? fd.log[b.raw] : kNone;
    const std::uint32_t lc = c.raw ? fd.log[c.raw] : kNone;
    auto wrap = [M](std::uint32_t v) { return v >= M ? v - M : v; };
    std::int64_t sum = chi[c.raw];  // x = 0
    std::uint32_t cube_log = 0, bx_log = lb;
    for (std::uint32_t i = 0; i < M; ++i) {
      std::uint32_t ls = cube_log;  // log(x^3 + b x), kNone when zero
      if (lb != kNone) {
        const std::uint32_t diff = bx_log >= cube_log ? bx_log - cube_log : bx_log + M - cube_log;
        const std::uint32_t z = fd.zech[diff];
        ls = z == kNone ? kNone : wrap(cube_log + z);
      }
      std::uint32_t lf = ls;
      if (lc != kNone) {
        if (ls == kNone) {
          lf = lc;
        } else {
          const std::uint32_t diff = lc >= ls ? lc - ls : lc + M - ls;
          const std::uint32_t z = fd.zech[diff];
          lf = z == kNone ? kNone : wrap(ls + z);
        }
      }
      if (lf != kNone) sum += (lf & 1u) ? -1 : 1;
      cube_log += 3;
      if (cube_log >= M) cube_log -= M;
      if (cube_log >= M) cube_log -= M;
      if (cube_log >= M) cube_log -= M;
      if (lb != kNone && ++bx_log == M) bx_log = 0;
    }
    return sum;
  };

  auto fiber = [&](Fq A, Fq B, Fq C, bool good) {
    std::int64_t n = 1 + static_cast<std::int64_t>(Q);  // [0:1:0] and chi sums
    if (depress) {
      // x^3 + (B - A^2/3) x + (C - AB/3 + 2A^3/27)
      const Fq A2 = K.mul(A, A);
      const Fq b = K.sub(B, K.mul(A2, third));
      const Fq c = K.add(K.sub(C, K.mul(K.mul(A, B), third)), K.mul(K.mul(A2, A), two_27th));
      if (log_domain) {
        n += log_domain_sum(b, c);
      } else {
        for (std::uint64_t i = 0; i < Q; ++i) {
          n += chi[K.add(K.add(Fq{cube[i]}, K.mul(b, K.element(i))), c).raw];
        }
      }
    } else {
      for (std::uint64_t i = 0; i < Q; ++i) {
        const Fq x = K.element(i);
        n += chi[K.add(K.mul(K.add(K.mul(K.add(x, A), x), B), x), C).raw];
      }
    }
    const std::int64_t qq = static_cast<std::int64_t>(Q);
    const std::int64_t dev = n - qq - 1;
    const bool ok = good ? dev * dev <= 4 * qq : (n >= qq - 1 && n <= qq + 2);
    if (!ok) throw ComputationError("fiber count outside its bound");
    return static_cast<std::uint64_t>(n);
  };

  // Conjugate fibers under t -> t^q have equal counts, so only the member of
  // each orbit with the smallest index is counted, weighted by orbit size.
  // Index Q stands for the fiber over infinity.
  const std::uint64_t q = F.order();
  auto orbit_weight = [&](Fq t) -> unsigned {
    Fq u = t;
    for (unsigned r = 1; r <= e; ++r) {
      u = K.pow(u, q);
      if (u == t) return r;
      if (u.raw < t.raw) return 0;
    }
    throw ComputationError("Frobenius orbit longer than the extension degree");
  };
  const std::uint64_t chunk = std::max<std::uint64_t>(1, (Q + 1) / 64);
  const std::uint64_t chunks = (Q + 1 + chunk - 1) / chunk;
  std::vector<std::uint64_t> partial(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::uint64_t s = 0;
    const std::uint64_t end = std::min<std::uint64_t>(Q + 1, (c + 1) * chunk);
    for (std::uint64_t i = c * chunk; i < end; ++i) {
      if (i == Q) {
        const Fq z = K.zero();
        s += fiber(a2i.eval(z), a4i.eval(z), a6i.eval(z), ddi.eval(z) != K.zero());
        continue;
      }
      const Fq t = K.element(i);
      const unsigned w = orbit_weight(t);
      if (w == 0) continue;
      s += w * fiber(a2.eval(t), a4.eval(t), a6.eval(t), dd.eval(t) != K.zero());
    }
    partial[c] = s;
  });
  std::uint64_t total = 0;
  for (std::uint64_t s : partial) total += s;
  return total;
}

namespace {

// Field operations one extra trace may cost before the sign search gives up.
constexpr double kExtraTraceCost = 2e9;

std::int64_t trace_at(const WeierstrassModel& m, unsigned k, unsigned threads) {
  const std::int64_t rank = 12 * static_cast<std::int64_t>(m.height()) - 4;
  const std::int64_t Q = static_cast<std::int64_t>(power(m.field().order(), k));
  const std::int64_t n = static_cast<std::int64_t>(surface_point_count(m, k, threads));
  const std::int64_t s = n - (1 + 2 * Q + Q * Q);
  if (s > rank * Q || s < -rank * Q) throw ComputationError("trace exceeds the weight bound");
  return s;
}

}  // namespace

std::vector<std::int64_t> frobenius_traces(const WeierstrassModel& m,
                                           unsigned k_max, unsigned threads) {
  if (m.height() < 1) throw PreconditionError("traces need d >= 1");
  if (!is_minimal(m) || !is_smooth_surface(m)) {
    throw PreconditionError("model is not smooth");
  }
  std::vector<std::int64_t> out;
  for (unsigned k = 1; k <= k_max; ++k) out.push_back(trace_at(m, k, threads));
  return out;
}

LPolynomial l_polynomial_from_coefficients(std::uint64_t q,
                                           std::vector<std::int64_t> coeffs,
                                           int epsilon) {
  if (coeffs.empty() || coeffs[0] != 1) throw PreconditionError("L must have c_0 = 1");
  LPolynomial l;
  l.q = q;
  l.degree = static_cast<unsigned>(coeffs.size() - 1);
  l.coeffs = std::move(coeffs);
  l.epsilon = epsilon;

  // Reciprocal roots are the roots of x^D L(1/x).
  RatPoly rev(l.coeffs.size());
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) rev[l.degree - i] = l.coeffs[i];
  trim(rev);
  if (rev.size() != l.coeffs.size()) throw ComputationError("L has a zero reciprocal root");
  for (const auto& [s, mult] : squarefree_split(rev)) {
    for (const auto& z : simple_roots(s)) {
      for (unsigned k = 0; k < mult; ++k) l.roots.push_back(z);
    }
  }
  if (l.roots.size() != l.degree) throw ComputationError("root count mismatch");
  const double qd = static_cast<double>(q);
  std::vector<std::complex<double>> paired;
  for (const auto& z : l.roots) {
    l.max_relative_deviation = std::max(l.max_relative_deviation, std::abs(std::abs(z) / qd - 1));
    paired.push_back(qd * qd / z);
  }
  l.purity_ok = l.max_relative_deviation <= kRootTolerance;
  l.pairing_ok = multiset_close(l.roots, paired, qd);
  return l;
}

LPolynomial l_polynomial(const WeierstrassModel& m, unsigned threads) {
  if (m.height() != 1) {
    throw PreconditionError("L-polynomials are computed for d = 1 only");
  }
  constexpr std::size_t D = 8;
  const std::int64_t q = static_cast<std::int64_t>(m.field().order());
  std::vector<std::int64_t> traces = frobenius_traces(m, 5, threads);

  std::vector<__int128> p(D + 1, 0), c(D + 1, 0);
  c[0] = 1;
  for (std::size_t k = 1; k <= 4; ++k) {
    p[k] = traces[k - 1];
    __int128 s = 0;
    for (std::size_t i = 1; i <= k; ++i) s += p[i] * c[k - i];
    if (s % static_cast<__int128>(k) != 0) throw ComputationError("trace inconsistency");
    c[k] = -s / static_cast<__int128>(k);
  }

  auto complete = [&](int eps) {
    std::vector<__int128> full = c;
    __int128 qp = 1;  // q^(D - 2i) for i = 3, 2, 1, 0
    for (int i = 3; i >= 0; --i) {
      qp *= q * q;
      full[D - static_cast<std::size_t>(i)] = eps * qp * c[static_cast<std::size_t>(i)];
    }
    return full;
  };
  // Does the completed polynomial reproduce S_k for k = 5 .. k_check?
  auto fits = [&](int eps, std::size_t k_check) {
    if (eps == -1 && c[4] != 0) return false;  // c_4 = eps c_4
    const std::vector<__int128> full = complete(eps);
    std::vector<__int128> pp(k_check + 1, 0);
    for (std::size_t k = 1; k <= k_check; ++k) {
      pp[k] = power_sum(full, pp, k);
      if (k <= traces.size() && pp[k] != traces[k - 1]) return false;
    }
    return true;
  };

  // S_5 settles the sign unless c_3 = 0 (and c_4 = 0). Then the Weyl-group
  // constraint is tried, and further traces while they stay affordable.
  std::vector<int> signs;
  for (int eps : {1, -1}) {
    if (fits(eps, 5)) signs.push_back(eps);
  }
  if (signs.size() == 2) {
    std::erase_if(signs, [&](int eps) { return !weyl_admissible(complete(eps), q); });
  }
  for (unsigned k = 6; signs.size() == 2 && k <= D; ++k) {
    const double cost = std::pow(static_cast<double>(q), 2.0 * k) / k;
    if (cost > kExtraTraceCost || std::pow(static_cast<double>(q), k) > kPointCountBudget) break;
    traces.push_back(trace_at(m, k, threads));
    std::erase_if(signs, [&](int eps) { return !fits(eps, k); });
  }
  if (signs.empty()) throw ComputationError("trace inconsistency");
  if (signs.size() == 2) {
    std::string msg = "functional-equation sign undetermined; c_0..c_4 =";
    for (std::size_t i = 0; i <= 4; ++i) msg += " " + std::to_string(static_cast<std::int64_t>(c[i]));
    throw ComputationError(msg);
  }

  const std::vector<__int128> full = complete(signs[0]);
  std::vector<std::int64_t> coeffs;
  for (__int128 x : full) coeffs.push_back(static_cast<std::int64_t>(x));
  LPolynomial l = l_polynomial_from_coefficients(static_cast<std::uint64_t>(q),
                                                 std::move(coeffs), signs[0]);
  l.traces = std::move(traces);
  if (!l.purity_ok || !l.pairing_ok) throw ComputationError("L-polynomial fails the root checks");
  return l;
}

CharpolyMod charpoly_mod(const LPolynomial& l, std::uint64_t n) {
  if (n == 0 || std::gcd(l.q, n) != 1) throw PreconditionError("need gcd(q, n) = 1");
  CharpolyMod out;
  out.n = n;
  const std::int64_t nn = static_cast<std::int64_t>(n);
  for (std::int64_t c : l.coeffs) out.coeffs.push_back(static_cast<std::uint64_t>(((c % nn) + nn) % nn));
  // Repeated synthetic division by T - 1, which differs from 1 - T by a unit.
  std::vector<std::uint64_t> a = out.coeffs;
  while (out.unit_root_multiplicity < l.degree && a.size() > 1) {
    std::vector<std::uint64_t> b(a.size() - 1);
    b.back() = a.back();
    for (std::size_t i = b.size() - 1; i > 0; --i) b[i - 1] = (a[i] + b[i]) % n;
    if ((a[0] + b[0]) % n != 0) break;
    a = std::move(b);
    ++out.unit_root_multiplicity;
  }
  return out;
}

}  // namespace selmer
