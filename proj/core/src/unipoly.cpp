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

#include "selmer/unipoly.hpp"

#include <algorithm>

#include "selmer/errors.hpp"
#include "selmer/rng.hpp"

namespace selmer {

UniPoly::UniPoly(Field field, std::vector<Fq> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  trim();
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().raw == 0) c_.pop_back();
}

UniPoly UniPoly::constant(const Field& f, Fq c) { return UniPoly(f, {c}); }

UniPoly UniPoly::monomial(const Field& f, Fq c, std::size_t degree) {
  std::vector<Fq> v(degree + 1, f.zero());
  v[degree] = c;
  return UniPoly(f, std::move(v));
}

UniPoly UniPoly::from_raw(const Field& f,
                          const std::vector<std::uint64_t>& raw) {
  std::vector<Fq> v;
  v.reserve(raw.size());
  for (auto r : raw) v.push_back(f.element(r));
  return UniPoly(f, std::move(v));
}

std::vector<std::uint64_t> UniPoly::raw() const {
  std::vector<std::uint64_t> out;
  out.reserve(c_.size());
  for (Fq c : c_) out.push_back(c.raw);
  return out;
}

Fq UniPoly::eval(Fq x) const {
  Fq acc = field_.zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = field_.add(field_.mul(acc, x), *it);
  }
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly(field_);
  std::vector<Fq> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    d[i - 1] = field_.mul(c_[i], field_.from_int(static_cast<std::int64_t>(
                                     i % field_.characteristic())));
  }
  return UniPoly(field_, std::move(d));
}

UniPoly UniPoly::monic() const {
  if (c_.empty() || is_monic()) return *this;
  return scaled(field_.inv(c_.back()));
}

UniPoly UniPoly::scaled(Fq c) const {
  std::vector<Fq> v(c_);
  for (auto& x : v) x = field_.mul(x, c);
  return UniPoly(field_, std::move(v));
}

UniPoly UniPoly::shifted(Fq c) const {
  // Horner in (x + c).
  std::vector<Fq> acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc.insert(acc.begin(), field_.zero());
    for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
      acc[i] = field_.add(acc[i], field_.mul(acc[i + 1], c));
    }
    acc[0] = field_.add(acc[0], *it);
  }
  return UniPoly(field_, std::move(acc));
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_.zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) {
    c_[i] = field_.add(c_[i], o.c_[i]);
  }
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_.zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) {
    c_[i] = field_.sub(c_[i], o.c_[i]);
  }
  trim();
  return *this;
}

UniPoly UniPoly::operator-() const {
  std::vector<Fq> v(c_);
  for (auto& x : v) x = field_.neg(x);
  return UniPoly(field_, std::move(v));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  const Field& f = a.field_;
  if (a.c_.empty() || b.c_.empty()) return UniPoly(f);
  std::vector<Fq> out(a.c_.size() + b.c_.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].raw == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      out[i + j] = f.add(out[i + j], f.mul(a.c_[i], b.c_[j]));
    }
  }
  return UniPoly(f, std::move(out));
}

bool operator<(const UniPoly& a, const UniPoly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  }
  return false;
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw ComputationError("polynomial division by zero");
  const Field& f = a.field();
  if (a.degree() < b.degree()) return {UniPoly(f), a};
  std::vector<Fq> r(a.coeffs());
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const Fq inv_lead = f.inv(bc.back());
  std::vector<Fq> quot(r.size() - db, f.zero());
  for (std::size_t i = r.size(); i-- > db;) {
    if (r[i].raw == 0) continue;
    const Fq c = f.mul(r[i], inv_lead);
    quot[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) {
      r[i - db + j] = f.sub(r[i - db + j], f.mul(c, bc[j]));
    }
  }
  r.resize(db);
  return {UniPoly(f, std::move(quot)), UniPoly(f, std::move(r))};
}

UniPoly rem(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

XgcdResult xgcd(const UniPoly& a, const UniPoly& b) {
  const Field& f = a.field();
  UniPoly r0 = a, r1 = b;
  UniPoly s0 = UniPoly::constant(f, f.one()), s1(f);
  UniPoly t0(f), t1 = UniPoly::constant(f, f.one());
  while (!r1.is_zero()) {
    auto [quot, r] = divmod(r0, r1);
    r0 = std::exchange(r1, std::move(r));
    UniPoly s2 = s0 - quot * s1;
    s0 = std::exchange(s1, std::move(s2));
    UniPoly t2 = t0 - quot * t1;
    t0 = std::exchange(t1, std::move(t2));
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Fq li = f.inv(r0.leading());
  return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m) {
  return rem(a * b, m);
}

UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& m) {
  const Field& f = base.field();
  UniPoly result = rem(UniPoly::constant(f, f.one()), m);
  UniPoly b = rem(base, m);
  while (e) {
    if (e & 1) result = mulmod(result, b, m);
    e >>= 1;
    if (e) b = mulmod(b, b, m);
  }
  return result;
}

unsigned valuation(const UniPoly& f, const UniPoly& p) {
  if (f.is_zero()) throw PreconditionError("valuation of the zero polynomial");
  if (p.degree() < 1) throw PreconditionError("valuation at a constant");
  unsigned v = 0;
  UniPoly g = f;
  while (true) {
    auto [quot, r] = divmod(g, p);
    if (!r.is_zero()) return v;
    ++v;
    g = std::move(quot);
  }
}

bool is_squarefree(const UniPoly& f) {
  if (f.is_zero()) throw PreconditionError("squarefree test of zero");
  return gcd(f, f.derivative()).degree() == 0;
}

namespace {

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// x^{q^i} mod f for i = 0..n.
std::vector<UniPoly> frobenius_powers(const UniPoly& f, unsigned n) {
  const Field& fld = f.field();
  std::vector<UniPoly> out;
  out.push_back(rem(UniPoly::x(fld), f));
  for (unsigned i = 1; i <= n; ++i) {
    out.push_back(powmod(out.back(), fld.order(), f));
  }
  return out;
}

UniPoly pth_root(const UniPoly& c) {
  const Field& f = c.field();
  const std::size_t p = f.characteristic();
  std::vector<Fq> out;
  for (std::size_t i = 0; i < c.coeffs().size(); i += p) {
    out.push_back(f.pth_root(c.coeffs()[i]));
  }
  return UniPoly(f, std::move(out));
}

void squarefree_split(const UniPoly& monic_f, unsigned scale,
                      std::vector<std::pair<UniPoly, unsigned>>& out) {
  const Field& f = monic_f.field();
  const UniPoly one = UniPoly::constant(f, f.one());
  UniPoly c = gcd(monic_f, monic_f.derivative());
  UniPoly w = divmod(monic_f, c).first;
  unsigned i = 1;
  while (w.degree() > 0) {
    UniPoly y = gcd(w, c);
    UniPoly z = divmod(w, y).first;
    if (z.degree() > 0) out.emplace_back(z.monic(), i * scale);
    ++i;
    w = y;
    c = divmod(c, y).first;
  }
  if (c.degree() > 0) {
    squarefree_split(pth_root(c.monic()).monic(),
                     scale * static_cast<unsigned>(f.characteristic()), out);
  }
}

void equal_degree_split(const UniPoly& g, unsigned d, SplitMix64& rng,
                        std::vector<UniPoly>& out) {
  if (g.degree() == static_cast<int>(d)) {
    out.push_back(g.monic());
    return;
  }
  const Field& f = g.field();
  const std::uint64_t q = f.order();
  while (true) {
    std::vector<Fq> coeffs(static_cast<std::size_t>(g.degree()));
    for (auto& c : coeffs) c = f.element(rng.below(q));
    UniPoly a(f, std::move(coeffs));
    if (a.degree() < 1) continue;
    // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
    UniPoly t = a, acc = a;
    for (unsigned i = 1; i < d; ++i) {
      t = powmod(t, q, g);
      acc = mulmod(acc, t, g);
    }
    UniPoly b = powmod(acc, (q - 1) / 2, g);
    b -= UniPoly::constant(f, f.one());
    UniPoly h = gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree_split(h, d, rng, out);
      equal_degree_split(divmod(g, h).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

bool is_irreducible(const UniPoly& f) {
  if (f.is_zero()) throw PreconditionError("irreducibility test of zero");
  const int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const UniPoly g = f.monic();
  const auto fp = frobenius_powers(g, static_cast<unsigned>(n));
  const UniPoly x = rem(UniPoly::x(g.field()), g);
  if (!(fp[static_cast<std::size_t>(n)] == x)) return false;
  for (auto r : distinct_prime_factors(static_cast<std::uint64_t>(n))) {
    const UniPoly h = fp[static_cast<std::size_t>(n / static_cast<int>(r))] - x;
    if (gcd(h, g).degree() != 0) return false;
  }
  return true;
}

Factorization factor(const UniPoly& f) {
  if (f.is_zero()) throw PreconditionError("cannot factor the zero polynomial");
  const Field& fld = f.field();
  Factorization result{f.leading(), {}};
  if (f.degree() == 0) return result;

  std::vector<std::pair<UniPoly, unsigned>> sqf;
  squarefree_split(f.monic(), 1, sqf);

  SplitMix64 rng(0xfac7012eULL);
  for (auto& [part, mult] : sqf) {
    // Distinct-degree factorization.
    UniPoly g = part;
    UniPoly h = rem(UniPoly::x(fld), g);
    for (unsigned d = 1; g.degree() >= 2 * static_cast<int>(d); ++d) {
      h = powmod(h, fld.order(), g);
      UniPoly fd = gcd(h - rem(UniPoly::x(fld), g), g);
      if (fd.degree() > 0) {
        std::vector<UniPoly> pieces;
        equal_degree_split(fd, d, rng, pieces);
        for (auto& pc : pieces) result.factors.emplace_back(pc, mult);
        g = divmod(g, fd).first;
        h = rem(h, g);
      }
    }
    if (g.degree() > 0) result.factors.emplace_back(g.monic(), mult);
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const auto& a, const auto& b) {
              if (a.first == b.first) return a.second < b.second;
              return a.first < b.first;
            });
  return result;
}

std::vector<Fq> roots(const UniPoly& f) {
  if (f.is_zero()) throw PreconditionError("roots of the zero polynomial");
  const Field& fld = f.field();
  std::vector<Fq> out;
  if (f.degree() < 1) return out;
  const UniPoly g = f.monic();
  if (g.degree() == 1) return {fld.neg(g.coeffs()[0])};
  UniPoly xq = powmod(UniPoly::x(fld), fld.order(), g);
  UniPoly lin = gcd(xq - UniPoly::x(fld), g);
  if (lin.degree() < 1) return out;
  // Strip the root 0 before splitting.
  if (lin.coeffs()[0].raw == 0) {
    out.push_back(fld.zero());
    lin = divmod(lin, UniPoly::x(fld)).first;
  }
  if (lin.degree() >= 1) {
    SplitMix64 rng(0x700751ULL + static_cast<std::uint64_t>(lin.degree()));
    std::vector<UniPoly> pieces;
    equal_degree_split(lin, 1, rng, pieces);
    for (auto& pc : pieces) out.push_back(fld.neg(pc.coeffs()[0]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace selmer
