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

#include "selmer/lattice.hpp"

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <set>

#include "selmer/errors.hpp"
#include "selmer/parallel.hpp"
#include "selmer/rng.hpp"

namespace selmer {

namespace {

using Vec = QuadraticModule::Vec;
using Rational = boost::multiprecision::cpp_rational;

std::uint64_t mod(std::int64_t a, std::uint64_t m) {
  const std::int64_t r = a % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

// Inverse of a mod m, or 0 when gcd(a, m) != 1. For m = 1 every residue is
// a unit and the inverse is 0.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t k = r0 / r1;
    r0 -= k * r1;
    std::swap(r0, r1);
    s0 -= k * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) return 0;
  return mod(s0, m);
}

bool is_unit(std::uint64_t a, std::uint64_t m) {
  return std::gcd(a % m, m) == 1;
}

// A generator prepared for a fixed modulus: the sparse support of w and of
// Gw, and 1/q(w).
struct Reflection {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> w;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gw;
  std::uint64_t q_inv = 0;
};

std::vector<Reflection> prepare(const QuadraticModule& m,
                                const std::vector<PoolVector>& gens,
                                OrbitReport& report) {
  const std::uint64_t n = m.n();
  const IntegralLattice& l = m.lattice();
  std::vector<Reflection> out;
  for (const PoolVector& g : gens) {
    if (g.v.size() != l.rank) throw PreconditionError("generator has wrong rank");
    const Vec w = m.reduce(g.v);
    const std::uint32_t qw = m.q_value(w);
    if (!is_unit(qw, n)) {
      ++report.generators_skipped;
      continue;
    }
    Reflection r;
    r.q_inv = inverse_mod(qw, n);
    for (std::size_t i = 0; i < l.rank; ++i) {
      if (w[i] != 0) r.w.emplace_back(static_cast<std::uint32_t>(i), w[i]);
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < l.rank; ++j) {
        s = (s + mod(l.entry(i, j), n) * w[j]) % n;
      }
      if (s != 0) r.gw.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(s));
    }
    out.push_back(std::move(r));
    report.generator_q.push_back(g.q);
  }
  if (out.empty() && !gens.empty()) {
    throw PreconditionError("no generator has q(w) invertible mod n");
  }
  return out;
}

// Multiplier c with r_w(v) = v - c w.
std::uint64_t coefficient(const Reflection& r, const Vec& v, std::uint64_t n) {
  std::uint64_t b = 0;
  for (auto [i, g] : r.gw) b += static_cast<std::uint64_t>(v[i]) * g;
  return (b % n) * r.q_inv % n;
}

void apply(const Reflection& r, Vec& v, std::uint64_t n) {
  const std::uint64_t c = coefficient(r, v, n);
  if (c == 0) return;
  for (auto [i, wi] : r.w) {
    v[i] = static_cast<std::uint32_t>((v[i] + n - c * wi % n) % n);
  }
}

// Fixed-width packing of short vectors into 128 bits, with an
// open-addressing set on top.
class PackedSet {
 public:
  struct Key {
    std::uint64_t lo = 0, hi = 0;
    bool operator==(const Key&) const = default;
  };

  PackedSet(std::size_t rank, std::uint32_t n, std::uint64_t capacity_hint)
      : rank_(rank), bits_(std::max(1u, static_cast<unsigned>(std::bit_width(n - 1)))) {
    per_word_ = 64 / bits_;
    if (rank > 2 * per_word_) {
      throw PreconditionError("vectors do not fit in 128 bits for sampling mode");
    }
    std::size_t cap = 16;
    while (cap < 2 * capacity_hint) cap <<= 1;
    keys_.resize(cap);
    used_.assign(cap, 0);
    mask_ = cap - 1;
  }

  Key pack(const Vec& v) const {
    Key k;
    for (std::size_t i = 0; i < rank_; ++i) {
      std::uint64_t& word = i < per_word_ ? k.lo : k.hi;
      const unsigned shift = static_cast<unsigned>((i % per_word_) * bits_);
      word |= static_cast<std::uint64_t>(v[i]) << shift;
    }
    return k;
  }

  Vec unpack(const Key& k) const {
    Vec v(rank_);
    const std::uint64_t m = (std::uint64_t{1} << bits_) - 1;
    for (std::size_t i = 0; i < rank_; ++i) {
      const std::uint64_t word = i < per_word_ ? k.lo : k.hi;
      v[i] = static_cast<std::uint32_t>((word >> ((i % per_word_) * bits_)) & m);
    }
    return v;
  }

  bool insert(const Key& k) {
    std::size_t h = slot(k);
    while (used_[h]) {
      if (keys_[h] == k) return false;
      h = (h + 1) & mask_;
    }
    used_[h] = 1;
    keys_[h] = k;
    ++size_;
    return true;
  }

  bool contains(const Key& k) const {
    std::size_t h = slot(k);
    while (used_[h]) {
      if (keys_[h] == k) return true;
      h = (h + 1) & mask_;
    }
    return false;
  }

  std::uint64_t size() const { return size_; }

 private:
  std::size_t slot(const Key& k) const {
    std::uint64_t z = k.lo * 0x9e3779b97f4a7c15ULL ^ (k.hi + 0x632be59bd9b4e019ULL);
    z = (z ^ (z >> 29)) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(z ^ (z >> 32)) & mask_;
  }

  std::size_t rank_;
  unsigned bits_;
  std::size_t per_word_;
  std::vector<Key> keys_;
  std::vector<std::uint8_t> used_;
  std::size_t mask_ = 0;
  std::uint64_t size_ = 0;
};

}  // namespace

// --- IntegralLattice -------------------------------------------------------

std::int64_t IntegralLattice::q(const IntVector& v) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    if (v[i] == 0) continue;
    s += entry(i, i) / 2 * v[i] * v[i];
    for (std::size_t j = i + 1; j < rank; ++j) s += entry(i, j) * v[i] * v[j];
  }
  return s;
}

std::int64_t IntegralLattice::bilinear(const IntVector& x, const IntVector& y) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < rank; ++j) s += x[i] * entry(i, j) * y[j];
  }
  return s;
}

void IntegralLattice::validate() const {
  if (gram.size() != rank * rank) throw PreconditionError("gram has wrong size");
  for (std::size_t i = 0; i < rank; ++i) {
    if (entry(i, i) % 2 != 0) throw PreconditionError("gram diagonal must be even");
    for (std::size_t j = 0; j < i; ++j) {
      if (entry(i, j) != entry(j, i)) throw PreconditionError("gram must be symmetric");
    }
  }
}

IntegralLattice e8_lattice() {
  // Bourbaki labels: chain 1-3-4-5-6-7-8 with 2 attached to 4.
  static constexpr int kEdges[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5},
                                       {5, 6}, {6, 7}, {1, 3}};
  IntegralLattice l{8, std::vector<std::int64_t>(64, 0)};
  for (std::size_t i = 0; i < 8; ++i) l.gram[i * 8 + i] = 2;
  for (auto [a, b] : kEdges) {
    l.gram[static_cast<std::size_t>(a * 8 + b)] = -1;
    l.gram[static_cast<std::size_t>(b * 8 + a)] = -1;
  }
  return l;
}

IntegralLattice hyperbolic_plane() { return {2, {0, 1, 1, 0}}; }

IntegralLattice negated(IntegralLattice l) {
  for (auto& x : l.gram) x = -x;
  return l;
}

IntegralLattice direct_sum(const std::vector<IntegralLattice>& blocks) {
  std::size_t r = 0;
  for (const auto& b : blocks) r += b.rank;
  IntegralLattice out{r, std::vector<std::int64_t>(r * r, 0)};
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rank; ++i) {
      for (std::size_t j = 0; j < b.rank; ++j) {
        out.gram[(off + i) * r + off + j] = b.entry(i, j);
      }
    }
    off += b.rank;
  }
  return out;
}

IntegralLattice selmer_lattice(unsigned d) {
  if (d < 2) {
    throw PreconditionError(
        "selmer_lattice needs d >= 2; for d = 1 use weyl_e8_orbits");
  }
  std::vector<IntegralLattice> blocks(2 * d - 2, hyperbolic_plane());
  for (unsigned k = 0; k < d; ++k) blocks.push_back(negated(e8_lattice()));
  return direct_sum(blocks);
}

namespace {

// Congruence diagonalization: returns the pivots, zeros for null directions.
std::vector<Rational> diagonalize(const IntegralLattice& l) {
  const std::size_t r = l.rank;
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) a[i][j] = l.entry(i, j);
  }
  std::vector<Rational> pivots;
  for (std::size_t k = 0; k < r; ++k) {
    if (a[k][k] == 0) {
      std::size_t j = k + 1;
      while (j < r && a[j][j] == 0) ++j;
      if (j < r) {
        std::swap(a[k], a[j]);
        for (auto& row : a) std::swap(row[k], row[j]);
      } else {
        j = k + 1;
        while (j < r && a[k][j] == 0) ++j;
        if (j == r) {  // row k is zero
          pivots.push_back(0);
          continue;
        }
        // Row/column k += row/column j makes the diagonal 2 a_kj != 0.
        for (std::size_t c = 0; c < r; ++c) a[k][c] += a[j][c];
        for (std::size_t c = 0; c < r; ++c) a[c][k] += a[c][j];
      }
    }
    const Rational p = a[k][k];
    pivots.push_back(p);
    for (std::size_t i = k + 1; i < r; ++i) {
      if (a[i][k] == 0) continue;
      const Rational f = a[i][k] / p;
      for (std::size_t c = k; c < r; ++c) a[i][c] -= f * a[k][c];
      for (std::size_t c = k; c < r; ++c) a[c][i] = a[i][c];
    }
  }
  return pivots;
}

}  // namespace

std::int64_t determinant(const IntegralLattice& l) {
  l.validate();
  Rational det = 1;
  for (const Rational& p : diagonalize(l)) det *= p;
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(det);
  if (boost::multiprecision::denominator(det) != 1 ||
      boost::multiprecision::abs(num) > cpp_int(INT64_MAX)) {
    throw ComputationError("determinant does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(num);
}

Signature signature(const IntegralLattice& l) {
  l.validate();
  Signature s;
  for (const Rational& p : diagonalize(l)) {
    if (p > 0) {
      ++s.positive;
    } else if (p < 0) {
      ++s.negative;
    } else {
      ++s.null;
    }
  }
  return s;
}

int spinor_sign(const IntegralLattice& l, const std::vector<IntVector>& word) {
  int sign = 1;
  for (const IntVector& v : word) {
    if (v.size() != l.rank) throw PreconditionError("word vector has wrong rank");
    const std::int64_t q = l.q(v);
    if (q == 0) throw PreconditionError("isotropic reflection vector");
    if (-q < 0) sign = -sign;
  }
  return sign;
}

// --- QuadraticModule --------------------------------------------------------

QuadraticModule::QuadraticModule(IntegralLattice lattice, std::uint32_t n)
    : lattice_(std::move(lattice)), n_(n) {
  if (n == 0 || n >= (1u << 31)) throw PreconditionError("modulus out of range");
  lattice_.validate();
}

Vec QuadraticModule::reduce(const IntVector& v) const {
  if (v.size() != rank()) throw PreconditionError("vector has wrong rank");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(mod(v[i], n_));
  }
  return out;
}

std::uint32_t QuadraticModule::q_mod(const Vec& v, std::uint32_t m) const {
  const std::size_t r = rank();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < r; ++i) {
    const std::uint64_t vi = v[i] % m;
    if (vi == 0) continue;
    s = (s + mod(lattice_.entry(i, i) / 2, m) * (vi * vi % m)) % m;
    for (std::size_t j = i + 1; j < r; ++j) {
      const std::int64_t g = lattice_.entry(i, j);
      if (g == 0 || v[j] % m == 0) continue;
      s = (s + mod(g, m) * (vi * (v[j] % m) % m)) % m;
    }
  }
  return static_cast<std::uint32_t>(s);
}

std::uint32_t QuadraticModule::q_value(const Vec& v) const {
  if (v.size() != rank()) throw PreconditionError("vector has wrong rank");
  return q_mod(v, n_);
}

std::uint32_t QuadraticModule::bilinear(const Vec& x, const Vec& y) const {
  const std::size_t r = rank();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < r; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) {
      const std::int64_t g = lattice_.entry(i, j);
      if (g == 0 || y[j] == 0) continue;
      s = (s + mod(g, n_) * (static_cast<std::uint64_t>(x[i]) * y[j] % n_)) % n_;
    }
  }
  return static_cast<std::uint32_t>(s);
}

Vec QuadraticModule::reflect(const Vec& w, const Vec& v) const {
  const std::uint32_t qw = q_value(w);
  if (!is_unit(qw, n_)) throw PreconditionError("non-invertible reflection vector");
  const std::uint64_t c =
      static_cast<std::uint64_t>(bilinear(v, w)) * inverse_mod(qw, n_) % n_;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<std::uint32_t>((v[i] + n_ - c * w[i] % n_) % n_);
  }
  return out;
}

// If v = t v' = t v'' mod n then v'' = v' + (n/t) k, and
// q(v' + (n/t) k) = q(v') + (n/t) B(v', k) + (n/t)^2 q(k), so q(v') mod n/t
// does not depend on the lift.
ContentInvariant content_invariant(const QuadraticModule& m, const Vec& v) {
  std::uint32_t t = m.n();
  for (std::uint32_t c : v) t = std::gcd(t, c);
  if (t == m.n()) return {m.n(), 0};
  Vec prim(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) prim[i] = v[i] / t;
  return {t, m.q_mod(prim, m.n() / t)};
}

std::vector<InvariantClass> invariant_classes(const QuadraticModule& m) {
  const IntegralLattice& l = m.lattice();
  std::size_t hi = l.rank, hj = l.rank;
  for (std::size_t i = 0; i < l.rank && hi == l.rank; ++i) {
    for (std::size_t j = i + 1; j < l.rank; ++j) {
      if (l.entry(i, i) == 0 && l.entry(j, j) == 0 && l.entry(i, j) == 1) {
        hi = i;
        hj = j;
        break;
      }
    }
  }
  if (hi == l.rank) throw PreconditionError("lattice has no hyperbolic coordinate pair");
  const std::uint32_t n = m.n();
  std::vector<InvariantClass> out;
  for (std::uint32_t t = 1; t < n; ++t) {
    if (n % t != 0) continue;
    for (std::uint32_t qbar = 0; qbar < n / t; ++qbar) {
      Vec w(l.rank, 0);
      w[hi] = t;
      w[hj] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) * qbar % n);
      const ContentInvariant want{t, qbar};
      if (content_invariant(m, w) != want) {
        throw ComputationError("invariant witness does not realize its class");
      }
      out.push_back({want, std::move(w)});
    }
  }
  out.push_back({{n, 0}, Vec(l.rank, 0)});
  return out;
}

// --- Generators ---------------------------------------------------------------

std::vector<PoolVector> e8_simple_roots() {
  const IntegralLattice e8 = e8_lattice();
  std::vector<PoolVector> out;
  for (std::size_t i = 0; i < 8; ++i) {
    IntVector v(8, 0);
    v[i] = 1;
    out.push_back({v, e8.q(v), "alpha" + std::to_string(i + 1)});
  }
  return out;
}

std::vector<PoolVector> selmer_reflection_pool(unsigned d, std::uint64_t seed,
                                               unsigned random_count) {
  const IntegralLattice l = selmer_lattice(d);
  const std::size_t u_blocks = 2 * d - 2;
  const std::size_t e8_offset = 2 * u_blocks;
  std::vector<PoolVector> out;
  auto add = [&](IntVector v, std::string origin) {
    const std::int64_t q = l.q(v);
    out.push_back({std::move(v), q, std::move(origin)});
  };
  for (unsigned k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < 8; ++i) {
      IntVector v(l.rank, 0);
      v[e8_offset + 8 * k + i] = 1;
      add(std::move(v), "e8[" + std::to_string(k) + "].alpha" + std::to_string(i + 1));
    }
  }
  for (std::size_t b = 0; b < u_blocks; ++b) {
    IntVector v(l.rank, 0);
    v[2 * b] = 1;
    v[2 * b + 1] = 1;
    add(v, "u[" + std::to_string(b) + "].e+f");
    v[2 * b + 1] = -1;
    add(v, "u[" + std::to_string(b) + "].e-f");
  }
  static constexpr std::int64_t kTargets[4] = {1, -1, 2, -2};
  SplitMix64 rng(seed);
  for (unsigned k = 0; k < random_count; ++k) {
    const std::int64_t target = kTargets[rng.below(4)];
    const std::size_t b = rng.below(u_blocks);
    IntVector v(l.rank);
    for (auto& x : v) x = static_cast<std::int64_t>(rng.below(3)) - 1;
    v[2 * b] = 0;
    v[2 * b + 1] = 0;
    // The U block is orthogonal to the rest and q(1, y) = y there.
    const std::int64_t rest = l.q(v);
    v[2 * b] = 1;
    v[2 * b + 1] = target - rest;
    add(std::move(v), "random[" + std::to_string(k) + "]");
    if (out.back().q != target) throw ComputationError("pool vector missed its q");
  }
  return out;
}

std::string to_string(OrbitMode mode) {
  return mode == OrbitMode::kExhaustive ? "exhaustive" : "sampling";
}

std::uint64_t divisor_sum(std::uint64_t n) {
  std::uint64_t s = 0;
  for (std::uint64_t m = 1; m * m <= n; ++m) {
    if (n % m != 0) continue;
    s += m;
    if (m * m != n) s += n / m;
  }
  return s;
}

// --- Orbits ---------------------------------------------------------------------

OrbitReport orbit_decompose_exhaustive(const QuadraticModule& m,
                                       const std::vector<PoolVector>& gens,
                                       std::uint64_t budget) {
  const std::uint64_t n = m.n();
  const std::size_t r = m.rank();
  std::uint64_t total = 1;
  std::vector<std::uint64_t> place(r);
  for (std::size_t i = 0; i < r; ++i) {
    place[i] = total;
    if (total > budget / n) {
      throw BudgetExceeded("n^r = " + std::to_string(n) + "^" + std::to_string(r) +
                           " exceeds the exhaustive budget");
    }
    total *= n;
  }
  if (total > (std::uint64_t{1} << 32)) {
    throw BudgetExceeded("exhaustive mode is limited to 2^32 vectors");
  }

  OrbitReport report;
  report.n = m.n();
  report.rank = r;
  report.mode = OrbitMode::kExhaustive;
  const std::vector<Reflection> refl = prepare(m, gens, report);

  std::vector<std::uint64_t> seen((total + 63) / 64, 0);
  auto test_and_set = [&](std::uint64_t i) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (seen[i >> 6] & bit) return true;
    seen[i >> 6] |= bit;
    return false;
  };
  auto decode = [&](std::uint64_t idx, Vec& v) {
    for (std::size_t i = 0; i < r; ++i) {
      v[i] = static_cast<std::uint32_t>(idx % n);
      idx /= n;
    }
  };

  report.invariant_homogeneous = true;
  std::vector<std::uint32_t> queue;
  Vec v(r);
  for (std::uint64_t start = 0; start < total; ++start) {
    if (test_and_set(start)) continue;
    queue.assign(1, static_cast<std::uint32_t>(start));
    decode(start, v);
    OrbitInfo orbit{v, 0, content_invariant(m, v)};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint64_t x = queue[head];
      decode(x, v);
      if (content_invariant(m, v) != orbit.invariant) {
        report.invariant_homogeneous = false;
      }
      for (const Reflection& g : refl) {
        const std::uint64_t c = coefficient(g, v, n);
        if (c == 0) continue;
        std::int64_t y = static_cast<std::int64_t>(x);
        for (auto [i, wi] : g.w) {
          const std::uint64_t nv = (v[i] + n - c * wi % n) % n;
          y += (static_cast<std::int64_t>(nv) - static_cast<std::int64_t>(v[i])) *
               static_cast<std::int64_t>(place[i]);
        }
        if (!test_and_set(static_cast<std::uint64_t>(y))) {
          queue.push_back(static_cast<std::uint32_t>(y));
        }
      }
    }
    orbit.size = queue.size();
    report.orbits.push_back(std::move(orbit));
  }
  report.orbit_count = report.orbits.size();
  std::set<ContentInvariant> invariants;
  for (const auto& o : report.orbits) invariants.insert(o.invariant);
  report.invariants_distinct = invariants.size() == report.orbits.size();
  return report;
}

OrbitReport orbit_decompose_sampling(const QuadraticModule& m,
                                     const std::vector<PoolVector>& gens,
                                     const SamplingOptions& opts) {
  const std::uint64_t n = m.n();
  const std::size_t r = m.rank();
  OrbitReport report;
  report.n = m.n();
  report.rank = r;
  report.mode = OrbitMode::kSampling;
  const std::vector<Reflection> refl = prepare(m, gens, report);
  const std::vector<InvariantClass> classes = invariant_classes(m);

  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const InvariantClass& cls = classes[ci];
    ClassCertificate cert;
    cert.invariant = cls.invariant;
    cert.hub = cls.witness;
    cert.pairs_attempted = opts.pairs_per_class;
    if (cls.invariant.t == n || refl.empty()) {
      // The zero class is a single vector; n = 1 has nothing else.
      cert.ball_size = 1;
      cert.pairs_connected = opts.pairs_per_class;
      cert.resolved = true;
      report.orbits.push_back({cls.witness, 1, cls.invariant});
      report.classes.push_back(std::move(cert));
      continue;
    }

    // Ball around the hub, grown breadth first.
    PackedSet ball(r, m.n(), opts.ball_target);
    std::vector<PackedSet::Key> order{ball.pack(cls.witness)};
    ball.insert(order[0]);
    for (std::size_t head = 0; head < order.size() && ball.size() < opts.ball_target;
         ++head) {
      const Vec x = ball.unpack(order[head]);
      for (const Reflection& g : refl) {
        Vec y = x;
        apply(g, y, n);
        const PackedSet::Key k = ball.pack(y);
        if (ball.insert(k)) {
          order.push_back(k);
          if (ball.size() >= opts.ball_target) break;
        }
      }
    }
    order.clear();
    order.shrink_to_fit();
    cert.ball_size = ball.size();

    const std::uint32_t t = cls.invariant.t;
    const std::uint32_t sub = m.n() / t;
    auto sample = [&](SplitMix64& rng) {
      Vec v(r);
      while (true) {
        std::uint32_t g = sub;
        for (auto& x : v) {
          x = static_cast<std::uint32_t>(rng.below(sub));
          g = std::gcd(g, x);
        }
        if (g != 1 || m.q_mod(v, sub) != cls.invariant.qbar) continue;
        for (auto& x : v) x *= t;
        return v;
      }
    };
    // Steps to reach the ball, or 0 on failure (a hit at step 0 counts 1).
    auto walk = [&](const Vec& start, SplitMix64& rng) -> std::uint64_t {
      if (ball.contains(ball.pack(start))) return 1;
      for (unsigned attempt = 0; attempt < opts.restarts; ++attempt) {
        Vec x = start;
        for (unsigned step = 1; step <= opts.walk_length; ++step) {
          apply(refl[rng.below(refl.size())], x, n);
          if (ball.contains(ball.pack(x))) {
            return std::uint64_t{attempt} * opts.walk_length + step;
          }
        }
      }
      return 0;
    };

    std::vector<std::uint64_t> steps(opts.pairs_per_class, 0);
    parallel_for(opts.pairs_per_class, opts.threads, [&](std::size_t p) {
      SplitMix64 rng = SplitMix64::stream(opts.seed + 0x1000003 * ci, p);
      const Vec a = sample(rng);
      const Vec b = sample(rng);
      if (content_invariant(m, a) != cls.invariant ||
          content_invariant(m, b) != cls.invariant) {
        throw ComputationError("sampled vector left its invariant class");
      }
      const std::uint64_t sa = walk(a, rng);
      const std::uint64_t sb = sa ? walk(b, rng) : 0;
      steps[p] = sa && sb ? sa + sb : 0;
    });
    for (std::uint64_t s : steps) {
      if (s == 0) continue;
      ++cert.pairs_connected;
      cert.walk_steps += s;
    }
    cert.resolved = cert.pairs_connected == cert.pairs_attempted;
    if (!cert.resolved) ++report.unresolved;
    report.orbits.push_back({cls.witness, 0, cls.invariant});
    report.classes.push_back(std::move(cert));
  }
  report.orbit_count = report.unresolved == 0 ? report.classes.size() : 0;
  return report;
}

OrbitReport weyl_e8_orbits(std::uint32_t n, std::uint64_t budget) {
  return orbit_decompose_exhaustive(QuadraticModule(e8_lattice(), n),
                                    e8_simple_roots(), budget);
}

}  // namespace selmer
