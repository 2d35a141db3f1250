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

#ifndef SELMER_UNIPOLY_HPP
#define SELMER_UNIPOLY_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "selmer/field.hpp"

namespace selmer {

/// Dense univariate polynomial over a finite field, low degree first.
/// Canonical form: no trailing zero coefficients; zero is the empty list.
class UniPoly {
 public:
  explicit UniPoly(Field field) : field_(std::move(field)) {}
  UniPoly(Field field, std::vector<Fq> coeffs);

  static UniPoly constant(const Field& f, Fq c);
  static UniPoly monomial(const Field& f, Fq c, std::size_t degree);
  static UniPoly x(const Field& f) { return monomial(f, f.one(), 1); }
  /// From raw element indices, low degree first.
  static UniPoly from_raw(const Field& f,
                          const std::vector<std::uint64_t>& raw);

  const Field& field() const { return field_; }
  const std::vector<Fq>& coeffs() const { return c_; }
  std::vector<std::uint64_t> raw() const;
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == field_.one(); }
  Fq leading() const { return c_.empty() ? field_.zero() : c_.back(); }
  Fq operator[](std::size_t i) const {
    return i < c_.size() ? c_[i] : field_.zero();
  }

  Fq eval(Fq x) const;
  UniPoly derivative() const;
  UniPoly monic() const;
  UniPoly scaled(Fq c) const;
  /// f(x + c).
  UniPoly shifted(Fq c) const;
  /// Applies a coefficient map into another field.
  template <class Map>
  UniPoly mapped(const Field& target, Map&& map) const {
    std::vector<Fq> out;
    out.reserve(c_.size());
    for (Fq c : c_) out.push_back(map(c));
    return UniPoly(target, std::move(out));
  }

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  UniPoly operator-() const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.c_ == b.c_;
  }
  /// Total order by (degree, coefficients high to low); used for sorting.
  friend bool operator<(const UniPoly& a, const UniPoly& b);

 private:
  void trim();

  Field field_;
  std::vector<Fq> c_;
};

/// Quotient and remainder; throws ComputationError if b == 0.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly rem(const UniPoly& a, const UniPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
/// Returns (g, s, t) with s*a + t*b = g monic.
struct XgcdResult {
  UniPoly g, s, t;
};
XgcdResult xgcd(const UniPoly& a, const UniPoly& b);
UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m);
UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& m);
/// Exact power of `p` dividing `f` (f nonzero, deg p >= 1).
unsigned valuation(const UniPoly& f, const UniPoly& p);

/// True iff gcd(f, f') is constant. Throws PreconditionError on zero input.
bool is_squarefree(const UniPoly& f);
/// Rabin's irreducibility test. Throws PreconditionError on zero input.
bool is_irreducible(const UniPoly& f);

struct Factorization {
  Fq unit;
  /// Monic irreducible factors with multiplicity, sorted by operator<.
  std::vector<std::pair<UniPoly, unsigned>> factors;
};

/// Full factorization: squarefree split, distinct-degree, then
/// Cantor-Zassenhaus equal-degree splitting with a fixed seed.
Factorization factor(const UniPoly& f);
/// Distinct roots in the coefficient field, ascending by index.
std::vector<Fq> roots(const UniPoly& f);

}  // namespace selmer

#endif  // SELMER_UNIPOLY_HPP
