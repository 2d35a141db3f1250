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

// Homogeneous forms in (s, t) and places of P^1.

#ifndef SELMER_BINARY_FORM_HPP
#define SELMER_BINARY_FORM_HPP

#include <optional>
#include <string>
#include <vector>

#include "selmer/field.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

/// f(s, t) = sum_j c_j t^j s^{D-j}. Always stores exactly D + 1 coefficients.
class BinaryForm {
 public:
  BinaryForm(Field field, unsigned degree);  // zero form of degree D
  BinaryForm(Field field, unsigned degree, std::vector<Fq> coeffs);

  const Field& field() const { return field_; }
  unsigned degree() const { return degree_; }
  const std::vector<Fq>& coeffs() const { return c_; }
  Fq operator[](unsigned j) const { return c_[j]; }
  bool is_zero() const;

  /// f(1, t) as a polynomial in t.
  UniPoly dehomogenize() const;
  /// f(s, 1) as a polynomial in s (chart around infinity).
  UniPoly dehomogenize_at_infinity() const;
  /// f(1, t) with coefficients pushed into a larger field.
  UniPoly dehomogenize(const Embedding& into) const;
  UniPoly dehomogenize_at_infinity(const Embedding& into) const;

  /// Value at [s : t] in the coefficient field.
  Fq eval(Fq s, Fq t) const;

  BinaryForm scaled(Fq c) const;
  BinaryForm& operator+=(const BinaryForm& o);
  BinaryForm& operator-=(const BinaryForm& o);
  friend BinaryForm operator+(BinaryForm a, const BinaryForm& b) {
    return a += b;
  }
  friend BinaryForm operator-(BinaryForm a, const BinaryForm& b) {
    return a -= b;
  }
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);
  friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
    return a.degree_ == b.degree_ && a.c_ == b.c_;
  }

 private:
  Field field_;
  unsigned degree_;
  std::vector<Fq> c_;
};

/// A closed point of P^1 over F_q: a monic irreducible polynomial in t, or
/// the point at infinity (s = 0).
class Place {
 public:
  static Place infinity(const Field& f) { return Place(f, std::nullopt); }
  /// Throws PreconditionError unless `poly` is monic irreducible.
  static Place finite(const UniPoly& poly);
  /// No irreducibility check; for factors already produced by factor().
  static Place from_irreducible(UniPoly poly) {
    Field f = poly.field();
    return Place(std::move(f), std::move(poly));
  }

  bool is_infinity() const { return !poly_.has_value(); }
  const UniPoly& poly() const { return *poly_; }
  const Field& field() const { return field_; }
  unsigned degree() const {
    return poly_ ? static_cast<unsigned>(poly_->degree()) : 1u;
  }
  std::string to_string() const;

  friend bool operator==(const Place& a, const Place& b) {
    if (a.is_infinity() != b.is_infinity()) return false;
    return a.is_infinity() || a.poly() == b.poly();
  }

 private:
  Place(Field f, std::optional<UniPoly> poly)
      : field_(std::move(f)), poly_(std::move(poly)) {}

  Field field_;
  std::optional<UniPoly> poly_;
};

/// Exact order of vanishing of a nonzero form at a place. At infinity this is
/// D - deg_t f(1, t). Throws PreconditionError on the zero form.
unsigned ord_at(const BinaryForm& f, const Place& v);

/// Places where the nonzero form vanishes, with orders, infinity last.
std::vector<std::pair<Place, unsigned>> divisor(const BinaryForm& f);

}  // namespace selmer

#endif  // SELMER_BINARY_FORM_HPP
