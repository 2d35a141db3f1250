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

#include "selmer/binary_form.hpp"

#include <algorithm>

#include "selmer/errors.hpp"

namespace selmer {

BinaryForm::BinaryForm(Field field, unsigned degree)
    : field_(std::move(field)), degree_(degree), c_(degree + 1, Fq{0}) {}

BinaryForm::BinaryForm(Field field, unsigned degree, std::vector<Fq> coeffs)
    : field_(std::move(field)), degree_(degree), c_(std::move(coeffs)) {
  if (c_.size() != degree_ + 1) {
    throw PreconditionError("binary form of degree " + std::to_string(degree_) +
                            " needs " + std::to_string(degree_ + 1) +
                            " coefficients, got " + std::to_string(c_.size()));
  }
  for (Fq c : c_) {
    if (c.raw >= field_.order()) {
      throw PreconditionError("coefficient out of field range");
    }
  }
}

bool BinaryForm::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](Fq c) { return c.raw == 0; });
}

UniPoly BinaryForm::dehomogenize() const { return UniPoly(field_, c_); }

UniPoly BinaryForm::dehomogenize_at_infinity() const {
  return UniPoly(field_, std::vector<Fq>(c_.rbegin(), c_.rend()));
}

UniPoly BinaryForm::dehomogenize(const Embedding& into) const {
  std::vector<Fq> v;
  v.reserve(c_.size());
  for (Fq c : c_) v.push_back(into(c));
  return UniPoly(into.target(), std::move(v));
}

UniPoly BinaryForm::dehomogenize_at_infinity(const Embedding& into) const {
  std::vector<Fq> v;
  v.reserve(c_.size());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v.push_back(into(*it));
  return UniPoly(into.target(), std::move(v));
}

Fq BinaryForm::eval(Fq s, Fq t) const {
  // Homogeneous Horner: sum c_j t^j s^{D-j}.
  Fq acc = field_.zero();
  for (unsigned j = degree_ + 1; j-- > 0;) {
    acc = field_.add(field_.mul(acc, t),
                     field_.mul(c_[j], field_.pow(s, degree_ - j)));
  }
  return acc;
}

BinaryForm BinaryForm::scaled(Fq c) const {
  BinaryForm out(*this);
  for (auto& x : out.c_) x = field_.mul(x, c);
  return out;
}

BinaryForm& BinaryForm::operator+=(const BinaryForm& o) {
  if (o.degree_ != degree_) throw PreconditionError("form degree mismatch");
  for (unsigned j = 0; j <= degree_; ++j) c_[j] = field_.add(c_[j], o.c_[j]);
  return *this;
}

BinaryForm& BinaryForm::operator-=(const BinaryForm& o) {
  if (o.degree_ != degree_) throw PreconditionError("form degree mismatch");
  for (unsigned j = 0; j <= degree_; ++j) c_[j] = field_.sub(c_[j], o.c_[j]);
  return *this;
}

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
  const Field& f = a.field_;
  BinaryForm out(f, a.degree_ + b.degree_);
  for (unsigned i = 0; i <= a.degree_; ++i) {
    if (a.c_[i].raw == 0) continue;
    for (unsigned j = 0; j <= b.degree_; ++j) {
      out.c_[i + j] = f.add(out.c_[i + j], f.mul(a.c_[i], b.c_[j]));
    }
  }
  return out;
}

Place Place::finite(const UniPoly& poly) {
  if (!poly.is_monic() || !is_irreducible(poly)) {
    throw PreconditionError("place polynomial must be monic irreducible");
  }
  return Place(poly.field(), poly);
}

std::string Place::to_string() const {
  if (is_infinity()) return "inf";
  std::string s = "[";
  const auto raw = poly_->raw();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(raw[i]);
  }
  return s + "]";
}

unsigned ord_at(const BinaryForm& f, const Place& v) {
  if (f.is_zero()) throw PreconditionError("ord_at of the zero form");
  const UniPoly g = f.dehomogenize();
  if (v.is_infinity()) return f.degree() - static_cast<unsigned>(g.degree());
  return valuation(g, v.poly());
}

std::vector<std::pair<Place, unsigned>> divisor(const BinaryForm& f) {
  if (f.is_zero()) throw PreconditionError("divisor of the zero form");
  std::vector<std::pair<Place, unsigned>> out;
  const UniPoly g = f.dehomogenize();
  for (auto& [pi, mult] : factor(g).factors) {
    out.emplace_back(Place::from_irreducible(pi), mult);
  }
  const unsigned at_inf = f.degree() - static_cast<unsigned>(g.degree());
  if (at_inf > 0) out.emplace_back(Place::infinity(f.field()), at_inf);
  return out;
}

}  // namespace selmer
