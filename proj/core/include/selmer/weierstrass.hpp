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

// Short Weierstrass models y^2 = x^3 + a2 x^2 + a4 x + a6 over F_q(t) with
// a_{2i} homogeneous of degree 2id in (s, t).

#ifndef SELMER_WEIERSTRASS_HPP
#define SELMER_WEIERSTRASS_HPP

#include <cstdint>
#include <vector>

#include "selmer/binary_form.hpp"
#include "selmer/field.hpp"

namespace selmer {

class WeierstrassModel {
 public:
  /// Degrees must be exactly 2d, 4d, 6d. The discriminant may vanish; the
  /// operations that need a smooth generic fiber check it themselves.
  WeierstrassModel(unsigned d, BinaryForm a2, BinaryForm a4, BinaryForm a6);

  /// From the 12d + 3 raw coefficients, a_{2,0..2d}, a_{4,0..4d}, a_{6,0..6d}.
  static WeierstrassModel from_coordinates(const Field& f, unsigned d,
                                           const std::vector<std::uint64_t>& c);
  /// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i of degree i*d,
  /// moved to short form by completing the square (needs p odd).
  static WeierstrassModel from_long_form(unsigned d, const BinaryForm& a1,
                                         const BinaryForm& a2,
                                         const BinaryForm& a3,
                                         const BinaryForm& a4,
                                         const BinaryForm& a6);

  const Field& field() const { return a2_.field(); }
  unsigned height() const { return d_; }
  const BinaryForm& a2() const { return a2_; }
  const BinaryForm& a4() const { return a4_; }
  const BinaryForm& a6() const { return a6_; }
  std::vector<std::uint64_t> coordinates() const;

  friend bool operator==(const WeierstrassModel& x, const WeierstrassModel& y) {
    return x.d_ == y.d_ && x.a2_ == y.a2_ && x.a4_ == y.a4_ && x.a6_ == y.a6_;
  }

 private:
  unsigned d_;
  BinaryForm a2_, a4_, a6_;
};

/// (r, lambda) acting by x -> x + r followed by the weight scaling.
struct GroupElement {
  BinaryForm r;
  Fq lambda;
};

GroupElement group_identity(const Field& f, unsigned d);
/// Product with act(compose(g, h), m) == act(g, act(h, m)).
GroupElement compose(const GroupElement& g, const GroupElement& h);
WeierstrassModel act(const GroupElement& g, const WeierstrassModel& m);

/// -16(4 a2^3 a6 - a2^2 a4^2 + 4 a4^3 + 27 a6^2 - 18 a2 a4 a6), degree 12d.
/// May be the zero form.
BinaryForm discriminant_form(const WeierstrassModel& m);
/// Same, but throws PreconditionError("singular generic fiber") on zero.
BinaryForm discriminant(const WeierstrassModel& m);
BinaryForm c4_form(const WeierstrassModel& m);  // 16(a2^2 - 3 a4)
BinaryForm c6_form(const WeierstrassModel& m);  // -64 a2^3 + 288 a2 a4 - 864 a6

/// No place v with ord_v a2 >= 2, ord_v a4 >= 4, ord_v a6 >= 6 (zero forms
/// have infinite order).
bool is_minimal(const WeierstrassModel& m);

/// Order of the stabilizer of m in G(F_q) = G_a^{2d+1}(F_q) x| G_m(F_q).
/// Needs p != 3 (the r-translation is solved by dividing by 3).
std::uint64_t stabilizer_order(const WeierstrassModel& m);
/// |G(F_q)| = q^{2d+1}(q - 1); throws BudgetExceeded on overflow.
std::uint64_t group_order(const Field& f, unsigned d);

/// Every fiber has type I_0, I_1 or II. Throws on non-minimal input.
bool is_smooth_surface(const WeierstrassModel& m);

/// Result of the direct Jacobian search for singular points of the surface
/// y^2 = x^3 + a2 x^2 + a4 x + a6, valid in every odd characteristic.
struct SingularSearch {
  bool singular = false;
  /// Some singular point lies over a point of P^1(F_q). Its x-coordinate is
  /// then rational as well, being a repeated root of the fiber cubic.
  bool rational = false;
  /// disc vanishes identically; the surface is then singular along a curve.
  bool generic_fiber_singular = false;
  std::vector<Place> places;  // places with a singular point over them
};

/// Solves f = f_x = f_t = 0 (y = 0) over kappa(v) for every place v where
/// one can occur, namely ord_v disc >= 2. No minimality assumption.
SingularSearch singular_point_search(const WeierstrassModel& m);

struct Section {
  BinaryForm x;  // degree 2d
  BinaryForm y;  // degree 3d
};

/// n = 2: all (x, 0) with x a root of the cubic. n = 3: all (x, y) with
/// psi_3(x) = 0 and y^2 = x^3 + a2 x^2 + a4 x + a6. Sorted by x then y.
std::vector<Section> torsion_section_search(const WeierstrassModel& m,
                                            unsigned n);

}  // namespace selmer

#endif  // SELMER_WEIERSTRASS_HPP
