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

// Point counts of Weierstrass surfaces over F_{q^e}, Frobenius traces on the
// middle part of H^2, and the degree-8 L-polynomial for d = 1.

#ifndef SELMER_LFUNCTION_HPP
#define SELMER_LFUNCTION_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "selmer/weierstrass.hpp"

namespace selmer {

/// Largest q^e for which surface_point_count builds its character table.
inline constexpr std::uint64_t kPointCountBudget = std::uint64_t{1} << 24;

/// #W(F_{q^e}): over each t in P^1(F_{q^e}), the point [0:1:0] plus the
/// affine solutions of y^2 = x^3 + a2(t) x^2 + a4(t) x + a6(t). Each fiber
/// count is checked against the Hasse interval (good fibers) or
/// [Q-1, Q+2] (singular fibers).
std::uint64_t surface_point_count(const WeierstrassModel& m, unsigned e,
                                  unsigned threads = 1);

/// S_k = #W(F_{q^k}) - (1 + 2 q^k + q^(2k)) for k = 1..k_max. Requires a
/// smooth model with d >= 1; |S_k| <= (12d - 4) q^k is asserted.
std::vector<std::int64_t> frobenius_traces(const WeierstrassModel& m,
                                           unsigned k_max, unsigned threads = 1);

struct LPolynomial {
  std::uint64_t q = 0;
  unsigned degree = 0;
  std::vector<std::int64_t> coeffs;  // c_0 = 1, ..., c_degree
  int epsilon = 1;                   // c_(D-i) = epsilon q^(D-2i) c_i
  std::vector<std::int64_t> traces;  // S_1, S_2, ... as used
  /// Reciprocal roots with multiplicity.
  std::vector<std::complex<double>> roots;
  double max_relative_deviation = 0;  // max over roots of ||alpha|/q - 1|
  bool purity_ok = false;             // deviation <= 1e-6
  bool pairing_ok = false;            // {q^2/alpha} = {alpha} within 1e-6
};

/// Newton's identities on S_1..S_4, the functional equation for the rest,
/// epsilon fixed by S_5. When S_5 fits both signs, L(u/q) must still be a
/// product of cyclotomic factors allowed in W(E8); failing that, S_6 and S_7
/// are counted. d = 1 only. ComputationError("trace inconsistency") if no
/// sign fits.
LPolynomial l_polynomial(const WeierstrassModel& m, unsigned threads = 1);

/// Builds the full record from known coefficients (for stored fixtures).
LPolynomial l_polynomial_from_coefficients(std::uint64_t q,
                                           std::vector<std::int64_t> coeffs,
                                           int epsilon);

struct CharpolyMod {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> coeffs;  // L(T) mod n, low degree first
  /// Largest k with (1 - T)^k dividing L(T) in (Z/nZ)[T]: reciprocal roots
  /// that are 1 mod n, i.e. unit eigenvalues of Frobenius mod n.
  unsigned unit_root_multiplicity = 0;
};

CharpolyMod charpoly_mod(const LPolynomial& l, std::uint64_t n);

}  // namespace selmer

#endif  // SELMER_LFUNCTION_HPP
