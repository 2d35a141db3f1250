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

#include "selmer/localdata.hpp"

#include <optional>

#include "selmer/errors.hpp"
#include "selmer/unipoly.hpp"
#include "residue.hpp"

namespace selmer {

std::string KodairaType::to_string() const {
  switch (symbol) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(n);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0s: return "I0*";
    case Kodaira::Ins: return "I" + std::to_string(n) + "*";
    case Kodaira::IVs: return "IV*";
    case Kodaira::IIIs: return "III*";
    case Kodaira::IIs: return "II*";
  }
  return "?";
}

unsigned KodairaType::components() const {
  switch (symbol) {
    case Kodaira::I0: return 1;
    case Kodaira::In: return n;
    case Kodaira::II: return 1;
    case Kodaira::III: return 2;
    case Kodaira::IV: return 3;
    case Kodaira::I0s: return 5;
    case Kodaira::Ins: return 5 + n;
    case Kodaira::IVs: return 7;
    case Kodaira::IIIs: return 8;
    case Kodaira::IIs: return 9;
  }
  return 0;
}

unsigned KodairaType::conductor_exponent() const {
  if (symbol == Kodaira::I0) return 0;
  if (symbol == Kodaira::In) return 1;
  return 2;
}

unsigned ord_or_infinite(const BinaryForm& f, const Place& v) {
  return f.is_zero() ? kInfiniteOrder : ord_at(f, v);
}

namespace {

struct Invariants {
  BinaryForm c4, c6, disc;
};

Invariants invariants_of(const WeierstrassModel& m) {
  return {c4_form(m), c6_form(m), discriminant(m)};
}

LocalValuations valuations_from(const Invariants& inv, const Place& v) {
  return {ord_or_infinite(inv.c4, v), ord_or_infinite(inv.c6, v),
          ord_at(inv.disc, v)};
}

using detail::expand;
using detail::residue_at;
using detail::Residue;

struct LocalExpansion {
  Field kappa;
  UniPoly a2, a4, a6, A, B, disc;
};

LocalExpansion expansion_at(const WeierstrassModel& m, const Place& v) {
  Residue r = residue_at(v);
  const Field& K = r.kappa;
  UniPoly a2 = expand(m.a2(), v, r);
  UniPoly a4 = expand(m.a4(), v, r);
  UniPoly a6 = expand(m.a6(), v, r);
  const Fq third = K.inv(K.from_int(3));
  UniPoly A = a4 - (a2 * a2).scaled(third);
  UniPoly B = a6 - (a2 * a4).scaled(third) +
              (a2 * a2 * a2).scaled(K.div(K.from_int(2), K.from_int(27)));
  UniPoly disc = (A * A * A).scaled(K.from_int(4)) + (B * B).scaled(K.from_int(27));
  disc = disc.scaled(K.from_int(-16));
  return {K, a2, a4, a6, A, B, disc};
}

bool split_multiplicative(const LocalExpansion& e) {
  const Field& K = e.kappa;
  const Fq a2 = e.a2[0], a4 = e.a4[0], a6 = e.a6[0];
  // Node of x^3 + a2 x^2 + a4 x + a6 with a double root x0; the tangent cone
  // is y^2 = (3 x0 + a2)(x - x0)^2.
  const Fq den = K.mul(K.from_int(2), K.sub(K.sqr(a2), K.mul(K.from_int(3), a4)));
  const Fq x0 = K.div(K.sub(K.mul(K.from_int(9), a6), K.mul(a2, a4)), den);
  const Fq slope2 = K.add(K.mul(K.from_int(3), x0), a2);
  if (slope2 == K.zero()) throw ComputationError("node degenerated to a cusp");
  return K.is_square(slope2);
}

unsigned tamagawa(const KodairaType& k, const LocalExpansion& e,
                  std::optional<bool>& split) {
  const Field& K = e.kappa;
  switch (k.symbol) {
    case Kodaira::I0:
    case Kodaira::II:
    case Kodaira::IIs:
      return 1;
    case Kodaira::III:
    case Kodaira::IIIs:
      return 2;
    case Kodaira::In:
      split = split_multiplicative(e);
      if (*split) return k.n;
      return k.n % 2 ? 1 : 2;
    case Kodaira::IV:
      return K.is_square(e.B[2]) ? 3 : 1;
    case Kodaira::IVs:
      return K.is_square(e.B[4]) ? 3 : 1;
    case Kodaira::I0s: {
      const UniPoly cubic(K, {e.B[3], e.A[2], K.zero(), K.one()});
      return 1 + static_cast<unsigned>(roots(cubic).size());
    }
    case Kodaira::Ins: {
      const Fq u0 = e.disc[6 + k.n];
      if (k.n % 2 == 0) return K.is_square(u0) ? 4 : 2;
      // The rational 2-torsion point is divisible by 2 iff the difference of
      // the simple and double roots times u0 is a square.
      const Fq t0 = K.div(K.mul(K.from_int(-3), e.B[3]),
                          K.mul(K.from_int(2), e.A[2]));
      const Fq diff = K.mul(K.from_int(-3), t0);
      return K.is_square(K.mul(diff, u0)) ? 4 : 2;
    }
  }
  return 1;
}

PlaceData local_data_from(const WeierstrassModel& m, const Place& v,
                          const LocalValuations& val) {
  PlaceData out{v, kodaira_from_valuations(val), val.disc, 0, 1, 1, std::nullopt};
  out.f_v = out.kodaira.conductor_exponent();
  out.m_v = out.kodaira.components();
  if (out.ord_disc != out.f_v + out.m_v - 1) {
    throw ComputationError("Ogg relation fails at " + v.to_string());
  }
  // c_v is forced to 1 for I_1 and II; skip the residue field there.
  const bool trivial = out.kodaira.symbol == Kodaira::I0 ||
                       out.kodaira.symbol == Kodaira::II ||
                       out.kodaira.symbol == Kodaira::IIs;
  if (!trivial) {
    const LocalExpansion e = expansion_at(m, v);
    out.c_v = tamagawa(out.kodaira, e, out.split);
  }
  return out;
}

void check_characteristic(const WeierstrassModel& m) {
  if (m.field().characteristic() < 5) {
    throw PreconditionError("local data needs p >= 5");
  }
}

}  // namespace

LocalValuations local_valuations(const WeierstrassModel& m, const Place& v) {
  return valuations_from(invariants_of(m), v);
}

KodairaType kodaira_from_valuations(const LocalValuations& val) {
  if (val.c4 >= 4 && val.c6 >= 6) {
    throw PreconditionError("model is not minimal at this place; minimalize first");
  }
  const unsigned D = val.disc;
  if (D == 0) return {Kodaira::I0, 0};
  if (val.c4 == 0) return {Kodaira::In, D};
  if (D > 6 && val.c4 == 2) return {Kodaira::Ins, D - 6};
  switch (D) {
    case 2: return {Kodaira::II, 0};
    case 3: return {Kodaira::III, 0};
    case 4: return {Kodaira::IV, 0};
    case 6: return {Kodaira::I0s, 0};
    case 8: return {Kodaira::IVs, 0};
    case 9: return {Kodaira::IIIs, 0};
    case 10: return {Kodaira::IIs, 0};
    default: break;
  }
  throw ComputationError("inconsistent valuations (c4, c6, disc) = (" +
                         std::to_string(val.c4) + ", " + std::to_string(val.c6) +
                         ", " + std::to_string(D) + ")");
}

PlaceData local_data_at(const WeierstrassModel& m, const Place& v) {
  check_characteristic(m);
  return local_data_from(m, v, local_valuations(m, v));
}

GlobalLocalSummary global_summary(const WeierstrassModel& m) {
  check_characteristic(m);
  const Invariants inv = invariants_of(m);
  GlobalLocalSummary out;
  out.field = m.field().to_string();
  out.height = m.height();
  unsigned disc_degree = 0;
  for (const auto& [v, mult] : divisor(inv.disc)) {
    PlaceData pd = local_data_from(m, v, valuations_from(inv, v));
    disc_degree += pd.ord_disc * v.degree();
    out.conductor_degree += pd.f_v * v.degree();
    out.tamagawa_product *= pd.c_v;
    out.places.push_back(std::move(pd));
  }
  out.disc_degree_check = disc_degree == 12 * m.height();
  if (!out.disc_degree_check) {
    throw ComputationError("discriminant degree " + std::to_string(disc_degree) +
                           " differs from 12d");
  }
  return out;
}

}  // namespace selmer
