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

// Local invariants of a short Weierstrass model at a place of P^1, p >= 5.

#ifndef SELMER_LOCALDATA_HPP
#define SELMER_LOCALDATA_HPP

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selmer/binary_form.hpp"
#include "selmer/weierstrass.hpp"

namespace selmer {

inline constexpr unsigned kInfiniteOrder = UINT_MAX;

enum class Kodaira { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs };

struct KodairaType {
  Kodaira symbol = Kodaira::I0;
  unsigned n = 0;  // only for I_n and I_n*

  std::string to_string() const;  // "I0", "I3", "II", "I2*", "IV*", ...
  /// Geometric components of the special fiber of the minimal regular model.
  unsigned components() const;
  /// 0 good, 1 multiplicative, 2 additive (tame).
  unsigned conductor_exponent() const;
  friend bool operator==(const KodairaType&, const KodairaType&) = default;
};

struct LocalValuations {
  unsigned c4 = 0;    // kInfiniteOrder when c4 vanishes identically
  unsigned c6 = 0;
  unsigned disc = 0;  // disc must be nonzero
};

/// ord_v of a form, kInfiniteOrder for the zero form.
unsigned ord_or_infinite(const BinaryForm& f, const Place& v);

LocalValuations local_valuations(const WeierstrassModel& m, const Place& v);

/// The tame table. Throws PreconditionError if ord c4 >= 4 and ord c6 >= 6.
KodairaType kodaira_from_valuations(const LocalValuations& val);

struct PlaceData {
  Place place;
  KodairaType kodaira;
  unsigned ord_disc = 0;
  unsigned f_v = 0;
  unsigned m_v = 1;
  unsigned c_v = 1;
  std::optional<bool> split;  // multiplicative places only
};

/// Throws PreconditionError for p < 5, zero discriminant, or a model that is
/// not minimal at v.
PlaceData local_data_at(const WeierstrassModel& m, const Place& v);

struct GlobalLocalSummary {
  std::string field;
  unsigned height = 0;
  std::vector<PlaceData> places;  // bad places, finite first, infinity last
  unsigned conductor_degree = 0;
  std::uint64_t tamagawa_product = 1;
  bool disc_degree_check = false;
};

GlobalLocalSummary global_summary(const WeierstrassModel& m);

}  // namespace selmer

#endif  // SELMER_LOCALDATA_HPP
