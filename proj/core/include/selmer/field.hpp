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

// Finite fields F_{p^k} for odd p.
//
// An element is stored as its index in [0, q): the base-p digits of the index
// are the coefficients (low degree first) of the element written in the
// polynomial basis 1, X, ..., X^{k-1} of F_p[X]/(modulus). The prime subfield
// is therefore {0, ..., p-1} in every field of characteristic p.

#ifndef SELMER_FIELD_HPP
#define SELMER_FIELD_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selmer {

struct Fq {
  std::uint64_t raw = 0;

  friend constexpr bool operator==(Fq, Fq) = default;
  friend constexpr auto operator<=>(Fq, Fq) = default;
};

namespace detail {

struct FieldData {
  std::uint64_t p = 0;
  unsigned k = 1;
  std::uint64_t q = 0;
  // Monic, k + 1 digits low->high. Empty for prime fields.
  std::vector<std::uint64_t> modulus;
  bool canonical = true;

  // Log/exp/Zech tables, present only for small non-prime fields.
  bool tables = false;
  std::uint64_t generator = 0;
  std::vector<std::uint32_t> exp;   // size 2(q-1)
  std::vector<std::uint32_t> log;   // size q, log[0] unused
  std::vector<std::uint32_t> zech;  // log(1 + g^i), kNoZech when zero
  static constexpr std::uint32_t kNoZech = 0xffffffffu;

  std::uint64_t add_generic(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub_generic(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t mul_generic(std::uint64_t a, std::uint64_t b) const;
};

}  // namespace detail

/// Handle to an immutable finite field. Copies share the same tables.
class Field {
 public:
  /// F_{p^k}, p >= 5 prime, 1 <= k <= 16, least lexicographic modulus.
  static Field make(std::uint64_t p, unsigned k = 1);
  /// Same as make() but also admits p = 3 and any k with p^k < 2^63.
  /// Reserved for characteristic-free linear algebra (incidence counts)
  /// and for residue/extension fields of an already valid base.
  static Field make_odd(std::uint64_t p, unsigned k = 1);
  /// F_p[X]/(modulus) for a monic irreducible modulus over F_p, digits
  /// low->high. Irreducibility is checked.
  static Field with_modulus(std::uint64_t p,
                            std::vector<std::uint64_t> modulus);
  /// Parses "p^k" or "p".
  static Field parse(std::string_view spec);

  std::uint64_t characteristic() const { return d_->p; }
  unsigned degree() const { return d_->k; }
  std::uint64_t order() const { return d_->q; }
  const std::vector<std::uint64_t>& modulus() const { return d_->modulus; }
  bool is_prime_field() const { return d_->k == 1; }
  std::string to_string() const;

  Fq zero() const { return {0}; }
  Fq one() const { return {1}; }
  Fq from_int(std::int64_t v) const;
  /// Element with the given index; index < order().
  Fq element(std::uint64_t index) const;
  /// The class of X (a generator of the field over F_p). For prime fields 1.
  Fq basis_generator() const { return {d_->k == 1 ? 1 : d_->p}; }

  Fq add(Fq a, Fq b) const {
    const auto& d = *d_;
    if (d.k == 1) {
      std::uint64_t s = a.raw + b.raw;
      return {s >= d.p ? s - d.p : s};
    }
    if (d.tables) return {add_tabled(a.raw, b.raw)};
    return {d.add_generic(a.raw, b.raw)};
  }
  Fq neg(Fq a) const {
    const auto& d = *d_;
    if (a.raw == 0) return a;
    if (d.k == 1) return {d.p - a.raw};
    if (d.tables) return {d.exp[d.log[a.raw] + (d.q - 1) / 2]};
    return {d.sub_generic(0, a.raw)};
  }
  Fq sub(Fq a, Fq b) const {
    const auto& d = *d_;
    if (d.k == 1) return {a.raw >= b.raw ? a.raw - b.raw : a.raw + d.p - b.raw};
    if (d.tables) return {add_tabled(a.raw, neg(b).raw)};
    return {d.sub_generic(a.raw, b.raw)};
  }
  Fq mul(Fq a, Fq b) const {
    const auto& d = *d_;
    if (d.k == 1) {
      return {static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(a.raw) * b.raw) % d.p)};
    }
    if (d.tables) {
      if (a.raw == 0 || b.raw == 0) return {0};
      return {d.exp[d.log[a.raw] + d.log[b.raw]]};
    }
    return {d.mul_generic(a.raw, b.raw)};
  }
  Fq sqr(Fq a) const { return mul(a, a); }
  Fq pow(Fq a, std::uint64_t e) const;
  /// Throws ComputationError on zero.
  Fq inv(Fq a) const;
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq scale(Fq a, std::int64_t c) const { return mul(a, from_int(c)); }

  /// Quadratic character: 0 for 0, +1 for nonzero squares, -1 otherwise.
  int legendre(Fq a) const;
  bool is_square(Fq a) const { return legendre(a) >= 0; }
  std::optional<Fq> sqrt(Fq a) const;
  /// a^p.
  Fq frobenius(Fq a) const { return pow(a, d_->p); }
  /// Inverse Frobenius, a^{q/p}.
  Fq pth_root(Fq a) const;
  /// A generator of the multiplicative group (least index).
  Fq primitive_element() const;

  /// Canonical F_{q^e}; pair with Embedding to move elements across.
  Field extension(unsigned e) const;

  bool same_as(const Field& other) const {
    return d_ == other.d_ ||
           (d_->p == other.d_->p && d_->modulus == other.d_->modulus);
  }
  const detail::FieldData& data() const { return *d_; }

 private:
  explicit Field(std::shared_ptr<const detail::FieldData> d)
      : d_(std::move(d)) {}
  std::uint64_t add_tabled(std::uint64_t a, std::uint64_t b) const {
    const auto& d = *d_;
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint64_t qm1 = d.q - 1;
    std::uint64_t la = d.log[a];
    std::uint64_t lb = d.log[b];
    std::uint64_t diff = lb >= la ? lb - la : lb + qm1 - la;
    std::uint32_t z = d.zech[diff];
    if (z == detail::FieldData::kNoZech) return 0;
    return d.exp[la + z];
  }

  std::shared_ptr<const detail::FieldData> d_;
};

/// Field homomorphism F_q -> F_{q^e} determined by the image of X.
class Embedding {
 public:
  Embedding(const Field& from, const Field& to);

  Fq operator()(Fq a) const;
  const Field& source() const { return from_; }
  const Field& target() const { return to_; }

 private:
  Field from_;
  Field to_;
  std::vector<Fq> powers_;  // images of 1, X, ..., X^{k-1}
};

bool is_prime(std::uint64_t n);

}  // namespace selmer

#endif  // SELMER_FIELD_HPP
