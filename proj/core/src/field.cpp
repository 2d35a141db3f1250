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

#include "selmer/field.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>

#include "selmer/errors.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

namespace {

constexpr std::uint64_t kTableLimit = 1u << 20;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// p^k, or 0 when it does not fit below 2^63.
std::uint64_t checked_power(std::uint64_t p, unsigned k) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > (std::uint64_t{1} << 63) / p) return 0;
    q *= p;
  }
  return q;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

void build_tables(detail::FieldData& d, std::uint64_t generator) {
  const std::uint64_t qm1 = d.q - 1;
  d.generator = generator;
  d.exp.assign(2 * qm1, 0);
  d.log.assign(d.q, 0);
  std::uint64_t g = 1;
  for (std::uint64_t i = 0; i < qm1; ++i) {
    d.exp[i] = static_cast<std::uint32_t>(g);
    d.log[g] = static_cast<std::uint32_t>(i);
    g = d.mul_generic(g, generator);
  }
  for (std::uint64_t i = qm1; i < 2 * qm1; ++i) d.exp[i] = d.exp[i - qm1];
  d.zech.assign(qm1, detail::FieldData::kNoZech);
  for (std::uint64_t i = 0; i < qm1; ++i) {
    std::uint64_t e = d.exp[i];
    std::uint64_t low = e % d.p;
    std::uint64_t sum = e - low + (low + 1) % d.p;
    if (sum != 0) d.zech[i] = d.log[sum];
  }
  d.tables = true;
}

std::shared_ptr<detail::FieldData> bare_data(std::uint64_t p, unsigned k,
                                             std::vector<std::uint64_t> mod) {
  auto d = std::make_shared<detail::FieldData>();
  d->p = p;
  d->k = k;
  d->q = checked_power(p, k);
  d->modulus = std::move(mod);
  return d;
}

std::vector<std::uint64_t> least_irreducible(std::uint64_t p, unsigned k) {
  const Field base = Field::make_odd(p, 1);
  const std::uint64_t count = checked_power(p, k);
  for (std::uint64_t n = 0; n < count; ++n) {
    std::vector<std::uint64_t> digits(k + 1, 0);
    std::uint64_t v = n;
    for (unsigned i = 0; i < k; ++i) {
      digits[i] = v % p;
      v /= p;
    }
    digits[k] = 1;
    if (digits[0] == 0) continue;
    if (is_irreducible(UniPoly::from_raw(base, digits))) return digits;
  }
  throw ComputationError("no irreducible polynomial found");
}

Fq find_generator(const Field& f) {
  const std::uint64_t qm1 = f.order() - 1;
  const auto factors = prime_factors(qm1);
  for (std::uint64_t i = 1; i < f.order(); ++i) {
    Fq g = f.element(i);
    bool ok = true;
    for (std::uint64_t l : factors) {
      if (f.pow(g, qm1 / l) == f.one()) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw ComputationError("no primitive element found");
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::uint64_t, unsigned>,
         std::shared_ptr<const detail::FieldData>>&
cache() {
  static std::map<std::pair<std::uint64_t, unsigned>,
                  std::shared_ptr<const detail::FieldData>>
      c;
  return c;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

std::uint64_t FieldData::add_generic(std::uint64_t a, std::uint64_t b) const {
  if (k == 1) return (a + b) % p;
  std::uint64_t out = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t s = a % p + b % p;
    if (s >= p) s -= p;
    out += s * place;
    a /= p;
    b /= p;
    place *= p;
  }
  return out;
}

std::uint64_t FieldData::sub_generic(std::uint64_t a, std::uint64_t b) const {
  if (k == 1) return (a + p - b) % p;
  std::uint64_t out = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t x = a % p, y = b % p;
    out += (x >= y ? x - y : x + p - y) * place;
    a /= p;
    b /= p;
    place *= p;
  }
  return out;
}

std::uint64_t FieldData::mul_generic(std::uint64_t a, std::uint64_t b) const {
  if (k == 1) return mulmod64(a, b, p);
  std::uint64_t da[64], db[64], prod[128];
  for (unsigned i = 0; i < k; ++i) {
    da[i] = a % p;
    db[i] = b % p;
    a /= p;
    b /= p;
  }
  std::fill(prod, prod + 2 * k - 1, 0);
  for (unsigned i = 0; i < k; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < k; ++j) {
      prod[i + j] = (prod[i + j] + mulmod64(da[i], db[j], p)) % p;
    }
  }
  // Reduce by the monic modulus from the top.
  for (unsigned top = 2 * k - 2; top >= k; --top) {
    std::uint64_t c = prod[top];
    if (c == 0) continue;
    prod[top] = 0;
    for (unsigned i = 0; i < k; ++i) {
      std::uint64_t sub = mulmod64(c, modulus[i], p);
      std::uint64_t& slot = prod[top - k + i];
      slot = slot >= sub ? slot - sub : slot + p - sub;
    }
  }
  std::uint64_t out = 0;
  for (unsigned i = k; i-- > 0;) out = out * p + prod[i];
  return out;
}

}  // namespace detail

Field Field::make(std::uint64_t p, unsigned k) {
  if (p == 2 || p == 3) {
    throw PreconditionError("characteristic " + std::to_string(p) +
                            " is not supported (need p >= 5)");
  }
  if (!is_prime(p)) {
    throw PreconditionError(std::to_string(p) + " is not prime");
  }
  if (k < 1 || k > 16) {
    throw PreconditionError("extension degree must be in [1, 16]");
  }
  return make_odd(p, k);
}

Field Field::make_odd(std::uint64_t p, unsigned k) {
  if (p < 3 || !is_prime(p)) {
    throw PreconditionError(std::to_string(p) + " is not an odd prime");
  }
  if (k < 1 || checked_power(p, k) == 0) {
    throw PreconditionError("field order " + std::to_string(p) + "^" +
                            std::to_string(k) + " is out of range");
  }
  {
    std::lock_guard lock(cache_mutex());
    auto it = cache().find({p, k});
    if (it != cache().end()) return Field(it->second);
  }
  std::vector<std::uint64_t> mod;
  if (k > 1) mod = least_irreducible(p, k);
  auto d = bare_data(p, k, std::move(mod));
  if (k > 1 && d->q <= kTableLimit) {
    Field plain(d);
    build_tables(*d, find_generator(plain).raw);
  }
  std::lock_guard lock(cache_mutex());
  auto [it, inserted] = cache().emplace(std::make_pair(p, k), d);
  return Field(it->second);
}

Field Field::with_modulus(std::uint64_t p, std::vector<std::uint64_t> modulus) {
  if (p < 3 || !is_prime(p)) {
    throw PreconditionError(std::to_string(p) + " is not an odd prime");
  }
  if (modulus.size() < 3 || modulus.back() != 1) {
    throw PreconditionError("modulus must be monic of degree >= 2");
  }
  const unsigned k = static_cast<unsigned>(modulus.size() - 1);
  if (checked_power(p, k) == 0) {
    throw PreconditionError("field order out of range");
  }
  for (auto c : modulus) {
    if (c >= p) throw PreconditionError("modulus digit out of range");
  }
  if (!is_irreducible(UniPoly::from_raw(make_odd(p, 1), modulus))) {
    throw PreconditionError("modulus is reducible");
  }
  auto d = bare_data(p, k, std::move(modulus));
  d->canonical = false;
  return Field(std::move(d));
}

Field Field::parse(std::string_view spec) {
  auto caret = spec.find('^');
  auto head = spec.substr(0, caret);
  std::uint64_t p = 0;
  unsigned k = 1;
  auto bad = [&] {
    return PreconditionError("malformed field spec '" + std::string(spec) +
                             "' (expected p^k)");
  };
  auto r = std::from_chars(head.data(), head.data() + head.size(), p);
  if (r.ec != std::errc() || r.ptr != head.data() + head.size()) throw bad();
  if (caret != std::string_view::npos) {
    auto tail = spec.substr(caret + 1);
    auto r2 = std::from_chars(tail.data(), tail.data() + tail.size(), k);
    if (r2.ec != std::errc() || r2.ptr != tail.data() + tail.size()) throw bad();
  }
  return make(p, k);
}

std::string Field::to_string() const {
  return std::to_string(d_->p) + "^" + std::to_string(d_->k);
}

Fq Field::from_int(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(d_->p);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return {static_cast<std::uint64_t>(r)};
}

Fq Field::element(std::uint64_t index) const {
  if (index >= d_->q) throw PreconditionError("element index out of range");
  return {index};
}

Fq Field::pow(Fq a, std::uint64_t e) const {
  if (d_->tables) {
    if (a.raw == 0) return e == 0 ? one() : zero();
    const std::uint64_t qm1 = d_->q - 1;
    const auto l = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(d_->log[a.raw]) * (e % qm1) % qm1);
    return {d_->exp[l]};
  }
  Fq r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Fq Field::inv(Fq a) const {
  if (a.raw == 0) throw ComputationError("inverse of zero");
  if (d_->tables) {
    const std::uint64_t qm1 = d_->q - 1;
    const std::uint64_t l = d_->log[a.raw];
    return {d_->exp[l == 0 ? 0 : qm1 - l]};
  }
  if (d_->k == 1) {
    // Extended Euclid on integers.
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(d_->p);
    std::int64_t newr = static_cast<std::int64_t>(a.raw);
    while (newr != 0) {
      std::int64_t quot = r / newr;
      std::tie(t, newt) = std::make_pair(newt, t - quot * newt);
      std::tie(r, newr) = std::make_pair(newr, r - quot * newr);
    }
    if (t < 0) t += static_cast<std::int64_t>(d_->p);
    return {static_cast<std::uint64_t>(t)};
  }
  return pow(a, d_->q - 2);
}

int Field::legendre(Fq a) const {
  if (a.raw == 0) return 0;
  if (d_->tables) return (d_->log[a.raw] & 1) ? -1 : 1;
  return pow(a, (d_->q - 1) / 2) == one() ? 1 : -1;
}

std::optional<Fq> Field::sqrt(Fq a) const {
  if (a.raw == 0) return zero();
  if (legendre(a) < 0) return std::nullopt;
  if (d_->tables) return Fq{d_->exp[d_->log[a.raw] / 2]};
  // Tonelli-Shanks.
  std::uint64_t qm1 = d_->q - 1;
  unsigned s = 0;
  while ((qm1 & 1) == 0) {
    qm1 >>= 1;
    ++s;
  }
  Fq z = one();
  for (std::uint64_t i = 2; i < d_->q; ++i) {
    if (legendre(element(i)) < 0) {
      z = element(i);
      break;
    }
  }
  Fq c = pow(z, qm1);
  Fq x = pow(a, (qm1 + 1) / 2);
  Fq t = pow(a, qm1);
  unsigned m = s;
  while (t != one()) {
    unsigned i = 0;
    Fq tt = t;
    while (tt != one()) {
      tt = sqr(tt);
      ++i;
    }
    Fq b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = sqr(b);
    x = mul(x, b);
    c = sqr(b);
    t = mul(t, c);
    m = i;
  }
  return x;
}

Fq Field::pth_root(Fq a) const {
  if (d_->k == 1) return a;
  return pow(a, d_->q / d_->p);
}

Fq Field::primitive_element() const {
  if (d_->tables) return {d_->generator};
  return find_generator(*this);
}

Field Field::extension(unsigned e) const {
  if (e == 0) throw PreconditionError("extension degree must be positive");
  return make_odd(d_->p, d_->k * e);
}

Embedding::Embedding(const Field& from, const Field& to)
    : from_(from), to_(to) {
  if (from.characteristic() != to.characteristic() ||
      to.degree() % from.degree() != 0) {
    throw PreconditionError("no embedding " + from.to_string() + " -> " +
                            to.to_string());
  }
  powers_.push_back(to.one());
  if (from.degree() == 1) return;
  if (from.same_as(to)) {
    for (unsigned i = 1; i < from.degree(); ++i) {
      powers_.push_back(to.mul(powers_.back(), to.basis_generator()));
    }
    return;
  }
  const UniPoly mod = UniPoly::from_raw(to, from.modulus());
  const auto rts = roots(mod);
  if (rts.empty()) throw ComputationError("modulus has no root in target");
  const Fq theta = rts.front();
  for (unsigned i = 1; i < from.degree(); ++i) {
    powers_.push_back(to.mul(powers_.back(), theta));
  }
}

Fq Embedding::operator()(Fq a) const {
  if (powers_.size() == 1) return a;
  const std::uint64_t p = from_.characteristic();
  Fq out = to_.zero();
  std::uint64_t v = a.raw;
  for (const Fq& pw : powers_) {
    const std::uint64_t digit = v % p;
    v /= p;
    if (digit) out = to_.add(out, to_.mul(to_.element(digit), pw));
  }
  return out;
}

}  // namespace selmer
