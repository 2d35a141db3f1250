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

#include "residue.hpp"

#include <map>
#include <vector>

#include "selmer/errors.hpp"

namespace selmer::detail {

namespace {

// Building F_p[X]/(pi) re-checks irreducibility and may build log tables,
// which dominates census loops that revisit the same few places.
Field residue_field(std::uint64_t p, const std::vector<std::uint64_t>& modulus) {
  thread_local std::map<std::pair<std::uint64_t, std::vector<std::uint64_t>>, Field> cache;
  auto key = std::make_pair(p, modulus);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 4096) cache.clear();
    it = cache.emplace(std::move(key), Field::with_modulus(p, modulus)).first;
  }
  return it->second;
}

}  // namespace

Residue residue_at(const Place& v) {
  const Field& F = v.field();
  if (v.is_infinity()) return {F, Embedding(F, F), F.zero()};
  const UniPoly& pi = v.poly();
  if (pi.degree() == 1) return {F, Embedding(F, F), F.neg(pi[0])};
  if (F.is_prime_field()) {
    Field kappa = residue_field(F.characteristic(), pi.raw());
    return {kappa, Embedding(F, kappa), kappa.basis_generator()};
  }
  Field kappa = F.extension(static_cast<unsigned>(pi.degree()));
  Embedding emb(F, kappa);
  const auto rts = roots(pi.mapped(kappa, [&](Fq c) { return emb(c); }));
  if (rts.empty()) throw ComputationError("place has no root in its residue field");
  return {kappa, emb, rts.front()};
}

}  // namespace selmer::detail
