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

// Internal: residue fields of places of P^1 and expansions around them.

#ifndef SELMER_SRC_RESIDUE_HPP
#define SELMER_SRC_RESIDUE_HPP

#include "selmer/binary_form.hpp"
#include "selmer/field.hpp"
#include "selmer/unipoly.hpp"

namespace selmer::detail {

// kappa(v) with the image of t (or of s at infinity) as tau, so that the
// expansion variable u = t - tau is a uniformizer.
struct Residue {
  Field kappa;
  Embedding emb;
  Fq tau;
};

Residue residue_at(const Place& v);

// Expansion of a coefficient around v in the uniformizer u.
inline UniPoly expand(const BinaryForm& a, const Place& v, const Residue& r) {
  if (v.is_infinity()) return a.dehomogenize_at_infinity(r.emb);
  return a.dehomogenize(r.emb).shifted(r.tau);
}

}  // namespace selmer::detail

#endif  // SELMER_SRC_RESIDUE_HPP
