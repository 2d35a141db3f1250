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

// Even integral lattices, their reductions mod n, and orbits of vectors
// under groups generated by reflections.

#ifndef SELMER_LATTICE_HPP
#define SELMER_LATTICE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace selmer {

using IntVector = std::vector<std::int64_t>;

struct IntegralLattice {
  std::size_t rank = 0;
  std::vector<std::int64_t> gram;  // row-major, symmetric, even diagonal

  std::int64_t entry(std::size_t i, std::size_t j) const {
    return gram[i * rank + j];
  }
  /// v.Gv / 2, exact over the integers.
  std::int64_t q(const IntVector& v) const;
  std::int64_t bilinear(const IntVector& x, const IntVector& y) const;
  /// Throws PreconditionError unless gram is symmetric with even diagonal.
  void validate() const;
};

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t null = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Positive definite E8 in the basis of simple roots (Cartan matrix).
IntegralLattice e8_lattice();
IntegralLattice hyperbolic_plane();
IntegralLattice negated(IntegralLattice l);
IntegralLattice direct_sum(const std::vector<IntegralLattice>& blocks);

/// U^(2d-2) + (-E8)^d, U blocks first. d >= 2; use weyl_e8_orbits for d = 1.
IntegralLattice selmer_lattice(unsigned d);

/// Exact, by congruence diagonalization over Q. ComputationError if the
/// determinant does not fit in 64 bits.
std::int64_t determinant(const IntegralLattice& l);
Signature signature(const IntegralLattice& l);

/// +1 or -1: the parity of the number of word vectors with q(v) > 0, i.e.
/// with -q(v) < 0. Throws PreconditionError on an isotropic vector.
int spinor_sign(const IntegralLattice& l, const std::vector<IntVector>& word);

/// (Z/nZ)^r with q(v) = v.Gv/2 mod n. n < 2^31.
class QuadraticModule {
 public:
  using Vec = std::vector<std::uint32_t>;

  QuadraticModule(IntegralLattice lattice, std::uint32_t n);

  std::uint32_t n() const { return n_; }
  std::size_t rank() const { return lattice_.rank; }
  const IntegralLattice& lattice() const { return lattice_; }

  Vec reduce(const IntVector& v) const;
  std::uint32_t q_value(const Vec& v) const;
  std::uint32_t bilinear(const Vec& x, const Vec& y) const;
  /// v - (B(v,w)/q(w)) w. PreconditionError "non-invertible reflection
  /// vector" unless q(w) is a unit mod n.
  Vec reflect(const Vec& w, const Vec& v) const;

  /// q of integral lifts, reduced mod m. Needed for m | n as well as m = n.
  std::uint32_t q_mod(const Vec& v, std::uint32_t m) const;

 private:
  IntegralLattice lattice_;
  std::uint32_t n_;
};

struct ContentInvariant {
  std::uint32_t t = 0;     // content: gcd of the coordinates and n
  std::uint32_t qbar = 0;  // q(v/t) mod n/t
  friend auto operator<=>(const ContentInvariant&,
                          const ContentInvariant&) = default;
};

ContentInvariant content_invariant(const QuadraticModule& m,
                                   const QuadraticModule::Vec& v);

struct InvariantClass {
  ContentInvariant invariant;
  QuadraticModule::Vec witness;  // content_invariant(witness) == invariant
};

/// Every (t, qbar) with t | n and qbar mod n/t that content_invariant can
/// return, each with a witness; (n, 0) is the zero vector alone. Needs a
/// hyperbolic pair of coordinates (G_ii = G_jj = 0, G_ij = 1); the count is
/// sigma(n) whenever one exists.
std::vector<InvariantClass> invariant_classes(const QuadraticModule& m);

struct PoolVector {
  IntVector v;
  std::int64_t q = 0;  // integral q(v), kept so words stay auditable
  std::string origin;
};

/// Reflection pool for selmer_lattice(d): the simple roots of each E8 block,
/// e+f and e-f in each U block, and `random_count` vectors with small
/// entries and q in {1, -1, 2, -2}.
std::vector<PoolVector> selmer_reflection_pool(unsigned d, std::uint64_t seed,
                                               unsigned random_count = 64);
std::vector<PoolVector> e8_simple_roots();

enum class OrbitMode { kExhaustive, kSampling };
std::string to_string(OrbitMode mode);

struct OrbitInfo {
  QuadraticModule::Vec representative;
  std::uint64_t size = 0;  // 0 when unknown (sampling mode)
  ContentInvariant invariant;
};

/// Sampling-mode evidence for one predicted class. Every sampled vector is
/// walked by random reflections until it lands in a ball grown by BFS around
/// the hub, which connects it to the hub.
struct ClassCertificate {
  ContentInvariant invariant;
  QuadraticModule::Vec hub;
  std::uint64_t ball_size = 0;
  unsigned pairs_attempted = 0;
  unsigned pairs_connected = 0;
  std::uint64_t walk_steps = 0;  // total over all successful walks
  bool resolved = false;
};

struct SamplingOptions {
  unsigned pairs_per_class = 100;
  unsigned walk_length = 64;
  unsigned restarts = 256;
  std::uint64_t ball_target = std::uint64_t{1} << 21;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct OrbitReport {
  std::uint32_t n = 1;
  std::size_t rank = 0;
  OrbitMode mode = OrbitMode::kExhaustive;
  std::uint64_t orbit_count = 0;
  std::vector<OrbitInfo> orbits;
  std::vector<std::int64_t> generator_q;  // integral q of each generator used
  std::size_t generators_skipped = 0;     // q(w) not a unit mod n

  // Exhaustive mode.
  bool invariant_homogeneous = false;  // each orbit has a single invariant
  bool invariants_distinct = false;    // no two orbits share an invariant

  // Sampling mode.
  std::vector<ClassCertificate> classes;
  unsigned unresolved = 0;
};

inline constexpr std::uint64_t kDefaultOrbitBudget = std::uint64_t{1} << 26;

/// BFS over all n^r vectors. BudgetExceeded if n^r > budget.
OrbitReport orbit_decompose_exhaustive(const QuadraticModule& m,
                                       const std::vector<PoolVector>& gens,
                                       std::uint64_t budget = kDefaultOrbitBudget);

/// Classes predicted by content_invariant, each checked by random walks.
/// orbit_count is the class count only when unresolved == 0.
OrbitReport orbit_decompose_sampling(const QuadraticModule& m,
                                     const std::vector<PoolVector>& gens,
                                     const SamplingOptions& opts);

/// W(E8) acting on (Z/nZ)^8 through the simple reflections.
OrbitReport weyl_e8_orbits(std::uint32_t n,
                           std::uint64_t budget = kDefaultOrbitBudget);

/// sum of the divisors of n.
std::uint64_t divisor_sum(std::uint64_t n);

}  // namespace selmer

#endif  // SELMER_LATTICE_HPP
