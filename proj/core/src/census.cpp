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

#include "selmer/census.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <set>
#include <unordered_set>

#include "selmer/errors.hpp"
#include "selmer/parallel.hpp"
#include "selmer/unipoly.hpp"

namespace selmer {

namespace {

constexpr std::uint64_t kChunk = 4096;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Proportion proportion(std::uint64_t count, std::uint64_t total, bool exact) {
  Proportion p;
  p.count = count;
  p.value = total ? static_cast<double>(count) / static_cast<double>(total) : 0.0;
  if (!exact && total) {
    p.radius = 1.96 * std::sqrt(p.value * (1 - p.value) / static_cast<double>(total));
  }
  return p;
}

void require_census_field(const Field& f) {
  if (f.characteristic() < 5) {
    throw PreconditionError("census classification needs p >= 5");
  }
}

// The discriminant is squarefree as a form: nonzero, ord at infinity <= 1
// and squarefree in the affine chart.
bool squarefree_form(const BinaryForm& disc) {
  if (disc.is_zero()) return false;
  const UniPoly g = disc.dehomogenize();
  if (static_cast<unsigned>(g.degree()) + 1 < disc.degree()) return false;
  return g.degree() <= 0 || is_squarefree(g);
}

}  // namespace

std::uint64_t checked_power(std::uint64_t q, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > UINT64_MAX / q) throw BudgetExceeded("q^e does not fit in 64 bits");
    r *= q;
  }
  return r;
}

WeierstrassModel model_at_index(const Field& f, unsigned d, std::uint64_t index) {
  const std::uint64_t q = f.order();
  std::vector<std::uint64_t> c(parameter_dimension(d));
  for (auto& x : c) {
    x = index % q;
    index /= q;
  }
  if (index != 0) throw PreconditionError("model index out of range");
  return WeierstrassModel::from_coordinates(f, d, c);
}

std::uint64_t index_of(const WeierstrassModel& m) {
  const std::uint64_t q = m.field().order();
  const std::vector<std::uint64_t> c = m.coordinates();
  std::uint64_t index = 0;
  for (std::size_t i = c.size(); i-- > 0;) index = index * q + c[i];
  return index;
}

WeierstrassModel random_model(const Field& f, unsigned d, SplitMix64& rng) {
  std::vector<std::uint64_t> c(parameter_dimension(d));
  for (auto& x : c) x = rng.below(f.order());
  return WeierstrassModel::from_coordinates(f, d, c);
}

WeierstrassModel random_minimal_model(const Field& f, unsigned d, SplitMix64& rng) {
  while (true) {
    WeierstrassModel m = random_model(f, d, rng);
    if (is_minimal(m)) return m;
  }
}

WeierstrassModel random_smooth_model(const Field& f, unsigned d, SplitMix64& rng) {
  require_census_field(f);
  while (true) {
    WeierstrassModel m = random_model(f, d, rng);
    if (is_minimal(m) && is_smooth_surface(m)) return m;
  }
}

WeierstrassModel seeded_smooth_model(const Field& f, unsigned d,
                                     std::uint64_t seed, std::uint64_t i) {
  SplitMix64 rng = SplitMix64::stream(seed, i);
  return random_smooth_model(f, d, rng);
}

std::string to_string(CensusMode mode) {
  return mode == CensusMode::kExhaustive ? "exhaustive" : "sample";
}

// --- run_census -----------------------------------------------------------

CensusReport run_census(const Field& f, unsigned d, const CensusOptions& opts) {
  require_census_field(f);
  const auto t0 = std::chrono::steady_clock::now();
  const bool exhaustive = opts.mode == CensusMode::kExhaustive;
  const std::uint64_t space = checked_power(f.order(), parameter_dimension(d));
  std::uint64_t total = 0;
  if (exhaustive) {
    if (space > opts.exhaustive_budget) {
      throw BudgetExceeded("q^(12d+3) = " + std::to_string(space) +
                           " exceeds the exhaustive budget");
    }
    total = space;
  } else {
    if (opts.samples < 10000) throw PreconditionError("sampling needs N >= 10^4");
    total = opts.samples;
  }

  struct Tally {
    std::uint64_t minimal = 0, smooth = 0, squarefree = 0;
  };
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<Tally> tallies(chunks);
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    Tally t;
    const std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      WeierstrassModel m = [&] {
        if (exhaustive) return model_at_index(f, d, i);
        SplitMix64 rng = SplitMix64::stream(opts.seed, i);
        return random_model(f, d, rng);
      }();
      const bool minimal = is_minimal(m);
      t.minimal += minimal;
      t.squarefree += squarefree_form(discriminant_form(m));
      if (minimal) t.smooth += is_smooth_surface(m);
    }
    tallies[c] = t;
  });
  Tally sum;
  for (const Tally& t : tallies) {
    sum.minimal += t.minimal;
    sum.smooth += t.smooth;
    sum.squarefree += t.squarefree;
  }

  CensusReport r;
  r.field = f.to_string();
  r.d = d;
  r.mode = opts.mode;
  r.seed = opts.seed;
  r.total = total;
  r.minimal = proportion(sum.minimal, total, exhaustive);
  r.smooth = proportion(sum.smooth, total, exhaustive);
  r.squarefree_disc = proportion(sum.squarefree, total, exhaustive);
  r.group_order = group_order(f, d);
  r.stacky_count = exhaustive ? static_cast<double>(sum.minimal) / static_cast<double>(r.group_order)
                              : r.minimal.value * static_cast<double>(space) /
                                    static_cast<double>(r.group_order);
  r.seconds = seconds_since(t0);
  return r;
}

// --- Incidence ---------------------------------------------------------------

namespace {

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(const Field& f, std::vector<std::vector<Fq>>& rows,
                              std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == f.zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Fq inv = f.inv(rows[r][c]);
    for (auto& x : rows[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == f.zero()) continue;
      const Fq k = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        rows[i][j] = f.sub(rows[i][j], f.mul(k, rows[r][j]));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

IncidenceMark incidence_constraints(const Field& f, unsigned d, Fq x0,
                                    std::optional<Fq> t0) {
  const unsigned n = parameter_dimension(d);
  IncidenceMark mark{x0, t0, std::vector<std::vector<Fq>>(3, std::vector<Fq>(n + 1, f.zero())), 0};
  // Value and first derivative of sum c_j t^j at t0, as functionals of c_j.
  // At infinity the chart is sum c_j s^(D-j) at s = 0.
  auto value = [&](unsigned D, unsigned j) {
    if (!t0) return j == D ? f.one() : f.zero();
    return f.pow(*t0, j);
  };
  auto deriv = [&](unsigned D, unsigned j) {
    if (!t0) return D >= 1 && j == D - 1 ? f.one() : f.zero();
    if (j == 0) return f.zero();
    return f.mul(f.from_int(j), f.pow(*t0, j - 1));
  };
  const Fq x2 = f.mul(x0, x0);
  const Fq two_x = f.add(x0, x0);
  const unsigned degs[3] = {2 * d, 4 * d, 6 * d};
  unsigned off = 0;
  for (int k = 0; k < 3; ++k) {
    const unsigned D = degs[k];
    // Powers of x0 multiplying a2, a4, a6 in f, and in f_x.
    const Fq in_f = k == 0 ? x2 : (k == 1 ? x0 : f.one());
    const Fq in_fx = k == 0 ? two_x : (k == 1 ? f.one() : f.zero());
    for (unsigned j = 0; j <= D; ++j) {
      mark.equations[0][off + j] = f.mul(in_f, value(D, j));
      mark.equations[1][off + j] = f.mul(in_fx, value(D, j));
      mark.equations[2][off + j] = f.mul(in_f, deriv(D, j));
    }
    off += D + 1;
  }
  mark.equations[0][n] = f.neg(f.mul(x2, x0));
  mark.equations[1][n] = f.neg(f.mul(f.from_int(3), x2));
  auto rows = mark.equations;
  mark.rank = static_cast<unsigned>(rref(f, rows, n).size());
  return mark;
}

DivisorCountReport singular_divisor_count(const Field& f, unsigned d,
                                          const DivisorCountOptions& opts) {
  if (d < 1) throw PreconditionError("divisor count needs d >= 1");
  if (f.characteristic() == 2) throw PreconditionError("odd characteristic only");
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t q = f.order();
  const unsigned n = parameter_dimension(d);
  const std::uint64_t total = checked_power(q, n);

  DivisorCountReport r;
  r.field = f.to_string();
  r.d = d;
  r.total = total;

  const bool marks_fit = total <= opts.mark_budget_bits;
  std::vector<std::uint64_t> bits;
  if (marks_fit) {
    bits.assign((total + 63) / 64, 0);
    r.mark_bytes = bits.size() * sizeof(std::uint64_t);
    std::vector<std::uint64_t> place(n);
    for (unsigned i = 0; i < n; ++i) place[i] = checked_power(q, i);

    // Base points: x0 in F_q times P^1(F_q), index q means infinity.
    r.base_points = q * (q + 1);
    parallel_for(r.base_points, opts.threads, [&](std::size_t b) {
      const Fq x0 = f.element(b % q);
      const std::uint64_t ti = b / q;
      const std::optional<Fq> tp = ti < q ? std::optional<Fq>(f.element(ti)) : std::nullopt;
      IncidenceMark mark = incidence_constraints(f, d, x0, tp);
      if (mark.rank != 3) {
        throw ComputationError("incidence system does not have rank 3");
      }
      auto rows = mark.equations;
      const std::vector<std::size_t> piv = rref(f, rows, n);
      std::vector<std::size_t> free;
      for (std::size_t c = 0, k = 0; c < n; ++c) {
        if (k < piv.size() && piv[k] == c) {
          ++k;
        } else {
          free.push_back(c);
        }
      }
      std::vector<std::uint64_t> digit(free.size(), 0);
      const std::uint64_t count = checked_power(q, static_cast<unsigned>(free.size()));
      for (std::uint64_t it = 0; it < count; ++it) {
        std::uint64_t index = 0;
        for (std::size_t k = 0; k < free.size(); ++k) index += digit[k] * place[free[k]];
        for (std::size_t i = 0; i < piv.size(); ++i) {
          Fq v = rows[i][n];
          for (std::size_t k = 0; k < free.size(); ++k) {
            if (digit[k] == 0) continue;
            v = f.sub(v, f.mul(rows[i][free[k]], Fq{digit[k]}));
          }
          index += v.raw * place[piv[i]];
        }
        std::atomic_ref<std::uint64_t>(bits[index >> 6])
            .fetch_or(std::uint64_t{1} << (index & 63), std::memory_order_relaxed);
        for (std::size_t k = 0; k < digit.size() && ++digit[k] == q; ++k) digit[k] = 0;
      }
    });
    std::uint64_t image = 0;
    for (std::uint64_t w : bits) image += static_cast<std::uint64_t>(std::popcount(w));
    r.image_count = image;
    r.image_ratio = static_cast<double>(image) / static_cast<double>(total / q);
    r.log_q_image = std::log(static_cast<double>(image)) / std::log(static_cast<double>(q));
  }

  struct Tally {
    std::uint64_t singular = 0, rational = 0, generic = 0, minimal = 0;
    std::uint64_t marked_not_singular = 0, marked_not_rational = 0;
    std::uint64_t rational_not_marked = 0, irrational_only = 0;
  };
  const std::uint64_t examined = marks_fit ? total : opts.fallback_samples;
  const std::uint64_t chunks = (examined + kChunk - 1) / kChunk;
  std::vector<Tally> tallies(chunks);
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    Tally t;
    const std::uint64_t end = std::min<std::uint64_t>(examined, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      std::uint64_t index = i;
      if (!marks_fit) {
        SplitMix64 rng = SplitMix64::stream(opts.seed, i);
        index = rng.below(total);
      }
      const WeierstrassModel m = model_at_index(f, d, index);
      const SingularSearch s = singular_point_search(m);
      t.singular += s.singular;
      t.rational += s.rational;
      t.generic += s.generic_fiber_singular;
      t.minimal += is_minimal(m);
      if (!marks_fit) continue;
      const bool marked = (bits[index >> 6] >> (index & 63)) & 1;
      t.marked_not_singular += marked && !s.singular;
      t.marked_not_rational += marked && !s.rational;
      t.rational_not_marked += s.rational && !marked;
      t.irrational_only += s.singular && !s.rational;
    }
    tallies[c] = t;
  });
  r.direct_sampled = !marks_fit;
  r.direct_examined = examined;
  for (const Tally& t : tallies) {
    r.direct_count += t.singular;
    r.rational_singular += t.rational;
    r.generic_singular += t.generic;
    r.minimal_count += t.minimal;
    r.marked_not_singular += t.marked_not_singular;
    r.marked_not_rational += t.marked_not_rational;
    r.rational_not_marked += t.rational_not_marked;
    r.singular_only_irrational += t.irrational_only;
  }
  r.audit_passed = marks_fit && r.marked_not_singular == 0 &&
                   r.marked_not_rational == 0 && r.rational_not_marked == 0;
  r.seconds = seconds_since(t0);
  return r;
}

// --- Orbit-stabilizer audit -------------------------------------------------------

StabilizerAudit orbit_stabilizer_audit(const Field& f, unsigned d, unsigned count,
                                       std::uint64_t seed, unsigned threads) {
  require_census_field(f);
  const std::uint64_t q = f.order();
  const std::uint64_t translations = checked_power(q, 2 * d + 1);
  StabilizerAudit audit;
  audit.field = f.to_string();
  audit.d = d;
  audit.group_order = group_order(f, d);
  if (audit.group_order > (std::uint64_t{1} << 24)) {
    throw BudgetExceeded("group too large to enumerate orbits");
  }

  std::vector<GroupElement> group;
  group.reserve(audit.group_order);
  for (std::uint64_t ri = 0; ri < translations; ++ri) {
    std::vector<Fq> c(2 * d + 1);
    std::uint64_t x = ri;
    for (auto& e : c) {
      e = f.element(x % q);
      x /= q;
    }
    const BinaryForm r(f, 2 * d, c);
    for (std::uint64_t l = 1; l < q; ++l) group.push_back({r, f.element(l)});
  }

  audit.entries.resize(count);
  std::vector<std::vector<std::uint64_t>> orbits(count);
  parallel_for(count, threads, [&](std::size_t i) {
    SplitMix64 rng = SplitMix64::stream(seed, i);
    const WeierstrassModel m = random_minimal_model(f, d, rng);
    AuditEntry& e = audit.entries[i];
    e.coordinates = m.coordinates();
    std::unordered_set<std::uint64_t> orbit;
    for (const GroupElement& g : group) {
      const WeierstrassModel gm = act(g, m);
      orbit.insert(index_of(gm));
      e.stabilizer_enumerated += gm == m;
    }
    e.orbit_size = orbit.size();
    e.stabilizer_formula = stabilizer_order(m);
    e.passed = e.orbit_size * e.stabilizer_enumerated == audit.group_order &&
               e.stabilizer_enumerated == e.stabilizer_formula;
    orbits[i].assign(orbit.begin(), orbit.end());
  });

  // Weighted count over the union of the orbits, with |Stab| taken from the
  // closed formula at every member rather than from the enumeration.
  std::set<std::uint64_t> members;
  std::set<std::uint64_t> representatives;
  for (auto& o : orbits) {
    if (o.empty()) continue;
    representatives.insert(*std::min_element(o.begin(), o.end()));
    members.insert(o.begin(), o.end());
  }
  const std::vector<std::uint64_t> list(members.begin(), members.end());
  std::vector<std::uint64_t> stab(list.size());
  parallel_for(list.size(), threads, [&](std::size_t i) {
    stab[i] = stabilizer_order(model_at_index(f, d, list[i]));
  });
  std::uint64_t weighted = 0;
  for (std::uint64_t s : stab) weighted += s;
  audit.distinct_orbits = representatives.size();
  audit.weighted_sum_passed = weighted == audit.distinct_orbits * audit.group_order;
  audit.passed = audit.weighted_sum_passed;
  for (const auto& e : audit.entries) audit.passed = audit.passed && e.passed;
  return audit;
}

}  // namespace selmer
