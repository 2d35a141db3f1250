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

#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "selmer/census.hpp"
#include "selmer/errors.hpp"
#include "selmer/lfunction.hpp"
#include "selmer/localdata.hpp"
#include "selmer/rng.hpp"

#ifndef SELMER_VERSION
#define SELMER_VERSION "unknown"
#endif

namespace selmer::cli {

namespace {

// Visited bit plus a 32-bit queue slot per vector in the exhaustive BFS.
constexpr std::uint64_t kBitsPerOrbitVector = 33;

struct Globals {
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::uint64_t budget_bits = std::uint64_t{1} << 31;
};

// "p^k" or "p". p = 3 only where the command runs characteristic-free code.
Field parse_field(const std::string& spec, bool allow_three) {
  if (!allow_three) return Field::parse(spec);
  const auto caret = spec.find('^');
  const std::string head = spec.substr(0, caret);
  const std::string tail = caret == std::string::npos ? "1" : spec.substr(caret + 1);
  std::uint64_t p = 0;
  unsigned k = 0;
  const auto r1 = std::from_chars(head.data(), head.data() + head.size(), p);
  const auto r2 = std::from_chars(tail.data(), tail.data() + tail.size(), k);
  if (r1.ec != std::errc() || r1.ptr != head.data() + head.size() ||
      r2.ec != std::errc() || r2.ptr != tail.data() + tail.size()) {
    throw PreconditionError("malformed field spec '" + spec + "' (expected p^k)");
  }
  if (p != 3) return Field::make(p, k);
  return Field::make_odd(p, k);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Place parse_place(const Field& f, const std::string& spec) {
  if (spec == "inf") return Place::infinity(f);
  std::vector<Fq> c;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size() || v >= f.order()) {
      throw PreconditionError("malformed place '" + spec + "'");
    }
    c.push_back(f.element(v));
  }
  return Place::finite(UniPoly(f, c));
}

class Reporter {
 public:
  Reporter(std::string command, const Globals& g, std::ostream& out)
      : command_(std::move(command)), globals_(g), out_(out),
        start_(std::chrono::steady_clock::now()) {
    config_["command"] = command_;
    config_["threads"] = g.threads;
    config_["seed"] = g.seed;
    config_["budget_bits"] = g.budget_bits;
    config_["out"] = g.out;
  }

  Json& config() { return config_; }

  void emit(Json result) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json report{{"schema", kReportSchema},
                {"tool_version", SELMER_VERSION},
                {"command", command_},
                {"config", config_},
                {"seed", globals_.seed},
                {"result", std::move(result)},
                {"seconds", seconds}};
    write(globals_.out, report.dump(2) + "\n");
  }

  void write(const std::string& path, const std::string& text) const {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(path);
    if (!f) throw PreconditionError("cannot write '" + path + "'");
    f << text;
  }

 private:
  std::string command_;
  const Globals& globals_;
  std::ostream& out_;
  Json config_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::uint32_t> parse_list(const std::string& s, const char* what) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::uint32_t v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size() || v == 0) {
      throw PreconditionError(std::string("malformed ") + what + " list '" + s + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw PreconditionError(std::string("empty ") + what + " list");
  return out;
}

std::string tsv_path_for(const std::string& out) {
  if (out.empty()) return {};
  std::filesystem::path p(out);
  p.replace_extension(".tsv");
  return p.string();
}

}  // namespace

AverageRow average_row(std::uint32_t n, unsigned d, std::uint64_t vector_budget,
                       std::uint64_t seed) {
  if (n == 0) throw PreconditionError("n must be positive");
  if (d == 0) throw PreconditionError("average-table needs d >= 1");
  AverageRow row;
  row.n = n;
  row.d = d;
  if (d == 1) {
    OrbitReport r = weyl_e8_orbits(n, vector_budget);
    row.value = r.orbit_count;
    row.provenance = "orbit count [computed]";
    row.evidence = std::move(r);
    return row;
  }
  row.value = divisor_sum(n);
  row.provenance = "σ(n) [theorem]";
  const std::size_t rank = 12 * d - 4;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < rank && size <= vector_budget; ++i) size *= n;
  if (size <= vector_budget) {
    const QuadraticModule m(selmer_lattice(d), n);
    OrbitReport r = orbit_decompose_exhaustive(m, selmer_reflection_pool(d, seed), vector_budget);
    if (r.orbit_count != row.value) {
      throw ComputationError("exhaustive orbit count " + std::to_string(r.orbit_count) +
                             " disagrees with sigma(" + std::to_string(n) + ")");
    }
    row.evidence = std::move(r);
  }
  return row;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite computations behind Selmer averages over F_q(t)", "selmer"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "write the JSON report here instead of stdout");
  app.add_option("--budget-bits", g.budget_bits,
                 "memory budget in bits for marks and BFS tables")
      ->check(CLI::PositiveNumber);
  app.set_version_flag("--version", SELMER_VERSION);

  // census
  std::string q_spec;
  unsigned d = 1;
  std::string census_mode, orbit_mode;
  std::uint64_t samples = 100000;
  std::uint64_t fallback_samples = 100000;
  auto* census = app.add_subcommand("census", "minimal/smooth fractions of the parameter space");
  census->add_option("--q", q_spec, "field p^k")->required();
  census->add_option("--d", d, "height")->required();
  census->add_option("--mode", census_mode, "exhaustive or sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}))
      ->default_val("sample");
  census->add_option("--n", samples, "sample size")->default_val(100000);

  // divisor-count
  auto* divisor = app.add_subcommand("divisor-count",
                                     "size of the singular divisor via incidence marks");
  divisor->add_option("--q", q_spec, "field p^k (p = 3 allowed)")->required();
  divisor->add_option("--d", d, "height")->required();
  divisor->add_option("--samples", fallback_samples, "direct-search sample size when marks do not fit")
      ->default_val(100000);

  // orbits
  std::uint32_t n = 2;
  SamplingOptions sopt;
  unsigned random_gens = 64;
  auto* orbits = app.add_subcommand("orbits", "orbits of reflections on the lattice mod n");
  orbits->add_option("--n", n, "modulus")->required()->check(CLI::Range(1u, (1u << 31) - 1));
  orbits->add_option("--d", d, "height (>= 2)")->required();
  orbits->add_option("--mode", orbit_mode, "exhaustive or sampling")
      ->check(CLI::IsMember({"exhaustive", "sampling"}))
      ->default_val("exhaustive");
  orbits->add_option("--pairs", sopt.pairs_per_class, "sampled pairs per class")
      ->default_val(100);
  orbits->add_option("--walk", sopt.walk_length, "walk length")->default_val(64);
  orbits->add_option("--restarts", sopt.restarts, "walk restarts")->default_val(256);
  orbits->add_option("--ball", sopt.ball_target, "hub ball size")
      ->default_val(std::uint64_t{1} << 21);
  orbits->add_option("--random-gens", random_gens, "random reflections in the pool")
      ->default_val(64);

  // weyl-e8
  auto* weyl = app.add_subcommand("weyl-e8", "W(E8) orbits on (Z/nZ)^8");
  weyl->add_option("--n", n, "modulus")->required()->check(CLI::Range(1u, (1u << 31) - 1));

  // tate
  std::string model_path;
  std::size_t model_index = 0;
  std::string place_spec;
  auto* tate = app.add_subcommand("tate", "Kodaira types and local data");
  tate->add_option("--model", model_path, "model JSON")->required();
  tate->add_option("--index", model_index, "entry of a model list")->default_val(0);
  tate->add_option("--place", place_spec, "'inf' or monic coefficients low to high, e.g. 1,0,1");

  // lfunction
  std::optional<std::uint64_t> mod_n;
  auto* lfun = app.add_subcommand("lfunction", "L-polynomial of a smooth d = 1 model");
  lfun->add_option("--model", model_path, "model JSON")->required();
  lfun->add_option("--index", model_index, "entry of a model list")->default_val(0);
  lfun->add_option("--mod", mod_n, "also reduce mod n");

  // average-table
  std::string n_list, d_list, tsv, evidence_dir;
  auto* avg = app.add_subcommand("average-table", "predicted large-q averages");
  avg->add_option("--n", n_list, "comma-separated moduli")->required();
  avg->add_option("--d", d_list, "comma-separated heights")->required();
  avg->add_option("--tsv", tsv, "TSV mirror (default: --out with .tsv)");
  avg->add_option("--evidence-dir", evidence_dir, "write each orbit report here");

  // model-gen
  std::string kind;
  unsigned count = 1;
  auto* gen = app.add_subcommand("model-gen", "seeded random models");
  gen->add_option("--q", q_spec, "field p^k")->required();
  gen->add_option("--d", d, "height")->required();
  gen->add_option("--kind", kind, "random, minimal or smooth")
      ->check(CLI::IsMember({"random", "minimal", "smooth"}))
      ->default_val("smooth");
  gen->add_option("--count", count, "number of models")->default_val(1);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Reporter rep(sub->get_name(), g, out);
    Json& cfg = rep.config();

    if (sub == census) {
      const Field f = Field::parse(q_spec);
      CensusOptions o;
      o.mode = census_mode == "exhaustive" ? CensusMode::kExhaustive : CensusMode::kSample;
      o.samples = samples;
      o.seed = g.seed;
      o.threads = g.threads;
      cfg.update(Json{{"q", q_spec}, {"d", d}, {"mode", census_mode}, {"n", samples}});
      rep.emit(to_json(run_census(f, d, o)));
    } else if (sub == divisor) {
      const Field f = parse_field(q_spec, true);
      DivisorCountOptions o;
      o.threads = g.threads;
      o.mark_budget_bits = g.budget_bits;
      o.fallback_samples = fallback_samples;
      o.seed = g.seed;
      cfg.update(Json{{"q", q_spec}, {"d", d}, {"samples", fallback_samples}});
      rep.emit(to_json(singular_divisor_count(f, d, o)));
    } else if (sub == orbits) {
      sopt.seed = g.seed;
      sopt.threads = g.threads;
      cfg.update(Json{{"n", n}, {"d", d}, {"mode", orbit_mode}, {"random_gens", random_gens}});
      if (orbit_mode == "sampling") {
        cfg.update(Json{{"pairs", sopt.pairs_per_class},
                        {"walk", sopt.walk_length},
                        {"restarts", sopt.restarts},
                        {"ball", sopt.ball_target}});
      }
      const QuadraticModule m(selmer_lattice(d), n);
      const auto pool = selmer_reflection_pool(d, g.seed, random_gens);
      const OrbitReport r =
          orbit_mode == "sampling" ? orbit_decompose_sampling(m, pool, sopt)
                             : orbit_decompose_exhaustive(m, pool, g.budget_bits / kBitsPerOrbitVector);
      Json j = to_json(r);
      j["sigma_n"] = divisor_sum(n);
      rep.emit(std::move(j));
    } else if (sub == weyl) {
      cfg["n"] = n;
      rep.emit(to_json(weyl_e8_orbits(n, g.budget_bits / kBitsPerOrbitVector)));
    } else if (sub == tate) {
      const WeierstrassModel m = model_from_json(read_json_file(model_path), model_index);
      cfg.update(Json{{"model", model_path}, {"index", model_index}, {"place", place_spec}});
      Json j{{"model", to_json(m)}};
      Json places = Json::array();
      if (!place_spec.empty()) {
        places.push_back(to_json(local_data_at(m, parse_place(m.field(), place_spec))));
      } else {
        const GlobalLocalSummary s = global_summary(m);
        for (const auto& pd : s.places) places.push_back(to_json(pd));
        j["conductor_degree"] = s.conductor_degree;
        j["tamagawa_product"] = s.tamagawa_product;
        j["disc_degree_check"] = s.disc_degree_check;
      }
      j["places"] = places;
      rep.emit(std::move(j));
    } else if (sub == lfun) {
      const WeierstrassModel m = model_from_json(read_json_file(model_path), model_index);
      cfg.update(Json{{"model", model_path}, {"index", model_index}});
      cfg["mod"] = mod_n ? Json(*mod_n) : Json(nullptr);
      const LPolynomial l = l_polynomial(m, g.threads);
      Json j = to_json(l);
      if (mod_n) {
        const CharpolyMod c = charpoly_mod(l, *mod_n);
        j["charpoly_mod"] = to_json(c);
        j["unit_root_multiplicity"] = c.unit_root_multiplicity;
      }
      rep.emit(std::move(j));
    } else if (sub == avg) {
      const auto ns = parse_list(n_list, "n");
      const auto ds = parse_list(d_list, "d");
      cfg.update(Json{{"n", ns}, {"d", ds}, {"tsv", tsv}, {"evidence_dir", evidence_dir}});
      Json rows = Json::array();
      std::string table = "n\td\taverage\tprovenance\tevidence\n";
      for (unsigned dd : ds) {
        for (std::uint32_t nn : ns) {
          const AverageRow row = average_row(nn, dd, g.budget_bits / kBitsPerOrbitVector, g.seed);
          Json r{{"n", row.n}, {"d", row.d}, {"average", row.value}, {"provenance", row.provenance}};
          std::string evidence = "-";
          if (row.evidence) {
            if (!evidence_dir.empty()) {
              std::filesystem::create_directories(evidence_dir);
              const auto path = std::filesystem::path(evidence_dir) /
                                ("orbits_n" + std::to_string(nn) + "_d" + std::to_string(dd) + ".json");
              rep.write(path.string(), to_json(*row.evidence).dump(2) + "\n");
              evidence = path.string();
              r["evidence_file"] = evidence;
            } else {
              evidence = "inline";
            }
            r["evidence"] = to_json(*row.evidence);
          } else {
            r["evidence"] = nullptr;
          }
          rows.push_back(std::move(r));
          table += std::to_string(nn) + "\t" + std::to_string(dd) + "\t" +
                   std::to_string(row.value) + "\t" + row.provenance + "\t" + evidence + "\n";
        }
      }
      const std::string tsv_out = tsv.empty() ? tsv_path_for(g.out) : tsv;
      if (!tsv_out.empty()) rep.write(tsv_out, table);
      rep.emit(Json{{"rows", rows}});
    } else if (sub == gen) {
      const Field f = Field::parse(q_spec);
      cfg.update(Json{{"q", q_spec}, {"d", d}, {"kind", kind}, {"count", count}});
      SplitMix64 rng(g.seed);
      Json models = Json::array();
      for (unsigned i = 0; i < count; ++i) {
        const WeierstrassModel m = kind == "random"    ? random_model(f, d, rng)
                                   : kind == "minimal" ? random_minimal_model(f, d, rng)
                                                       : random_smooth_model(f, d, rng);
        models.push_back(to_json(m));
      }
      rep.emit(Json{{"models", models}});
    }
    return kExitOk;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace selmer::cli
