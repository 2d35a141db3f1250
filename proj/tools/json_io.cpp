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

#include "json_io.hpp"

#include <string>

#include "selmer/errors.hpp"

namespace selmer::cli {

namespace {

Json form_json(const BinaryForm& f) {
  Json a = Json::array();
  for (const Fq& c : f.coeffs()) a.push_back(c.raw);
  return a;
}

Json vec_json(const QuadraticModule::Vec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

Json invariant_json(const ContentInvariant& c) { return Json::array({c.t, c.qbar}); }

Json proportion_json(const Proportion& p) {
  return Json{{"count", p.count}, {"value", p.value}, {"radius", p.radius}};
}

BinaryForm form_from(const Field& f, const nlohmann::json& j, const char* key,
                     unsigned degree) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw PreconditionError(std::string("model is missing array '") + key + "'");
  }
  const auto& a = j[key];
  if (a.size() != degree + 1) {
    throw PreconditionError(std::string("'") + key + "' needs " +
                            std::to_string(degree + 1) + " coefficients");
  }
  std::vector<Fq> c;
  for (const auto& x : a) {
    if (!x.is_number_unsigned() || x.get<std::uint64_t>() >= f.order()) {
      throw PreconditionError(std::string("bad coefficient in '") + key + "'");
    }
    c.push_back(f.element(x.get<std::uint64_t>()));
  }
  return BinaryForm(f, degree, c);
}

}  // namespace

Json to_json(const WeierstrassModel& m) {
  const Field& f = m.field();
  return Json{{"p", f.characteristic()},
              {"k", f.degree()},
              {"d", m.height()},
              {"a2", form_json(m.a2())},
              {"a4", form_json(m.a4())},
              {"a6", form_json(m.a6())}};
}

WeierstrassModel model_from_json(const nlohmann::json& j, std::size_t index) {
  if (!j.is_object()) throw PreconditionError("model JSON must be an object");
  const nlohmann::json* list = nullptr;
  if (j.contains("models")) list = &j["models"];
  if (j.contains("result") && j["result"].is_object() && j["result"].contains("models")) {
    list = &j["result"]["models"];
  }
  if (list) {
    if (!list->is_array() || index >= list->size()) {
      throw PreconditionError("model index " + std::to_string(index) + " out of range");
    }
    return model_from_json((*list)[index]);
  }
  for (const char* key : {"p", "k", "d"}) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      throw PreconditionError(std::string("model is missing '") + key + "'");
    }
  }
  const Field f = Field::make(j["p"].get<std::uint64_t>(), j["k"].get<unsigned>());
  const unsigned d = j["d"].get<unsigned>();
  return WeierstrassModel(d, form_from(f, j, "a2", 2 * d), form_from(f, j, "a4", 4 * d),
                          form_from(f, j, "a6", 6 * d));
}

Json to_json(const Place& v) {
  if (v.is_infinity()) return "inf";
  Json a = Json::array();
  for (const Fq& c : v.poly().coeffs()) a.push_back(c.raw);
  return a;
}

Json to_json(const PlaceData& pd) {
  Json j{{"place", to_json(pd.place)},
         {"degree", pd.place.degree()},
         {"kodaira", pd.kodaira.to_string()},
         {"ord_disc", pd.ord_disc},
         {"f_v", pd.f_v},
         {"m_v", pd.m_v},
         {"c_v", pd.c_v}};
  j["split"] = pd.split ? Json(*pd.split) : Json(nullptr);
  return j;
}

Json to_json(const OrbitReport& r) {
  Json orbits = Json::array();
  for (const auto& o : r.orbits) {
    orbits.push_back(Json{{"invariant", invariant_json(o.invariant)},
                          {"size", o.size},
                          {"representative", vec_json(o.representative)}});
  }
  Json j{{"n", r.n},
         {"rank", r.rank},
         {"mode", to_string(r.mode)},
         {"orbit_count", r.orbit_count},
         {"orbits", orbits},
         {"generator_q", r.generator_q},
         {"generators_skipped", r.generators_skipped}};
  if (r.mode == OrbitMode::kExhaustive) {
    j["invariant_homogeneous"] = r.invariant_homogeneous;
    j["invariants_distinct"] = r.invariants_distinct;
  } else {
    Json classes = Json::array();
    for (const auto& c : r.classes) {
      classes.push_back(Json{{"invariant", invariant_json(c.invariant)},
                             {"hub", vec_json(c.hub)},
                             {"ball_size", c.ball_size},
                             {"pairs_attempted", c.pairs_attempted},
                             {"pairs_connected", c.pairs_connected},
                             {"walk_steps", c.walk_steps},
                             {"status", c.resolved ? "RESOLVED" : "UNRESOLVED"}});
    }
    j["classes"] = classes;
    j["unresolved"] = r.unresolved;
  }
  return j;
}

Json to_json(const CensusReport& r) {
  return Json{{"field", r.field},
              {"d", r.d},
              {"mode", to_string(r.mode)},
              {"seed", r.seed},
              {"total", r.total},
              {"minimal", proportion_json(r.minimal)},
              {"smooth", proportion_json(r.smooth)},
              {"squarefree_disc", proportion_json(r.squarefree_disc)},
              {"stacky_count", r.stacky_count},
              {"group_order", r.group_order}};
}

Json to_json(const DivisorCountReport& r) {
  Json j{{"field", r.field}, {"d", r.d}, {"total", r.total}};
  j["image_count"] = r.image_count ? Json(*r.image_count) : Json(nullptr);
  j["image_ratio"] = r.image_ratio;
  j["log_q_image"] = r.log_q_image;
  j["base_points"] = r.base_points;
  j["mark_bytes"] = r.mark_bytes;
  j["direct"] = Json{{"sampled", r.direct_sampled},
                     {"examined", r.direct_examined},
                     {"singular", r.direct_count},
                     {"rational_singular", r.rational_singular},
                     {"generic_singular", r.generic_singular},
                     {"minimal", r.minimal_count}};
  j["audit"] = Json{{"marked_not_singular", r.marked_not_singular},
                    {"marked_not_rational", r.marked_not_rational},
                    {"rational_not_marked", r.rational_not_marked},
                    {"singular_only_irrational", r.singular_only_irrational},
                    {"passed", r.audit_passed}};
  return j;
}

Json to_json(const LPolynomial& l) {
  Json roots = Json::array();
  for (const auto& z : l.roots) roots.push_back(Json::array({z.real(), z.imag()}));
  return Json{{"q", l.q},
              {"degree", l.degree},
              {"coefficients", l.coeffs},
              {"epsilon", l.epsilon},
              {"traces", l.traces},
              {"roots", roots},
              {"roots_abs_check", Json{{"max_relative_deviation", l.max_relative_deviation},
                                       {"purity_ok", l.purity_ok},
                                       {"pairing_ok", l.pairing_ok}}}};
}

Json to_json(const CharpolyMod& c) {
  return Json{{"n", c.n},
              {"coefficients", c.coeffs},
              {"unit_root_multiplicity", c.unit_root_multiplicity}};
}

}  // namespace selmer::cli
