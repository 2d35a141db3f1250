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

#ifndef SELMER_TOOLS_JSON_IO_HPP
#define SELMER_TOOLS_JSON_IO_HPP

#include "json.hpp"
#include "selmer/census.hpp"
#include "selmer/lattice.hpp"
#include "selmer/lfunction.hpp"
#include "selmer/localdata.hpp"
#include "selmer/weierstrass.hpp"

// Field elements travel as their indices; for k = 1 that is the residue.
namespace selmer::cli {

using Json = nlohmann::ordered_json;

Json to_json(const WeierstrassModel& m);
/// Accepts a bare model, {"models": [...]} or a model-gen report, picking
/// entry `index` from a list. Throws PreconditionError on bad input.
WeierstrassModel model_from_json(const nlohmann::json& j, std::size_t index = 0);

Json to_json(const Place& v);
Json to_json(const PlaceData& pd);
Json to_json(const OrbitReport& r);
Json to_json(const CensusReport& r);
Json to_json(const DivisorCountReport& r);
Json to_json(const LPolynomial& l);
Json to_json(const CharpolyMod& c);

}  // namespace selmer::cli

#endif  // SELMER_TOOLS_JSON_IO_HPP
