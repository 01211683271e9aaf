#pragma once

#include <json.hpp>

#include "mcx/oracle.hpp"
#include "mcx/pipeline.hpp"

namespace mcx {

using Json = nlohmann::json;

// Exact values serialize as {"N": conductor, "terms": [[exp, num, den]]}
// with decimal-string coefficients; no floating point. The complex
// embedding is exposed only under "approx_*" keys.
Json cyclo_to_json(const CycloNum& z);
CycloNum cyclo_from_json(const Json& j);
Json approx_to_json(const CycloNum& z); // {"re": .., "im": ..}, diagnostics

Json conventions_to_json(const Conventions& cv);
Conventions conventions_from_json(const Json& j);

// {"base": {"p","m"}, "rank", "singular": [{"point": [coeffs],
//  "blocks": [{"n","l","chi_e","alpha"}]}], "infinity": {"blocks": [..]},
//  "stalk_det_hints": [{"y","det"}]}; alpha is null when untracked.
Json sheaf_to_json(const SheafData& F);
SheafData sheaf_from_json(const Json& j);

// {"base": {"p","m"}, "factors": [{"point": [coeffs], "chi_e"}],
//  "constant", "history": [{"chi_e","constant"}]}
Json explicit_to_json(const ExplicitSheaf& E);
ExplicitSheaf explicit_from_json(const Json& j);

// [{"op": "mt", "chi_e", "point": [coeffs]} | {"op": "mc", "chi_e"}]
Json script_to_json(const std::vector<PipelineStep>& steps);
std::vector<PipelineStep> script_from_json(const Json& j, long p, long m);

// Json::parse with errors mapped to SchemaError.
Json parse_json(const std::string& text);

} // namespace mcx
