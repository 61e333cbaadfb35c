#pragma once

#include <string>

#include "json.hpp"

#include "acmt/classify.hpp"
#include "acmt/identities.hpp"

namespace acmt {

using Json = nlohmann::json;

/// Deterministic serialisation: keys sorted (nlohmann objects are ordered
/// maps), floats printed with 17 significant digits, arrays in order.
std::string dump_json_17(const Json& j, int indent = 2);

Json json_vec(const Vec& v);
Json json_active_set(const std::set<int>& active);

Json json_type_report(const TypeReport& r);
Json json_cross_route(const CrossRouteReport& r, const std::set<int>& direct_active);
Json json_derived(const DerivedQuantities& dq);
Json json_theorem(const TheoremCheck& t);
Json json_identity_results(const std::vector<IdentityResult>& rs);
Json json_forbidden_catalog(const ForbiddenCatalog& cat);

/// Structured paper-discrepancy warnings for a builtin model; empty array
/// when none apply.
Json model_warnings(const std::string& model_name, int n);

} // namespace acmt
