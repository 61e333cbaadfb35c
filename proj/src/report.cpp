#include "acmt/report.hpp"

#include <cmath>
#include <cstdio>

namespace acmt {

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad1(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad1 + Json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad1;
                dump_rec(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json_17(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

Json json_vec(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json json_active_set(const std::set<int>& active) {
    Json a = Json::array();
    for (int i : active) a.push_back("C" + std::to_string(i));
    return a;
}

Json json_type_report(const TypeReport& r) {
    Json j;
    j["active_set"] = json_active_set(r.active);
    Json norms;
    for (const auto& [i, v] : r.norms) norms["C" + std::to_string(i)] = v;
    j["component_norms"] = norms;
    j["threshold"] = r.threshold;
    j["named_matches"] = r.named_matches;
    j["dimension_admissible"] = r.dimension_admissible;
    j["forbidden_verdict"] = r.forbidden_by.empty() ? "allowed" : ("forbidden-by: " + r.forbidden_by);
    return j;
}

Json json_cross_route(const CrossRouteReport& r, const std::set<int>& direct_active) {
    Json j;
    j["active_set"] = json_active_set(r.active);
    Json sig;
    for (const auto& [i, v] : r.signals) sig["C" + std::to_string(i)] = v;
    j["signals"] = sig;
    j["scale"] = r.scale;
    j["indeterminate"] = r.indeterminate;
    if (!r.note.empty()) j["note"] = r.note;
    j["agreement"] = (!r.indeterminate && r.active == direct_active);
    return j;
}

Json json_derived(const DerivedQuantities& dq) {
    Json j;
    j["dstar_eta"] = dq.dstar_eta;
    j["dstar_F_zeta"] = dq.dstar_F_zeta;
    j["theta"] = dq.theta_defined ? json_vec(dq.theta) : Json();
    j["xi_zeta_eta"] = json_vec(dq.xi_zeta_eta);
    Json res;
    res["firstvector"] = dq.firstvector_residual;
    res["sum4512"] = dq.sum4512_residual;
    res["leeac"] = dq.leeac_residual;
    res["xi5_sum"] = dq.xi5_sum_residual;
    res["xi12_sum"] = dq.xi12_sum_residual;
    res["xi6_sum"] = dq.xi6_sum_residual;
    j["residuals"] = res;
    return j;
}

Json json_theorem(const TheoremCheck& t) {
    Json j;
    switch (t.verdict) {
        case TheoremVerdict::NotApplicable: j["verdict"] = "not-applicable"; break;
        case TheoremVerdict::Consistent: j["verdict"] = "consistent"; break;
        case TheoremVerdict::Violation: j["verdict"] = "violation"; break;
    }
    j["dstar_eta_times_dstar_F_zeta"] = t.product;
    return j;
}

Json json_identity_results(const std::vector<IdentityResult>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) {
        Json j;
        j["id"] = r.id;
        j["verdict"] = r.verdict == IdentityResult::Verdict::Pass ? "pass"
                       : r.verdict == IdentityResult::Verdict::Fail ? "fail"
                                                                    : "not-applicable";
        if (r.applicable()) {
            j["residual"] = r.residual;
            j["tolerance"] = r.tolerance;
            j["scale"] = r.scale;
        }
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(j);
    }
    return arr;
}

Json json_forbidden_catalog(const ForbiddenCatalog& cat) {
    Json j;
    j["n"] = cat.n;
    j["derived_count"] = cat.derived_count;
    j["paper_claim"] = cat.paper_claim;
    j["paper_expression"] = "2^12 - (2^6 + 2^4*2^2 + 2^2)";
    j["paper_expression_value"] = cat.paper_expression_value;
    j["rules_disjoint"] = cat.rules_disjoint;
    Json counts;
    for (const auto& [rule, cnt] : cat.rule_counts) counts[rule] = cnt;
    j["rule_counts"] = counts;
    j["dimension_inadmissible_count"] = cat.dimension_inadmissible_count;
    Json types = Json::array();
    for (std::size_t i = 0; i < cat.forbidden.size(); ++i) {
        Json e;
        e["type"] = json_active_set(cat.forbidden[i]);
        e["rule"] = cat.provenance[i];
        types.push_back(e);
    }
    j["forbidden_types"] = types;
    Json warn = Json::array();
    {
        Json w;
        w["id"] = "forbidden-count-discrepancy";
        w["message"] =
            "the literature claims 132 non-existent classes; the strict-type oracle "
            "derives 128: the four allowed conclusions {6},{2,6},{6,9},{2,6,9} are "
            "counted as forbidden in the printed arithmetic";
        w["paper_claim"] = 132;
        w["derived_count"] = cat.derived_count;
        warn.push_back(w);
    }
    j["warnings"] = warn;
    return j;
}

Json model_warnings(const std::string& model_name, int n) {
    Json warn = Json::array();
    if (model_name == "hyperbolic") {
        Json w;
        w["id"] = "hyperbolic-dstar-eta-coefficient";
        w["message"] =
            "the printed coderivative for this family reads d*eta = 4 n k1, which "
            "conflicts with its own k1 = 1 special case (d*eta = 2n); the engine's "
            "independently computed value follows d*eta = 2 n k1";
        w["printed_coefficient"] = "4*n*k1";
        w["computed_coefficient"] = "2*n*k1";
        warn.push_back(w);
    }
    if (model_name == "h-alt-2") {
        Json w1;
        w1["id"] = "h-alt-2-theta-coefficient";
        w1["message"] =
            "the printed Lee form for this structure reads theta = 2 xi_zeta_eta = "
            "-((n-1)/x2) e_{o1}, which is inconsistent with xi_zeta_eta read from "
            "d eta (coefficient -2/x2); the report carries both sides computed "
            "independently";
        w1["printed_coefficient"] = "-(n-1)/x2";
        w1["computed_coefficient"] = "-2/x2";
        warn.push_back(w1);
        Json w2;
        w2["id"] = "h-alt-2-ddstar-eta-sign";
        w2["message"] =
            "the printed identity d(d*eta) = d*eta xi_zeta_eta + (d*eta)^2 eta has "
            "the sign of the first summand flipped: the structure's own d eta and "
            "d(d*eta eta) = 0 force d(d*eta) = -d*eta xi_zeta_eta + (d*eta)^2 eta, "
            "which is what the engine verifies";
        w2["printed_identity"] = "d(d*eta) = d*eta xi_zeta_eta + (d*eta)^2 eta";
        w2["verified_identity"] = "d(d*eta) = -d*eta xi_zeta_eta + (d*eta)^2 eta";
        warn.push_back(w2);
    }
    (void)n;
    return warn;
}

} // namespace acmt
