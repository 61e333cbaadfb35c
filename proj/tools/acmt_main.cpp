// Command-line interface: classify almost contact metric structures by the
// intrinsic-torsion components, verify the differential identity suite, and
// enumerate the non-existent strict types.

#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acmt/builtins.hpp"
#include "acmt/exterior.hpp"
#include "acmt/report.hpp"

namespace {

using namespace acmt;

struct CliError {
    int code;
    std::string kind;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& kind, const std::string& message) {
    Json err;
    err["error"]["code"] = code;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    std::cerr << dump_json_17(err);
    std::exit(code);
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> out;
    for (const auto& kv : raw) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ContractViolation("--param needs key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

ChartPoint parse_point(const std::string& text) {
    ChartPoint p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
    return p;
}

struct LoadedModel {
    FrameModel model;
    AcmStructure structure;
    std::string display_name;
    std::string builtin_name; // empty for file models
    std::map<std::string, std::string> params;
};

LoadedModel load(const std::string& spec, const std::vector<std::string>& params_raw) {
    LoadedModel out;
    out.params = parse_params(params_raw);
    if (spec.rfind("builtin:", 0) == 0) {
        out.builtin_name = spec.substr(8);
        out.display_name = out.builtin_name;
        auto [m, s] = make_builtin(out.builtin_name, out.params);
        out.model = std::move(m);
        out.structure = std::move(s);
    } else {
        auto [m, s] = load_model_file(spec);
        out.model = std::move(m);
        out.structure = std::move(s);
        out.display_name = spec;
    }
    return out;
}

std::vector<ChartPoint> points_for(const LoadedModel& lm, const std::vector<std::string>& point_args,
                                   int count) {
    std::vector<ChartPoint> pts;
    for (const auto& text : point_args) {
        ChartPoint p = parse_point(text);
        if (static_cast<int>(p.size()) != lm.model.dim())
            throw ContractViolation("--point needs " + std::to_string(lm.model.dim()) +
                                    " coordinates");
        pts.push_back(p);
    }
    if (pts.empty()) {
        std::string name = lm.builtin_name.empty() ? "file" : lm.builtin_name;
        pts = default_points(name, lm.model.dim(), count);
        // keep only in-domain points (models with restricted charts)
        std::vector<ChartPoint> ok;
        for (auto& p : pts)
            if (in_domain(lm.model, p)) ok.push_back(p);
        if (ok.empty()) throw ContractViolation("no default points inside the model domain");
        pts = ok;
    }
    return pts;
}

Json point_report(const FrameModel& m, const AcmStructure& s, const ChartPoint& p, double tol) {
    PointEvaluation pe = evaluate_at(m, p);
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    project_components(xi, s);
    TypeReport tr = detect_type(xi, s, tol);
    DerivedQuantities dq = derived_quantities(xi, s, pe);
    CrossRouteReport cr = cross_check_type(s, pe, tol);
    TheoremCheck tc = check_point_against_theorem(tr, dq);

    Json j;
    Json pj = Json::array();
    for (double x : p) pj.push_back(x);
    j["point"] = pj;
    j["type"] = json_type_report(tr);
    j["cross_route"] = json_cross_route(cr, tr.active);
    j["derived"] = json_derived(dq);
    j["theorem_check"] = json_theorem(tc);
    j["xi_norm"] = xi.t.norm();
    return j;
}

int cmd_classify(const std::string& model_spec, const std::vector<std::string>& params_raw,
                 const std::vector<std::string>& point_args, int npoints, double tol,
                 const std::string& conformal_expr) {
    LoadedModel lm = load(model_spec, params_raw);
    std::vector<ChartPoint> pts = points_for(lm, point_args, npoints);

    Json rep;
    rep["schema"] = 1;
    rep["command"] = "classify";
    rep["model"] = lm.display_name;
    Json pj;
    for (const auto& [k, v] : lm.params) pj[k] = v;
    rep["parameters"] = pj;
    rep["tolerance"] = tol;
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(point_report(lm.model, lm.structure, p, tol));
    rep["points"] = arr;

    if (!conformal_expr.empty()) {
        std::map<std::string, double> numeric_params;
        for (const auto& [k, v] : lm.params) {
            try {
                numeric_params[k] = std::stod(v);
            } catch (...) {
            }
        }
        numeric_params["n"] = lm.structure.n;
        Expr a = parse_expression(conformal_expr, numeric_params);
        auto [m2, s2] = conformal_transform(lm.model, lm.structure, a);
        Json post;
        post["expr"] = conformal_expr;
        Json arr2 = Json::array();
        for (const auto& p : pts) arr2.push_back(point_report(m2, s2, p, tol));
        post["points"] = arr2;
        rep["conformal"] = post;
    }
    rep["warnings"] = model_warnings(lm.builtin_name, lm.structure.n);
    std::cout << dump_json_17(rep);
    return 0;
}

int cmd_verify(const std::string& model_spec, const std::vector<std::string>& params_raw,
               const std::string& points_arg, const std::string& tier) {
    LoadedModel lm = load(model_spec, params_raw);
    std::vector<ChartPoint> pts;
    if (points_arg.find(',') == std::string::npos) {
        int count = points_arg.empty() ? 5 : std::stoi(points_arg);
        pts = points_for(lm, {}, count);
    } else {
        std::stringstream ss(points_arg);
        std::string tok;
        while (std::getline(ss, tok, ';'))
            if (!tok.empty()) pts.push_back(parse_point(tok));
    }
    IdentityOptions opt;
    opt.optional_tier = (tier == "full");

    Json rep;
    rep["schema"] = 1;
    rep["command"] = "verify";
    rep["model"] = lm.display_name;
    rep["tier"] = tier.empty() ? "default" : tier;
    Json arr = Json::array();
    int pass = 0, failcnt = 0, na = 0;
    for (const auto& p : pts) {
        std::vector<IdentityResult> rs = run_identity_suite(lm.model, lm.structure, p, opt);
        for (const auto& r : rs) {
            if (!r.applicable()) ++na;
            else if (r.passed()) ++pass;
            else ++failcnt;
        }
        Json pj;
        Json pv = Json::array();
        for (double x : p) pv.push_back(x);
        pj["point"] = pv;
        pj["identities"] = json_identity_results(rs);
        arr.push_back(pj);
    }
    rep["points"] = arr;
    Json sum;
    sum["pass"] = pass;
    sum["fail"] = failcnt;
    sum["not_applicable"] = na;
    rep["summary"] = sum;
    rep["warnings"] = model_warnings(lm.builtin_name, lm.structure.n);
    std::cout << dump_json_17(rep);
    return failcnt == 0 ? 0 : 2;
}

int cmd_enumerate(int n) {
    ForbiddenCatalog cat = enumerate_forbidden(n);
    Json j = json_forbidden_catalog(cat);
    j["schema"] = 1;
    j["command"] = "enumerate-types";
    std::cout << dump_json_17(j);
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](const std::string& what, bool ok) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
        if (!ok) ++failures;
    };

    for (int n : {2, 3}) {
        AcmStructure s = canonical_structure(n);
        KForm F = fundamental_form(s);
        check("form inner <F,F> = n (n=" + std::to_string(n) + ")",
              std::abs(form_inner(F, F) - n) < 1e-12);
        std::vector<int> ranks = two_form_projector_ranks(s);
        check("two-form projector ranks (n=" + std::to_string(n) + ")",
              ranks[0] == 1 && ranks[1] == n * n - 1 && ranks[2] == n * (n - 1) &&
                  ranks[3] == 2 * n);

        UnProjectors proj(s);
        std::mt19937_64 rng(7);
        std::normal_distribution<double> dist;
        const int d = s.dim();
        bool complete = true, orth = true, idem = true;
        for (int trial = 0; trial < 200; ++trial) {
            Tensor3 raw(d);
            for (double& v : raw.data()) v = dist(rng);
            Tensor3 t = proj.into_torsion_space(raw);
            auto parts = proj.split(t);
            Tensor3 sum(d);
            for (int i = 1; i <= 12; ++i) sum += parts[static_cast<std::size_t>(i)];
            if ((sum - t).norm() > 1e-12 * std::max(1.0, t.norm())) complete = false;
            for (int i = 1; i <= 12 && orth; ++i)
                for (int jj = i + 1; jj <= 12; ++jj) {
                    double dot = parts[static_cast<std::size_t>(i)].dot(
                        parts[static_cast<std::size_t>(jj)]);
                    double nn = parts[static_cast<std::size_t>(i)].norm() *
                                parts[static_cast<std::size_t>(jj)].norm();
                    if (std::abs(dot) > 1e-12 * std::max(nn, 1e-30)) orth = false;
                }
            if (trial < 20) {
                for (int i = 1; i <= 12; ++i) {
                    auto again = proj.split(parts[static_cast<std::size_t>(i)]);
                    if ((again[static_cast<std::size_t>(i)] - parts[static_cast<std::size_t>(i)])
                            .norm() > 1e-12 * std::max(1.0, t.norm()))
                        idem = false;
                    for (int jj = 1; jj <= 12; ++jj)
                        if (jj != i && again[static_cast<std::size_t>(jj)].norm() >
                                           1e-12 * std::max(1.0, t.norm()))
                            idem = false;
                }
            }
        }
        check("projector completeness (n=" + std::to_string(n) + ")", complete);
        check("projector orthogonality (n=" + std::to_string(n) + ")", orth);
        check("projector idempotence (n=" + std::to_string(n) + ")", idem);
    }

    ForbiddenCatalog cat = enumerate_forbidden(3);
    check("forbidden rules disjoint", cat.rules_disjoint);
    check("forbidden derived count = 128", cat.derived_count == 128);
    check("paper expression value = 3964", cat.paper_expression_value == 3964);

    bool cross_ok = true;
    for (unsigned long seed : {1ul, 2ul, 3ul, 4ul, 5ul}) {
        AcmStructure s = canonical_structure(2);
        Tensor3 c = synthetic_random_brackets(2, seed);
        PointEvaluation pe = evaluation_from_brackets(c);
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        TypeReport tr = detect_type(xi, s);
        CrossRouteReport cr = cross_check_type(s, pe);
        if (cr.indeterminate || cr.active != tr.active) cross_ok = false;
    }
    check("cross-route agreement on seeded synthetics", cross_ok);

    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointwise intrinsic-torsion engine for almost contact metric structures"};
    app.require_subcommand(1);

    std::string model_spec, conformal_expr, points_arg = "5", tier = "default";
    std::vector<std::string> params_raw, point_args;
    double tol = 1e-8;
    int npoints = 1;
    int enum_n = 3;

    CLI::App* classify = app.add_subcommand("classify", "classify a structure at chart points");
    classify->add_option("--model", model_spec, "model file or builtin:<name>")->required();
    classify->add_option("--param", params_raw, "model parameter key=value");
    classify->add_option("--point", point_args, "chart point x1,...,xD");
    classify->add_option("--points", npoints, "number of default points when --point absent");
    classify->add_option("--tol", tol, "relative component threshold");
    classify->add_option("--conformal", conformal_expr,
                         "apply the conformal change e^{2a}<.,.> with a = <expr>");

    CLI::App* verify = app.add_subcommand("verify", "run the differential identity suite");
    verify->add_option("--model", model_spec, "model file or builtin:<name>")->required();
    verify->add_option("--param", params_raw, "model parameter key=value");
    verify->add_option("--points", points_arg, "point count or semicolon-separated points");
    verify->add_option("--tier", tier, "default|full (full adds the heavy exploratory identities)")
        ->check(CLI::IsMember({"default", "full"}));

    CLI::App* enumerate = app.add_subcommand("enumerate-types", "forbidden strict-type catalog");
    enumerate->add_option("--n", enum_n, "half-dimension parameter (n > 1)");

    app.add_subcommand("selftest", "projector and property self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed())
            return cmd_classify(model_spec, params_raw, point_args, npoints, tol, conformal_expr);
        if (verify->parsed()) return cmd_verify(model_spec, params_raw, points_arg, tier);
        if (enumerate->parsed()) return cmd_enumerate(enum_n);
        return cmd_selftest();
    } catch (const ParseError& e) {
        fail(3, "parse", e.what());
    } catch (const ValidationError& e) {
        fail(1, "validation", e.what());
    } catch (const ContractViolation& e) {
        fail(1, "validation", e.what());
    } catch (const StencilError& e) {
        fail(1, "validation", e.what());
    } catch (const Error& e) {
        fail(3, "io", e.what());
    } catch (const std::exception& e) {
        fail(3, "io", e.what());
    }
}
