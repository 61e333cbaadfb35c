#include "acmt/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "acmt/exterior.hpp"

namespace acmt {

std::set<int> admissible_components(int n) {
    if (n <= 1) return {5, 6, 9, 12};
    if (n == 2) return {2, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
}

const std::vector<NamedClass>& named_classes() {
    static const std::vector<NamedClass> classes = {
        {"cosymplectic", {}},
        {"nearly-K-cosymplectic", {1}},
        {"alpha-Kenmotsu", {5}},
        {"alpha-Sasakian", {6}},
        {"trans-Sasakian", {5, 6}},
        {"almost cosymplectic", {2, 9}},
        {"quasi-Sasakian", {6, 7}},
        {"nearly-trans-Sasakian", {1, 5, 6}},
        {"quasi-K-cosymplectic", {1, 2, 9, 10}},
        {"normal", {3, 4, 5, 6, 7, 8}},
        {"integrable almost contact structure", {3, 4, 5, 8}},
        {"almost a-Sasakian", {2, 6, 9}},
    };
    return classes;
}

namespace {

bool subset(const std::set<int>& a, const std::set<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<int> active_from_norms(const std::map<int, double>& norms, double threshold) {
    std::set<int> active;
    for (const auto& [i, v] : norms)
        if (v > threshold) active.insert(i);
    return active;
}

} // namespace

TypeReport detect_type(const IntrinsicTorsion& xi, const AcmStructure& s, double tol_rel) {
    if (!xi.components_filled) throw ContractViolation("detect_type needs components filled");
    TypeReport r;
    for (int i = 1; i <= 12; ++i) r.norms[i] = xi.norms[static_cast<std::size_t>(i)];
    r.threshold = tol_rel * std::max(xi.t.norm(), 1e-300);
    r.active = active_from_norms(r.norms, r.threshold);
    for (const NamedClass& c : named_classes())
        if (subset(r.active, c.defining)) r.named_matches.push_back(c.name);
    r.dimension_admissible = subset(r.active, admissible_components(s.n));
    if (s.n > 1) r.forbidden_by = forbidden_verdict(enumerate_forbidden(s.n), r.active);
    return r;
}

namespace {

// Least-squares reconstruction of a component from a detector image.
// basis: orthonormal tensors of the component space; images: their detector
// images flattened; target: detector value. Returns coefficients.
Vec solve_coefficients(const std::vector<Vec>& images, const Vec& target, double* residual) {
    const int m = static_cast<int>(images.size());
    if (m == 0) {
        if (residual) *residual = target.norm();
        return Vec::Zero(0);
    }
    Mat A(target.size(), m);
    for (int c = 0; c < m; ++c) A.col(c) = images[static_cast<std::size_t>(c)];
    Vec x = A.colPivHouseholderQr().solve(target);
    if (residual) *residual = (A * x - target).norm();
    return x;
}

Vec flatten(const KForm& f) {
    Vec v(f.size());
    for (int i = 0; i < f.size(); ++i) v[i] = f.raw(i);
    return v;
}

} // namespace

CrossRouteReport cross_check_type(const AcmStructure& s, const PointEvaluation& pe,
                                  double tol_rel) {
    const int d = s.dim();
    CrossRouteReport r;

    KForm dEta = d_eta_form(s, pe);
    KForm dF = d_F_form(s, pe);
    VectorValuedTwoForm N = nijenhuis(s, pe);
    Mat dEtaMat = d_eta_matrix(s, pe);
    NijenhuisW w = nijenhuis_w_components(s, N, dEtaMat);

    TwoFormSplit s2 = split_two_form(dEta, s);
    ThreeFormSplit s3 = split_three_form(dF, s);

    r.signals[6] = form_norm(s2.rF);
    r.signals[7] = form_norm(s2.l11_0);
    r.signals[10] = form_norm(s2.l20);
    r.signals[12] = form_norm(s2.etaWedge);
    r.signals[1] = form_norm(s3.l30);
    r.signals[3] = form_norm(s3.l21_0);
    r.signals[4] = form_norm(s3.l10WedgeF);
    r.signals[5] = form_norm(s3.rFWedgeEta);
    r.signals[8] = form_norm(s3.l11_0WedgeEta);

    double sc = 0.0;
    sc += form_norm(dEta) * form_norm(dEta);
    sc += form_norm(dF) * form_norm(dF);
    sc += N.norm() * N.norm();
    r.scale = std::sqrt(sc);

    UnProjectors proj(s);

    // (10,11): joint least squares over C10 + C11 against both detectors.
    std::vector<Tensor3> b10 = proj.component_basis(10);
    std::vector<Tensor3> b11 = proj.component_basis(11);
    std::vector<Tensor3> joint = b10;
    joint.insert(joint.end(), b11.begin(), b11.end());
    Tensor3 rec10(d), rec11(d);
    if (!joint.empty()) {
        std::vector<Vec> images;
        const int m2 = KForm(d, 2).size(), m3 = KForm(d, 3).size();
        for (const Tensor3& b : joint) {
            KForm de = d_eta_from_torsion(s, b);
            KForm dfp = d_F_from_torsion(s, b);
            Vec img(m2 + m3);
            img.head(m2) = flatten(split_two_form(de, s).l20);
            img.tail(m3) = flatten(split_three_form(dfp, s).l20WedgeEta);
            images.push_back(img);
        }
        Vec target(m2 + m3);
        target.head(m2) = flatten(s2.l20);
        target.tail(m3) = flatten(s3.l20WedgeEta);
        double resid = 0.0;
        Vec x = solve_coefficients(images, target, &resid);
        double target_norm = target.norm();
        if (target_norm > 1e-10 * std::max(r.scale, 1e-300) && resid > 1e-6 * target_norm) {
            r.indeterminate = true;
            r.note = "C10/C11 extraction could not fit the d eta / dF detectors";
        }
        for (std::size_t a = 0; a < b10.size(); ++a) rec10 += x[static_cast<int>(a)] * joint[a];
        for (std::size_t a = b10.size(); a < joint.size(); ++a)
            rec11 += x[static_cast<int>(a)] * joint[a];
    }
    r.signals[10] = rec10.norm();
    r.signals[11] = rec11.norm();

    // C1 from the [[lambda^{3,0}]] part of dF.
    std::vector<Tensor3> b1 = proj.component_basis(1);
    Tensor3 rec1(d);
    if (!b1.empty()) {
        std::vector<Vec> images;
        for (const Tensor3& b : b1) images.push_back(flatten(d_F_from_torsion(s, b)));
        Vec x = solve_coefficients(images, flatten(s3.l30), nullptr);
        for (std::size_t a = 0; a < b1.size(); ++a) rec1 += x[static_cast<int>(a)] * b1[a];
    }

    // C2: N_{W1} minus the C1 contribution.
    r.signals[2] = (w.w1 - n_of_xi(s, rec1)).norm();

    // C9: N_{W2} minus the C10/C11 contribution
    //   N_{W2} = N(xi9 + xi10 + xi11) - 2 (xi10 eta) (x) zeta.
    Mat beta10 = beta_block(s, rec10);
    Tensor3 beta10_zeta(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) beta10_zeta(i, j, k) = beta10(i, j) * s.zeta[k];
    Tensor3 w2_pred = n_of_xi(s, rec10 + rec11) - 2.0 * beta10_zeta;
    r.signals[9] = (w.w2 - w2_pred).norm();

    double threshold = tol_rel * std::max(r.scale, 1e-300);
    r.active = active_from_norms(r.signals, threshold);
    return r;
}

ForbiddenCatalog enumerate_forbidden(int n) {
    if (n <= 1) throw ContractViolation("enumerate_forbidden needs n > 1");
    ForbiddenCatalog cat;
    cat.n = n;
    cat.paper_expression_value = (1L << 12) - ((1L << 6) + (1L << 4) * (1L << 2) + (1L << 2));

    auto add = [&](const std::set<int>& sset, const std::string& rule) {
        cat.forbidden.push_back(sset);
        cat.provenance.push_back(rule);
        cat.rule_counts[rule] += 1;
    };

    const std::vector<int> free1 = {1, 2, 3, 8, 9, 11};
    for (int mask = 0; mask < (1 << 6); ++mask) {
        std::set<int> sset = {5, 6};
        for (int b = 0; b < 6; ++b)
            if (mask & (1 << b)) sset.insert(free1[static_cast<std::size_t>(b)]);
        add(sset, "R1");
    }
    for (int mask = 0; mask < (1 << 6); ++mask) {
        std::set<int> sset = {6};
        for (int b = 0; b < 6; ++b)
            if (mask & (1 << b)) sset.insert(free1[static_cast<std::size_t>(b)]);
        bool allowed_conclusion = std::includes(std::set<int>{2, 6, 9}.begin(),
                                                std::set<int>{2, 6, 9}.end(), sset.begin(),
                                                sset.end());
        if (!allowed_conclusion) add(sset, "R2");
    }
    const std::vector<int> free3 = {2, 9};
    for (int mask = 0; mask < (1 << 2); ++mask) {
        std::set<int> sset = {5, 7};
        for (int b = 0; b < 2; ++b)
            if (mask & (1 << b)) sset.insert(free3[static_cast<std::size_t>(b)]);
        add(sset, "R3");
    }

    // dedupe (the three families are disjoint; assert rather than assume)
    std::vector<std::set<int>> seen;
    cat.rules_disjoint = true;
    for (const auto& sset : cat.forbidden) {
        if (std::find(seen.begin(), seen.end(), sset) != seen.end()) cat.rules_disjoint = false;
        seen.push_back(sset);
    }
    cat.derived_count = static_cast<int>(cat.forbidden.size());

    std::set<int> adm = admissible_components(n);
    for (const auto& sset : cat.forbidden)
        if (!std::includes(adm.begin(), adm.end(), sset.begin(), sset.end()))
            ++cat.dimension_inadmissible_count;
    return cat;
}

std::string forbidden_verdict(const ForbiddenCatalog& cat, const std::set<int>& strict_type) {
    for (std::size_t i = 0; i < cat.forbidden.size(); ++i)
        if (cat.forbidden[i] == strict_type) return cat.provenance[i];
    return {};
}

TheoremCheck check_point_against_theorem(const TypeReport& report, const DerivedQuantities& dq,
                                         double tol) {
    TheoremCheck out;
    out.product = dq.dstar_eta * dq.dstar_F_zeta;
    static const std::set<int> premise = {1, 2, 3, 5, 6, 8, 9, 11, 12};
    if (!std::includes(premise.begin(), premise.end(), report.active.begin(),
                       report.active.end())) {
        out.verdict = TheoremVerdict::NotApplicable;
        return out;
    }
    out.verdict = std::abs(out.product) < tol ? TheoremVerdict::Consistent
                                              : TheoremVerdict::Violation;
    return out;
}

} // namespace acmt
