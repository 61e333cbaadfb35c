#include "acmt/identities.hpp"

#include <cmath>
#include <functional>

#include "acmt/exterior.hpp"

namespace acmt {

namespace {

// Shared per-point state plus the field closures the identities differentiate.
struct Context {
    const FrameModel& m;
    FrameModel outer;            // model used for outer FD (bigger step when
                                 // the inner fields are themselves FD-based)
    const AcmStructure& s;
    ChartPoint p;
    FdOptions fd;
    double h_eff;                // step entering the tolerance estimate
    UnProjectors proj;

    PointEvaluation pe;
    IntrinsicTorsion xi;
    DerivedQuantities dq;
    std::set<int> active;
    Tensor3 G;                   // minimal-connection coefficients Gamma + xi

    Context(const FrameModel& model, const AcmStructure& str, const ChartPoint& point,
            const IdentityOptions& opt)
        : m(model), outer(model), s(str), p(point), proj(str) {
        fd.richardson = opt.richardson;
        if (!m.closed_brackets) {
            outer.fd_step = std::max(m.step(), 5e-4);
        }
        h_eff = outer.step();
        pe = evaluate_at(m, p);
        xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        dq = derived_quantities(xi, s, pe);
        active = detect_type(xi, s).active;
        const int d = s.dim();
        G = Tensor3(d);
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < d; ++a)
                for (int mm = 0; mm < d; ++mm)
                    G(i, a, mm) = pe.gamma(i, a, mm) + xi.t(i, a, mm);
    }

    IntrinsicTorsion torsion_at(const ChartPoint& q) const {
        PointEvaluation pq = evaluate_at(m, q);
        IntrinsicTorsion x = intrinsic_torsion(s, pq);
        return x;
    }

    DerivedQuantities derived_at(const ChartPoint& q) const {
        PointEvaluation pq = evaluate_at(m, q);
        IntrinsicTorsion x = intrinsic_torsion(s, pq);
        project_components(x, s);
        return derived_quantities(x, s, pq);
    }

    std::function<Vec(const ChartPoint&)> theta_field() const {
        return [this](const ChartPoint& q) { return derived_at(q).theta; };
    }
    std::function<Vec(const ChartPoint&)> xi_zeta_eta_field() const {
        return [this](const ChartPoint& q) { return derived_at(q).xi_zeta_eta; };
    }
    std::function<double(const ChartPoint&)> dstar_eta_field() const {
        return [this](const ChartPoint& q) { return derived_at(q).dstar_eta; };
    }
    std::function<double(const ChartPoint&)> dstar_F_zeta_field() const {
        return [this](const ChartPoint& q) { return derived_at(q).dstar_F_zeta; };
    }
    std::function<Tensor3(const ChartPoint&)> component_field(int comp) const {
        return [this, comp](const ChartPoint& q) {
            PointEvaluation pq = evaluate_at(m, q);
            IntrinsicTorsion x = intrinsic_torsion(s, pq);
            if (comp == 0) return x.t;
            return proj.split(x.t)[static_cast<std::size_t>(comp)];
        };
    }
};

// --- small contraction helpers over the component tensors ---------------

// vector xi_{(c) u} v with u, v frame vectors
Vec xi_apply(const Tensor3& t, const Vec& u, const Vec& v) {
    const int d = t.dim();
    Vec out = Vec::Zero(d);
    for (int i = 0; i < d; ++i) {
        if (u[i] == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            if (v[j] == 0.0) continue;
            for (int k = 0; k < d; ++k) out[k] += u[i] * v[j] * t(i, j, k);
        }
    }
    return out;
}

// one-form (xi_{(c) u} eta) as a vector of components
Vec xi_eta(const AcmStructure& s, const Tensor3& t, const Vec& u) {
    const int d = t.dim();
    Vec out = Vec::Zero(d);
    for (int i = 0; i < d; ++i) {
        if (u[i] == 0.0) continue;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out[j] -= u[i] * t(i, j, k) * s.zeta[k];
    }
    return out;
}

struct Checker {
    std::vector<IdentityResult>& out;
    double tol_factor;
    double h_eff;

    void add(const std::string& id, double residual, double scale, const std::string& note = "") {
        IdentityResult r;
        r.id = id;
        r.residual = residual;
        r.scale = scale;
        r.tolerance = tol_factor * h_eff * h_eff * std::max(scale, 1e-12);
        r.verdict = residual <= r.tolerance ? IdentityResult::Verdict::Pass
                                            : IdentityResult::Verdict::Fail;
        r.note = note;
        out.push_back(r);
    }
    void not_applicable(const std::string& id, const std::string& why) {
        IdentityResult r;
        r.id = id;
        r.verdict = IdentityResult::Verdict::NotApplicable;
        r.note = why;
        out.push_back(r);
    }
};

bool active_subset(const std::set<int>& active, const std::set<int>& allowed) {
    return std::includes(allowed.begin(), allowed.end(), active.begin(), active.end());
}

} // namespace

std::vector<IdentityResult> run_identity_suite(const FrameModel& m, const AcmStructure& s,
                                               const ChartPoint& p, const IdentityOptions& opt) {
    std::vector<IdentityResult> results;
    Context cx(m, s, p, opt);
    Checker ck{results, opt.tol_factor, cx.h_eff};
    const int d = s.dim();
    const int n = s.n;
    const Vec& zeta = s.zeta;
    const Mat& phi = s.phi;
    KForm F = fundamental_form(s);

    const double xi_norm = cx.xi.t.norm();
    const double base_scale = 1.0 + xi_norm + std::abs(cx.dq.dstar_eta) +
                              std::abs(cx.dq.dstar_F_zeta) + cx.dq.theta.norm();

    // Frequently used component tensors.
    const Tensor3& t7 = cx.xi.comp[7];
    const Tensor3& t8 = cx.xi.comp[8];
    const Tensor3& t9 = cx.xi.comp[9];
    const Tensor3& t10 = cx.xi.comp[10];
    const Tensor3& t11 = cx.xi.comp[11];
    const Tensor3& t12 = cx.xi.comp[12];

    // I1 --------------------------------------------------------------
    if (n < 3) {
        ck.not_applicable("I1", "needs n > 2");
    } else {
        try {
            KForm dTheta = exterior_derivative_one_form(cx.theta_field(), cx.outer, p, cx.fd);
            double lhs = form_inner(dTheta, F);
            double term78 = 0.0, term1110 = 0.0;
            for (int i = 0; i < d; ++i) {
                Vec phi_ei = phi.col(i);
                Vec w7 = xi_apply(t7, phi_ei, zeta);
                Vec w8 = xi_apply(t8, Vec::Unit(d, i), zeta);
                term78 += w7.dot(w8);
                Vec v11 = xi_apply(t11, zeta, phi_ei);
                Vec w10 = xi_apply(t10, Vec::Unit(d, i), zeta);
                term1110 += v11.dot(w10);
            }
            double rhs = cx.dq.dstar_eta * cx.dq.dstar_F_zeta / n - 2.0 * term78 - 2.0 * term1110;
            double scale = std::max({std::abs(lhs), std::abs(rhs), form_norm(dTheta), base_scale * 1e-3});
            ck.add("I1", std::abs(lhs - rhs), scale);
        } catch (const StencilError& e) {
            ck.not_applicable("I1", e.what());
        }
    }

    // I2 --------------------------------------------------------------
    static const std::set<int> i2a = {1, 2, 3, 5, 6, 9, 12};
    static const std::set<int> i2b = {1, 2, 5, 6, 7, 9, 12};
    if (active_subset(cx.active, i2a) || active_subset(cx.active, i2b)) {
        try {
            Vec dd = gradient_one_form(cx.dstar_eta_field(), cx.outer, p, cx.fd);
            double ddz = dd.dot(zeta);
            Vec rhs = -cx.dq.dstar_eta * cx.dq.xi_zeta_eta + ddz * zeta;
            double scale = std::max({dd.norm(), rhs.norm(), std::abs(cx.dq.dstar_eta), base_scale * 1e-3});
            ck.add("I2", (dd - rhs).norm(), scale);
        } catch (const StencilError& e) {
            ck.not_applicable("I2", e.what());
        }
    } else {
        ck.not_applicable("I2", "active set outside C1+C2+C3+C5+C6+C9+C12 and C1+C2+C5+C6+C7+C9+C12");
    }
    static const std::set<int> i2c = {1, 2, 3, 5, 9, 12};
    if (active_subset(cx.active, i2c)) {
        try {
            const AcmStructure& str = s;
            auto field = cx.dstar_eta_field();
            std::function<Vec(const ChartPoint&)> de_eta = [field, &str](const ChartPoint& qq) {
                return Vec(field(qq) * str.zeta);
            };
            KForm dd = exterior_derivative_one_form(de_eta, cx.outer, p, cx.fd);
            double scale = std::max(std::abs(cx.dq.dstar_eta), base_scale * 1e-3);
            ck.add("I2-closed", form_norm(dd), scale, "div(zeta) eta is closed");
        } catch (const StencilError& e) {
            ck.not_applicable("I2-closed", e.what());
        }
    } else {
        ck.not_applicable("I2-closed", "active set outside C1+C2+C3+C5+C9+C12");
    }

    // dxi_zeta_eta by direct finite differences: used by I3..I7.
    KForm dXi12(d, 2);
    bool dXi12_ok = false;
    std::string dXi12_err;
    try {
        dXi12 = exterior_derivative_one_form(cx.xi_zeta_eta_field(), cx.outer, p, cx.fd);
        dXi12_ok = true;
    } catch (const StencilError& e) {
        dXi12_err = e.what();
    }
    double dxi_F = dXi12_ok ? form_inner(dXi12, F) : 0.0;

    // I3 --------------------------------------------------------------
    static const std::set<int> i3gate = {1, 2, 3, 4, 5, 6, 8, 9, 11, 12};
    if (n < 2) {
        ck.not_applicable("I3", "Lee form undefined for n = 1");
    } else if (!active_subset(cx.active, i3gate)) {
        ck.not_applicable("I3", "active set contains C7 or C10");
    } else if (!dXi12_ok) {
        ck.not_applicable("I3", dXi12_err);
    } else {
        try {
            Vec dd = gradient_one_form(cx.dstar_F_zeta_field(), cx.outer, p, cx.fd);
            Vec rhs = -cx.dq.dstar_F_zeta * cx.dq.theta + cx.dq.dstar_F_zeta * cx.dq.xi_zeta_eta +
                      (cx.dq.dstar_eta * cx.dq.dstar_F_zeta / n - dxi_F) * zeta;
            double scale = std::max({dd.norm(), rhs.norm(), std::abs(cx.dq.dstar_F_zeta), base_scale * 1e-3});
            ck.add("I3", (dd - rhs).norm(), scale);
        } catch (const StencilError& e) {
            ck.not_applicable("I3", e.what());
        }
    }

    // I4 --------------------------------------------------------------
    // d(d*F(zeta))(zeta) = (1/n) d*eta d*F(zeta) - <d xi_zeta eta, F>
    //   + 2 (xi7_{e_i} eta)(phi xi8_{e_i} zeta) + 2 (xi10_{e_i} eta)(phi xi11_zeta e_i)
    if (!dXi12_ok) {
        ck.not_applicable("I4", dXi12_err);
    } else {
        try {
            Vec dd = gradient_one_form(cx.dstar_F_zeta_field(), cx.outer, p, cx.fd);
            double lhs = dd.dot(zeta);
            double t78 = 0.0, t1011 = 0.0;
            for (int i = 0; i < d; ++i) {
                Vec ei = Vec::Unit(d, i);
                Vec a7 = xi_eta(s, t7, ei);
                Vec w8 = phi * xi_apply(t8, ei, zeta);
                t78 += a7.dot(w8);
                Vec a10 = xi_eta(s, t10, ei);
                Vec w11 = phi * xi_apply(t11, zeta, ei);
                t1011 += a10.dot(w11);
            }
            double rhs = cx.dq.dstar_eta * cx.dq.dstar_F_zeta / n - dxi_F + 2.0 * t78 + 2.0 * t1011;
            double scale = std::max({std::abs(lhs), std::abs(rhs), dd.norm(), base_scale * 1e-3});
            ck.add("I4", std::abs(lhs - rhs), scale);
        } catch (const StencilError& e) {
            ck.not_applicable("I4", e.what());
        }
    }

    // I5 --------------------------------------------------------------
    if (!dXi12_ok) {
        for (const char* id : {"I5-RF", "I5-L11", "I5-L20", "I5-ETA", "I5-XROUTE", "I5-BC"})
            ck.not_applicable(id, dXi12_err);
    } else {
        try {
            TwoFormSplit direct = split_two_form(dXi12, s);

            Vec dd = gradient_one_form(cx.dstar_F_zeta_field(), cx.outer, p, cx.fd);
            double ddz = dd.dot(zeta);
            double t78 = 0.0, t1011 = 0.0;
            for (int i = 0; i < d; ++i) {
                Vec ei = Vec::Unit(d, i);
                t78 += xi_eta(s, t7, ei).dot(phi * xi_apply(t8, ei, zeta));
                t1011 += xi_eta(s, t10, ei).dot(phi * xi_apply(t11, zeta, ei));
            }
            double dxiF_formula =
                -ddz + cx.dq.dstar_eta * cx.dq.dstar_F_zeta / n + 2.0 * t78 + 2.0 * t1011;
            double rf_scale = std::max({std::abs(dxi_F), std::abs(dxiF_formula), base_scale * 1e-3});
            ck.add("I5-RF", std::abs(dxi_F - dxiF_formula), rf_scale);

            // covariant derivatives of the component fields along zeta
            Tensor3 d7 = covariant_derivative_tensor3_along(cx.component_field(7), cx.outer, p,
                                                            zeta, cx.G, cx.fd);
            Tensor3 d10 = covariant_derivative_tensor3_along(cx.component_field(10), cx.outer, p,
                                                             zeta, cx.G, cx.fd);
            Tensor3 d12 = covariant_derivative_tensor3_along(cx.component_field(12), cx.outer, p,
                                                             zeta, cx.G, cx.fd);

            // [lambda^{1,1}] block formula
            Mat B11 = Mat::Zero(d, d);
            Mat B20 = Mat::Zero(d, d);
            for (int X = 0; X < d; ++X) {
                Vec eX = Vec::Unit(d, X);
                Vec a7X = xi_eta(s, t7, eX);
                Vec a8X = xi_eta(s, t8, eX);
                Vec a9X = xi_eta(s, t9, eX);
                Vec a10X = xi_eta(s, t10, eX);
                Vec w8X = xi_apply(t8, eX, zeta);
                Vec w9X = xi_apply(t9, eX, zeta);
                Vec w10X = xi_apply(t10, eX, zeta);
                Vec v11X = xi_apply(t11, zeta, eX);
                for (int Y = 0; Y < d; ++Y) {
                    Vec eY = Vec::Unit(d, Y);
                    double nab7 = 0.0, nab10 = 0.0;
                    for (int k = 0; k < d; ++k) {
                        nab7 -= d7(X, Y, k) * zeta[k];
                        nab10 -= d10(X, Y, k) * zeta[k];
                    }
                    Vec a7Y = xi_eta(s, t7, eY);
                    Vec a8Y = xi_eta(s, t8, eY);
                    Vec a9Y = xi_eta(s, t9, eY);
                    Vec a10Y = xi_eta(s, t10, eY);
                    Vec w8Y = xi_apply(t8, eY, zeta);
                    Vec w9Y = xi_apply(t9, eY, zeta);
                    Vec w10Y = xi_apply(t10, eY, zeta);
                    Vec v11Y = xi_apply(t11, zeta, eY);

                    double Fxy = phi(X, Y);
                    double phiY_a8X = a8X.dot(phi.col(Y));
                    B11(X, Y) = -ddz / n * Fxy +
                                cx.dq.dstar_eta * cx.dq.dstar_F_zeta / (n * double(n)) * Fxy +
                                2.0 * nab7 - 2.0 / n * cx.dq.dstar_eta * a7X[Y] +
                                2.0 / n * cx.dq.dstar_F_zeta * phiY_a8X -
                                2.0 * a7X.dot(w8Y) + 2.0 * a7Y.dot(w8X) + 2.0 * a9X.dot(w10Y) -
                                2.0 * a9Y.dot(w10X) +
                                2.0 * a10X.dot(v11Y) - 2.0 * a10Y.dot(v11X);

                    double phi_v11X_Y = 0.0; // <xi11_zeta X, phi Y>
                    phi_v11X_Y = v11X.dot(phi.col(Y));
                    B20(X, Y) = 2.0 * nab10 - 2.0 / n * cx.dq.dstar_F_zeta * phi_v11X_Y -
                                2.0 * a7X.dot(w9Y) + 2.0 * a7Y.dot(w9X) + 2.0 * a7X.dot(v11Y) -
                                2.0 * a7Y.dot(v11X) - 2.0 / n * cx.dq.dstar_eta * a10X[Y] +
                                2.0 * a8X.dot(w10Y) - 2.0 * a8Y.dot(w10X);
                }
            }
            // eta ^ [[lambda^{1,0}]] block: zeta -| d xi_zeta eta
            Vec gamma = cx.dq.xi_zeta_eta;
            Vec zdx = Vec::Zero(d);
            {
                Vec a12 = gamma; // (xi12_zeta eta) components
                Vec x12zz = xi_apply(t12, zeta, zeta);
                Vec nab12 = Vec::Zero(d);
                for (int X = 0; X < d; ++X)
                    for (int a = 0; a < d; ++a)
                        for (int k = 0; k < d; ++k)
                            nab12[X] -= zeta[a] * d12(a, X, k) * zeta[k];
                Vec e7 = xi_eta(s, t7, x12zz);
                Vec e8 = xi_eta(s, t8, x12zz);
                Vec e9 = xi_eta(s, t9, x12zz);
                Vec e10 = xi_eta(s, t10, x12zz);
                for (int X = 0; X < d; ++X) {
                    Vec eX = Vec::Unit(d, X);
                    double v = nab12[X];
                    v += a12.dot(xi_apply(t11, zeta, eX));
                    v -= cx.dq.dstar_eta / (2.0 * n) * a12[X];
                    v -= e8[X];
                    v -= e9[X];
                    v -= cx.dq.dstar_F_zeta / (2.0 * n) * a12.dot(phi.col(X));
                    v += e7[X];
                    v += e10[X];
                    zdx[X] = v;
                }
            }

            KForm b11form = matrix_to_two_form(B11);
            KForm b20form = matrix_to_two_form(B20);
            KForm betaform = wedge(s.eta_form(), flat(zdx));

            double comp_scale = std::max({form_norm(dXi12), xi_norm * xi_norm, base_scale * 1e-3});
            ck.add("I5-L11", form_norm(b11form - (direct.rF + direct.l11_0)), comp_scale);
            ck.add("I5-L20", form_norm(b20form - direct.l20), comp_scale);
            ck.add("I5-ETA", form_norm(betaform - direct.etaWedge), comp_scale);

            // Route C: the nabla^{U(n)}/xi expression for d xi_zeta eta.
            Tensor3 dfull = covariant_derivative_tensor3_along(cx.component_field(0), cx.outer, p,
                                                               zeta, cx.G, cx.fd);
            Mat C = Mat::Zero(d, d);
            Vec xi_zeta_zeta = xi_apply(cx.xi.t, zeta, zeta);
            for (int X = 0; X < d; ++X) {
                Vec eX = Vec::Unit(d, X);
                Vec aX = xi_eta(s, cx.xi.t, eX);
                Vec xiX_zeta = xi_apply(cx.xi.t, eX, zeta);
                Vec xi_zeta_X = xi_apply(cx.xi.t, zeta, eX);
                for (int Y = 0; Y < d; ++Y) {
                    Vec eY = Vec::Unit(d, Y);
                    double nabXY = 0.0, nabYX = 0.0;
                    for (int k = 0; k < d; ++k) {
                        nabXY -= dfull(X, Y, k) * zeta[k];
                        nabYX -= dfull(Y, X, k) * zeta[k];
                    }
                    Vec aY = xi_eta(s, cx.xi.t, eY);
                    Vec xiY_zeta = xi_apply(cx.xi.t, eY, zeta);
                    Vec xi_zeta_Y = xi_apply(cx.xi.t, zeta, eY);
                    C(X, Y) = nabXY - nabYX + aX.dot(xi_zeta_Y) - aY.dot(xi_zeta_X) -
                              xi_eta(s, cx.xi.t, xiX_zeta)[Y] + xi_eta(s, cx.xi.t, xiY_zeta)[X] +
                              xi_eta(s, cx.xi.t, xi_zeta_X)[Y] - xi_eta(s, cx.xi.t, xi_zeta_Y)[X];
                }
            }
            KForm routeC = matrix_to_two_form(C);
            ck.add("I5-XROUTE", form_norm(routeC - dXi12), comp_scale);
            KForm routeB = b11form + b20form + betaform;
            ck.add("I5-BC", form_norm(routeB - routeC), comp_scale);
        } catch (const StencilError& e) {
            for (const char* id : {"I5-RF", "I5-L11", "I5-L20", "I5-ETA", "I5-XROUTE", "I5-BC"})
                ck.not_applicable(id, e.what());
        }
    }

    // I6 --------------------------------------------------------------
    {
        auto gate_i = [&]() {
            static const std::vector<std::pair<int, int>> xy = {{7, 10}, {7, 11}, {8, 10}, {8, 11}};
            for (auto [x, y] : xy) {
                std::set<int> allowed = {1, 2, 3, 4, 5, 9, 12, x, y};
                if (active_subset(cx.active, allowed)) return true;
            }
            return false;
        };
        auto gate_ii = [&]() {
            for (int x : {6, 8}) {
                std::set<int> a1 = {1, 2, 3, 4, 5, x, 9, 11, 12};
                std::set<int> a2 = {1, 2, 3, 4, 5, x, 10, 12};
                if (active_subset(cx.active, a1) || active_subset(cx.active, a2)) return true;
            }
            return false;
        };
        auto gate_iii = [&]() {
            static const std::set<int> a1 = {1, 2, 3, 4, 5, 8, 9, 11, 12};
            static const std::set<int> a2 = {1, 2, 3, 4, 5, 8, 10, 12};
            return active_subset(cx.active, a1) || active_subset(cx.active, a2);
        };
        auto gate_iv = [&]() {
            static const std::vector<std::pair<int, int>> xy = {{6, 7}, {6, 9}, {9, 11}};
            for (auto [x, y] : xy) {
                std::set<int> allowed = {1, 2, 3, 4, 5, 8, 12, x, y};
                if (active_subset(cx.active, allowed)) return true;
            }
            return false;
        };
        auto gate_v = [&]() {
            static const std::set<int> a1 = {1, 2, 3, 4, 5, 8, 9, 11, 12};
            return active_subset(cx.active, a1);
        };
        if (!dXi12_ok) {
            for (const char* id : {"I6-i", "I6-ii", "I6-iii", "I6-iv", "I6-v"})
                ck.not_applicable(id, dXi12_err);
        } else {
            TwoFormSplit sp = split_two_form(dXi12, s);
            double sc = std::max(form_norm(dXi12), base_scale * 1e-3);
            if (gate_i())
                ck.add("I6-i", std::abs(dxi_F), sc);
            else
                ck.not_applicable("I6-i", "type pattern not matched");
            if (gate_ii())
                ck.add("I6-ii", form_norm(sp.l11_0), sc);
            else
                ck.not_applicable("I6-ii", "type pattern not matched");
            if (gate_iii())
                ck.add("I6-iii", std::sqrt(form_norm(sp.rF) * form_norm(sp.rF) +
                                           form_norm(sp.l11_0) * form_norm(sp.l11_0)),
                       sc);
            else
                ck.not_applicable("I6-iii", "type pattern not matched");
            if (gate_iv())
                ck.add("I6-iv", form_norm(sp.l20), sc);
            else
                ck.not_applicable("I6-iv", "type pattern not matched");
            if (gate_v())
                ck.add("I6-v", std::sqrt(form_norm(sp.rF) * form_norm(sp.rF) +
                                         form_norm(sp.l11_0) * form_norm(sp.l11_0) +
                                         form_norm(sp.l20) * form_norm(sp.l20)),
                       sc);
            else
                ck.not_applicable("I6-v", "type pattern not matched");
        }
    }

    // I7 --------------------------------------------------------------
    static const std::set<int> i7gate = {1, 2, 3, 5, 6, 8, 9, 11, 12};
    if (active_subset(cx.active, i7gate)) {
        ck.add("I7-product", std::abs(cx.dq.dstar_eta * cx.dq.dstar_F_zeta),
               base_scale * base_scale);
    } else {
        ck.not_applicable("I7-product", "active set contains C4, C7 or C10");
    }
    static const std::set<int> i7bgate = {2, 6, 9, 12};
    if (!dXi12_ok) {
        ck.not_applicable("I7-c269-12", dXi12_err);
    } else if (active_subset(cx.active, i7bgate) &&
               std::abs(dxi_F) <= ck.tol_factor * cx.h_eff * cx.h_eff * base_scale) {
        try {
            Vec dd = gradient_one_form(cx.dstar_F_zeta_field(), cx.outer, p, cx.fd);
            Vec rhs = cx.dq.dstar_F_zeta * cx.dq.xi_zeta_eta;
            double sc = std::max({dd.norm(), rhs.norm(), base_scale * 1e-3});
            double res = std::hypot((dd - rhs).norm(), form_norm(dXi12));
            ck.add("I7-c269-12", res, sc, "d(d*F(zeta)) = d*F(zeta) xi_zeta_eta and d xi_zeta eta = 0");
        } catch (const StencilError& e) {
            ck.not_applicable("I7-c269-12", e.what());
        }
    } else {
        ck.not_applicable("I7-c269-12", "needs type inside C2+C6+C9+C12 with <d xi_zeta eta, F> = 0");
    }

    // I8 --------------------------------------------------------------
    {
        VectorValuedTwoForm N = nijenhuis(s, cx.pe);
        Mat dEta = d_eta_matrix(s, cx.pe);
        double r1 = 0.0, r2 = 0.0, r3 = 0.0;
        // N(zeta, phi X) = -phi N(zeta, X); eta(N(zeta, X)) = 0;
        // eta(N(X,Y)) = d eta(phi X, phi Y)
        Mat Nz = Mat::Zero(d, d); // row X: N(zeta, E_X)
        for (int a = 0; a < d; ++a) {
            if (zeta[a] == 0.0) continue;
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) Nz(j, k) += zeta[a] * N(a, j, k);
        }
        for (int X = 0; X < d; ++X) {
            Vec nphiX = Vec::Zero(d);
            for (int b = 0; b < d; ++b)
                if (phi(b, X) != 0.0) nphiX += phi(b, X) * Nz.row(b).transpose();
            Vec rhs = -(phi * Nz.row(X).transpose());
            r1 += (nphiX - rhs).squaredNorm();
            r2 += std::pow(Nz.row(X).dot(zeta), 2);
        }
        Mat dEtaPhi = phi.transpose() * dEta * phi;
        for (int X = 0; X < d; ++X)
            for (int Y = 0; Y < d; ++Y) {
                double etaN = 0.0;
                for (int k = 0; k < d; ++k) etaN += N(X, Y, k) * zeta[k];
                r3 += std::pow(etaN - dEtaPhi(X, Y), 2);
            }
        double sc = std::max(N.norm() + dEta.norm(), base_scale * 1e-3);
        ck.add("I8", std::sqrt(r1 + r2 + r3), sc);
    }

    // Optional tier: the full two-form displays behind the trace identities.
    // Heavier (full covariant derivatives of component fields) and
    // exploratory; enabled with --tier full.
    if (opt.optional_tier) {
        if (n < 2) {
            for (const char* id : {"O1-dtheta-l11", "O2-dtheta-l20", "O3-dtheta-zeta"})
                ck.not_applicable(id, "needs n > 1");
        } else {
            try {
                Mat q = s.transverse_projector();
                const Tensor3& t1 = cx.xi.comp[1];
                const Tensor3& t2 = cx.xi.comp[2];
                const Tensor3& t3 = cx.xi.comp[3];
                auto cov_all = [&](int comp) {
                    std::vector<Tensor3> out;
                    for (int a = 0; a < d; ++a)
                        out.push_back(covariant_derivative_tensor3_along(
                            cx.component_field(comp), cx.outer, p, Vec::Unit(d, a), cx.G, cx.fd));
                    return out;
                };
                std::vector<Tensor3> D1 = cov_all(1);
                std::vector<Tensor3> D3 = cov_all(3);
                std::vector<Tensor3> D8 = cov_all(8);
                std::vector<Tensor3> D10 = cov_all(10);
                std::vector<Tensor3> D11 = cov_all(11);

                KForm dTheta = exterior_derivative_one_form(cx.theta_field(), cx.outer, p, cx.fd);
                TwoFormSplit dts = split_two_form(dTheta, s);
                double dthF = form_inner(dTheta, F);
                const Vec& theta = cx.dq.theta;
                const double de = cx.dq.dstar_eta;
                const double dfz = cx.dq.dstar_F_zeta;

                // beta matrices beta_c(i,j) = (xi_{(c) e_i} eta)(E_j)
                auto beta_of = [&](const Tensor3& t) {
                    Mat b = Mat::Zero(d, d);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            for (int k = 0; k < d; ++k) b(i, j) -= t(i, j, k) * zeta[k];
                    return b;
                };
                Mat beta7 = beta_of(t7), beta8 = beta_of(t8), beta9 = beta_of(t9),
                    beta10 = beta_of(t10);
                Mat phi2m = phi * phi;
                Vec gammaV = xi_apply(cx.xi.t, zeta, zeta);

                // O1: [lambda^{1,1}] part of d theta
                Mat O1 = Mat::Zero(d, d), L1m = Mat::Zero(d, d);
                // O2: [[lambda^{2,0}]] part of d theta
                Mat O2 = Mat::Zero(d, d), L2m = Mat::Zero(d, d);
                KForm l11_part = dts.rF + dts.l11_0;
                for (int X = 0; X < d; ++X)
                    for (int Y = 0; Y < d; ++Y) {
                        L1m(X, Y) = 0.5 * (n - 2) * l11_part({X, Y});
                        L2m(X, Y) = 0.5 * (n - 2) * dts.l20({X, Y});
                        double v = 0.5 * dthF * phi(X, Y);
                        double nab3XY = 0.0, nab3YX = 0.0;
                        for (int a = 0; a < d; ++a)
                            for (int b = 0; b < d; ++b) {
                                if (q(a, b) == 0.0) continue;
                                nab3XY += q(a, b) * D3[static_cast<std::size_t>(a)](X, Y, b);
                                nab3YX += q(a, b) * D3[static_cast<std::size_t>(a)](Y, X, b);
                            }
                        v += -nab3XY + nab3YX;
                        double th3 = 0.0;
                        for (int k = 0; k < d; ++k) th3 += theta[k] * (t3(X, Y, k) - t3(Y, X, k));
                        v += 0.5 * (n - 2) * th3;
                        double s12XY = 0.0, s12YX = 0.0;
                        for (int a = 0; a < d; ++a)
                            for (int k = 0; k < d; ++k) {
                                s12XY += t1(X, a, k) * t2(Y, a, k);
                                s12YX += t1(Y, a, k) * t2(X, a, k);
                            }
                        v += -1.5 * s12XY + 1.5 * s12YX;
                        v += -de * dfz / (double(n) * n) * phi(X, Y);
                        v += 2.0 / n * de * beta7(X, Y);
                        double b8phiX = 0.0;
                        for (int a = 0; a < d; ++a) b8phiX += beta8(Y, a) * phi(a, X);
                        v += -2.0 / n * dfz * b8phiX;
                        Vec w7X = xi_apply(t7, Vec::Unit(d, X), zeta);
                        Vec w7Y = xi_apply(t7, Vec::Unit(d, Y), zeta);
                        Vec w8X = xi_apply(t8, Vec::Unit(d, X), zeta);
                        Vec w8Y = xi_apply(t8, Vec::Unit(d, Y), zeta);
                        v += 2.0 * w7X.dot(w8Y) - 2.0 * w7Y.dot(w8X);
                        Vec v11X = xi_apply(t11, zeta, Vec::Unit(d, X));
                        Vec v11Y = xi_apply(t11, zeta, Vec::Unit(d, Y));
                        Vec w10X = xi_apply(t10, Vec::Unit(d, X), zeta);
                        Vec w10Y = xi_apply(t10, Vec::Unit(d, Y), zeta);
                        v += 2.0 * v11X.dot(w10Y) - 2.0 * v11Y.dot(w10X);
                        O1(X, Y) = v;

                        // ---- O2 right-hand side ----
                        double u = 0.0;
                        double nab1 = 0.0, nab3 = 0.0;
                        for (int a = 0; a < d; ++a)
                            for (int b = 0; b < d; ++b) {
                                if (q(a, b) == 0.0) continue;
                                nab1 += q(a, b) * D1[static_cast<std::size_t>(a)](b, X, Y);
                                nab3 += q(a, b) * D3[static_cast<std::size_t>(a)](b, X, Y);
                            }
                        u += -3.0 * nab1 + nab3;
                        double s31 = 0.0, s13 = 0.0, s32 = 0.0, s23 = 0.0;
                        for (int a = 0; a < d; ++a)
                            for (int k = 0; k < d; ++k) {
                                s31 += t3(X, a, k) * t1(Y, a, k);
                                s13 += t3(Y, a, k) * t1(X, a, k);
                                s32 += t3(X, a, k) * t2(Y, a, k);
                                s23 += t3(Y, a, k) * t2(X, a, k);
                            }
                        u += s31 - s13 - 0.5 * s32 + 0.5 * s23;
                        double x1th = 0.0, x3th = 0.0;
                        for (int a = 0; a < d; ++a) {
                            x1th += theta[a] * t1(a, X, Y);
                            x3th += theta[a] * t3(a, X, Y);
                        }
                        u += 1.5 * (n - 3) * x1th - 0.5 * (n - 1) * x3th;
                        double v11phiY = v11X.dot(phi.col(Y));
                        u += -dfz * v11phiY;
                        u += -0.5 * (n - 2) / n * de * beta10(X, Y);
                        double b10pp = 0.0;
                        for (int a = 0; a < d; ++a)
                            for (int b = 0; b < d; ++b)
                                b10pp += phi(a, X) * phi(b, Y) * beta10(a, b);
                        u += (n - 2.0) / n * dfz * b10pp;
                        u += 2.0 * (beta7.transpose() * beta9 - beta9.transpose() * beta7)(X, Y);
                        u += 2.0 * (beta7.transpose() * beta10 - beta10.transpose() * beta7)(X, Y);
                        u += 2.0 * (beta8.transpose() * beta10 - beta10.transpose() * beta8)(X, Y);
                        u += -2.0 * beta7.row(X).dot(v11Y) + 2.0 * beta7.row(Y).dot(v11X);
                        O2(X, Y) = u;
                    }
                double sc1 = std::max({form_norm(dTheta), xi_norm * xi_norm, base_scale * 1e-3});
                ck.add("O1-dtheta-l11", (L1m - O1).norm(), sc1);
                ck.add("O2-dtheta-l20", (L2m - O2).norm(), sc1);

                // O3: d theta(zeta, X)
                Vec dde = gradient_one_form(cx.dstar_eta_field(), cx.outer, p, cx.fd);
                Vec lhs3 = Vec::Zero(d), rhs3 = Vec::Zero(d);
                KForm zdth = interior(zeta, dTheta);
                for (int X = 0; X < d; ++X) lhs3[X] = 0.5 * (n - 1) * zdth.raw(X);
                for (int X = 0; X < d; ++X) {
                    Vec eX = Vec::Unit(d, X);
                    double v = 0.0;
                    double ddphi2 = 0.0;
                    for (int a = 0; a < d; ++a) ddphi2 += phi2m(a, X) * dde[a];
                    v += (n - 1.0) / (2.0 * n) * ddphi2;
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) {
                            if (q(a, b) == 0.0) continue;
                            double nab8 = 0.0, nab10v = 0.0, nab11 = 0.0;
                            for (int k = 0; k < d; ++k) {
                                nab8 -= D8[static_cast<std::size_t>(a)](b, X, k) * zeta[k];
                                nab10v -= D10[static_cast<std::size_t>(a)](b, X, k) * zeta[k];
                            }
                            for (int c = 0; c < d; ++c)
                                nab11 += zeta[c] * D11[static_cast<std::size_t>(a)](c, b, X);
                            v += (nab8 - nab10v + nab11) * q(a, b);
                        }
                    for (int a = 0; a < d; ++a) {
                        Vec x3aX = xi_apply(t3, Vec::Unit(d, a), eX);
                        v += -beta7.row(a).dot(x3aX) - beta8.row(a).dot(x3aX);
                        for (int k = 0; k < d; ++k) {
                            v += beta10(a, k) * t1(X, a, k) - 0.5 * beta10(a, k) * t2(X, a, k);
                        }
                        Vec v11a = xi_apply(t11, zeta, Vec::Unit(d, a));
                        for (int k = 0; k < d; ++k)
                            v += v11a[k] * (t1(X, a, k) - 0.5 * t2(X, a, k));
                    }
                    Vec b8th = Vec::Zero(d), b10th = Vec::Zero(d);
                    for (int a = 0; a < d; ++a)
                        for (int j = 0; j < d; ++j) {
                            b8th[j] += theta[a] * beta8(a, j);
                            b10th[j] += theta[a] * beta10(a, j);
                        }
                    v += -0.5 * n * b8th[X] + 0.5 * (n - 1) * b10th[X];
                    Vec v11X = xi_apply(t11, zeta, eX);
                    v += 0.5 * (n - 1) * theta.dot(v11X);
                    v += -(n - 1.0) / (2.0 * n) * de * cx.dq.xi_zeta_eta[X];
                    v -= xi_eta(s, t10, gammaV)[X];
                    v -= v11X.dot(gammaV);
                    rhs3[X] = v;
                }
                double sc3 = std::max({form_norm(dTheta), xi_norm * xi_norm, base_scale * 1e-3});
                ck.add("O3-dtheta-zeta", (lhs3 - rhs3).norm(), sc3);
            } catch (const StencilError& e) {
                for (const char* id : {"O1-dtheta-l11", "O2-dtheta-l20", "O3-dtheta-zeta"})
                    ck.not_applicable(id, e.what());
            }
        }
    }

    return results;
}

} // namespace acmt
