#include "doctest.h"

#include "acmt/builtins.hpp"
#include "acmt/classify.hpp"
#include "oracles.hpp"

using namespace acmt;

TEST_CASE("flat model has zero intrinsic torsion") {
    auto [m, s] = make_builtin("flat", {});
    PointEvaluation pe = evaluate_at(m, {0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(intrinsic_torsion(s, pe).t.norm() < 1e-14);
}

TEST_CASE("hyperbolic with k1 = c is the unit-trace C5 example") {
    auto [m, s] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}, {"k", "1,0,0,0,0"}});
    PointEvaluation pe = evaluate_at(m, {1.5, 0.2, 0.8, 0.4, 0.3});
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    project_components(xi, s);
    // (xi_X eta)(Y) = (d*eta/2n)(<X,Y> - eta(X)eta(Y)) with d*eta = 2n
    Mat beta = beta_block(s, xi.t);
    Mat q = s.transverse_projector();
    CHECK((beta - q).norm() < 1e-12);
    DerivedQuantities dq = derived_quantities(xi, s, pe);
    CHECK(dq.dstar_eta == doctest::Approx(4.0).epsilon(1e-12)); // 2n
    for (int i = 1; i <= 12; ++i)
        if (i != 5) CHECK(xi.norms[static_cast<std::size_t>(i)] < 1e-12 * xi.t.norm());
}

TEST_CASE("reduced formula for types without C1..C4, C11") {
    // synthetic pure C5 + C6 + C9 + C10 structure: xi_X = nabla_X eta (x) zeta
    //   - eta (x) nabla_X zeta reproduces the full torsion
    AcmStructure s = canonical_structure(2);
    UnProjectors proj(s);
    std::mt19937_64 rng(19);
    Tensor3 t = proj.into_torsion_space(oracle::random_tensor(s.dim(), rng));
    auto parts = proj.split(t);
    Tensor3 xi0 = parts[5] + parts[6] + parts[7] + parts[8] + parts[9] + parts[10] + parts[12];
    PointEvaluation pe = evaluation_from_brackets(oracle::brackets_from_torsion(xi0));
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    CHECK((xi.t - xi0).norm() < 1e-11 * std::max(1.0, xi0.norm()));
    const int d = s.dim();
    // nabla eta = Gamma zeta rows; the reduced expression
    Tensor3 reduced(d);
    for (int i = 0; i < d; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        Vec u = G * s.zeta;
        Mat Xi = s.zeta * u.transpose() - u * s.zeta.transpose();
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) reduced(i, j, k) = Xi(k, j);
    }
    CHECK((xi.t - reduced).norm() < 1e-11 * std::max(1.0, xi0.norm()));
}

TEST_CASE("structural invariants of the intrinsic torsion on every builtin") {
    for (auto setup : {std::pair<std::string, std::map<std::string, std::string>>{
                           "hyperbolic", {{"n", "2"}, {"c", "1"}}},
                       {"hyperbolic", {{"n", "3"}, {"c", "1"}}},
                       {"h-alt-1", {{"n", "2"}}},
                       {"h-alt-2", {{"n", "2"}}},
                       {"alpha-sasakian", {{"n", "2"}}},
                       {"flat", {{"n", "2"}}}}) {
        auto [m, s] = make_builtin(setup.first, setup.second);
        for (const auto& p : default_points(setup.first, m.dim(), 3)) {
            PointEvaluation pe = evaluate_at(m, p);
            IntrinsicTorsion xi = intrinsic_torsion(s, pe); // throws on violation
            TorsionInvariants inv = torsion_invariants(s, xi.t);
            double scale = std::max(xi.t.norm(), 1e-30);
            CHECK(inv.characterization < 1e-10 * scale);
        }
    }
}

TEST_CASE("projector suite: completeness, orthogonality, idempotence") {
    std::mt19937_64 rng(101);
    for (int n : {2, 3}) {
        AcmStructure s = canonical_structure(n);
        UnProjectors proj(s);
        const int d = s.dim();
        const int trials = (n == 2) ? 1500 : 400;
        for (int trial = 0; trial < trials; ++trial) {
            Tensor3 t = proj.into_torsion_space(oracle::random_tensor(d, rng));
            auto parts = proj.split(t);
            Tensor3 sum(d);
            for (int i = 1; i <= 12; ++i) sum += parts[static_cast<std::size_t>(i)];
            double scale = std::max(t.norm(), 1e-30);
            CHECK((sum - t).norm() < 1e-12 * scale);
            for (int i = 1; i <= 12; ++i)
                for (int j = i + 1; j <= 12; ++j) {
                    double ip = parts[static_cast<std::size_t>(i)].dot(
                        parts[static_cast<std::size_t>(j)]);
                    double nn = parts[static_cast<std::size_t>(i)].norm() *
                                parts[static_cast<std::size_t>(j)].norm();
                    CHECK(std::abs(ip) <= 1e-12 * std::max(nn, 1e-30));
                }
        }
        for (int trial = 0; trial < 25; ++trial) {
            Tensor3 t = proj.into_torsion_space(oracle::random_tensor(d, rng));
            auto parts = proj.split(t);
            for (int i = 1; i <= 12; ++i) {
                auto again = proj.split(parts[static_cast<std::size_t>(i)]);
                double scale = std::max(t.norm(), 1e-30);
                CHECK((again[static_cast<std::size_t>(i)] - parts[static_cast<std::size_t>(i)])
                          .norm() < 1e-12 * scale);
                for (int j = 1; j <= 12; ++j)
                    if (j != i)
                        CHECK(again[static_cast<std::size_t>(j)].norm() < 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("normative projectors agree with the constraint-based fallback") {
    std::mt19937_64 rng(59);
    for (int n : {2, 3}) {
        AcmStructure s = canonical_structure(n);
        UnProjectors proj(s);
        oracle::FallbackProjectors fallback(s);
        for (int trial = 0; trial < 30; ++trial) {
            Tensor3 t = proj.into_torsion_space(oracle::random_tensor(s.dim(), rng));
            auto parts = proj.split(t);
            double scale = std::max(t.norm(), 1e-30);
            for (int i = 1; i <= 12; ++i) {
                Tensor3 fb = fallback.project(i, t);
                CHECK((fb - parts[static_cast<std::size_t>(i)]).norm() < 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("projector ranks reproduce the admissibility table") {
    for (int n : {2, 3}) {
        AcmStructure s = canonical_structure(n);
        UnProjectors proj(s);
        int total = 0;
        for (int i = 1; i <= 12; ++i) {
            int rank = static_cast<int>(proj.component_basis(i).size());
            total += rank;
            if (n == 2 && (i == 1 || i == 3)) CHECK(rank == 0);
            else CHECK(rank > 0);
        }
        CHECK(total == (2 * n + 1) * (n * n + n));
    }
    // general-position zeta gives the same ranks
    Vec k(5);
    k << 0.6, 0.0, 0.8, 0.0, 0.0;
    UnProjectors proj(structure_with_zeta(2, k));
    CHECK(proj.component_basis(1).empty());
    CHECK(proj.component_basis(4).size() == 4);
}

TEST_CASE("hyperbolic component profile") {
    // generic k: exactly {C4, C5, C12}
    auto [m, s] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}});
    for (const auto& p : default_points("hyperbolic", 5, 4)) {
        PointEvaluation pe = evaluate_at(m, p);
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        for (int i : {4, 5, 12}) CHECK(xi.norms[static_cast<std::size_t>(i)] > 1e-3);
        for (int i : {1, 2, 3, 6, 7, 8, 9, 10, 11})
            CHECK(xi.norms[static_cast<std::size_t>(i)] < 1e-8 * xi.t.norm());
    }
    // k1 = 0, n = 2: strict {C4, C12}
    auto [m0, s0] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}, {"k", "0,1,0,0,0"}});
    PointEvaluation pe0 = evaluate_at(m0, {1.0, 0.4, 0.2, 0.9, 1.7});
    IntrinsicTorsion xi0 = intrinsic_torsion(s0, pe0);
    project_components(xi0, s0);
    for (int i : {4, 12}) CHECK(xi0.norms[static_cast<std::size_t>(i)] > 1e-3);
    for (int i : {1, 2, 3, 5, 6, 7, 8, 9, 10, 11})
        CHECK(xi0.norms[static_cast<std::size_t>(i)] < 1e-8 * xi0.t.norm());
    // n = 1 admissible components only
    auto [m1, s1] = make_builtin("hyperbolic", {{"n", "1"}, {"c", "1"}, {"k", "0,1,0"}});
    PointEvaluation pe1 = evaluate_at(m1, {1.0, 0.5, 0.25});
    IntrinsicTorsion xi1 = intrinsic_torsion(s1, pe1);
    project_components(xi1, s1);
    for (int i : {1, 2, 3, 4, 7, 8, 10, 11})
        CHECK(xi1.norms[static_cast<std::size_t>(i)] < 1e-10 * std::max(1.0, xi1.t.norm()));
    CHECK(xi1.norms[12] > 1e-3);
}

TEST_CASE("derived quantities on the hyperbolic family") {
    // generic k: theta = 2 xi_zeta_eta = 2(k1 eta - c e1), d*eta = 2n k1
    const double c = 1.0, k1 = 0.6;
    auto [m, s] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}, {"k", "0.6,0.8,0,0,0"}});
    PointEvaluation pe = evaluate_at(m, {1.1, 0.6, 1.4, 0.5, 0.9});
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    project_components(xi, s);
    DerivedQuantities dq = derived_quantities(xi, s, pe);
    CHECK(dq.dstar_eta == doctest::Approx(2 * 2 * k1).epsilon(1e-12));
    Vec expected_xze = k1 * s.eta() - c * Vec::Unit(5, 0);
    CHECK((dq.xi_zeta_eta - expected_xze).norm() < 1e-12);
    CHECK((dq.theta - 2.0 * expected_xze).norm() < 1e-12);
    CHECK(dq.firstvector_residual < 1e-12);
    CHECK(dq.sum4512_residual < 1e-12);
    CHECK(dq.leeac_residual < 1e-12);
    CHECK(dq.xi5_sum_residual < 1e-12);
    CHECK(dq.xi12_sum_residual < 1e-12);
    CHECK(dq.xi6_sum_residual < 1e-12);
}

TEST_CASE("derived quantities on h-alt-1: d*eta = 2n/x2, xi_zeta_eta = (x1/x2) e2") {
    auto [m, s] = make_builtin("h-alt-1", {{"n", "2"}});
    for (const auto& p : default_points("h-alt-1", 5, 5)) {
        PointEvaluation pe = evaluate_at(m, p);
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        DerivedQuantities dq = derived_quantities(xi, s, pe);
        CHECK(dq.dstar_eta == doctest::Approx(4.0 / p[1]).epsilon(1e-10));
        Vec expect = (p[0] / p[1]) * Vec::Unit(5, 1);
        CHECK((dq.xi_zeta_eta - expect).norm() < 1e-10);
    }
}

TEST_CASE("derived quantities on h-alt-2: d*eta = -x1/x2") {
    auto [m, s] = make_builtin("h-alt-2", {{"n", "2"}});
    for (const auto& p : default_points("h-alt-2", 5, 5)) {
        PointEvaluation pe = evaluate_at(m, p);
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        DerivedQuantities dq = derived_quantities(xi, s, pe);
        CHECK(dq.dstar_eta == doctest::Approx(-p[0] / p[1]).epsilon(1e-10));
        Vec expect = -(1.0 / p[1]) * Vec::Unit(5, 0);
        CHECK((dq.xi_zeta_eta - expect).norm() < 1e-10);
        // theta = 2 xi_zeta_eta also holds here (coefficient -2/x2)
        CHECK((dq.theta - 2.0 * dq.xi_zeta_eta).norm() < 1e-10);
    }
}

TEST_CASE("detector consistency: d eta and dF against the component maps") {
    AcmStructure s = canonical_structure(2);
    UnProjectors proj(s);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 15; ++trial) {
        Tensor3 xi0 = proj.into_torsion_space(oracle::random_tensor(s.dim(), rng));
        PointEvaluation pe = evaluation_from_brackets(oracle::brackets_from_torsion(xi0));
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        project_components(xi, s);
        double scale = std::max(xi.t.norm(), 1e-30);

        // d eta from brackets equals the torsion route
        KForm dEta = d_eta_form(s, pe);
        CHECK(form_norm(dEta - d_eta_from_torsion(s, xi.t)) < 1e-10 * scale);
        // and dF likewise
        KForm dF = d_F_form(s, pe);
        CHECK(form_norm(dF - d_F_from_torsion(s, xi.t)) < 1e-10 * scale);

        // block detectors
        TwoFormSplit sp = split_two_form(dEta, s);
        Mat beta6 = beta_block(s, xi.comp[6]);
        Mat beta7 = beta_block(s, xi.comp[7]);
        Mat beta10 = beta_block(s, xi.comp[10]);
        CHECK(form_norm(sp.rF - matrix_to_two_form(-2.0 * beta6)) < 1e-10 * scale);
        CHECK(form_norm(sp.l11_0 - matrix_to_two_form(-2.0 * beta7)) < 1e-10 * scale);
        CHECK(form_norm(sp.l20 - matrix_to_two_form(-2.0 * beta10)) < 1e-10 * scale);
        // eta block: xi_{(12)zeta} eta ^ eta
        Vec gamma = Vec::Zero(s.dim());
        for (int a = 0; a < s.dim(); ++a)
            for (int j = 0; j < s.dim(); ++j)
                for (int k = 0; k < s.dim(); ++k)
                    gamma[j] -= s.zeta[a] * xi.comp[12](a, j, k) * s.zeta[k];
        CHECK(form_norm(sp.etaWedge - wedge(flat(gamma), s.eta_form())) < 1e-10 * scale);

        // dF detectors: each component contributes only to its named part
        ThreeFormSplit s3 = split_three_form(dF, s);
        CHECK(form_norm(s3.l30 - d_F_from_torsion(s, xi.comp[1])) < 1e-9 * scale);
        CHECK(form_norm(s3.l21_0 - d_F_from_torsion(s, xi.comp[3])) < 1e-9 * scale);
        CHECK(form_norm(s3.l10WedgeF - d_F_from_torsion(s, xi.comp[4])) < 1e-9 * scale);
        CHECK(form_norm(s3.rFWedgeEta - d_F_from_torsion(s, xi.comp[5])) < 1e-9 * scale);
        CHECK(form_norm(s3.l11_0WedgeEta - d_F_from_torsion(s, xi.comp[8])) < 1e-9 * scale);
        CHECK(form_norm(s3.l20WedgeEta -
                        d_F_from_torsion(s, xi.comp[10] + xi.comp[11])) < 1e-9 * scale);
        // theta ^ F and the trace detector
        DerivedQuantities dq = derived_quantities(xi, s, pe);
        CHECK(form_norm(s3.l10WedgeF - wedge(flat(dq.theta), fundamental_form(s))) <
              1e-9 * scale);
        KForm etaF = wedge(s.eta_form(), fundamental_form(s));
        CHECK(form_norm(s3.rFWedgeEta - (-dq.dstar_eta / s.n) * etaF) < 1e-9 * scale);
        // [[lambda^{2,0}]] ^ eta detector: eta ^ (2 xi10 eta o phi - xi11 F)
        Mat comp = Mat::Zero(s.dim(), s.dim());
        Mat b11 = Mat::Zero(s.dim(), s.dim());
        for (int a = 0; a < s.dim(); ++a)
            for (int j = 0; j < s.dim(); ++j)
                for (int k = 0; k < s.dim(); ++k)
                    b11(j, k) += s.zeta[a] * xi.comp[11](a, j, k);
        for (int X = 0; X < s.dim(); ++X)
            for (int Y = 0; Y < s.dim(); ++Y) {
                double b10phi = 0.0, b11F = 0.0;
                for (int a = 0; a < s.dim(); ++a) {
                    b10phi += beta10(X, a) * s.phi(a, Y);
                    b11F += 2.0 * b11(X, a) * s.phi(a, Y);
                }
                comp(X, Y) = 2.0 * b10phi - b11F;
            }
        CHECK(form_norm(s3.l20WedgeEta - wedge(s.eta_form(), matrix_to_two_form(comp))) <
              1e-9 * scale);
    }
}

TEST_CASE("dstar eta sign convention: div(zeta) eta = -d*eta eta") {
    // d*eta = -sum (nabla_{e_i} eta)(e_i); on the k1 = c hyperbolic model the
    // trace of nabla eta is -2n, so d*eta = +2n
    auto [m, s] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}, {"k", "1,0,0,0,0"}});
    PointEvaluation pe = evaluate_at(m, {2.0, 0.1, 0.2, 0.3, 0.4});
    double trace = 0.0;
    for (int i = 0; i < 5; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        trace += (G * s.zeta)[i];
    }
    CHECK(trace == doctest::Approx(-4.0));
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    project_components(xi, s);
    CHECK(derived_quantities(xi, s, pe).dstar_eta == doctest::Approx(4.0));
}
