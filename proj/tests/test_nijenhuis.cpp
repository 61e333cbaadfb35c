#include "doctest.h"

#include "acmt/builtins.hpp"
#include "acmt/torsion.hpp"
#include "oracles.hpp"

using namespace acmt;

TEST_CASE("N_phi vanishes for the hyperbolic family and the first alternative structure") {
    for (auto setup : {std::pair<std::string, std::map<std::string, std::string>>{
                           "hyperbolic", {{"n", "2"}, {"c", "1"}}},
                       {"hyperbolic", {{"n", "3"}, {"c", "1"}}},
                       {"h-alt-1", {{"n", "2"}}}}) {
        auto [m, s] = make_builtin(setup.first, setup.second);
        for (const auto& p : default_points(setup.first, m.dim(), 3)) {
            PointEvaluation pe = evaluate_at(m, p);
            CHECK(nijenhuis(s, pe).norm() < 1e-10);
        }
    }
}

TEST_CASE("N_phi of the second alternative structure") {
    auto [m, s] = make_builtin("h-alt-2", {{"n", "2"}});
    ChartPoint p = {1.2, 0.7, 0.3, 1.5, 0.9};
    PointEvaluation pe = evaluate_at(m, p);
    VectorValuedTwoForm N = nijenhuis(s, pe);
    const double a = p[0] / p[1];
    // Direct bracket evaluation gives N(zeta, E_{o1}) = -(x1/x2) E_{o1} and
    // N(zeta, phi E_{o1}) = (x1/x2) phi E_{o1}; all transverse-transverse
    // slots cancel identically for any frame-constant phi.
    CHECK(N(0, 1, 0) == doctest::Approx(a));          // N(F0, zeta) slot
    CHECK(N(1, 2, 2) == doctest::Approx(a));          // N(zeta, phi F0) = a phi F0
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (i != 1 && j != 1)
                for (int k = 0; k < 5; ++k) CHECK(std::abs(N(i, j, k)) < 1e-12);
    // W-block: N_phi sits entirely in W2
    NijenhuisW w = nijenhuis_w_components(s, N, d_eta_matrix(s, pe));
    CHECK((w.w2 - N).norm() < 1e-12);
    CHECK(w.w1.norm() < 1e-12);
    CHECK(w.w3.norm() < 1e-12);
    CHECK(w.w4.norm() < 1e-12);
}

TEST_CASE("W components reconstruct N_phi and land in their defining spaces") {
    std::mt19937_64 rng(31);
    AcmStructure s = canonical_structure(2);
    for (unsigned long seed = 1; seed <= 20; ++seed) {
        Tensor3 c = synthetic_random_brackets(2, seed);
        PointEvaluation pe = evaluation_from_brackets(c);
        VectorValuedTwoForm N = nijenhuis(s, pe);
        Mat dEta = d_eta_matrix(s, pe);
        NijenhuisW w = nijenhuis_w_components(s, N, dEta);
        CHECK((w.sum() - N).norm() < 1e-12 * std::max(1.0, N.norm()));
        // W3, W4 are zeta-valued
        const int d = s.dim();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d - 1; ++k) {
                    CHECK(std::abs(w.w3(i, j, k)) < 1e-13);
                    CHECK(std::abs(w.w4(i, j, k)) < 1e-13);
                }
    }
    (void)rng;
}

TEST_CASE("N_phi properties from the brackets") {
    AcmStructure s = canonical_structure(2);
    for (unsigned long seed : {3ul, 8ul, 21ul}) {
        Tensor3 c = synthetic_random_brackets(2, seed);
        PointEvaluation pe = evaluation_from_brackets(c);
        VectorValuedTwoForm N = nijenhuis(s, pe);
        Mat dEta = d_eta_matrix(s, pe);
        const int d = s.dim();
        // N(zeta, phi X) = -phi N(zeta, X) and eta(N(zeta, X)) = 0
        Mat Nz = Mat::Zero(d, d);
        for (int a = 0; a < d; ++a)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) Nz(j, k) += s.zeta[a] * N(a, j, k);
        for (int X = 0; X < d; ++X) {
            Vec lhs = Vec::Zero(d);
            for (int b = 0; b < d; ++b)
                if (s.phi(b, X) != 0.0) lhs += s.phi(b, X) * Nz.row(b).transpose();
            Vec rhs = -(s.phi * Nz.row(X).transpose());
            CHECK((lhs - rhs).norm() < 1e-11 * std::max(1.0, N.norm()));
            CHECK(std::abs(Nz.row(X).dot(s.zeta)) < 1e-12 * std::max(1.0, N.norm()));
        }
        // eta(N(X,Y)) = d eta(phi X, phi Y)
        Mat dEtaPhi = s.phi.transpose() * dEta * s.phi;
        for (int X = 0; X < d; ++X)
            for (int Y = 0; Y < d; ++Y) {
                double etaN = 0.0;
                for (int k = 0; k < d; ++k) etaN += N(X, Y, k) * s.zeta[k];
                CHECK(etaN == doctest::Approx(dEtaPhi(X, Y)).epsilon(1e-9));
            }
    }
}

TEST_CASE("structure tensor blocks") {
    // flat model: everything zero
    {
        auto [m, s] = make_builtin("flat", {});
        PointEvaluation pe = evaluate_at(m, {0.1, 0.2, 0.3, 0.4, 0.5});
        StructureTensor t = structure_tensor(s, nijenhuis(s, pe), d_eta_matrix(s, pe));
        CHECK(t.w1.norm() + t.w2.norm() + t.w3.norm() + t.w4.norm() + t.w5.norm() < 1e-13);
    }
    // hyperbolic: N_phi = 0 and d eta = xi_zeta_eta ^ eta leave only W5
    {
        auto [m, s] = make_builtin("hyperbolic", {{"n", "2"}, {"c", "1"}});
        PointEvaluation pe = evaluate_at(m, {1.0, 0.5, 0.7, 0.2, 0.4});
        StructureTensor t = structure_tensor(s, nijenhuis(s, pe), d_eta_matrix(s, pe));
        CHECK(t.w5.norm() > 1e-3);
        CHECK(t.w1.norm() + t.w2.norm() + t.w3.norm() + t.w4.norm() < 1e-10);
    }
    // alpha-Sasakian synthetic: d eta proportional to F activates W3 only
    {
        auto [m, s] = make_builtin("alpha-sasakian", {{"n", "2"}, {"a", "1.5"}});
        PointEvaluation pe = evaluate_at(m, {0.4, 0.1, -0.2, 0.3, 0.0});
        StructureTensor t = structure_tensor(s, nijenhuis(s, pe), d_eta_matrix(s, pe));
        CHECK(t.w3.norm() > 1e-3);
        CHECK(t.w4.norm() < 1e-12);
        CHECK(t.w5.norm() < 1e-12);
    }
}

TEST_CASE("pure C10 structure: W4 = 2 (xi10 eta) (x) zeta") {
    AcmStructure s = canonical_structure(2);
    UnProjectors proj(s);
    std::mt19937_64 rng(5);
    Tensor3 raw = oracle::random_tensor(s.dim(), rng);
    Tensor3 xi10 = proj.project(10, proj.into_torsion_space(raw));
    REQUIRE(xi10.norm() > 1e-6);
    Tensor3 c = oracle::brackets_from_torsion(xi10);
    PointEvaluation pe = evaluation_from_brackets(c);
    IntrinsicTorsion xi = intrinsic_torsion(s, pe);
    CHECK((xi.t - xi10).norm() < 1e-10); // the synthetic route reproduces xi
    VectorValuedTwoForm N = nijenhuis(s, pe);
    Mat dEta = d_eta_matrix(s, pe);
    NijenhuisW w = nijenhuis_w_components(s, N, dEta);
    Mat beta10 = beta_block(s, xi10);
    Tensor3 expected(s.dim());
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j)
            for (int k = 0; k < s.dim(); ++k)
                expected(i, j, k) = 2.0 * beta10(i, j) * s.zeta[k];
    CHECK((w.w4 - expected).norm() < 1e-10 * std::max(1.0, expected.norm()));
}

TEST_CASE("N(xi) equals N_phi across independent pipelines") {
    // named models
    for (auto setup : {std::pair<std::string, std::map<std::string, std::string>>{
                           "hyperbolic", {{"n", "2"}, {"c", "1"}}},
                       {"h-alt-1", {{"n", "2"}}},
                       {"h-alt-2", {{"n", "2"}}},
                       {"alpha-sasakian", {{"n", "2"}}}}) {
        auto [m, s] = make_builtin(setup.first, setup.second);
        for (const auto& p : default_points(setup.first, m.dim(), 3)) {
            PointEvaluation pe = evaluate_at(m, p);
            IntrinsicTorsion xi = intrinsic_torsion(s, pe);
            VectorValuedTwoForm lhs = n_of_xi(s, xi.t);
            VectorValuedTwoForm rhs = nijenhuis(s, pe);
            CHECK((lhs - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm()));
        }
    }
    // 100 random synthetic structures
    AcmStructure s = canonical_structure(2);
    for (unsigned long seed = 1; seed <= 100; ++seed) {
        PointEvaluation pe = evaluation_from_brackets(synthetic_random_brackets(2, seed));
        IntrinsicTorsion xi = intrinsic_torsion(s, pe);
        VectorValuedTwoForm lhs = n_of_xi(s, xi.t);
        VectorValuedTwoForm rhs = nijenhuis(s, pe);
        CHECK((lhs - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("N annihilates the kernel components") {
    AcmStructure s = canonical_structure(2);
    UnProjectors proj(s);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor3 t = proj.into_torsion_space(oracle::random_tensor(s.dim(), rng));
        auto parts = proj.split(t);
        Tensor3 kernel_part = parts[3] + parts[4] + parts[5] + parts[8] + parts[12];
        // C10,11 diagonal
        for (const Tensor3& b : proj.c1011_kernel_basis())
            kernel_part += t.dot(b) * b;
        double scale = std::max(t.norm(), 1e-30);
        CHECK(n_of_xi(s, kernel_part).norm() < 1e-8 * scale);
    }
    CHECK(proj.c1011_kernel_basis().size() == 2); // [[lambda^{2,0}]] has dim n(n-1) = 2
}
