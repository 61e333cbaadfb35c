#include "acmt/torsion.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace acmt {

namespace {

Mat xi_matrix(const Tensor3& t, int i) {
    const int d = t.dim();
    Mat X(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) X(k, j) = t(i, j, k);
    return X;
}

void set_xi_matrix(Tensor3& t, int i, const Mat& X) {
    const int d = t.dim();
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) t(i, j, k) = X(k, j);
}

} // namespace

IntrinsicTorsion intrinsic_torsion(const AcmStructure& s, const PointEvaluation& pe, double tol) {
    const int d = s.dim();
    IntrinsicTorsion xi;
    xi.t = Tensor3(d);
    for (int i = 0; i < d; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        Vec u = G * s.zeta; // nabla_{E_i} zeta == nabla_{E_i} eta componentwise
        Mat dphi = G * s.phi - s.phi * G;
        Mat Xi = -0.5 * s.phi * dphi + s.zeta * u.transpose() - 0.5 * u * s.zeta.transpose();
        set_xi_matrix(xi.t, i, Xi);
    }
    TorsionInvariants inv = torsion_invariants(s, xi.t);
    double scale = std::max(xi.t.norm(), 1e-30);
    if (inv.antisymmetry > tol * scale || inv.membership > tol * scale ||
        inv.characterization > tol * scale) {
        std::ostringstream os;
        os << "intrinsic torsion failed structural invariants: antisymmetry " << inv.antisymmetry
           << ", membership " << inv.membership << ", characterization " << inv.characterization;
        throw Error(os.str());
    }
    return xi;
}

TorsionInvariants torsion_invariants(const AcmStructure& s, const Tensor3& t) {
    const int d = s.dim();
    Mat q = s.transverse_projector();
    TorsionInvariants out{0.0, 0.0, 0.0};
    double anti = 0.0, memb = 0.0, car = 0.0;
    const Vec eta = s.zeta;
    for (int i = 0; i < d; ++i) {
        Mat Xi = xi_matrix(t, i);
        anti += (Xi + Xi.transpose()).squaredNorm();
        // u(n)-perp membership: invariant part of the transverse two-form vanishes
        Mat B = -Xi; // B(j,k) = <xi_i E_j, E_k> as a form in (j,k): B = Xi^T = -Xi
        Mat Bt = q * B * q;
        Mat invpart = 0.5 * (Bt + s.phi.transpose() * Bt * s.phi);
        memb += invpart.squaredNorm();
        // characterization
        Mat lhs = s.phi * Xi + Xi * s.phi;
        Vec v = s.phi * (Xi * s.zeta);
        Mat rhs = v * eta.transpose() + s.zeta * (eta.transpose() * Xi * s.phi);
        car += (lhs - rhs).squaredNorm();
    }
    out.antisymmetry = std::sqrt(anti);
    out.membership = std::sqrt(memb);
    out.characterization = std::sqrt(car);
    return out;
}

UnProjectors::UnProjectors(const AcmStructure& s) : s_(s) {
    q_ = s.transverse_projector();
    phi2_ = s.phi * s.phi;
}

Tensor3 UnProjectors::into_torsion_space(const Tensor3& raw) const {
    const int d = s_.dim();
    Tensor3 t(d);
    for (int i = 0; i < d; ++i) {
        Mat Xi = xi_matrix(raw, i);
        Xi = 0.5 * (Xi - Xi.transpose());
        // remove the u(n) part of the transverse block
        Mat B = -Xi;
        Mat Bt = q_ * B * q_;
        Mat invpart = 0.5 * (Bt + s_.phi.transpose() * Bt * s_.phi);
        B -= invpart;
        set_xi_matrix(t, i, -B);
    }
    return t;
}

Mat beta_block(const AcmStructure& s, const Tensor3& t) {
    const int d = s.dim();
    Mat q = s.transverse_projector();
    Mat beta = Mat::Zero(d, d);
    // beta(X,Y) = (xi_X eta)(Y) = -eta(xi_X Y), transverse slots
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int k = 0; k < d; ++k) v -= t(i, j, k) * s.zeta[k];
            beta(i, j) = v;
        }
    return q * beta * q;
}

Tensor3 embed_beta_block(const AcmStructure& s, const Mat& beta) {
    const int d = s.dim();
    Tensor3 t(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                t(i, j, k) = s.zeta[j] * beta(i, k) - beta(i, j) * s.zeta[k];
    return t;
}

Tensor3 embed_c11(const AcmStructure& s, const Mat& b) {
    // b(j,k) = <xi_zeta E_j, E_k>, transverse skew anti-invariant.
    const int d = s.dim();
    Tensor3 t(d);
    for (int i = 0; i < d; ++i) {
        if (s.zeta[i] == 0.0) continue;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) t(i, j, k) = s.zeta[i] * b(j, k);
    }
    return t;
}

Tensor3 embed_c12(const AcmStructure& s, const Vec& gamma) {
    const int d = s.dim();
    Tensor3 t(d);
    for (int i = 0; i < d; ++i) {
        if (s.zeta[i] == 0.0) continue;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                t(i, j, k) = s.zeta[i] * (s.zeta[j] * gamma[k] - gamma[j] * s.zeta[k]);
    }
    return t;
}

namespace {

// Replaces slot `slot` of T by the matrix action sum_a M(a, i) T(..a..).
Tensor3 contract_slot(const Tensor3& T, int slot, const Mat& M) {
    const int d = T.dim();
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double acc = 0.0;
                for (int a = 0; a < d; ++a) {
                    double m = (slot == 0) ? M(a, i) : (slot == 1) ? M(a, j) : M(a, k);
                    if (m == 0.0) continue;
                    acc += m * ((slot == 0) ? T(a, j, k) : (slot == 1) ? T(i, a, k) : T(i, j, a));
                }
                out(i, j, k) = acc;
            }
    return out;
}

} // namespace

std::array<Tensor3, 13> UnProjectors::split(const Tensor3& t) const {
    const int d = s_.dim();
    const Vec& zeta = s_.zeta;
    const Mat& phi = s_.phi;
    std::array<Tensor3, 13> out;
    for (int i = 0; i < 13; ++i) out[i] = Tensor3(d);

    // Block extractions ------------------------------------------------
    // A block: all three slots transverse.
    Tensor3 ta = contract_slot(contract_slot(contract_slot(t, 0, q_), 1, q_), 2, q_);

    Mat beta = beta_block(s_, t);

    // C11: transverse two-form of xi_zeta, b(j,k) = <xi_zeta E_j, E_k>.
    Mat b11 = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        if (zeta[a] == 0.0) continue;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) b11(j, k) += zeta[a] * t(a, j, k);
    }
    Mat b11_form = q_ * b11 * q_;

    // C12: gamma(Y) = (xi_zeta eta)(Y), transverse.
    Vec gamma = Vec::Zero(d);
    for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) gamma[j] -= zeta[a] * t(a, j, k) * zeta[k];
    gamma = q_ * gamma;

    // beta six-way split ------------------------------------------------
    Mat betaH = 0.5 * (beta + phi.transpose() * beta * phi);
    Mat betaA = 0.5 * (beta - phi.transpose() * beta * phi);
    Mat h_sym = 0.5 * (betaH + betaH.transpose());
    Mat h_skew = 0.5 * (betaH - betaH.transpose());
    Mat a_sym = 0.5 * (betaA + betaA.transpose());
    Mat a_skew = 0.5 * (betaA - betaA.transpose());

    Mat c5 = (h_sym.trace() / (2.0 * s_.n)) * q_;
    Mat c8 = h_sym - c5;
    double f_inner = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) f_inner += 0.5 * h_skew(i, j) * phi(i, j);
    Mat c6 = (f_inner / s_.n) * phi;
    Mat c7 = h_skew - c6;

    out[5] = embed_beta_block(s_, c5);
    out[6] = embed_beta_block(s_, c6);
    out[7] = embed_beta_block(s_, c7);
    out[8] = embed_beta_block(s_, c8);
    out[9] = embed_beta_block(s_, a_sym);
    out[10] = embed_beta_block(s_, a_skew);
    out[11] = embed_c11(s_, b11_form);
    out[12] = embed_c12(s_, gamma);

    // A-block split into C1..C4 ------------------------------------------
    Tensor3 sTa = contract_slot(contract_slot(ta, 0, phi), 1, phi);
    Tensor3 tminus = 0.5 * (ta - sTa);
    Tensor3 tplus = 0.5 * (ta + sTa);

    // C1 = cyclic alternation of the minus part (already skew in (j,k)).
    Tensor3 c1(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                c1(i, j, k) = (tminus(i, j, k) + tminus(j, k, i) + tminus(k, i, j)) / 3.0;
    out[1] = c1;
    out[2] = tminus - c1;

    if (s_.n >= 2) {
        Vec u = Vec::Zero(d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) u[k] += tplus(i, i, k);
        Vec theta = (2.0 / (s_.n - 1.0)) * u;
        Vec phitheta = phi.transpose() * theta; // theta o phi components
        Tensor3 c4(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    c4(i, j, k) = 0.25 * (q_(i, j) * theta[k] - theta[j] * q_(i, k) +
                                          phi(j, i) * phitheta[k] - phitheta[j] * phi(k, i));
        out[4] = c4;
        out[3] = tplus - c4;
    } else {
        out[3] = tplus; // empty block for n = 1; kept for exact completeness
        out[4] = Tensor3(d);
    }
    return out;
}

Tensor3 UnProjectors::project(int component, const Tensor3& t) const {
    return split(t)[static_cast<std::size_t>(component)];
}

std::vector<Tensor3> UnProjectors::component_basis(int component) const {
    const int d = s_.dim();
    std::vector<Tensor3> basis;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                Tensor3 e(d);
                e(i, j, k) = 1.0;
                Tensor3 p = project(component, into_torsion_space(e));
                // Gram-Schmidt, two passes for stability
                for (const Tensor3& b : basis) p -= p.dot(b) * b;
                for (const Tensor3& b : basis) p -= p.dot(b) * b;
                double nn = p.norm();
                if (nn > 1e-8) basis.push_back((1.0 / nn) * p);
            }
    return basis;
}

const std::vector<Tensor3>& UnProjectors::c1011_kernel_basis() const {
    if (kernel_ready_) return kernel_basis_;
    std::vector<Tensor3> b10 = component_basis(10);
    std::vector<Tensor3> b11 = component_basis(11);
    std::vector<Tensor3> all = b10;
    all.insert(all.end(), b11.begin(), b11.end());
    const int m = static_cast<int>(all.size());
    kernel_basis_.clear();
    if (m > 0) {
        const int d = s_.dim();
        Mat M(d * d * d, m);
        for (int col = 0; col < m; ++col) {
            Tensor3 img = n_of_xi(s_, all[static_cast<std::size_t>(col)]);
            for (int f = 0; f < d * d * d; ++f) M(f, col) = img.data()[static_cast<std::size_t>(f)];
        }
        Eigen::FullPivLU<Mat> lu(M);
        lu.setThreshold(1e-10);
        Mat K = lu.kernel(); // columns: coefficient vectors in `all`
        if (lu.dimensionOfKernel() > 0) {
            for (int col = 0; col < K.cols(); ++col) {
                Tensor3 v(s_.dim());
                for (int a = 0; a < m; ++a) v += K(a, col) * all[static_cast<std::size_t>(a)];
                for (const Tensor3& b : kernel_basis_) v -= v.dot(b) * b;
                double nn = v.norm();
                if (nn > 1e-10) kernel_basis_.push_back((1.0 / nn) * v);
            }
        }
    }
    kernel_ready_ = true;
    return kernel_basis_;
}

void project_components(IntrinsicTorsion& xi, const AcmStructure& s, double tol) {
    UnProjectors proj(s);
    xi.comp = proj.split(xi.t);
    Tensor3 sum(s.dim());
    for (int i = 1; i <= 12; ++i) {
        xi.norms[static_cast<std::size_t>(i)] = xi.comp[static_cast<std::size_t>(i)].norm();
        sum += xi.comp[static_cast<std::size_t>(i)];
    }
    double res = (sum - xi.t).norm();
    if (res > tol * std::max(1.0, xi.t.norm()))
        throw Error("torsion component completeness residual " + std::to_string(res));
    xi.components_filled = true;
}

DerivedQuantities derived_quantities(const IntrinsicTorsion& xi, const AcmStructure& s,
                                     const PointEvaluation& pe) {
    if (!xi.components_filled) throw ContractViolation("derived_quantities needs components filled");
    const int d = s.dim();
    DerivedQuantities out;
    // nabla eta / nabla zeta rows
    Mat nz(d, d);
    for (int i = 0; i < d; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        nz.row(i) = (G * s.zeta).transpose();
    }
    out.dstar_eta = -nz.trace();
    out.dstar_F = Vec::Zero(d);
    for (int i = 0; i < d; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        Mat dF = G * s.phi - s.phi * G;
        for (int k = 0; k < d; ++k) out.dstar_F[k] -= dF(i, k);
    }
    out.dstar_F_zeta = out.dstar_F.dot(s.zeta);
    out.nabla_zeta_zeta = Vec::Zero(d);
    for (int i = 0; i < d; ++i) out.nabla_zeta_zeta += s.zeta[i] * nz.row(i).transpose();

    out.theta_defined = (s.n > 1);
    out.theta = Vec::Zero(d);
    if (out.theta_defined)
        out.theta = (-(s.phi * out.dstar_F) + out.nabla_zeta_zeta) / (s.n - 1.0);

    // xi_zeta eta read off C12
    out.xi_zeta_eta = Vec::Zero(d);
    const Tensor3& c12 = xi.comp[12];
    for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                out.xi_zeta_eta[j] -= s.zeta[a] * c12(a, j, k) * s.zeta[k];
    out.xi_zeta_eta = s.transverse_projector() * out.xi_zeta_eta;

    auto sum_diag = [&](const Tensor3& t) {
        Vec w = Vec::Zero(d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) w[k] += t(i, i, k);
        return w;
    };
    out.sum_xi_ei_ei = sum_diag(xi.t);
    out.sum_xi4_ei_ei = sum_diag(xi.comp[4]);
    out.sum_xi5_ei_ei = sum_diag(xi.comp[5]);
    out.sum_xi12_ei_ei = sum_diag(xi.comp[12]);

    out.sum_xi_ei_phi_ei = Vec::Zero(d);
    Vec sum6_phi = Vec::Zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (s.phi(j, i) == 0.0) continue;
            for (int k = 0; k < d; ++k) {
                out.sum_xi_ei_phi_ei[k] += s.phi(j, i) * xi.t(i, j, k);
                sum6_phi[k] += s.phi(j, i) * xi.comp[6](i, j, k);
            }
        }

    Vec v = out.dstar_F;
    out.firstvector_residual =
        (out.sum_xi_ei_ei - (-0.5 * (s.phi * v) - out.dstar_eta * s.zeta -
                             0.5 * out.nabla_zeta_zeta))
            .norm();
    out.sum4512_residual =
        (out.sum_xi_ei_ei - (out.sum_xi4_ei_ei + out.sum_xi5_ei_ei + out.sum_xi12_ei_ei)).norm();
    out.leeac_residual =
        (out.sum_xi4_ei_ei - (-0.5 * (s.phi * v) + 0.5 * out.nabla_zeta_zeta)).norm();
    out.xi5_sum_residual = (out.sum_xi5_ei_ei + out.dstar_eta * s.zeta).norm();
    out.xi12_sum_residual = (out.sum_xi12_ei_ei + out.nabla_zeta_zeta).norm();
    out.xi6_sum_residual = (sum6_phi + out.dstar_F_zeta * s.zeta).norm();
    return out;
}

KForm d_eta_from_torsion(const AcmStructure& s, const Tensor3& t) {
    const int d = s.dim();
    Mat D = Mat::Zero(d, d);
    // -alt(xi eta)(X,Y) = -[(xi_X eta)(Y) - (xi_Y eta)(X)], (xi_X eta)(Y) = -sum t(X,Y,k) eta_k
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int k = 0; k < d; ++k) v += (t(i, j, k) - t(j, i, k)) * s.zeta[k];
            D(i, j) = v;
        }
    return matrix_to_two_form(D);
}

KForm d_F_from_torsion(const AcmStructure& s, const Tensor3& t) {
    const int d = s.dim();
    auto xiF = [&](int x, int y, int z) {
        // (xi_X F)(Y,Z) = -F(xi_X Y, Z) - F(Y, xi_X Z)
        double v = 0.0;
        for (int m = 0; m < d; ++m)
            v -= t(x, y, m) * s.phi(m, z) + s.phi(y, m) * t(x, z, m);
        return v;
    };
    KForm out(d, 3);
    for (int flat = 0; flat < out.size(); ++flat) {
        std::vector<int> tu = out.tuple(flat);
        const int x = tu[0], y = tu[1], z = tu[2];
        out.raw(flat) = -(xiF(x, y, z) + xiF(y, z, x) + xiF(z, x, y));
    }
    return out;
}

} // namespace acmt
