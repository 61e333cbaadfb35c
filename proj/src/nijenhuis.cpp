#include "acmt/nijenhuis.hpp"

namespace acmt {

Mat gamma_matrix(const Tensor3& gamma, int i) {
    const int d = gamma.dim();
    Mat G(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) G(k, j) = gamma(i, j, k);
    return G;
}

NablaStructure nabla_of_structure(const AcmStructure& s, const PointEvaluation& pe) {
    const int d = s.dim();
    NablaStructure out;
    out.eta = Mat::Zero(d, d);
    out.zeta = Mat::Zero(d, d);
    out.phi = Tensor3(d);
    for (int i = 0; i < d; ++i) {
        Mat G = gamma_matrix(pe.gamma, i);
        Vec u = G * s.zeta; // skew G: vector and covector components agree
        out.zeta.row(i) = u.transpose();
        out.eta.row(i) = u.transpose();
        Mat dphi = G * s.phi - s.phi * G;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out.phi(i, j, k) = dphi(j, k);
    }
    return out;
}

Mat d_eta_matrix(const AcmStructure& s, const PointEvaluation& pe) {
    const int d = s.dim();
    Mat dEta = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            for (int k = 0; k < d; ++k) v -= pe.c(i, j, k) * s.zeta[k];
            dEta(i, j) = v;
        }
    return dEta;
}

KForm d_eta_form(const AcmStructure& s, const PointEvaluation& pe) {
    return matrix_to_two_form(d_eta_matrix(s, pe));
}

KForm d_F_form(const AcmStructure& s, const PointEvaluation& pe) {
    const int d = s.dim();
    KForm out(d, 3);
    for (int flat = 0; flat < out.size(); ++flat) {
        std::vector<int> t = out.tuple(flat);
        const int i = t[0], j = t[1], k = t[2];
        double v = 0.0;
        for (int m = 0; m < d; ++m)
            v -= pe.c(i, j, m) * s.phi(m, k) + pe.c(j, k, m) * s.phi(m, i) +
                 pe.c(k, i, m) * s.phi(m, j);
        out.raw(flat) = v;
    }
    return out;
}

VectorValuedTwoForm nijenhuis(const AcmStructure& s, const PointEvaluation& pe) {
    const int d = s.dim();
    const Mat& P = s.phi;
    Mat P2 = P * P;
    Tensor3 N(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            Vec br_ij(d), br_phi(d), br_pi_j(d), br_i_pj(d);
            for (int k = 0; k < d; ++k) {
                br_ij[k] = pe.c(i, j, k);
                double acc_phi = 0.0, acc_pj = 0.0, acc_pi = 0.0;
                for (int a = 0; a < d; ++a) {
                    if (P(a, i) != 0.0) {
                        acc_pi += P(a, i) * pe.c(a, j, k);
                        for (int b = 0; b < d; ++b)
                            if (P(b, j) != 0.0) acc_phi += P(a, i) * P(b, j) * pe.c(a, b, k);
                    }
                    if (P(a, j) != 0.0) acc_pj += P(a, j) * pe.c(i, a, k);
                }
                br_phi[k] = acc_phi;
                br_pi_j[k] = acc_pi;
                br_i_pj[k] = acc_pj;
            }
            Vec val = -P2 * br_ij - br_phi + P * br_pi_j + P * br_i_pj;
            for (int k = 0; k < d; ++k) {
                N(i, j, k) = val[k];
                N(j, i, k) = -val[k];
            }
        }
    }
    return N;
}

namespace {

// N_phi(zeta, E_j) as columns of a matrix.
Mat n_zeta_rows(const AcmStructure& s, const VectorValuedTwoForm& N) {
    const int d = s.dim();
    Mat out = Mat::Zero(d, d); // out(j,k): component k of N(zeta, E_j)
    for (int a = 0; a < d; ++a) {
        if (s.zeta[a] == 0.0) continue;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out(j, k) += s.zeta[a] * N(a, j, k);
    }
    return out;
}

} // namespace

NijenhuisW nijenhuis_w_components(const AcmStructure& s, const VectorValuedTwoForm& N,
                                  const Mat& dEta) {
    const int d = s.dim();
    const Vec eta = s.zeta;
    Mat Nz = n_zeta_rows(s, N);
    Mat P2 = s.phi * s.phi;
    Mat dEtaPhi = s.phi.transpose() * dEta * s.phi;    // d eta(phi X, phi Y)
    Mat dEtaPhi2 = P2.transpose() * dEta * P2;         // d eta(phi^2 X, phi^2 Y)

    NijenhuisW out{Tensor3(d), Tensor3(d), Tensor3(d), Tensor3(d)};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                double w2 = eta[i] * Nz(j, k) - eta[j] * Nz(i, k);
                out.w2(i, j, k) = w2;
                out.w3(i, j, k) = 0.5 * (dEtaPhi(i, j) + dEtaPhi2(i, j)) * s.zeta[k];
                out.w4(i, j, k) = 0.5 * (dEtaPhi(i, j) - dEtaPhi2(i, j)) * s.zeta[k];
                out.w1(i, j, k) = N(i, j, k) - w2 - dEtaPhi(i, j) * s.zeta[k];
            }
        }
    return out;
}

StructureTensor structure_tensor(const AcmStructure& s, const VectorValuedTwoForm& N,
                                 const Mat& dEta) {
    const int d = s.dim();
    const Vec eta = s.zeta;
    Mat Nz = n_zeta_rows(s, N);
    Mat P2 = s.phi * s.phi;
    Mat dEtaPhi = s.phi.transpose() * dEta * s.phi;
    Mat dEtaPhi2 = P2.transpose() * dEta * P2;
    // eta ^ (zeta -| d eta)
    Vec zdEta = dEta.transpose() * s.zeta; // (zeta -| d eta)(E_j) = d eta(zeta, E_j)
    StructureTensor out{Tensor3(d), Tensor3(d), Tensor3(d), Tensor3(d), Tensor3(d)};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                out.w1(i, j, k) = 0.125 * (-2.0 * N(i, j, k) + eta[i] * Nz(j, k) -
                                           eta[j] * Nz(i, k) + 2.0 * dEtaPhi(i, j) * s.zeta[k]);
                out.w2(i, j, k) = 0.5 * (-eta[i] * Nz(j, k) + eta[j] * Nz(i, k));
                out.w3(i, j, k) = 0.5 * (dEtaPhi2(i, j) + dEtaPhi(i, j)) * s.zeta[k];
                out.w4(i, j, k) = 0.5 * (dEtaPhi2(i, j) - dEtaPhi(i, j)) * s.zeta[k];
                out.w5(i, j, k) = (eta[i] * zdEta[j] - eta[j] * zdEta[i]) * s.zeta[k];
            }
    return out;
}

VectorValuedTwoForm n_of_xi(const AcmStructure& s, const Tensor3& torsion) {
    const int d = s.dim();
    const Mat& P = s.phi;
    // xi_i as matrices and their commutators with phi.
    std::vector<Mat> comm(d);
    for (int i = 0; i < d; ++i) {
        Mat Xi(d, d);
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) Xi(k, j) = torsion(i, j, k);
        comm[i] = Xi * P - P * Xi;
    }
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Mat comm_phi_i = Mat::Zero(d, d), comm_phi_j = Mat::Zero(d, d);
            for (int a = 0; a < d; ++a) {
                if (P(a, i) != 0.0) comm_phi_i += P(a, i) * comm[a];
                if (P(a, j) != 0.0) comm_phi_j += P(a, j) * comm[a];
            }
            Vec ei = Vec::Unit(d, i), ej = Vec::Unit(d, j);
            Vec val = -P * (comm[i] * ej) + P * (comm[j] * ei) + comm_phi_i * ej - comm_phi_j * ei;
            for (int k = 0; k < d; ++k) {
                out(i, j, k) = val[k];
                out(j, i, k) = -val[k];
            }
        }
    return out;
}

} // namespace acmt
