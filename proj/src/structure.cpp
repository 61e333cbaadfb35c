#include "acmt/structure.hpp"

#include <Eigen/Householder>
#include <cmath>
#include <sstream>

namespace acmt {

ValidationReport validate(const AcmStructure& s, double tol) {
    ValidationReport r;
    const int d = s.dim();
    std::ostringstream msg;
    if (s.n < 1 || s.phi.rows() != d || s.phi.cols() != d || s.zeta.size() != d) {
        r.ok = false;
        r.message = "shape mismatch: need (2n+1)x(2n+1) phi and length 2n+1 zeta";
        return r;
    }
    const Vec eta = s.zeta;
    r.blair_residual = (s.phi * s.phi + Mat::Identity(d, d) - s.zeta * eta.transpose()).norm();
    r.unit_residual = std::abs(eta.dot(s.zeta) - 1.0);
    r.phi_zeta_residual = (s.phi * s.zeta).norm();
    r.eta_phi_residual = (eta.transpose() * s.phi).norm();
    r.compat_residual = (s.phi.transpose() * s.phi - s.transverse_projector()).norm();

    KForm F = fundamental_form(s);
    KForm vol = F;
    for (int i = 1; i < s.n; ++i) vol = wedge(vol, F);
    vol = wedge(vol, s.eta_form());
    r.volume = vol.raw(0); // top form has a single coefficient

    r.ok = r.blair_residual < tol && r.unit_residual < tol && r.phi_zeta_residual < tol &&
           r.eta_phi_residual < tol && r.compat_residual < tol && std::abs(r.volume) > tol;
    if (!r.ok) {
        msg << "structure invalid:";
        if (r.blair_residual >= tol) msg << " phi^2 residual " << r.blair_residual;
        if (r.unit_residual >= tol) msg << " eta(zeta) residual " << r.unit_residual;
        if (r.phi_zeta_residual >= tol) msg << " phi(zeta) residual " << r.phi_zeta_residual;
        if (r.eta_phi_residual >= tol) msg << " eta.phi residual " << r.eta_phi_residual;
        if (r.compat_residual >= tol) msg << " compatibility residual " << r.compat_residual;
        if (std::abs(r.volume) <= tol) msg << " degenerate volume " << r.volume;
        r.message = msg.str();
    }
    return r;
}

void validate_or_throw(const AcmStructure& s, double tol) {
    ValidationReport r = validate(s, tol);
    if (!r.ok) throw ValidationError(r.message);
}

KForm fundamental_form(const AcmStructure& s) {
    const int d = s.dim();
    KForm F(d, 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) F.at({i, j}) = s.phi(i, j);
    return F;
}

AcmStructure canonical_structure(int n) {
    AcmStructure s;
    s.n = n;
    const int d = 2 * n + 1;
    s.phi = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        // phi E_{2i} = E_{2i+1}, phi E_{2i+1} = -E_{2i}
        s.phi(2 * i + 1, 2 * i) = 1.0;
        s.phi(2 * i, 2 * i + 1) = -1.0;
    }
    s.zeta = Vec::Zero(d);
    s.zeta[d - 1] = 1.0;
    return s;
}

AcmStructure structure_with_zeta(int n, const Vec& zeta) {
    const int d = 2 * n + 1;
    if (zeta.size() != d) throw ContractViolation("zeta length must be 2n+1");
    if (std::abs(zeta.norm() - 1.0) > 1e-12)
        throw ContractViolation("zeta must be a unit vector");
    // Orthonormal completion via a Householder reflection mapping e_d to zeta.
    Mat Q = Mat::Identity(d, d);
    Vec target = Vec::Zero(d);
    target[d - 1] = 1.0;
    Vec w = zeta - target;
    double wn = w.norm();
    if (wn > 1e-14) {
        w /= wn;
        Q -= 2.0 * w * w.transpose();
    }
    // Columns 0..d-2 of Q span zeta-perp; pair them as complex lines.
    AcmStructure s;
    s.n = n;
    s.zeta = zeta;
    s.phi = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        Vec a = Q.col(2 * i), b = Q.col(2 * i + 1);
        s.phi += b * a.transpose() - a * b.transpose();
    }
    return s;
}

} // namespace acmt
