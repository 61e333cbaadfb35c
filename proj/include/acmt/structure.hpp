#pragma once

#include <string>
#include <vector>

#include "acmt/forms.hpp"

namespace acmt {

/// Almost contact metric structure with frame-constant tensors. The metric
/// is implicit: the frame is declared orthonormal. phi is the matrix of the
/// (1,1)-tensor in that frame, zeta the Reeb field coefficients, and eta is
/// numerically identical to zeta (metric dual in an orthonormal frame).
struct AcmStructure {
    int n = 0;
    Mat phi;
    Vec zeta;

    int dim() const { return 2 * n + 1; }
    Vec eta() const { return zeta; }
    KForm eta_form() const { return flat(zeta); }

    /// Orthogonal projector onto the distribution zeta-perp.
    Mat transverse_projector() const {
        return Mat::Identity(dim(), dim()) - zeta * zeta.transpose();
    }
};

struct ValidationReport {
    bool ok = false;
    double blair_residual = 0.0;        // phi^2 + I - eta (x) zeta
    double unit_residual = 0.0;         // eta(zeta) - 1
    double phi_zeta_residual = 0.0;     // phi zeta
    double eta_phi_residual = 0.0;      // eta o phi
    double compat_residual = 0.0;       // phi^T phi - (I - zeta zeta^T)
    double volume = 0.0;                // F^n ^ eta on the full frame
    std::string message;
};

/// Checks the defining equations and the orientation condition F^n ^ eta != 0.
ValidationReport validate(const AcmStructure& s, double tol = 1e-10);

/// Same, but throws ValidationError when a check fails.
void validate_or_throw(const AcmStructure& s, double tol = 1e-10);

/// Fundamental two-form F(X,Y) = <X, phi Y>; F(E_i,E_j) = phi(i,j).
KForm fundamental_form(const AcmStructure& s);

/// Canonical structure: phi E_{2i} = E_{2i+1} on consecutive pairs,
/// zeta = E_{2n} (last frame vector), 0-based indices.
AcmStructure canonical_structure(int n);

/// Structure with the same canonical pairing but zeta an arbitrary unit
/// vector: the transverse complex structure is built deterministically from
/// an orthonormal completion of zeta.
AcmStructure structure_with_zeta(int n, const Vec& zeta);

} // namespace acmt
