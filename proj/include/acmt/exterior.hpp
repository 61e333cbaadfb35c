#pragma once

#include "acmt/structure.hpp"

namespace acmt {

/// U(n)-splitting of a two-form:
///   Lambda^2 = R F  +  [lambda^{1,1}_0]  +  [[lambda^{2,0}]]  +  eta ^ [[lambda^{1,0}]].
struct TwoFormSplit {
    KForm rF;       // trace part, multiple of F
    KForm l11_0;    // invariant traceless transverse part
    KForm l20;      // anti-invariant transverse part
    KForm etaWedge; // eta ^ (zeta -| alpha)

    KForm sum() const { return rF + l11_0 + l20 + etaWedge; }
};

/// U(n)-splitting of a three-form:
///   Lambda^3 = [[l^{3,0}]] + [[l^{2,1}_0]] + [[l^{1,0}]]^F + [[l^{2,0}]]^eta
///              + R F^eta + [l^{1,1}_0]^eta.
struct ThreeFormSplit {
    KForm l30;
    KForm l21_0;
    KForm l10WedgeF;
    KForm l20WedgeEta;
    KForm rFWedgeEta;
    KForm l11_0WedgeEta;
    /// The transverse one-form theta_g with l10WedgeF = theta_g ^ F
    /// (zero when n = 1, where that summand is empty).
    Vec theta_g;

    KForm sum() const {
        return l30 + l21_0 + l10WedgeF + l20WedgeEta + rFWedgeEta + l11_0WedgeEta;
    }
};

TwoFormSplit split_two_form(const KForm& a, const AcmStructure& s);
ThreeFormSplit split_three_form(const KForm& g, const AcmStructure& s);

/// Membership predicates for the two-form summands. Residuals are absolute,
/// to be compared against tol * norm of the input.
double residual_rF(const KForm& a, const AcmStructure& s);        // distance to R F
double residual_l11_0(const KForm& a, const AcmStructure& s);     // invariance + tracelessness + transversality
double residual_l20(const KForm& a, const AcmStructure& s);       // anti-invariance + transversality
double residual_eta_wedge(const KForm& a, const AcmStructure& s); // a = eta ^ (zeta -| a)

/// Rank of each two-form projector (applied to a basis of Lambda^2).
/// Returns {rF, l11_0, l20, etaWedge} ranks; expected {1, n^2-1, n(n-1), 2n}.
std::vector<int> two_form_projector_ranks(const AcmStructure& s, double tol = 1e-9);

} // namespace acmt
