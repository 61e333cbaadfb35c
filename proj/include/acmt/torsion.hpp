#pragma once

#include <array>
#include <vector>

#include "acmt/nijenhuis.hpp"

namespace acmt {

/// Intrinsic torsion t(i,j,k) = <xi_{E_i} E_j, E_k> together with its twelve
/// projected components (index 1..12) and their norms.
struct IntrinsicTorsion {
    Tensor3 t;
    std::array<Tensor3, 13> comp{};  // comp[1..12]
    std::array<double, 13> norms{};  // norms[1..12]
    bool components_filled = false;

    double norm() const { return t.norm(); }
};

/// xi_X = -1/2 phi o nabla_X phi + nabla_X eta (x) zeta - 1/2 eta (x) nabla_X zeta.
/// Checks the structural invariants (antisymmetry, u(n)-perp membership, the
/// characterization identity) and throws on residuals above tol * |xi|.
IntrinsicTorsion intrinsic_torsion(const AcmStructure& s, const PointEvaluation& pe,
                                   double tol = 1e-10);

/// Residuals of the structural invariants of a torsion tensor.
struct TorsionInvariants {
    double antisymmetry;      // t(i,j,k) + t(i,k,j)
    double membership;        // u(n)-part of each xi_{E_i}
    double characterization;  // phi xi_X Y + xi_X phi Y - eta(Y) phi xi_X zeta - eta(xi_X phi Y) zeta
};
TorsionInvariants torsion_invariants(const AcmStructure& s, const Tensor3& t);

/// The twelve projectors, bound to one structure.
class UnProjectors {
public:
    explicit UnProjectors(const AcmStructure& s);

    /// Projects a raw 3-tensor into the torsion space T* (x) u(n)-perp
    /// (antisymmetrise the form slots, remove the u(n) part).
    Tensor3 into_torsion_space(const Tensor3& raw) const;

    /// All twelve components of a torsion-space tensor; slot 0 unused.
    std::array<Tensor3, 13> split(const Tensor3& t) const;
    Tensor3 project(int component, const Tensor3& t) const;

    /// Orthonormal basis of component i, built by projecting elementary
    /// tensors and orthonormalising.
    std::vector<Tensor3> component_basis(int component) const;

    /// Basis of the diagonal in C10 + C11 annihilated by the N map
    /// (numerical nullspace extraction, cached).
    const std::vector<Tensor3>& c1011_kernel_basis() const;

    const AcmStructure& structure() const { return s_; }

private:
    AcmStructure s_;
    Mat q_;   // transverse projector
    Mat phi2_;
    mutable std::vector<Tensor3> kernel_basis_;
    mutable bool kernel_ready_ = false;
};

/// Fills comp/norms via UnProjectors. Verifies completeness.
void project_components(IntrinsicTorsion& xi, const AcmStructure& s, double tol = 1e-8);

/// Block embeddings (inverse of the block extraction), used to reconstruct
/// components from detector signals.
Tensor3 embed_beta_block(const AcmStructure& s, const Mat& beta);   // eta-perp (x) eta-perp ^ eta
Tensor3 embed_c11(const AcmStructure& s, const Mat& b);             // eta (x) u(n)-perp transverse
Tensor3 embed_c12(const AcmStructure& s, const Vec& gamma);         // eta (x) eta-perp ^ eta

/// beta(X,Y) = (xi_X eta)(Y) restricted to zeta-perp.
Mat beta_block(const AcmStructure& s, const Tensor3& t);

/// Derived scalars, one-forms and contracted vector fields.
struct DerivedQuantities {
    double dstar_eta = 0.0;
    Vec dstar_F;              // one-form d*F
    double dstar_F_zeta = 0.0;
    bool theta_defined = false;
    Vec theta;                // Lee form, zero vector when n = 1
    Vec xi_zeta_eta;          // read off C12
    Vec nabla_zeta_zeta;
    Vec sum_xi_ei_ei, sum_xi4_ei_ei, sum_xi5_ei_ei, sum_xi12_ei_ei, sum_xi_ei_phi_ei;
    double firstvector_residual = 0.0;  // eq. for sum xi_{e_i} e_i
    double sum4512_residual = 0.0;      // only (4),(5),(12) contribute
    double leeac_residual = 0.0;        // sum xi_{(4)e_i} e_i
    double xi5_sum_residual = 0.0;      // sum xi_{(5)e_i} e_i = -d*eta zeta
    double xi12_sum_residual = 0.0;     // sum xi_{(12)e_i} e_i = -nabla_zeta zeta
    double xi6_sum_residual = 0.0;      // sum xi_{(6)e_i} phi e_i = -d*F(zeta) zeta
};
DerivedQuantities derived_quantities(const IntrinsicTorsion& xi, const AcmStructure& s,
                                     const PointEvaluation& pe);

/// d eta and dF reconstructed from a torsion tensor through the maps
/// alt(xi eta) and alt(xi F); equal to the bracket-route forms on real
/// structures (independent pipelines).
KForm d_eta_from_torsion(const AcmStructure& s, const Tensor3& t);
KForm d_F_from_torsion(const AcmStructure& s, const Tensor3& t);

} // namespace acmt
