#pragma once

#include "acmt/model.hpp"
#include "acmt/structure.hpp"
#include "acmt/tensor3.hpp"

namespace acmt {

/// Vector-valued two-forms t(E_i, E_j) = sum_k t(i,j,k) E_k, antisymmetric in
/// (i,j). Houses N_phi, its W-components, the structure tensor blocks and
/// N(xi).
using VectorValuedTwoForm = Tensor3;

/// Covariant derivatives of the structure tensors at a point, all of whose
/// frame components are constant: only the connection acts.
struct NablaStructure {
    Mat eta;      // (i,j) = (nabla_{E_i} eta)(E_j)
    Mat zeta;     // (i,k) = component k of nabla_{E_i} zeta (same numbers)
    Tensor3 phi;  // (i,j,k) = <E_j, (nabla_{E_i} phi) E_k>
};

NablaStructure nabla_of_structure(const AcmStructure& s, const PointEvaluation& pe);

/// Gamma_i as a matrix acting on frame components: (Gamma_i)(k,j) = Gamma^k_{ij}.
Mat gamma_matrix(const Tensor3& gamma, int i);

/// d(eta) from brackets: d eta(E_i,E_j) = -sum_k c^k_{ij} eta_k.
Mat d_eta_matrix(const AcmStructure& s, const PointEvaluation& pe);
KForm d_eta_form(const AcmStructure& s, const PointEvaluation& pe);

/// dF from brackets and the constant components of F.
KForm d_F_form(const AcmStructure& s, const PointEvaluation& pe);

/// N_phi(X,Y) = -phi^2[X,Y] - [phiX, phiY] + phi[phiX, Y] + phi[X, phiY].
VectorValuedTwoForm nijenhuis(const AcmStructure& s, const PointEvaluation& pe);

struct NijenhuisW {
    VectorValuedTwoForm w1, w2, w3, w4;
    VectorValuedTwoForm sum() const { return w1 + w2 + w3 + w4; }
};

/// GL(n,C)-components of N_phi; w3 and w4 are zeta-valued.
NijenhuisW nijenhuis_w_components(const AcmStructure& s, const VectorValuedTwoForm& N,
                                  const Mat& dEta);

struct StructureTensor {
    VectorValuedTwoForm w1, w2, w3, w4, w5;
};

/// Structure-tensor blocks; all five vanish iff N_phi = 0 and d eta = 0.
StructureTensor structure_tensor(const AcmStructure& s, const VectorValuedTwoForm& N,
                                 const Mat& dEta);

/// N(xi)(X,Y) = -phi(xi_X phi)Y + phi(xi_Y phi)X + (xi_{phiX} phi)Y
///              - (xi_{phiY} phi)X, with (xi_X phi) = [xi_X, phi].
/// Equals the bracket-route N_phi; the two computations are independent.
VectorValuedTwoForm n_of_xi(const AcmStructure& s, const Tensor3& torsion);

} // namespace acmt
