#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acmt/expr.hpp"
#include "acmt/structure.hpp"
#include "acmt/tensor3.hpp"

namespace acmt {

using ChartPoint = std::vector<double>;

/// Chart model of a manifold piece: an expression-valued frame over the
/// chart, a domain predicate (positive where valid), and the finite
/// difference policy. Column j of `frame` holds the chart components of the
/// frame field E_j, declared orthonormal.
struct FrameModel {
    int n = 0;
    std::vector<std::vector<Expr>> frame; // frame[row][col]
    Expr domain;                          // positive where valid
    double fd_step = 0.0;                 // 0 -> default cbrt(eps)
    /// Optional exact bracket coefficients c^k_{ij}, flattened (i*d+j)*d+k.
    std::optional<std::vector<Expr>> closed_brackets;

    int dim() const { return 2 * n + 1; }
    double step() const;
};

/// Everything the pointwise pipeline needs at one chart point.
struct PointEvaluation {
    ChartPoint point;
    Mat frame;      // A(p), column j = chart components of E_j
    Mat frame_inv;
    Tensor3 c;      // c(i,j,k) = c^k_{ij},  [E_i,E_j] = sum_k c^k_{ij} E_k
    Tensor3 gamma;  // gamma(i,j,k) = Gamma^k_{ij} = <nabla_{E_i} E_j, E_k>
};

bool in_domain(const FrameModel& m, const ChartPoint& p);
Mat frame_matrix_at(const FrameModel& m, const ChartPoint& p);

/// Lie bracket coefficients at p: chart commutators of the frame columns by
/// central differences, re-expressed in the frame, or the closed forms when
/// the model carries them and `use_closed` is set.
Tensor3 brackets_at(const FrameModel& m, const ChartPoint& p, bool use_closed = true);

/// Orthonormal-frame Koszul formula:
///   Gamma^k_{ij} = (c^k_{ij} - c^i_{jk} + c^j_{ki}) / 2.
Tensor3 koszul(const Tensor3& c);

PointEvaluation evaluate_at(const FrameModel& m, const ChartPoint& p, bool use_closed = true);

/// Pointwise evaluation backed by a raw bracket table (synthetic structures;
/// identity frame, no chart).
PointEvaluation evaluation_from_brackets(const Tensor3& c);

struct FdOptions {
    bool richardson = false; // one extrapolation level, error O(h^4)
};

/// Central-difference partial of a field along chart coordinate k. The step
/// is fd_step * max(1, |p_k|); stencil points violating the domain predicate
/// shrink the step by half up to 4 times before failing.
template <class T>
T chart_partial(const std::function<T(const ChartPoint&)>& f, const FrameModel& m,
                const ChartPoint& p, int k, const FdOptions& opt = {});

/// E_i(field) at p: chart-direction differentiation then frame recombination,
/// E_i(f) = sum_k A_{ki} df/dx_k.
template <class T>
T directional_derivative(const std::function<T(const ChartPoint&)>& f, const FrameModel& m,
                         const ChartPoint& p, int i, const FdOptions& opt = {});

/// d of a one-form field given by frame components:
///   da(E_i,E_j) = E_i(a_j) - E_j(a_i) - sum_k c^k_{ij} a_k.
KForm exterior_derivative_one_form(const std::function<Vec(const ChartPoint&)>& alpha,
                                   const FrameModel& m, const ChartPoint& p,
                                   const FdOptions& opt = {});

/// d of a scalar field, as the one-form of frame components E_i(f).
Vec gradient_one_form(const std::function<double(const ChartPoint&)>& f, const FrameModel& m,
                      const ChartPoint& p, const FdOptions& opt = {});

/// Covariant derivative of computed tensor fields in frame components.
/// G(i,a,m) = G^m_{ia} are the connection coefficients (Gamma for the Levi
/// Civita connection, Gamma + xi for the minimal connection).
Mat covariant_derivative_one_form(const std::function<Vec(const ChartPoint&)>& w,
                                  const FrameModel& m, const ChartPoint& p, const Tensor3& G,
                                  const FdOptions& opt = {}); // out(i,a) = (nabla_i w)_a
Tensor3 covariant_derivative_two_form(const std::function<Mat(const ChartPoint&)>& B,
                                      const FrameModel& m, const ChartPoint& p, const Tensor3& G,
                                      const FdOptions& opt = {}); // out(i,a,b)
/// Directional covariant derivative of a rank-3 field along a frame vector.
Tensor3 covariant_derivative_tensor3_along(const std::function<Tensor3(const ChartPoint&)>& T,
                                           const FrameModel& m, const ChartPoint& p,
                                           const Vec& dir, const Tensor3& G,
                                           const FdOptions& opt = {});

/// Conformal change of metric e^{2a} <.,.>, realised by rescaling the frame
/// columns by e^{-a}. phi, zeta, eta keep their frame components; closed
/// bracket tables are dropped (derivatives of a are taken numerically).
std::pair<FrameModel, AcmStructure> conformal_transform(const FrameModel& m,
                                                        const AcmStructure& s, const Expr& a);

/// Model file schema ("schema": 1):
/// {"schema":1, "n":int, "frame":[[expr]], "phi":[[num]], "zeta":[num],
///  "params":{name:num}, "domain":expr, "fd_step":num}
std::pair<FrameModel, AcmStructure> load_model_json(const std::string& json_text);
std::pair<FrameModel, AcmStructure> load_model_file(const std::string& path);

} // namespace acmt
