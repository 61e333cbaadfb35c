#pragma once

#include <Eigen/Dense>
#include <vector>

#include "acmt/errors.hpp"

namespace acmt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Vector expressed in an orthonormal frame; index 0 .. dim-1.
using FrameVector = Vec;

/// Fully antisymmetric k-form over frame indices, stored on strictly
/// increasing index tuples (C(dim, k) coefficients, lexicographic order).
/// Degree 0 is a scalar, degree 1 a covector.
class KForm {
public:
    KForm() : dim_(0), degree_(0) {}
    KForm(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(coeff_.size()); }

    /// Value on an arbitrary index tuple (duplicate indices give 0).
    double operator()(std::initializer_list<int> idx) const;
    double eval(const int* idx, int k) const;

    /// Coefficient slot for a strictly increasing tuple.
    double& at(std::initializer_list<int> idx);
    double at(std::initializer_list<int> idx) const;

    /// Adds v at an arbitrary tuple, respecting the permutation sign.
    void add(const int* idx, int k, double v);

    double& raw(int flat) { return coeff_[flat]; }
    double raw(int flat) const { return coeff_[flat]; }

    /// The strictly increasing tuple for a flat storage index.
    std::vector<int> tuple(int flat) const;

    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    KForm& operator*=(double s);
    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(double s, KForm a) { return a *= s; }

    bool same_shape(const KForm& o) const { return dim_ == o.dim_ && degree_ == o.degree_; }

private:
    int dim_;
    int degree_;
    std::vector<double> coeff_;

    int rank_sorted(const int* idx) const;
};

/// <a,b> = (1/p!) sum over all index tuples of coefficient products
/// (orthonormal frame, so no metric factors).
double form_inner(const KForm& a, const KForm& b);
double form_norm(const KForm& a);

/// Exterior product with the convention (a^b)(X,Y) = a(X)b(Y) - a(Y)b(X)
/// for one-forms (shuffle sum without factorial normalisation).
KForm wedge(const KForm& a, const KForm& b);

/// Interior product: (x -| a)(Y...) = a(x, Y...).
KForm interior(const FrameVector& x, const KForm& a);

/// Musical isomorphisms. In an orthonormal frame both are the identity on
/// coefficient arrays.
KForm flat(const FrameVector& x);
FrameVector sharp(const KForm& a);

/// Conversions between degree-2 forms and skew matrices B with
/// B(i,j) = alpha(E_i, E_j).
Mat two_form_to_matrix(const KForm& a);
KForm matrix_to_two_form(const Mat& B);

/// One-form <-> coefficient vector.
KForm vector_to_one_form(const Vec& v);
Vec one_form_to_vector(const KForm& a);

} // namespace acmt
