#pragma once

#include <cassert>
#include <cmath>
#include <vector>

namespace acmt {

/// Dense cube-shaped 3-index array of doubles. Used for Lie bracket
/// coefficients c^k_{ij}, connection coefficients Gamma^k_{ij}, torsion
/// tensors t_{ijk} and vector-valued two-forms.
class Tensor3 {
public:
    Tensor3() : d_(0) {}
    explicit Tensor3(int d) : d_(d), v_(static_cast<std::size_t>(d) * d * d, 0.0) {}

    int dim() const { return d_; }

    double& operator()(int i, int j, int k) {
        assert(i >= 0 && i < d_ && j >= 0 && j < d_ && k >= 0 && k < d_);
        return v_[(static_cast<std::size_t>(i) * d_ + j) * d_ + k];
    }
    double operator()(int i, int j, int k) const {
        assert(i >= 0 && i < d_ && j >= 0 && j < d_ && k >= 0 && k < d_);
        return v_[(static_cast<std::size_t>(i) * d_ + j) * d_ + k];
    }

    Tensor3& operator+=(const Tensor3& o) {
        assert(d_ == o.d_);
        for (std::size_t a = 0; a < v_.size(); ++a) v_[a] += o.v_[a];
        return *this;
    }
    Tensor3& operator-=(const Tensor3& o) {
        assert(d_ == o.d_);
        for (std::size_t a = 0; a < v_.size(); ++a) v_[a] -= o.v_[a];
        return *this;
    }
    Tensor3& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }

    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

    /// Frobenius inner product, the natural invariant pairing on torsion
    /// tensors.
    double dot(const Tensor3& o) const {
        assert(d_ == o.d_);
        double s = 0.0;
        for (std::size_t a = 0; a < v_.size(); ++a) s += v_[a] * o.v_[a];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

private:
    int d_;
    std::vector<double> v_;
};

} // namespace acmt
