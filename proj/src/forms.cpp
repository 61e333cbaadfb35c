#include "acmt/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace acmt {

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Sorts a small index tuple in place, returning the permutation sign,
// or 0 if two indices coincide.
int sort_sign(int* idx, int k) {
    int sign = 1;
    for (int i = 1; i < k; ++i) {
        int key = idx[i];
        int j = i - 1;
        while (j >= 0 && idx[j] > key) {
            idx[j + 1] = idx[j];
            --j;
            sign = -sign;
        }
        idx[j + 1] = key;
    }
    for (int i = 1; i < k; ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

} // namespace

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
    if (degree < 0 || degree > dim)
        throw ContractViolation("form degree must lie in 0..dim");
    coeff_.assign(static_cast<std::size_t>(binom(dim, degree)), 0.0);
}

int KForm::rank_sorted(const int* idx) const {
    // Lexicographic rank of a strictly increasing tuple.
    long r = 0;
    int prev = -1;
    for (int i = 0; i < degree_; ++i) {
        for (int c = prev + 1; c < idx[i]; ++c) r += binom(dim_ - 1 - c, degree_ - 1 - i);
        prev = idx[i];
    }
    return static_cast<int>(r);
}

double KForm::eval(const int* idx, int k) const {
    if (k != degree_) throw ContractViolation("index tuple length does not match form degree");
    if (degree_ == 0) return coeff_[0];
    std::array<int, 16> buf;
    std::copy(idx, idx + k, buf.begin());
    int sign = sort_sign(buf.data(), k);
    if (sign == 0) return 0.0;
    return sign * coeff_[rank_sorted(buf.data())];
}

double KForm::operator()(std::initializer_list<int> idx) const {
    return eval(idx.begin(), static_cast<int>(idx.size()));
}

double& KForm::at(std::initializer_list<int> idx) {
    if (static_cast<int>(idx.size()) != degree_)
        throw ContractViolation("index tuple length does not match form degree");
    if (degree_ == 0) return coeff_[0];
    std::array<int, 16> buf;
    std::copy(idx.begin(), idx.end(), buf.begin());
    for (int i = 1; i < degree_; ++i)
        if (buf[i] <= buf[i - 1]) throw ContractViolation("at() needs a strictly increasing tuple");
    return coeff_[rank_sorted(buf.data())];
}

double KForm::at(std::initializer_list<int> idx) const {
    return const_cast<KForm*>(this)->at(idx);
}

void KForm::add(const int* idx, int k, double v) {
    if (k != degree_) throw ContractViolation("index tuple length does not match form degree");
    if (degree_ == 0) {
        coeff_[0] += v;
        return;
    }
    std::array<int, 16> buf;
    std::copy(idx, idx + k, buf.begin());
    int sign = sort_sign(buf.data(), k);
    if (sign == 0) return;
    coeff_[rank_sorted(buf.data())] += sign * v;
}

std::vector<int> KForm::tuple(int flat) const {
    // Inverse of rank_sorted, walking the lexicographic enumeration.
    std::vector<int> out(degree_);
    long r = flat;
    int prev = -1;
    for (int i = 0; i < degree_; ++i) {
        for (int c = prev + 1; c < dim_; ++c) {
            long block = binom(dim_ - 1 - c, degree_ - 1 - i);
            if (r < block) {
                out[i] = c;
                prev = c;
                break;
            }
            r -= block;
        }
    }
    return out;
}

KForm& KForm::operator+=(const KForm& o) {
    if (!same_shape(o)) throw ContractViolation("form shape mismatch in +");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
    return *this;
}

KForm& KForm::operator-=(const KForm& o) {
    if (!same_shape(o)) throw ContractViolation("form shape mismatch in -");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
    return *this;
}

KForm& KForm::operator*=(double s) {
    for (double& c : coeff_) c *= s;
    return *this;
}

double form_inner(const KForm& a, const KForm& b) {
    if (!a.same_shape(b)) throw ContractViolation("form_inner needs equal degrees and dimensions");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a.raw(i) * b.raw(i);
    return s;
}

double form_norm(const KForm& a) { return std::sqrt(form_inner(a, a)); }

KForm wedge(const KForm& a, const KForm& b) {
    if (a.dim() != b.dim()) throw ContractViolation("wedge dimension mismatch");
    const int p = a.degree(), q = b.degree(), d = a.dim();
    if (p + q > d) throw ContractViolation("wedge degree overflow");
    KForm out(d, p + q);
    std::array<int, 16> sel, lhs, rhs;
    for (int flat = 0; flat < out.size(); ++flat) {
        std::vector<int> t = out.tuple(flat);
        // Sum over p-element subsets S of the tuple: sign(S | S^c) a(S) b(S^c).
        for (int i = 0; i < p; ++i) sel[i] = i;
        double acc = 0.0;
        while (true) {
            int li = 0, ri = 0, inv = 0, s = 0;
            for (int i = 0; i < p + q; ++i) {
                if (s < p && sel[s] == i) {
                    lhs[li++] = t[i];
                    inv += i - s; // transpositions to move slot i to position s
                    ++s;
                } else {
                    rhs[ri++] = t[i];
                }
            }
            double av = (p == 0) ? a.raw(0) : a.eval(lhs.data(), p);
            double bv = (q == 0) ? b.raw(0) : b.eval(rhs.data(), q);
            acc += ((inv & 1) ? -1.0 : 1.0) * av * bv;
            // next subset
            int i = p - 1;
            while (i >= 0 && sel[i] == i + (p + q) - p) --i;
            if (i < 0) break;
            ++sel[i];
            for (int j = i + 1; j < p; ++j) sel[j] = sel[j - 1] + 1;
        }
        out.raw(flat) = acc;
    }
    return out;
}

KForm interior(const FrameVector& x, const KForm& a) {
    const int d = a.dim(), k = a.degree();
    if (k < 1) throw ContractViolation("interior product needs degree >= 1");
    KForm out(d, k - 1);
    std::array<int, 16> idx;
    for (int flat = 0; flat < out.size(); ++flat) {
        std::vector<int> t = out.tuple(flat);
        double acc = 0.0;
        for (int j = 0; j < d; ++j) {
            if (x[j] == 0.0) continue;
            idx[0] = j;
            for (int m = 0; m < k - 1; ++m) idx[m + 1] = t[m];
            acc += x[j] * a.eval(idx.data(), k);
        }
        out.raw(flat) = acc;
    }
    return out;
}

KForm flat(const FrameVector& x) {
    KForm a(static_cast<int>(x.size()), 1);
    for (int i = 0; i < x.size(); ++i) a.raw(i) = x[i];
    return a;
}

FrameVector sharp(const KForm& a) {
    if (a.degree() != 1) throw ContractViolation("sharp needs a one-form");
    Vec v(a.dim());
    for (int i = 0; i < a.dim(); ++i) v[i] = a.raw(i);
    return v;
}

Mat two_form_to_matrix(const KForm& a) {
    if (a.degree() != 2) throw ContractViolation("two_form_to_matrix needs degree 2");
    const int d = a.dim();
    Mat B = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) B(i, j) = a({i, j});
    return B;
}

KForm matrix_to_two_form(const Mat& B) {
    const int d = static_cast<int>(B.rows());
    KForm a(d, 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) a.at({i, j}) = 0.5 * (B(i, j) - B(j, i));
    return a;
}

KForm vector_to_one_form(const Vec& v) { return flat(v); }

Vec one_form_to_vector(const KForm& a) { return sharp(a); }

} // namespace acmt
