#include "acmt/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace acmt {

double FrameModel::step() const {
    if (fd_step > 0.0) return fd_step;
    return std::cbrt(std::numeric_limits<double>::epsilon()); // ~6.1e-6
}

bool in_domain(const FrameModel& m, const ChartPoint& p) {
    if (static_cast<int>(p.size()) != m.dim()) return false;
    double v = m.domain->eval(p);
    return std::isfinite(v) && v > 0.0;
}

Mat frame_matrix_at(const FrameModel& m, const ChartPoint& p) {
    const int d = m.dim();
    if (!in_domain(m, p)) {
        std::ostringstream os;
        os << "point outside model domain:";
        for (double x : p) os << ' ' << x;
        throw StencilError(os.str());
    }
    Mat A(d, d);
    for (int r = 0; r < d; ++r)
        for (int cidx = 0; cidx < d; ++cidx) {
            double v = m.frame[r][cidx]->eval(p);
            if (!std::isfinite(v)) throw StencilError("frame entry not finite at queried point");
            A(r, cidx) = v;
        }
    return A;
}

namespace {

Mat invert_frame(const Mat& A) {
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) throw StencilError("singular frame at queried point");
    return lu.inverse();
}

// Step shrinking for stencil points that leave the domain.
double admissible_step(const FrameModel& m, const ChartPoint& p, int k, double h) {
    ChartPoint q = p;
    for (int tries = 0; tries <= 4; ++tries) {
        q[k] = p[k] + h;
        bool plus_ok = in_domain(m, q);
        q[k] = p[k] - h;
        bool minus_ok = in_domain(m, q);
        if (plus_ok && minus_ok) return h;
        h *= 0.5;
    }
    throw StencilError("finite-difference stencil leaves the model domain");
}

} // namespace

template <class T>
T chart_partial(const std::function<T(const ChartPoint&)>& f, const FrameModel& m,
                const ChartPoint& p, int k, const FdOptions& opt) {
    double h = m.step() * std::max(1.0, std::abs(p[k]));
    h = admissible_step(m, p, k, h);
    ChartPoint q = p;
    q[k] = p[k] + h;
    T fp = f(q);
    q[k] = p[k] - h;
    T fm = f(q);
    T d1 = (1.0 / (2.0 * h)) * (fp - fm);
    if (!opt.richardson) return d1;
    q[k] = p[k] + 0.5 * h;
    T fp2 = f(q);
    q[k] = p[k] - 0.5 * h;
    T fm2 = f(q);
    T d2 = (1.0 / h) * (fp2 - fm2);
    return (1.0 / 3.0) * (4.0 * d2 - d1);
}

template <class T>
T directional_derivative(const std::function<T(const ChartPoint&)>& f, const FrameModel& m,
                         const ChartPoint& p, int i, const FdOptions& opt) {
    Mat A = frame_matrix_at(m, p);
    const int d = m.dim();
    bool first = true;
    T acc{};
    for (int k = 0; k < d; ++k) {
        double w = A(k, i);
        if (w == 0.0) continue;
        T dk = chart_partial<T>(f, m, p, k, opt);
        if (first) {
            acc = w * dk;
            first = false;
        } else {
            acc = acc + w * dk;
        }
    }
    if (first) {
        // degenerate column; derivative vanishes, but the shape must match
        T v = f(p);
        acc = 0.0 * v;
    }
    return acc;
}

template double chart_partial<double>(const std::function<double(const ChartPoint&)>&,
                                      const FrameModel&, const ChartPoint&, int, const FdOptions&);
template Vec chart_partial<Vec>(const std::function<Vec(const ChartPoint&)>&, const FrameModel&,
                                const ChartPoint&, int, const FdOptions&);
template Mat chart_partial<Mat>(const std::function<Mat(const ChartPoint&)>&, const FrameModel&,
                                const ChartPoint&, int, const FdOptions&);
template Tensor3 chart_partial<Tensor3>(const std::function<Tensor3(const ChartPoint&)>&,
                                        const FrameModel&, const ChartPoint&, int,
                                        const FdOptions&);
template double directional_derivative<double>(const std::function<double(const ChartPoint&)>&,
                                               const FrameModel&, const ChartPoint&, int,
                                               const FdOptions&);
template Vec directional_derivative<Vec>(const std::function<Vec(const ChartPoint&)>&,
                                         const FrameModel&, const ChartPoint&, int,
                                         const FdOptions&);
template Mat directional_derivative<Mat>(const std::function<Mat(const ChartPoint&)>&,
                                         const FrameModel&, const ChartPoint&, int,
                                         const FdOptions&);
template Tensor3 directional_derivative<Tensor3>(const std::function<Tensor3(const ChartPoint&)>&,
                                                 const FrameModel&, const ChartPoint&, int,
                                                 const FdOptions&);

Tensor3 brackets_at(const FrameModel& m, const ChartPoint& p, bool use_closed) {
    const int d = m.dim();
    Tensor3 c(d);
    if (use_closed && m.closed_brackets) {
        const auto& cb = *m.closed_brackets;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    c(i, j, k) = cb[(static_cast<std::size_t>(i) * d + j) * d + k]->eval(p);
        return c;
    }
    Mat A = frame_matrix_at(m, p);
    Mat Ainv = invert_frame(A);
    // dA[k] = dA/dx_k, frame invertibility checked at each stencil point.
    std::vector<Mat> dA(d);
    std::function<Mat(const ChartPoint&)> frame_field = [&](const ChartPoint& q) {
        Mat Aq = frame_matrix_at(m, q);
        invert_frame(Aq);
        return Aq;
    };
    for (int k = 0; k < d; ++k) dA[k] = chart_partial<Mat>(frame_field, m, p, k);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            Vec commutator = Vec::Zero(d);
            for (int k = 0; k < d; ++k)
                commutator += A(k, i) * dA[k].col(j) - A(k, j) * dA[k].col(i);
            Vec cf = Ainv * commutator;
            for (int k = 0; k < d; ++k) {
                c(i, j, k) = cf[k];
                c(j, i, k) = -cf[k];
            }
        }
    }
    return c;
}

Tensor3 koszul(const Tensor3& c) {
    const int d = c.dim();
    Tensor3 g(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                g(i, j, k) = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
    return g;
}

PointEvaluation evaluate_at(const FrameModel& m, const ChartPoint& p, bool use_closed) {
    PointEvaluation pe;
    pe.point = p;
    pe.frame = frame_matrix_at(m, p);
    pe.frame_inv = invert_frame(pe.frame);
    pe.c = brackets_at(m, p, use_closed);
    pe.gamma = koszul(pe.c);
    return pe;
}

PointEvaluation evaluation_from_brackets(const Tensor3& c) {
    PointEvaluation pe;
    const int d = c.dim();
    pe.point.assign(static_cast<std::size_t>(d), 0.0);
    pe.frame = Mat::Identity(d, d);
    pe.frame_inv = pe.frame;
    pe.c = c;
    pe.gamma = koszul(c);
    return pe;
}

KForm exterior_derivative_one_form(const std::function<Vec(const ChartPoint&)>& alpha,
                                   const FrameModel& m, const ChartPoint& p,
                                   const FdOptions& opt) {
    const int d = m.dim();
    Tensor3 c = brackets_at(m, p);
    Vec a0 = alpha(p);
    // E_i(alpha_j) for all pairs: one derivative pass of the whole component
    // vector per frame direction.
    std::vector<Vec> dcomp(d);
    for (int i = 0; i < d; ++i) dcomp[i] = directional_derivative<Vec>(alpha, m, p, i, opt);
    KForm out(d, 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double v = dcomp[i][j] - dcomp[j][i];
            for (int k = 0; k < d; ++k) v -= c(i, j, k) * a0[k];
            out.at({i, j}) = v;
        }
    return out;
}

Vec gradient_one_form(const std::function<double(const ChartPoint&)>& f, const FrameModel& m,
                      const ChartPoint& p, const FdOptions& opt) {
    const int d = m.dim();
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = directional_derivative<double>(f, m, p, i, opt);
    return out;
}

Mat covariant_derivative_one_form(const std::function<Vec(const ChartPoint&)>& w,
                                  const FrameModel& m, const ChartPoint& p, const Tensor3& G,
                                  const FdOptions& opt) {
    const int d = m.dim();
    Vec w0 = w(p);
    Mat out(d, d);
    for (int i = 0; i < d; ++i) {
        Vec di = directional_derivative<Vec>(w, m, p, i, opt);
        for (int a = 0; a < d; ++a) {
            double v = di[a];
            for (int mm = 0; mm < d; ++mm) v -= G(i, a, mm) * w0[mm];
            out(i, a) = v;
        }
    }
    return out;
}

Tensor3 covariant_derivative_two_form(const std::function<Mat(const ChartPoint&)>& B,
                                      const FrameModel& m, const ChartPoint& p, const Tensor3& G,
                                      const FdOptions& opt) {
    const int d = m.dim();
    Mat B0 = B(p);
    Tensor3 out(d);
    for (int i = 0; i < d; ++i) {
        Mat di = directional_derivative<Mat>(B, m, p, i, opt);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double v = di(a, b);
                for (int mm = 0; mm < d; ++mm)
                    v -= G(i, a, mm) * B0(mm, b) + G(i, b, mm) * B0(a, mm);
                out(i, a, b) = v;
            }
    }
    return out;
}

Tensor3 covariant_derivative_tensor3_along(const std::function<Tensor3(const ChartPoint&)>& T,
                                           const FrameModel& m, const ChartPoint& p,
                                           const Vec& dir, const Tensor3& G,
                                           const FdOptions& opt) {
    const int d = m.dim();
    Tensor3 T0 = T(p);
    Tensor3 dT(d);
    bool first = true;
    for (int i = 0; i < d; ++i) {
        if (dir[i] == 0.0) continue;
        Tensor3 di = directional_derivative<Tensor3>(T, m, p, i, opt);
        if (first) {
            dT = dir[i] * di;
            first = false;
        } else {
            dT += dir[i] * di;
        }
    }
    // connection coefficients along dir
    Mat Gd = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            for (int mm = 0; mm < d; ++mm) Gd(a, mm) += dir[i] * G(i, a, mm);
    Tensor3 out(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int cidx = 0; cidx < d; ++cidx) {
                double v = dT(a, b, cidx);
                for (int mm = 0; mm < d; ++mm)
                    v -= Gd(a, mm) * T0(mm, b, cidx) + Gd(b, mm) * T0(a, mm, cidx) +
                         Gd(cidx, mm) * T0(a, b, mm);
                out(a, b, cidx) = v;
            }
    return out;
}

std::pair<FrameModel, AcmStructure> conformal_transform(const FrameModel& m,
                                                        const AcmStructure& s, const Expr& a) {
    FrameModel out = m;
    for (auto& row : out.frame)
        for (auto& e : row) e = scale_by_exp_minus(e, a);
    out.closed_brackets.reset(); // brackets pick up da-terms; recomputed by FD
    return {out, s};
}

std::pair<FrameModel, AcmStructure> load_model_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("model file must hold a JSON object");
    if (j.value("schema", 1) != 1) throw Error("unsupported model schema version");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw Error("model needs integer field 'n'");
    const int n = j["n"].get<int>();
    if (n < 1) throw Error("model needs n >= 1");
    const int d = 2 * n + 1;

    std::map<std::string, double> params;
    if (j.contains("params")) {
        for (auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
    }

    FrameModel fm;
    fm.n = n;
    if (!j.contains("frame") || !j["frame"].is_array() || static_cast<int>(j["frame"].size()) != d)
        throw Error("model needs a " + std::to_string(d) + "x" + std::to_string(d) +
                    " 'frame' array of expressions");
    fm.frame.resize(d);
    for (int r = 0; r < d; ++r) {
        const auto& row = j["frame"][r];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw Error("frame row " + std::to_string(r) + " has wrong length");
        fm.frame[r].resize(d);
        for (int cidx = 0; cidx < d; ++cidx)
            fm.frame[r][cidx] = parse_expression(row[cidx].get<std::string>(), params);
    }
    fm.domain = j.contains("domain") ? parse_expression(j["domain"].get<std::string>(), params)
                                     : make_constant(1.0);
    fm.fd_step = j.value("fd_step", 0.0);

    AcmStructure s;
    s.n = n;
    if (!j.contains("phi") || !j.contains("zeta")) throw Error("model needs 'phi' and 'zeta'");
    s.phi = Mat::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int cidx = 0; cidx < d; ++cidx) s.phi(r, cidx) = j["phi"][r][cidx].get<double>();
    s.zeta = Vec::Zero(d);
    for (int r = 0; r < d; ++r) s.zeta[r] = j["zeta"][r].get<double>();
    validate_or_throw(s);
    return {fm, s};
}

std::pair<FrameModel, AcmStructure> load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_json(ss.str());
}

} // namespace acmt
