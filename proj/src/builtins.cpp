#include "acmt/builtins.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace acmt {

namespace {

int get_int(const std::map<std::string, std::string>& params, const std::string& key, int dflt) {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    return std::stoi(it->second);
}

double get_num(const std::map<std::string, std::string>& params, const std::string& key,
               double dflt) {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    return std::stod(it->second);
}

std::vector<double> get_list(const std::map<std::string, std::string>& params,
                             const std::string& key) {
    std::vector<double> out;
    auto it = params.find(key);
    if (it == params.end()) return out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::string num_str(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<std::vector<Expr>> zero_frame(int d) {
    std::vector<std::vector<Expr>> f(d);
    for (int r = 0; r < d; ++r) {
        f[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) f[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            make_constant(0.0);
    }
    return f;
}

std::vector<Expr> constant_brackets(const Tensor3& c) {
    const int d = c.dim();
    std::vector<Expr> out(static_cast<std::size_t>(d) * d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                out[(static_cast<std::size_t>(i) * d + j) * d + k] = make_constant(c(i, j, k));
    return out;
}

std::pair<FrameModel, AcmStructure> make_hyperbolic(
    const std::map<std::string, std::string>& params) {
    const int n = get_int(params, "n", 2);
    if (n < 1) throw ContractViolation("hyperbolic needs n >= 1");
    const double c = get_num(params, "c", 1.0);
    if (c <= 0.0) throw ContractViolation("hyperbolic needs c > 0");
    const int d = 2 * n + 1;
    std::vector<double> k = get_list(params, "k");
    if (k.empty()) {
        k.assign(static_cast<std::size_t>(d), 0.0);
        k[0] = 0.6 * c;
        k[1] = 0.8 * c;
    }
    if (static_cast<int>(k.size()) != d)
        throw ContractViolation("hyperbolic k must have 2n+1 entries");
    double k2 = 0.0;
    for (double v : k) k2 += v * v;
    if (std::abs(k2 - c * c) > 1e-9 * c * c)
        throw ContractViolation("hyperbolic k must satisfy |k|^2 = c^2");

    FrameModel m;
    m.n = n;
    m.frame = zero_frame(d);
    std::map<std::string, double> pm = {{"c", c}};
    for (int i = 0; i < d; ++i)
        m.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
            parse_expression("c*x1", pm);
    m.domain = parse_expression("x1");
    Tensor3 cb(d);
    for (int j = 1; j < d; ++j) {
        cb(0, j, j) = c;
        cb(j, 0, j) = -c;
    }
    m.closed_brackets = constant_brackets(cb);

    Vec zeta(d);
    for (int i = 0; i < d; ++i) zeta[i] = k[static_cast<std::size_t>(i)] / c;
    AcmStructure s = structure_with_zeta(n, zeta);
    return {m, s};
}

std::pair<FrameModel, AcmStructure> make_h_alt(const std::map<std::string, std::string>& params,
                                               bool second) {
    const int n = get_int(params, "n", 2);
    if (n < 2) throw ContractViolation("h-alt models need n >= 2");
    const int d = 2 * n + 1;
    FrameModel m;
    m.n = n;
    m.frame = zero_frame(d);
    m.frame[0][0] = parse_expression("x1/x2");
    for (int i = 1; i < d; ++i)
        m.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = parse_expression("x1");
    m.domain = parse_expression("sqrt(x1)*sqrt(x2)");
    // [F0,F1] = (x1/x2) F0 + (1/x2) F1;  [F0,Fj] = (1/x2) Fj, j >= 2.
    std::vector<Expr> cb(static_cast<std::size_t>(d) * d * d, make_constant(0.0));
    auto at = [&](int i, int j, int k) -> Expr& {
        return cb[(static_cast<std::size_t>(i) * d + j) * d + k];
    };
    at(0, 1, 0) = parse_expression("x1/x2");
    at(1, 0, 0) = parse_expression("-x1/x2");
    at(0, 1, 1) = parse_expression("1/x2");
    at(1, 0, 1) = parse_expression("-1/x2");
    for (int j = 2; j < d; ++j) {
        at(0, j, j) = parse_expression("1/x2");
        at(j, 0, j) = parse_expression("-1/x2");
    }
    m.closed_brackets = cb;

    AcmStructure s;
    s.n = n;
    s.phi = Mat::Zero(d, d);
    s.zeta = Vec::Zero(d);
    if (!second) {
        // zeta = E_{o1}; phi pairs (1,2), (3,4), ...
        s.zeta[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            s.phi(2 * i + 2, 2 * i + 1) = 1.0;
            s.phi(2 * i + 1, 2 * i + 2) = -1.0;
        }
    } else {
        // zeta = E_2 (frame slot 1); phi pairs (0,2), (3,4), (5,6), ...
        s.zeta[1] = 1.0;
        s.phi(2, 0) = 1.0;
        s.phi(0, 2) = -1.0;
        for (int i = 1; i < n; ++i) {
            s.phi(2 * i + 2, 2 * i + 1) = 1.0;
            s.phi(2 * i + 1, 2 * i + 2) = -1.0;
        }
    }
    return {m, s};
}

std::pair<FrameModel, AcmStructure> make_flat(const std::map<std::string, std::string>& params) {
    const int n = get_int(params, "n", 2);
    if (n < 1) throw ContractViolation("flat needs n >= 1");
    const int d = 2 * n + 1;
    FrameModel m;
    m.n = n;
    m.frame = zero_frame(d);
    for (int i = 0; i < d; ++i)
        m.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = make_constant(1.0);
    m.domain = make_constant(1.0);
    m.closed_brackets = constant_brackets(Tensor3(d));
    return {m, canonical_structure(n)};
}

std::pair<FrameModel, AcmStructure> make_alpha_sasakian(
    const std::map<std::string, std::string>& params) {
    const int n = get_int(params, "n", 2);
    if (n < 1) throw ContractViolation("alpha-sasakian needs n >= 1");
    const double a = get_num(params, "a", 1.0);
    const int d = 2 * n + 1;
    AcmStructure s = canonical_structure(n);

    FrameModel m;
    m.n = n;
    m.frame = zero_frame(d);
    std::map<std::string, double> pm = {{"a", a}};
    for (int i = 0; i < d; ++i)
        m.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = make_constant(1.0);
    // E_i = d/dx_i - (a/2) sum_k F_ik x_k d/dz realises [E_i,E_j] = a F_ij zeta.
    for (int i = 0; i < 2 * n; ++i) {
        std::ostringstream os;
        bool any = false;
        os << "-(a/2)*(";
        for (int k = 0; k < 2 * n; ++k) {
            double F_ik = s.phi(i, k);
            if (F_ik == 0.0) continue;
            if (any) os << (F_ik > 0 ? "+" : "-");
            else if (F_ik < 0) os << "-";
            os << num_str(std::abs(F_ik)) << "*x" << (k + 1);
            any = true;
        }
        os << ")";
        if (any)
            m.frame[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(i)] =
                parse_expression(os.str(), pm);
    }
    m.domain = make_constant(1.0);
    Tensor3 cb(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) cb(i, j, d - 1) = a * s.phi(i, j);
    m.closed_brackets = constant_brackets(cb);
    return {m, s};
}

std::pair<FrameModel, AcmStructure> make_synthetic(
    const std::map<std::string, std::string>& params) {
    const int n = get_int(params, "n", 2);
    if (n < 1) throw ContractViolation("synthetic-random needs n >= 1");
    const unsigned long seed = static_cast<unsigned long>(get_int(params, "seed", 1));
    const int d = 2 * n + 1;
    Tensor3 c = synthetic_random_brackets(n, seed);
    FrameModel m;
    m.n = n;
    m.frame = zero_frame(d);
    // A_{kj}(x) = delta_{kj} + (1/2) sum_i c^k_{ij} x_i: exact brackets at x = 0,
    // central differences are exact on the linear entries.
    for (int kk = 0; kk < d; ++kk)
        for (int j = 0; j < d; ++j) {
            std::ostringstream os;
            os << (kk == j ? "1" : "0");
            for (int i = 0; i < d; ++i) {
                double w = 0.5 * c(i, j, kk);
                if (w == 0.0) continue;
                os << (w > 0 ? "+" : "-") << num_str(std::abs(w)) << "*x" << (i + 1);
            }
            m.frame[static_cast<std::size_t>(kk)][static_cast<std::size_t>(j)] =
                parse_expression(os.str());
        }
    m.domain = make_constant(1.0);
    return {m, canonical_structure(n)};
}

} // namespace

Tensor3 synthetic_random_brackets(int n, unsigned long seed) {
    const int d = 2 * n + 1;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 0.5);
    Tensor3 c(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double v = dist(rng);
                c(i, j, k) = v;
                c(j, i, k) = -v;
            }
    return c;
}

std::vector<std::string> builtin_names() {
    return {"hyperbolic", "h-alt-1", "h-alt-2", "flat", "alpha-sasakian", "synthetic-random"};
}

bool is_builtin(const std::string& name) {
    for (const auto& b : builtin_names())
        if (b == name) return true;
    return false;
}

std::pair<FrameModel, AcmStructure> make_builtin(
    const std::string& name, const std::map<std::string, std::string>& params) {
    std::pair<FrameModel, AcmStructure> out;
    if (name == "hyperbolic") out = make_hyperbolic(params);
    else if (name == "h-alt-1") out = make_h_alt(params, false);
    else if (name == "h-alt-2") out = make_h_alt(params, true);
    else if (name == "flat") out = make_flat(params);
    else if (name == "alpha-sasakian") out = make_alpha_sasakian(params);
    else if (name == "synthetic-random") out = make_synthetic(params);
    else throw ContractViolation("unknown builtin model '" + name + "'");
    validate_or_throw(out.second);
    return out;
}

std::vector<ChartPoint> default_points(const std::string& name, int dim, int count) {
    // Halton sequence per coordinate; range [0.5, 2] for chart models with
    // positivity domains, [-0.2, 0.2] around the origin for synthetic frames.
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};
    auto halton = [](int idx, int base) {
        double f = 1.0, r = 0.0;
        while (idx > 0) {
            f /= base;
            r += f * (idx % base);
            idx /= base;
        }
        return r;
    };
    bool centered = (name == "synthetic-random");
    std::vector<ChartPoint> pts;
    for (int m = 1; m <= count; ++m) {
        ChartPoint p(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            double h = halton(m, primes[j % 9]);
            p[static_cast<std::size_t>(j)] = centered ? (-0.2 + 0.4 * h) : (0.5 + 1.5 * h);
        }
        pts.push_back(p);
    }
    return pts;
}

} // namespace acmt
