#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "expansion.hpp"
#include "hermite.hpp"
#include "multi_index.hpp"
#include "pseudomult.hpp"
#include "quadrature.hpp"
#include "symbols.hpp"

namespace hpmult {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // residual RMS in the fitted (log) units
    int points = 0;
};

inline LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("fit needs at least 2 points");
    const auto m = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = xs[static_cast<std::size_t>(i)];
        A(i, 1) = 1.0;
        b[i] = ys[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    LinearFit f;
    f.slope = c[0];
    f.intercept = c[1];
    f.rms = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(m));
    f.points = static_cast<int>(m);
    return f;
}

// least squares of log2(y) against x
inline LinearFit fit_log2(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> ly;
    for (double y : ys) {
        if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("log fit needs positive finite values");
        ly.push_back(std::log2(y));
    }
    return fit_line(xs, ly);
}

inline constexpr double kMaxFitResidual = 0.5;

// {r 2^j u : r in {0, 1/8, ..., 1}, u in {e_1, (1,...,1)/sqrt(n)}}
inline std::vector<std::vector<double>> kernel_x_sample(int j, int n) {
    std::vector<std::vector<double>> out;
    std::vector<std::vector<double>> dirs;
    std::vector<double> e1(static_cast<std::size_t>(n), 0.0);
    e1[0] = 1.0;
    dirs.push_back(e1);
    if (n > 1) dirs.emplace_back(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    out.emplace_back(static_cast<std::size_t>(n), 0.0);
    for (int r = 1; r <= 8; ++r)
        for (const auto& u : dirs) {
            std::vector<double> x(u);
            for (double& v : x) v *= std::ldexp(r / 8.0, j);
            out.push_back(std::move(x));
        }
    return out;
}

namespace detail {

// (c - Y c) along one index line, Y h_k = (sqrt(2k+2) h_{k+1} + sqrt(2k) h_{k-1}) / 2; `first` is the index of line[0]
inline std::vector<cd> moment_step(const std::vector<cd>& line, int first, double x) {
    std::vector<cd> out(line.size() + 2, cd(0.0));
    // out[t] corresponds to index first - 1 + t
    for (std::size_t t = 0; t < line.size(); ++t) {
        const int k = first + static_cast<int>(t);
        out[t + 1] += x * line[t];
        out[t + 2] -= 0.5 * ladder_raise(k) * line[t];
        out[t] -= 0.5 * ladder_lower(k) * line[t];
    }
    return out;
}

inline double line_norm2(const std::vector<cd>& v) {
    double s = 0.0;
    for (const cd& c : v) s += std::norm(c);
    return s;
}

}  // namespace detail

// ||(x_axis - y_axis)^M K_j(x, .)||_{L^2} for M = 0..max_moment, by Parseval on the y-coefficients.
inline std::vector<double> kernel_moment_norms(const Symbol& sigma, int j, int axis, int max_moment, std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (axis < 0 || axis >= n) throw std::invalid_argument("axis out of range");
    if (max_moment < 0) throw std::invalid_argument("moment order must be >= 0");
    const ShellRange r = shell_degrees(j, n);
    std::vector<double> acc(static_cast<std::size_t>(max_moment + 1), 0.0);
    if (r.empty()) return acc;
    if (static_cast<double>(r.hi) > 1e5) throw BudgetError("shell " + std::to_string(j) + " too large");
    std::vector<std::vector<double>> tab;
    for (int i = 0; i < n; ++i) tab.push_back(hermite_all(r.hi, x[static_cast<std::size_t>(i)]));
    std::vector<double> phi(static_cast<std::size_t>(r.hi + 1), 0.0);
    std::vector<cd> rad;
    for (int d = r.lo; d <= r.hi; ++d) phi[static_cast<std::size_t>(d)] = lp_bump_degree(j, d, n);
    if (sigma.radial)
        for (int d = 0; d <= r.hi; ++d) rad.push_back(sigma.radial(d));
    const double xa = x[static_cast<std::size_t>(axis)];
    // iterate over the other coordinates; each fixes one line along `axis`
    MultiIndex xi(static_cast<std::size_t>(n), 0);
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != axis) others.push_back(i);
    auto run_line = [&](int rest, double rest_h) {
        const int lo = std::max(0, r.lo - rest), hi = r.hi - rest;
        if (hi < lo) return;
        std::vector<cd> line;
        line.reserve(static_cast<std::size_t>(hi - lo + 1));
        const auto& ta = tab[static_cast<std::size_t>(axis)];
        for (int k = lo; k <= hi; ++k) {
            const int d = rest + k;
            const double ph = phi[static_cast<std::size_t>(d)];
            if (ph == 0.0) {
                line.emplace_back(0.0);
                continue;
            }
            cd s;
            if (sigma.radial) {
                s = rad[static_cast<std::size_t>(d)];
            } else {
                xi[static_cast<std::size_t>(axis)] = k;
                s = sigma(x, xi);
            }
            line.push_back(s * ph * rest_h * ta[static_cast<std::size_t>(k)]);
        }
        int first = lo;
        acc[0] += detail::line_norm2(line);
        for (int M = 1; M <= max_moment; ++M) {
            line = detail::moment_step(line, first, xa);
            --first;
            if (first < 0) {
                // entries below index 0 are identically zero (sqrt(2*0) factor)
                line.erase(line.begin());
                first = 0;
            }
            acc[static_cast<std::size_t>(M)] += detail::line_norm2(line);
        }
    };
    if (others.empty()) {
        run_line(0, 1.0);
    } else {
        // enumerate all other-coordinate indices with total degree <= hi
        std::vector<int> idx(others.size(), 0);
        while (true) {
            int rest = 0;
            double h = 1.0;
            for (std::size_t t = 0; t < others.size(); ++t) {
                rest += idx[t];
                xi[static_cast<std::size_t>(others[t])] = idx[t];
                h *= tab[static_cast<std::size_t>(others[t])][static_cast<std::size_t>(idx[t])];
            }
            run_line(rest, h);
            std::size_t t = 0;
            for (; t < idx.size(); ++t) {
                ++idx[t];
                int sum = 0;
                for (int v : idx) sum += v;
                if (sum <= r.hi) break;
                idx[t] = 0;
            }
            if (t == idx.size()) break;
        }
    }
    for (double& v : acc) v = std::sqrt(v);
    return acc;
}

// ||(x - .)^gamma K_j(x, .)||_{L^2}
inline double kernel_moment_norm(const Symbol& sigma, int j, const MultiIndex& gamma, std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(gamma.size()) != n) throw std::invalid_argument("dimension mismatch");
    if (has_negative(gamma)) throw std::invalid_argument("negative moment index");
    int nonzero = 0, axis = 0;
    for (int i = 0; i < n; ++i)
        if (gamma[static_cast<std::size_t>(i)] > 0) {
            ++nonzero;
            axis = i;
        }
    if (nonzero <= 1) return kernel_moment_norms(sigma, j, axis, gamma[static_cast<std::size_t>(axis)], x).back();
    const ShellRange r = shell_degrees(j, n);
    if (r.empty()) return 0.0;
    HermiteExpansion f(n, r.hi);
    if (f.spec->size() > 2000000) throw BudgetError("mixed moment expansion too large for shell " + std::to_string(j));
    const PointTables t(x, r.hi);
    for (const auto& xi : enumerate_shell(j, n)) {
        const double ph = lp_bump(j, xi);
        if (ph != 0.0) f.set(xi, sigma(x, xi) * ph * t(xi));
    }
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < gamma[static_cast<std::size_t>(i)]; ++m) {
            HermiteExpansion g = multiply_by_coordinate(i, f);
            g.coeffs = promote(f, g.max_degree()).coeffs * x[static_cast<std::size_t>(i)] - g.coeffs;
            f = std::move(g);
        }
    return f.coeffs.norm();
}

struct DecaySweep {
    std::vector<int> js;
    std::vector<double> values;
    LinearFit fit;
    int moment = 0;
    double predicted = 0.0;  // m + n/2 - M
};

// log2 sup over the x-sample of the moment norms, fitted against j; one sweep per M = 0..max_moment.
inline std::vector<DecaySweep> kernel_decay_sweep(const Symbol& sigma, int n, const std::vector<int>& js, int max_moment, int axis = 0) {
    if (js.size() < 4) throw std::invalid_argument("decay sweep needs at least 4 block indices");
    std::vector<DecaySweep> out(static_cast<std::size_t>(max_moment + 1));
    // sigma ~ <xi>^{m/2} and 2^j ~ <xi>^{1/2} on I_j, so the rate is 2^{j(m + n/2 - M)}
    for (int M = 0; M <= max_moment; ++M) {
        out[static_cast<std::size_t>(M)].moment = M;
        out[static_cast<std::size_t>(M)].predicted = sigma.cls.m + 0.5 * n - M;
        out[static_cast<std::size_t>(M)].js = js;
    }
    for (int j : js) {
        std::vector<double> sup(static_cast<std::size_t>(max_moment + 1), 0.0);
        for (const auto& x : kernel_x_sample(j, n)) {
            const auto v = kernel_moment_norms(sigma, j, axis, max_moment, x);
            for (int M = 0; M <= max_moment; ++M) sup[static_cast<std::size_t>(M)] = std::max(sup[static_cast<std::size_t>(M)], v[static_cast<std::size_t>(M)]);
        }
        for (int M = 0; M <= max_moment; ++M) out[static_cast<std::size_t>(M)].values.push_back(sup[static_cast<std::size_t>(M)]);
    }
    for (auto& s : out) {
        std::vector<double> xs(s.js.begin(), s.js.end());
        s.fit = fit_log2(xs, s.values);
    }
    return out;
}

namespace detail {

// largest eigenvalue of a Hermitian positive semidefinite matrix, clamped at 0
inline double top_eigenvalue(const Eigen::MatrixXcd& H) {
    if (H.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

}  // namespace detail

struct CksLedger {
    int jmin = 0;
    int jmax = 0;
    Eigen::MatrixXd star_left;   // ||T_j^* T_k||, rows/cols indexed by j - jmin
    Eigen::MatrixXd star_right;  // ||T_j T_k^*||
    Eigen::VectorXd block_norms; // ||T_j||
    LinearFit decay;             // log2 envelope against |j-k|, slope = -epsilon
    double epsilon = 0.0;
    double c0 = 0.0;
    double uniformity = 0.0;     // max/min of ||T_j|| over the uniformity range
    std::vector<int> envelope_d;
    std::vector<double> envelope;
};

struct CksOptions {
    int jmin = 0;
    int fit_jmin = 2;
    int uniform_jmin = 3;
    int uniform_jmax = 6;
};

inline CksLedger cks_ledger(const Symbol& sigma, int jmax, std::shared_ptr<const BasisSpec> spec, const TensorRule& rule,
                            const CksOptions& opt = {}) {
    if (jmax < opt.jmin) throw std::invalid_argument("empty block range");
    for (int j = opt.jmin; j <= jmax; ++j) check_shell_inside(j, *spec);
    const OperatorMatrix M = assemble_matrix(sigma, spec, rule);
    const Eigen::Index D = M.m.cols();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(D, D);
    G.selfadjointView<Eigen::Lower>().rankUpdate(M.m.adjoint());
    const Eigen::MatrixXcd Gh = G.adjoint();
    G.triangularView<Eigen::StrictlyUpper>() = Gh;

    const int nb = jmax - opt.jmin + 1;
    std::vector<std::vector<Eigen::Index>> cols(static_cast<std::size_t>(nb));
    std::vector<Eigen::VectorXd> phis(static_cast<std::size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        const int j = opt.jmin + b;
        std::vector<double> ph;
        for (Eigen::Index p = 0; p < D; ++p) {
            const double v = lp_bump(j, (*spec)[static_cast<std::size_t>(p)]);
            if (v != 0.0) {
                cols[static_cast<std::size_t>(b)].push_back(p);
                ph.push_back(v);
            }
        }
        phis[static_cast<std::size_t>(b)] = Eigen::Map<Eigen::VectorXd>(ph.data(), static_cast<Eigen::Index>(ph.size()));
    }
    CksLedger L;
    L.jmin = opt.jmin;
    L.jmax = jmax;
    L.star_left = Eigen::MatrixXd::Zero(nb, nb);
    L.star_right = Eigen::MatrixXd::Zero(nb, nb);
    L.block_norms = Eigen::VectorXd::Zero(nb);
    for (int a = 0; a < nb; ++a) {
        for (int b = a; b < nb; ++b) {
            const auto& ca = cols[static_cast<std::size_t>(a)];
            const auto& cb = cols[static_cast<std::size_t>(b)];
            if (ca.empty() || cb.empty()) continue;
            Eigen::MatrixXcd B(static_cast<Eigen::Index>(ca.size()), static_cast<Eigen::Index>(cb.size()));
            for (Eigen::Index r = 0; r < B.rows(); ++r)
                for (Eigen::Index c = 0; c < B.cols(); ++c)
                    B(r, c) = phis[static_cast<std::size_t>(a)][r] * G(ca[static_cast<std::size_t>(r)], cb[static_cast<std::size_t>(c)]) *
                              phis[static_cast<std::size_t>(b)][c];
            double v;
            if (a == b) {
                v = detail::top_eigenvalue(B);
                L.block_norms[a] = std::sqrt(v);
            } else {
                // ||B||^2 from the smaller Gram matrix
                v = std::sqrt(B.rows() <= B.cols() ? detail::top_eigenvalue(B * B.adjoint()) : detail::top_eigenvalue(B.adjoint() * B));
            }
            L.star_left(a, b) = L.star_left(b, a) = v;

            // T_a T_b^* = M[:,S] W M[:,S]^* with W = diag(phi_a phi_b) >= 0 on the common column support S;
            // its nonzero spectrum is that of W^{1/2} G[S,S] W^{1/2}
            std::vector<Eigen::Index> common;
            std::vector<double> weight;
            for (std::size_t r = 0, c = 0; r < ca.size() && c < cb.size();) {
                if (ca[r] < cb[c]) {
                    ++r;
                } else if (cb[c] < ca[r]) {
                    ++c;
                } else {
                    common.push_back(ca[r]);
                    weight.push_back(std::sqrt(phis[static_cast<std::size_t>(a)][static_cast<Eigen::Index>(r)] *
                                               phis[static_cast<std::size_t>(b)][static_cast<Eigen::Index>(c)]));
                    ++r;
                    ++c;
                }
            }
            double w = 0.0;
            if (!common.empty()) {
                const auto sz = static_cast<Eigen::Index>(common.size());
                Eigen::MatrixXcd C(sz, sz);
                for (Eigen::Index r = 0; r < sz; ++r)
                    for (Eigen::Index c = 0; c < sz; ++c)
                        C(r, c) = weight[static_cast<std::size_t>(r)] * G(common[static_cast<std::size_t>(r)], common[static_cast<std::size_t>(c)]) *
                                  weight[static_cast<std::size_t>(c)];
                w = detail::top_eigenvalue(C);
            }
            L.star_right(a, b) = L.star_right(b, a) = w;
        }
    }
    L.c0 = L.block_norms.size() ? L.block_norms.maxCoeff() : 0.0;
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (int j = std::max(opt.uniform_jmin, opt.jmin); j <= std::min(opt.uniform_jmax, jmax); ++j) {
        hi = std::max(hi, L.block_norms[j - opt.jmin]);
        lo = std::min(lo, L.block_norms[j - opt.jmin]);
    }
    L.uniformity = std::isfinite(lo) && lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    const int f0 = std::max(opt.fit_jmin, opt.jmin);
    for (int d = 2; d <= jmax - f0; ++d) {
        double env = 0.0;
        for (int j = f0; j + d <= jmax; ++j) env = std::max(env, L.star_left(j - opt.jmin, j + d - opt.jmin));
        L.envelope_d.push_back(d);
        L.envelope.push_back(env);
    }
    if (L.envelope.size() >= 2 && std::all_of(L.envelope.begin(), L.envelope.end(), [](double v) { return v > 0.0; })) {
        std::vector<double> xs(L.envelope_d.begin(), L.envelope_d.end());
        L.decay = fit_log2(xs, L.envelope);
        L.epsilon = -L.decay.slope;
    }
    return L;
}

// N(1 - delta) - 2n with N = floor(2n/(1-delta)) + 1
inline double reference_epsilon(int n, double delta) {
    const int N = static_cast<int>(std::floor(2.0 * n / (1.0 - delta))) + 1;
    return N * (1.0 - delta) - 2.0 * n;
}

// Class certificate: x-derivatives up to floor(2n/(1-delta)) + 1 and finite seminorms on a small grid.
inline bool class_certified(const Symbol& sigma, int n) {
    const int K = n / 2 + 1;
    const int N = static_cast<int>(std::floor(2.0 * n / (1.0 - sigma.cls.delta))) + 1;
    if (N > sigma.derivative_order) return false;
    SeminormGrid grid;
    for (double t : {-2.0, -0.7, 0.0, 0.4, 1.5}) grid.points.emplace_back(static_cast<std::size_t>(n), t);
    for (int d : {0, 1, 3, 8, 20}) {
        MultiIndex xi(static_cast<std::size_t>(n), 0);
        xi[0] = d;
        grid.freqs.push_back(xi);
    }
    try {
        const auto rep = seminorm_report(sigma, K, N, grid);
        for (const auto& e : rep.entries)
            if (!std::isfinite(e.constant)) return false;
    } catch (const std::domain_error&) {
        return false;
    }
    return true;
}

struct SweepPoint {
    int lambda = 0;
    int quad = 0;
    double norm = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct BoundednessSweep {
    std::string symbol;
    std::vector<SweepPoint> points;
    bool certified = false;

    // relative norm change between the last two points
    double tail_growth() const {
        if (points.size() < 2) return 0.0;
        const double a = points[points.size() - 2].norm, b = points.back().norm;
        return a == 0.0 ? (b == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : b / a - 1.0;
    }
};

inline BoundednessSweep boundedness_sweep(const Symbol& sigma, int n, const std::vector<int>& lambdas, bool through_transfer = false,
                                          int quad = 0, double tol = 1e-13) {
    BoundednessSweep out;
    out.symbol = sigma.name;
    out.certified = class_certified(sigma, n);
    for (int L : lambdas) {
        const int Q = quad > 0 ? quad : default_quadrature_size(L);
        const TensorRule rule(n, Q);
        const auto spec = std::make_shared<const BasisSpec>(n, L);
        const OperatorMatrix M = through_transfer ? gaussian_transfer_matrix(sigma, spec, rule) : assemble_matrix(sigma, spec, rule);
        const auto e = operator_norm(M, tol);
        out.points.push_back({L, Q, e.value, e.converged, e.iterations});
    }
    return out;
}

struct SobolevCheck {
    double criterion = 0.0;  // sum_{|nu| <= floor(n/2)+1} sup_xi ||d^nu sigma(., xi)||_{L^2}^2
    double norm = 0.0;
    double ratio = 0.0;      // norm / sqrt(criterion), 0 when both vanish
};

inline SobolevCheck sobolev_criterion_check(const Symbol& sigma, std::shared_ptr<const BasisSpec> spec, const TensorRule& rule) {
    const int n = spec->dim();
    const int order = n / 2 + 1;
    if (order > sigma.derivative_order)
        throw std::domain_error("symbol '" + sigma.name + "' lacks x-derivatives of order " + std::to_string(order));
    const NodeSet nodes = collect_nodes(rule);
    SobolevCheck c;
    const BasisSpec nus(n, order);
    for (const auto& nu : nus) {
        double sup = 0.0;
        for (const auto& xi : *spec) {
            double s = 0.0;
            for (Eigen::Index q = 0; q < nodes.count(); ++q) {
                const double W = nodes.lebesgue[q];
                if (W == 0.0 || !std::isfinite(W)) continue;
                s += W * std::norm(sigma.derivative(nu, nodes.point(q), xi));
            }
            sup = std::max(sup, s);
            if (sigma.x_independent) break;
        }
        c.criterion += sup;
    }
    c.norm = operator_norm(assemble_matrix(sigma, spec, rule)).value;
    c.ratio = c.criterion > 0.0 ? c.norm / std::sqrt(c.criterion) : 0.0;
    return c;
}

struct ProjectionPoint {
    int N = 0;
    double c = 0.0;          // max_x Q_N(x,x) / N^{n/2}
    double theta = 0.0;      // -slope/2 of ln Q_N(x,x) against |x|^2 on the tail
    double theta_rms = 0.0;  // log2 units
};

struct ProjectionSweep {
    int n = 1;
    std::vector<ProjectionPoint> points;
    double c_ratio = 0.0;    // largest / smallest c over N >= 1
    LinearFit c_trend;       // log2 c against log2 N
    double theta_min = 0.0;
};

inline ProjectionPoint projection_point(int N, int n, double step = 0.02, double tail_width = 2.0) {
    if (N < 0) throw std::invalid_argument("projection degree must be >= 0");
    ProjectionPoint p;
    p.N = N;
    const double edge = std::sqrt(4.0 * N + 2.0);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    const double scale = N > 0 ? std::pow(static_cast<double>(N), 0.5 * n) : 1.0;
    std::vector<double> r2, lq;
    const int steps = static_cast<int>(std::floor((edge + tail_width) / step + 1e-9));
    for (int s = 0; s <= steps; ++s) {
        const double r = s * step;
        x[0] = r;
        const double lv = projection_kernel_log_diag(N, x);
        p.c = std::max(p.c, std::exp(lv) / scale);
        if (r >= edge) {
            r2.push_back(r * r);
            lq.push_back(lv / std::log(2.0));
        }
    }
    const auto f = fit_line(r2, lq);
    p.theta = -0.5 * f.slope * std::log(2.0);
    p.theta_rms = f.rms;
    return p;
}

inline ProjectionSweep projection_bound_sweep(const std::vector<int>& Ns, int n) {
    if (Ns.empty()) throw std::invalid_argument("empty N list");
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("N list must be increasing");
    ProjectionSweep s;
    s.n = n;
    s.theta_min = std::numeric_limits<double>::infinity();
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    std::vector<double> ln, lc;
    for (int N : Ns) {
        const auto p = projection_point(N, n);
        s.points.push_back(p);
        s.theta_min = std::min(s.theta_min, p.theta);
        if (N >= 1) {
            hi = std::max(hi, p.c);
            lo = std::min(lo, p.c);
            ln.push_back(std::log2(static_cast<double>(N)));
            lc.push_back(p.c);
        }
    }
    s.c_ratio = lo > 0.0 && std::isfinite(lo) ? hi / lo : 0.0;
    if (ln.size() >= 2) s.c_trend = fit_log2(ln, lc);
    return s;
}

}  // namespace hpmult
