#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "expansion.hpp"
#include "hermite.hpp"
#include "multi_index.hpp"
#include "quadrature.hpp"
#include "symbols.hpp"

namespace hpmult {

// M(eta, xi) = <sigma(., xi) h_xi, h_eta>
struct OperatorMatrix {
    std::shared_ptr<const BasisSpec> spec;
    Eigen::MatrixXcd m;

    Eigen::Index size() const { return m.rows(); }
};

// Flattened tensor nodes, axis 0 fastest (same order as TensorRule::for_each_node).
struct NodeSet {
    Eigen::MatrixXd points;  // n x count
    Eigen::VectorXd lebesgue;
    Eigen::VectorXd gaussian;

    Eigen::Index count() const { return points.cols(); }
    std::span<const double> point(Eigen::Index q) const {
        return {points.data() + q * points.rows(), static_cast<std::size_t>(points.rows())};
    }
};

inline NodeSet collect_nodes(const TensorRule& rule) {
    NodeSet s;
    const auto c = static_cast<Eigen::Index>(rule.node_count());
    s.points.resize(rule.n, c);
    s.lebesgue.resize(c);
    s.gaussian.resize(c);
    Eigen::Index q = 0;
    rule.for_each_node([&](std::span<const double> x, double W, double w) {
        for (int i = 0; i < rule.n; ++i) s.points(i, q) = x[static_cast<std::size_t>(i)];
        s.lebesgue[q] = W;
        s.gaussian[q] = w;
        ++q;
    });
    return s;
}

namespace detail {

// rows: nodes, cols: basis; entry prod_i T_i(q_i, xi_i) where T_i tabulates one axis.
template <class AxisTable>
Eigen::MatrixXd tensor_table(const BasisSpec& spec, const TensorRule& rule, AxisTable&& axis_table) {
    const int n = spec.dim();
    std::vector<Eigen::MatrixXd> T;
    for (int i = 0; i < n; ++i) T.push_back(axis_table(rule.axes[static_cast<std::size_t>(i)], spec.max_degree()));
    const auto count = static_cast<Eigen::Index>(rule.node_count());
    Eigen::MatrixXd H(count, static_cast<Eigen::Index>(spec.size()));
    std::vector<int> q(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < count; ++c) {
        Eigen::Index rest = c;
        for (int i = 0; i < n; ++i) {
            const int Qi = rule.axes[static_cast<std::size_t>(i)].size();
            q[static_cast<std::size_t>(i)] = static_cast<int>(rest % Qi);
            rest /= Qi;
        }
        for (std::size_t p = 0; p < spec.size(); ++p) {
            const MultiIndex& xi = spec[p];
            double v = 1.0;
            for (int i = 0; i < n; ++i) v *= T[static_cast<std::size_t>(i)](q[static_cast<std::size_t>(i)], xi[static_cast<std::size_t>(i)]);
            H(c, static_cast<Eigen::Index>(p)) = v;
        }
    }
    return H;
}

inline Eigen::MatrixXd hermite_axis_table(const QuadratureRule1D& r, int K) {
    Eigen::MatrixXd T(r.size(), K + 1);
    std::vector<double> h(static_cast<std::size_t>(K + 1));
    for (int q = 0; q < r.size(); ++q) {
        hermite_all(K, r.nodes[static_cast<std::size_t>(q)], h.data());
        for (int k = 0; k <= K; ++k) T(q, k) = h[static_cast<std::size_t>(k)];
    }
    return T;
}

// Normalized Hermite polynomials (2^k k!)^{-1/2} H_k; rows at nodes with zero Gaussian weight are zeroed.
inline Eigen::MatrixXd polynomial_axis_table(const QuadratureRule1D& r, int K) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r.size(), K + 1);
    for (int q = 0; q < r.size(); ++q) {
        if (r.weights[static_cast<std::size_t>(q)] == 0.0) continue;
        const double t = r.nodes[static_cast<std::size_t>(q)];
        double prev = 0.0, cur = 1.0;
        T(q, 0) = cur;
        for (int k = 0; k < K; ++k) {
            const double next = std::sqrt(2.0 / (k + 1)) * t * cur - std::sqrt(double(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
            T(q, k + 1) = cur;
        }
    }
    return T;
}

}  // namespace detail

inline Eigen::MatrixXd hermite_matrix(const BasisSpec& spec, const TensorRule& rule) {
    return detail::tensor_table(spec, rule, detail::hermite_axis_table);
}

inline Eigen::MatrixXd hermite_polynomial_matrix(const BasisSpec& spec, const TensorRule& rule) {
    return detail::tensor_table(spec, rule, detail::polynomial_axis_table);
}

// S(q, p) = sigma(x_q, xi_p)
inline Eigen::MatrixXcd symbol_samples(const Symbol& sigma, const BasisSpec& spec, const NodeSet& nodes) {
    const auto D = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXcd S(nodes.count(), D);
    if (sigma.radial) {
        std::vector<cd> byDegree(static_cast<std::size_t>(spec.max_degree() + 1));
        for (int d = 0; d <= spec.max_degree(); ++d) byDegree[static_cast<std::size_t>(d)] = sigma.radial(d);
        for (Eigen::Index p = 0; p < D; ++p) S.col(p).setConstant(byDegree[static_cast<std::size_t>(degree(spec[static_cast<std::size_t>(p)]))]);
        return S;
    }
    if (sigma.x_independent) {
        for (Eigen::Index p = 0; p < D; ++p) S.col(p).setConstant(sigma(nodes.point(0), spec[static_cast<std::size_t>(p)]));
        return S;
    }
    for (Eigen::Index p = 0; p < D; ++p) {
        const MultiIndex& xi = spec[static_cast<std::size_t>(p)];
        for (Eigen::Index q = 0; q < nodes.count(); ++q) S(q, p) = sigma(nodes.point(q), xi);
    }
    return S;
}

namespace detail {

// P^T diag(weight) (S .* P), split into two real products.
inline Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXd& P, const Eigen::VectorXd& weight, const Eigen::MatrixXcd& S) {
    const Eigen::MatrixXd A = weight.asDiagonal() * P;
    const Eigen::MatrixXd Bre = A.cwiseProduct(S.real());
    const Eigen::MatrixXd Bim = A.cwiseProduct(S.imag());
    Eigen::MatrixXcd M(P.cols(), P.cols());
    M.real().noalias() = P.transpose() * Bre;
    M.imag().noalias() = P.transpose() * Bim;
    return M;
}

}  // namespace detail

inline OperatorMatrix assemble_matrix(const Symbol& sigma, std::shared_ptr<const BasisSpec> spec, const TensorRule& rule) {
    if (spec->dim() != rule.n) throw std::invalid_argument("basis and rule dimensions differ");
    check_budget(rule, spec->max_degree());
    const NodeSet nodes = collect_nodes(rule);
    const Eigen::MatrixXd H = hermite_matrix(*spec, rule);
    return {spec, detail::weighted_gram(H, nodes.lebesgue, symbol_samples(sigma, *spec, nodes))};
}

inline OperatorMatrix assemble_matrix(const Symbol& sigma, const BasisSpec& spec, const TensorRule& rule) {
    return assemble_matrix(sigma, std::make_shared<const BasisSpec>(spec), rule);
}

// Matrix of sigma(., W) in the normalized Hermite polynomial basis under <.,.>_gamma.
inline OperatorMatrix gaussian_transfer_matrix(const Symbol& sigma, std::shared_ptr<const BasisSpec> spec, const TensorRule& rule) {
    if (spec->dim() != rule.n) throw std::invalid_argument("basis and rule dimensions differ");
    check_budget(rule, spec->max_degree());
    const NodeSet nodes = collect_nodes(rule);
    const Eigen::MatrixXd P = hermite_polynomial_matrix(*spec, rule);
    OperatorMatrix out{spec, detail::weighted_gram(P, nodes.gaussian, symbol_samples(sigma, *spec, nodes))};
    out.m *= std::pow(kPi, -0.5 * spec->dim());
    return out;
}

inline OperatorMatrix gaussian_transfer_matrix(const Symbol& sigma, const BasisSpec& spec, const TensorRule& rule) {
    return gaussian_transfer_matrix(sigma, std::make_shared<const BasisSpec>(spec), rule);
}

// Largest |G - I| entry of the quadrature Gram matrix; a budget self-test.
inline double quadrature_self_test(const BasisSpec& spec, const TensorRule& rule) {
    const NodeSet nodes = collect_nodes(rule);
    const Eigen::MatrixXd H = hermite_matrix(spec, rule);
    const Eigen::MatrixXd G = H.transpose() * nodes.lebesgue.asDiagonal() * H;
    return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

// sigma(x, L) f (x) = sum_xi sigma(x, xi) <f, h_xi> h_xi(x)
inline cd apply(const Symbol& sigma, const HermiteExpansion& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dim()) throw std::invalid_argument("dimension mismatch");
    const PointTables t(x, f.max_degree());
    cd s = 0.0;
    for (std::size_t p = 0; p < f.spec->size(); ++p) {
        const cd c = f.coeffs[static_cast<Eigen::Index>(p)];
        if (c == cd(0.0)) continue;
        const MultiIndex& xi = (*f.spec)[p];
        s += sigma(x, xi) * c * t(xi);
    }
    return s;
}

// Column scaling by phi_j (the symbol sigma phi_j), no truncation check.
inline OperatorMatrix block_of(const OperatorMatrix& full, int j) {
    OperatorMatrix out = full;
    for (std::size_t p = 0; p < full.spec->size(); ++p) out.m.col(static_cast<Eigen::Index>(p)) *= lp_bump(j, (*full.spec)[p]);
    return out;
}

inline void check_shell_inside(int j, const BasisSpec& spec) {
    const ShellRange r = shell_degrees(j, spec.dim());
    if (r.hi > spec.max_degree())
        throw BudgetError("shell " + std::to_string(j) + " reaches degree " + std::to_string(r.hi) + " beyond truncation " +
                          std::to_string(spec.max_degree()));
}

inline OperatorMatrix block_operator(const Symbol& sigma, int j, std::shared_ptr<const BasisSpec> spec, const TensorRule& rule) {
    check_shell_inside(j, *spec);
    return block_of(assemble_matrix(sigma, spec, rule), j);
}

// K_j(x,y) = sum_{xi in I_j} sigma(x,xi) phi_j(xi) h_xi(x) h_xi(y)
inline cd block_kernel(const Symbol& sigma, int j, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch");
    const int n = static_cast<int>(x.size());
    const ShellRange r = shell_degrees(j, n);
    if (r.empty()) return 0.0;
    const PointTables tx(x, r.hi), ty(y, r.hi);
    cd s = 0.0;
    for (const auto& xi : enumerate_shell(j, n)) {
        const double ph = lp_bump(j, xi);
        if (ph == 0.0) continue;
        s += sigma(x, xi) * ph * tx(xi) * ty(xi);
    }
    return s;
}

// K_j^*(x,y) = sum_{xi in I_j} conj(sigma(y,xi)) phi_j(xi) h_xi(x) h_xi(y)
inline cd adjoint_block_kernel(const Symbol& sigma, int j, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dimension mismatch");
    const int n = static_cast<int>(x.size());
    const ShellRange r = shell_degrees(j, n);
    if (r.empty()) return 0.0;
    const PointTables tx(x, r.hi), ty(y, r.hi);
    cd s = 0.0;
    for (const auto& xi : enumerate_shell(j, n)) {
        const double ph = lp_bump(j, xi);
        if (ph == 0.0) continue;
        s += std::conj(sigma(y, xi)) * ph * tx(xi) * ty(xi);
    }
    return s;
}

namespace detail {

inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace detail

// log Q_N(x,x), Q_N(x,x) = sum_{|xi| <= N} h_xi(x)^2, via a degree convolution over axes.
inline double projection_kernel_log_diag(int N, std::span<const double> x) {
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto t = hermite_log_abs_all(N, x[i]);
        for (auto& v : t) v *= 2.0;
        if (i == 0) {
            acc = t;
            continue;
        }
        std::vector<double> next(static_cast<std::size_t>(N + 1), ninf);
        for (int d = 0; d <= N; ++d)
            for (int k = 0; k <= d; ++k)
                next[static_cast<std::size_t>(d)] =
                    detail::log_add(next[static_cast<std::size_t>(d)], acc[static_cast<std::size_t>(d - k)] + t[static_cast<std::size_t>(k)]);
        acc.swap(next);
    }
    double s = ninf;
    for (double v : acc) s = detail::log_add(s, v);
    return s;
}

inline double projection_kernel_diag(int N, std::span<const double> x) { return std::exp(projection_kernel_log_diag(N, x)); }

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Power iteration on M^* M with apply/apply_adjoint callbacks.
template <class Apply, class ApplyAdj>
NormEstimate power_norm(Apply&& A, ApplyAdj&& Ah, Eigen::Index cols, double tol, int max_iter = 10000) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    NormEstimate out;
    if (cols == 0) {
        out.converged = true;
        return out;
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(cols) / std::sqrt(static_cast<double>(cols));
    double prev = -1.0;
    bool restarted = false;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXcd w = A(v);
        const double lam = w.squaredNorm();
        const Eigen::VectorXcd z = Ah(w);
        const double zn = z.norm();
        out.iterations = it;
        if (zn == 0.0) {
            if (!restarted) {
                restarted = true;
                for (Eigen::Index k = 0; k < cols; ++k) v[k] = std::cos(1.0 + 0.7 * static_cast<double>(k));
                v.normalize();
                prev = -1.0;
                continue;
            }
            out.value = 0.0;
            out.converged = true;
            return out;
        }
        v = z / zn;
        out.value = std::sqrt(lam);
        if (prev >= 0.0 && std::abs(lam - prev) <= tol * lam) {
            out.converged = true;
            return out;
        }
        prev = lam;
    }
    return out;
}

inline NormEstimate operator_norm(const Eigen::MatrixXcd& M, double tol = 1e-13, int max_iter = 10000) {
    return power_norm([&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return M * v; },
                      [&](const Eigen::VectorXcd& w) -> Eigen::VectorXcd { return M.adjoint() * w; }, M.cols(), tol, max_iter);
}

inline NormEstimate operator_norm(const OperatorMatrix& M, double tol = 1e-13, int max_iter = 10000) {
    return operator_norm(M.m, tol, max_iter);
}

}  // namespace hpmult
