#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hermite.hpp"

namespace hpmult {

inline constexpr int kMaxQuadratureNodes = 8192;

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Gauss-Hermite rule for the weight e^{-t^2}. `lebesgue` holds w_i e^{t_i^2},
// the weights to use when the integrand already carries its own Gaussian decay.
struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> lebesgue;
    int size() const { return static_cast<int>(nodes.size()); }
};

inline QuadratureRule1D gauss_hermite(int Q) {
    if (Q < 1) throw std::invalid_argument("quadrature size must be >= 1");
    if (Q > kMaxQuadratureNodes)
        throw BudgetError("quadrature size " + std::to_string(Q) + " exceeds cap " + std::to_string(kMaxQuadratureNodes));
    QuadratureRule1D r;
    r.nodes.resize(static_cast<std::size_t>(Q));
    if (Q == 1) {
        r.nodes[0] = 0.0;
    } else {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(Q);
        Eigen::VectorXd sub(Q - 1);
        for (int k = 1; k < Q; ++k) sub[k - 1] = std::sqrt(0.5 * k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw BudgetError("tridiagonal eigensolver did not converge");
        for (int i = 0; i < Q; ++i) r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
        // h_Q'(x) = sqrt(2Q) h_{Q-1}(x) - x h_Q(x), so at a root the Newton step is h_Q / (sqrt(2Q) h_{Q-1})
        for (auto& x : r.nodes)
            for (int it = 0; it < 3; ++it) x -= hermite_ratio(Q, x) / std::sqrt(2.0 * Q);
        for (int i = 0; i < Q / 2; ++i) {
            const double a = 0.5 * (r.nodes[static_cast<std::size_t>(Q - 1 - i)] - r.nodes[static_cast<std::size_t>(i)]);
            r.nodes[static_cast<std::size_t>(i)] = -a;
            r.nodes[static_cast<std::size_t>(Q - 1 - i)] = a;
        }
        if (Q % 2) r.nodes[static_cast<std::size_t>(Q / 2)] = 0.0;
    }
    r.weights.resize(static_cast<std::size_t>(Q));
    r.lebesgue.resize(static_cast<std::size_t>(Q));
    std::vector<double> h(static_cast<std::size_t>(Q));
    for (int i = 0; i < Q; ++i) {
        const double x = r.nodes[static_cast<std::size_t>(i)];
        hermite_all(Q - 1, x, h.data());
        const double hq = h[static_cast<std::size_t>(Q - 1)];
        const double W = 1.0 / (Q * hq * hq);
        r.lebesgue[static_cast<std::size_t>(i)] = W;
        r.weights[static_cast<std::size_t>(i)] = W * std::exp(-x * x);
    }
    for (int i = 0; i < Q / 2; ++i) {
        const auto j = static_cast<std::size_t>(Q - 1 - i);
        const auto k = static_cast<std::size_t>(i);
        const double W = 0.5 * (r.lebesgue[k] + r.lebesgue[j]);
        const double w = 0.5 * (r.weights[k] + r.weights[j]);
        r.lebesgue[k] = r.lebesgue[j] = W;
        r.weights[k] = r.weights[j] = w;
    }
    return r;
}

// Tensor product of one 1-d rule per axis.
struct TensorRule {
    int n = 1;
    std::vector<QuadratureRule1D> axes;

    TensorRule() = default;
    TensorRule(int dim, int Q) : n(dim) {
        if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
        const auto r = gauss_hermite(Q);
        axes.assign(static_cast<std::size_t>(dim), r);
    }

    int per_axis() const { return axes.front().size(); }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (const auto& a : axes) c *= static_cast<std::size_t>(a.size());
        return c;
    }

    // f(point, lebesgue_weight, gaussian_weight) for every tensor node, axis 0 fastest.
    template <class F>
    void for_each_node(F&& f) const {
        std::vector<int> q(static_cast<std::size_t>(n), 0);
        std::vector<double> x(static_cast<std::size_t>(n));
        const std::size_t total = node_count();
        for (std::size_t c = 0; c < total; ++c) {
            double W = 1.0, w = 1.0;
            for (int i = 0; i < n; ++i) {
                const auto& a = axes[static_cast<std::size_t>(i)];
                const auto k = static_cast<std::size_t>(q[static_cast<std::size_t>(i)]);
                x[static_cast<std::size_t>(i)] = a.nodes[k];
                W *= a.lebesgue[k];
                w *= a.weights[k];
            }
            f(std::span<const double>(x), W, w);
            for (int i = 0; i < n; ++i) {
                if (++q[static_cast<std::size_t>(i)] < axes[static_cast<std::size_t>(i)].size()) break;
                q[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
};

inline int default_quadrature_size(int max_degree) { return 2 * max_degree + 16; }

// Products h_xi h_eta with |xi|,|eta| <= max_degree are integrated exactly when Q >= max_degree + 1.
inline void check_budget(const TensorRule& rule, int max_degree) {
    if (rule.per_axis() < max_degree + 1)
        throw BudgetError("quadrature size " + std::to_string(rule.per_axis()) + " per axis is below degree budget " +
                          std::to_string(max_degree + 1));
}

using GridFunction = std::function<std::complex<double>(std::span<const double>)>;

// int f conj(g) dx, for f and g that each carry their own Gaussian decay.
inline std::complex<double> inner_product(const GridFunction& f, const GridFunction& g, const TensorRule& rule) {
    std::complex<double> s = 0.0;
    rule.for_each_node([&](std::span<const double> x, double W, double) {
        if (W == 0.0 || !std::isfinite(W)) return;
        s += W * f(x) * std::conj(g(x));
    });
    return s;
}

// <f,g>_gamma = pi^{-n/2} int f conj(g) e^{-|x|^2} dx
inline std::complex<double> gaussian_inner_product(const GridFunction& f, const GridFunction& g, const TensorRule& rule) {
    std::complex<double> s = 0.0;
    rule.for_each_node([&](std::span<const double> x, double, double w) {
        if (w == 0.0) return;
        s += w * f(x) * std::conj(g(x));
    });
    return s * std::pow(kPi, -0.5 * rule.n);
}

}  // namespace hpmult
