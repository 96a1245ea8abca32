#pragma once

#include <climits>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermite.hpp"
#include "multi_index.hpp"

namespace hpmult {

using cd = std::complex<double>;
using ParamMap = std::map<std::string, double>;

struct ClassParams {
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
};

// <xi> = 1 + |xi|
inline double japanese(const MultiIndex& xi) { return 1.0 + degree(xi); }

class Symbol {
public:
    using ValueFn = std::function<cd(std::span<const double>, const MultiIndex&)>;
    using DerivFn = std::function<cd(const MultiIndex&, std::span<const double>, const MultiIndex&)>;
    using RadialFn = std::function<cd(int)>;

    std::string name;
    ClassParams cls;
    ValueFn value;
    DerivFn x_derivative;
    int derivative_order = 0;
    bool x_independent = false;
    // set when sigma depends on |xi| only and not on x
    RadialFn radial;

    cd operator()(std::span<const double> x, const MultiIndex& xi) const { return value(x, xi); }

    cd derivative(const MultiIndex& nu, std::span<const double> x, const MultiIndex& xi) const {
        const int order = degree(nu);
        if (order == 0) return value(x, xi);
        if (order > derivative_order || !x_derivative)
            throw std::domain_error("symbol '" + name + "' has no x-derivative of order " + std::to_string(order));
        return x_derivative(nu, x, xi);
    }

    static Symbol multiplier(std::string name, std::function<cd(const MultiIndex&)> s, ClassParams cls = {}) {
        Symbol out;
        out.name = std::move(name);
        out.cls = cls;
        out.x_independent = true;
        out.derivative_order = INT_MAX;
        out.value = [s](std::span<const double>, const MultiIndex& xi) { return s(xi); };
        out.x_derivative = [](const MultiIndex&, std::span<const double>, const MultiIndex&) { return cd(0.0); };
        return out;
    }

    static Symbol radial_multiplier(std::string name, std::function<cd(int)> s, ClassParams cls = {}) {
        Symbol out = multiplier(std::move(name), [s](const MultiIndex& xi) { return s(degree(xi)); }, cls);
        out.radial = s;
        return out;
    }

    // sigma(x, xi) = g(x); dg(nu, x) supplies derivatives up to `order`.
    static Symbol spatial(std::string name, std::function<cd(std::span<const double>)> g,
                          std::function<cd(const MultiIndex&, std::span<const double>)> dg, int order,
                          ClassParams cls = {}) {
        Symbol out;
        out.name = std::move(name);
        out.cls = cls;
        out.value = [g](std::span<const double> x, const MultiIndex&) { return g(x); };
        if (dg) out.x_derivative = [dg](const MultiIndex& nu, std::span<const double> x, const MultiIndex&) { return dg(nu, x); };
        out.derivative_order = dg ? order : 0;
        return out;
    }
};

// Physicists' Hermite polynomial H_r(t).
inline double hermite_poly(int r, double t) {
    double a = 1.0, b = 2.0 * t;
    if (r == 0) return a;
    for (int k = 1; k < r; ++k) {
        const double c = 2.0 * t * b - 2.0 * k * a;
        a = b;
        b = c;
    }
    return b;
}

// d^r/dt^r e^{-a t^2} = (-sqrt a)^r H_r(sqrt(a) t) e^{-a t^2}
inline double gaussian_derivative(int r, double a, double t) {
    const double s = std::sqrt(a);
    return std::pow(-s, r) * hermite_poly(r, s * t) * std::exp(-a * t * t);
}

// p(r) = e^{-|r|} sum_{k<=5} |r|^k/k!, a C^5 cutoff that is flat at the origin.
inline double flat_cutoff(double r) {
    const double a = std::abs(r);
    double term = 1.0, s = 1.0;
    for (int k = 1; k <= 5; ++k) {
        term *= a / k;
        s += term;
    }
    return std::exp(-a) * s;
}

// p^{(s)}(r); uses p'(r) = -sgn(r) e^{-|r|} |r|^5 / 5!
inline double flat_cutoff_derivative(int s, double r) {
    if (s == 0) return flat_cutoff(r);
    const double a = std::abs(r);
    double acc = 0.0;
    // d^{s-1}/da^{s-1} [e^{-a} a^5 / 120] by Leibniz
    for (int t = 0; t <= s - 1 && t <= 5; ++t) {
        double falling = 1.0;
        for (int q = 0; q < t; ++q) falling *= 5 - q;
        const double sign = ((s - 1 - t) % 2) ? -1.0 : 1.0;
        acc += static_cast<double>(binomial(s - 1, t)) * sign * falling * std::pow(a, 5 - t);
    }
    acc *= -std::exp(-a) / 120.0;
    return (r < 0.0 && (s % 2)) ? -acc : acc;
}

namespace detail {

inline double param(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline void only_params(const std::string& name, const ParamMap& p, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw std::invalid_argument("symbol '" + name + "' has no parameter '" + k + "'");
    }
}

inline double gaussian_nd_derivative(const MultiIndex& nu, std::span<const double> x, double a, int skip = -1) {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (static_cast<int>(i) == skip) continue;
        p *= gaussian_derivative(nu[i], a, x[i]);
    }
    return p;
}

}  // namespace detail

inline std::vector<std::string> registry_keys() {
    return {"identity", "power", "gaussian_x", "oscillatory", "rough_x", "sobolev_x", "poly_gaussian", "sin_gaussian"};
}

inline Symbol builtin_symbol(const std::string& key, const ParamMap& params = {}) {
    using detail::param;
    if (key == "identity") {
        detail::only_params(key, params, {});
        return Symbol::radial_multiplier("identity", [](int) { return cd(1.0); });
    }
    if (key == "power") {
        detail::only_params(key, params, {"m"});
        const double m = param(params, "m", 0.0);
        return Symbol::radial_multiplier("power", [m](int d) { return cd(std::pow(1.0 + d, 0.5 * m)); }, {m, 1.0, 0.0});
    }
    if (key == "gaussian_x" || key == "sobolev_x") {
        const bool sob = key == "sobolev_x";
        if (sob)
            detail::only_params(key, params, {"m", "amp"});
        else
            detail::only_params(key, params, {"a"});
        const double a = sob ? 1.0 : param(params, "a", 1.0);
        const double m = sob ? param(params, "m", 0.0) : 0.0;
        const double amp = sob ? param(params, "amp", 1.0) : 1.0;
        if (a <= 0.0) throw std::invalid_argument("gaussian rate must be > 0");
        if (m > 0.0) throw std::invalid_argument("sobolev_x needs m <= 0 (bounded in xi)");
        Symbol s;
        s.name = key;
        s.cls = {m, 1.0, 0.0};
        s.derivative_order = INT_MAX;
        s.value = [a, m, amp](std::span<const double> x, const MultiIndex& xi) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            return cd(amp * std::exp(-a * r2) * (m == 0.0 ? 1.0 : std::pow(japanese(xi), 0.5 * m)));
        };
        s.x_derivative = [a, m, amp](const MultiIndex& nu, std::span<const double> x, const MultiIndex& xi) {
            return cd(amp * detail::gaussian_nd_derivative(nu, x, a) * (m == 0.0 ? 1.0 : std::pow(japanese(xi), 0.5 * m)));
        };
        return s;
    }
    if (key == "oscillatory") {
        detail::only_params(key, params, {"delta", "width"});
        const double delta = param(params, "delta", 0.5);
        const double w = param(params, "width", 1.0);
        if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("oscillatory needs 0 <= delta < 1");
        if (w <= 0.0) throw std::invalid_argument("oscillatory width must be > 0");
        Symbol s;
        s.name = key;
        s.cls = {0.0, 1.0, delta};
        s.derivative_order = 5;
        s.value = [delta, w](std::span<const double> x, const MultiIndex& xi) {
            const double theta = std::pow(japanese(xi), 0.5 * delta);
            double p = 1.0;
            for (double v : x) p *= flat_cutoff(v / w);
            return std::polar(p, theta * x[0]);
        };
        s.x_derivative = [delta, w](const MultiIndex& nu, std::span<const double> x, const MultiIndex& xi) {
            const double theta = std::pow(japanese(xi), 0.5 * delta);
            double rest = 1.0;
            for (std::size_t i = 1; i < x.size(); ++i)
                rest *= std::pow(w, -nu[i]) * flat_cutoff_derivative(nu[i], x[i] / w);
            cd first = 0.0;
            const int r = nu[0];
            for (int q = 0; q <= r; ++q)
                first += static_cast<double>(binomial(r, q)) * std::pow(cd(0.0, theta), r - q) * std::pow(w, -q) *
                         flat_cutoff_derivative(q, x[0] / w);
            return first * rest * std::exp(cd(0.0, theta * x[0]));
        };
        return s;
    }
    if (key == "rough_x") {
        detail::only_params(key, params, {"m"});
        const double m = param(params, "m", 0.0);
        Symbol s;
        s.name = key;
        s.cls = {m, 1.0, 0.0};
        s.derivative_order = 0;
        s.value = [m](std::span<const double> x, const MultiIndex& xi) {
            double sg = 1.0;
            for (double v : x)
                if (static_cast<long long>(std::floor(v)) % 2) sg = -sg;
            return cd(sg * std::pow(japanese(xi), 0.5 * m));
        };
        return s;
    }
    if (key == "poly_gaussian") {
        detail::only_params(key, params, {"p"});
        const int p = static_cast<int>(param(params, "p", 2.0));
        if (p < 0) throw std::invalid_argument("poly_gaussian needs p >= 0");
        return Symbol::spatial(
            key,
            [p](std::span<const double> x) {
                double r2 = 0.0;
                for (double v : x) r2 += v * v;
                return cd(std::pow(x[0], p) * std::exp(-r2));
            },
            [p](const MultiIndex& nu, std::span<const double> x) {
                double first = 0.0;
                const int r = nu[0];
                for (int q = 0; q <= std::min(r, p); ++q) {
                    double falling = 1.0;
                    for (int t = 0; t < q; ++t) falling *= p - t;
                    first += static_cast<double>(binomial(r, q)) * falling * std::pow(x[0], p - q) *
                             gaussian_derivative(r - q, 1.0, x[0]);
                }
                return cd(first * detail::gaussian_nd_derivative(nu, x, 1.0, 0));
            },
            INT_MAX);
    }
    if (key == "sin_gaussian") {
        detail::only_params(key, params, {"omega"});
        const double om = param(params, "omega", 1.0);
        return Symbol::spatial(
            key,
            [om](std::span<const double> x) {
                double r2 = 0.0;
                for (double v : x) r2 += v * v;
                return cd(std::sin(om * x[0]) * std::exp(-r2));
            },
            [om](const MultiIndex& nu, std::span<const double> x) {
                double first = 0.0;
                const int r = nu[0];
                for (int q = 0; q <= r; ++q)
                    first += static_cast<double>(binomial(r, q)) * std::pow(om, q) * std::sin(om * x[0] + 0.5 * kPi * q) *
                             gaussian_derivative(r - q, 1.0, x[0]);
                return cd(first * detail::gaussian_nd_derivative(nu, x, 1.0, 0));
            },
            INT_MAX);
    }
    throw std::invalid_argument("unknown symbol key '" + key + "'");
}

// Forward differences in xi: sum_{r <= kappa} (-1)^{|kappa|-|r|} C(kappa,r) g(xi + r).
template <class G>
cd finite_difference(G&& g, const MultiIndex& kappa, const MultiIndex& xi) {
    if (kappa.size() != xi.size()) throw std::invalid_argument("dimension mismatch");
    const std::size_t n = xi.size();
    MultiIndex r(n, 0);
    const int total = degree(kappa);
    cd s = 0.0;
    while (true) {
        double w = ((total - degree(r)) % 2) ? -1.0 : 1.0;
        MultiIndex at = xi;
        for (std::size_t i = 0; i < n; ++i) {
            w *= static_cast<double>(binomial(kappa[i], r[i]));
            at[i] += r[i];
        }
        s += w * cd(g(at));
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (++r[i] <= kappa[i]) break;
            r[i] = 0;
        }
        if (i == n) break;
    }
    return s;
}

inline cd finite_difference(const Symbol& sigma, const MultiIndex& kappa, std::span<const double> x, const MultiIndex& xi) {
    return finite_difference([&](const MultiIndex& z) { return sigma(x, z); }, kappa, xi);
}

// Littlewood-Paley bump. psi is the C^inf step with psi = 1 on (-inf, 1/2] and 0 on [1, inf).
inline double smooth_step(double lam) {
    if (lam <= 0.5) return 1.0;
    if (lam >= 1.0) return 0.0;
    const double s = 2.0 * lam - 1.0;
    const double a = std::exp(-1.0 / (1.0 - s));
    const double b = std::exp(-1.0 / s);
    return a / (a + b);
}

inline double bump(double lam) { return smooth_step(lam) - smooth_step(2.0 * lam); }

inline double lp_bump_degree(int j, int d, int n) {
    if (j < 0) throw std::invalid_argument("block index must be >= 0");
    return bump(std::ldexp(std::sqrt(2.0 * d + n), -j));
}

// phi_j(xi) = phi(2^{-j} sqrt(2|xi| + n))
inline double lp_bump(int j, const MultiIndex& xi) {
    return lp_bump_degree(j, degree(xi), static_cast<int>(xi.size()));
}

// sup over grid of |Delta_1^l phi_j| / (2^{-jN} <xi>^{N/2 - l})
inline double bump_difference_bound(int l, int j, int N, const std::vector<MultiIndex>& grid) {
    if (l < 1 || N < l) throw std::invalid_argument("need N >= l >= 1");
    double sup = 0.0;
    for (const auto& xi : grid) {
        MultiIndex kappa(xi.size(), 0);
        kappa[0] = l;
        const double d = std::abs(finite_difference([j](const MultiIndex& z) { return lp_bump(j, z); }, kappa, xi));
        const double ref = std::ldexp(1.0, -j * N) * std::pow(japanese(xi), 0.5 * N - l);
        sup = std::max(sup, d / ref);
    }
    return sup;
}

struct SeminormEntry {
    MultiIndex nu;
    MultiIndex kappa;
    double constant;
};

struct SymbolClassReport {
    std::vector<SeminormEntry> entries;
    std::string grid;

    double constant(const MultiIndex& nu, const MultiIndex& kappa) const {
        for (const auto& e : entries)
            if (e.nu == nu && e.kappa == kappa) return e.constant;
        throw std::out_of_range("no seminorm entry");
    }
};

struct SeminormGrid {
    std::vector<std::vector<double>> points;
    std::vector<MultiIndex> freqs;
};

// C_{nu,kappa} = sup |d^nu Delta^kappa sigma| / <xi>^{m/2 - rho|kappa| + (delta/2)|nu|} over the grid.
inline SymbolClassReport seminorm_report(const Symbol& sigma, int K, int N, const SeminormGrid& grid) {
    if (grid.points.empty() || grid.freqs.empty()) throw std::invalid_argument("empty seminorm grid");
    const int n = static_cast<int>(grid.freqs.front().size());
    if (N > sigma.derivative_order)
        throw std::domain_error("symbol '" + sigma.name + "' has x-derivatives only up to order " +
                                std::to_string(sigma.derivative_order));
    SymbolClassReport rep;
    rep.grid = std::to_string(grid.points.size()) + " points x " + std::to_string(grid.freqs.size()) + " frequencies";
    const BasisSpec nus(n, N), kappas(n, K);
    for (const auto& nu : nus) {
        for (const auto& kappa : kappas) {
            double sup = 0.0;
            for (const auto& x : grid.points) {
                for (const auto& xi : grid.freqs) {
                    const cd v = finite_difference([&](const MultiIndex& z) { return sigma.derivative(nu, x, z); }, kappa, xi);
                    const double e = 0.5 * sigma.cls.m - sigma.cls.rho * degree(kappa) + 0.5 * sigma.cls.delta * degree(nu);
                    sup = std::max(sup, std::abs(v) / std::pow(japanese(xi), e));
                }
            }
            rep.entries.push_back({nu, kappa, sup});
        }
    }
    return rep;
}

}  // namespace hpmult
