#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "multi_index.hpp"
#include "pseudomult.hpp"
#include "quadrature.hpp"
#include "symbols.hpp"

namespace hpmult {

// (2k-1)!! style product of odd numbers down to 1; (-1)!! = 1
inline std::int64_t double_factorial(int k) {
    std::int64_t r = 1;
    for (int v = k; v > 1; v -= 2) r *= v;
    return r;
}

// c_{l,N} = (-4)^{N-l} (2N-2l-1)!! C(N, 2l-N), zero outside N/2 <= l <= N
inline std::int64_t order_coefficient(int l, int N) {
    if (2 * l < N || l > N) return 0;
    std::int64_t p = 1;
    for (int r = 0; r < N - l; ++r) p *= -4;
    return p * double_factorial(2 * N - 2 * l - 1) * static_cast<std::int64_t>(binomial(N, 2 * l - N));
}

struct FreqTerm {
    int ell;
    int nu;
    int omega;
    std::int64_t coeff;         // c_{nu,l,N} = (-1)^{l-nu} 4^{N-l} (2N-2l-1)!! C(N,2l-N)
    std::int64_t multiplicity;  // C(2l-N, nu) from expanding (A^y - A^x)^{2l-N}

    double weight() const { return static_cast<double>(coeff) * static_cast<double>(multiplicity); }
};

inline std::vector<FreqTerm> freq_expansion(int N) {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    std::vector<FreqTerm> out;
    for (int l = (N + 1) / 2; l <= N; ++l) {
        const int r = 2 * l - N;
        std::int64_t mag = double_factorial(2 * N - 2 * l - 1) * static_cast<std::int64_t>(binomial(N, r));
        for (int q = 0; q < N - l; ++q) mag *= 4;
        for (int nu = 0; nu <= r; ++nu) {
            const std::int64_t sign = ((l - nu) % 2) ? -1 : 1;
            out.push_back({l, nu, r - nu, sign * mag, static_cast<std::int64_t>(binomial(r, nu))});
        }
    }
    return out;
}

// d_m(lambda) = prod_{r<m} sqrt(2(lambda + r) + 2)
template <class R = double>
R d_factor(int m, R lambda) {
    R p = 1;
    for (int r = 0; r < m; ++r) p *= std::sqrt(R(2) * (lambda + R(r)) + R(2));
    return p;
}

template <class R>
double discrepancy(R lhs, R rhs) {
    const R e = std::abs(lhs - rhs);
    return static_cast<double>(std::abs(lhs) < R(1e-12) ? e : e / std::abs(lhs));
}

using PointPair = std::pair<std::vector<double>, std::vector<double>>;

struct FreqIdentityReport {
    double proof_error = 0.0;      // nu-shift on h(y), omega-shift on h(x)
    double statement_error = 0.0;  // nu-shift on h(x), omega-shift on h(y)
    std::string matched;           // "proof", "statement", "both" or "none"
};

// Both sides of the frequency by-parts identity for a coefficient function k supported on |xi| <= support.
inline FreqIdentityReport verify_freq_identity(const std::function<double(const MultiIndex&)>& k, int support, int axis, int N,
                                               const std::vector<PointPair>& pairs, const std::vector<FreqTerm>& terms,
                                               double tol = 1e-8) {
    if (pairs.empty()) throw std::invalid_argument("no point pairs");
    const int n = static_cast<int>(pairs.front().first.size());
    if (axis < 0 || axis >= n) throw std::invalid_argument("axis out of range");
    if (support < 0) throw std::invalid_argument("support degree must be >= 0");
    const BasisSpec basis(n, support);
    auto kk = [&](const MultiIndex& z) { return degree(z) <= support ? k(z) : 0.0; };
    using L = long double;
    std::vector<std::vector<L>> diffs(static_cast<std::size_t>(N + 1));
    for (int l = 1; l <= N; ++l)
        for (const auto& xi : basis) {
            L d = 0;
            for (int r = 0; r <= l; ++r) d += L(((l - r) % 2) ? -1 : 1) * L(binomial(l, r)) * L(kk(shifted(xi, axis, r)));
            diffs[static_cast<std::size_t>(l)].push_back(d);
        }
    FreqIdentityReport rep;
    for (const auto& [x, y] : pairs) {
        if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) throw std::invalid_argument("dimension mismatch");
        // long double: when x_i ~ y_i the right side cancels O(1) terms down to (x_i - y_i)^N
        const BasicPointTables<L> tx(x, support + N), ty(y, support + N);
        L base = 0;
        for (const auto& xi : basis) base += L(kk(xi)) * tx(xi) * ty(xi);
        const L lhs = std::pow(L(2) * (L(x[static_cast<std::size_t>(axis)]) - L(y[static_cast<std::size_t>(axis)])), N) * base;
        L proof = 0, stmt = 0;
        for (const auto& t : terms) {
            for (std::size_t p = 0; p < basis.size(); ++p) {
                const L dk = diffs[static_cast<std::size_t>(t.ell)][p];
                if (dk == 0) continue;
                const MultiIndex& xi = basis[p];
                const L xa = xi[static_cast<std::size_t>(axis)];
                const L c = L(t.coeff) * L(t.multiplicity) * d_factor<L>(t.nu, xa) * d_factor<L>(t.omega, xa) * dk;
                const MultiIndex a = shifted(xi, axis, t.nu), b = shifted(xi, axis, t.omega);
                proof += c * tx(b) * ty(a);
                stmt += c * tx(a) * ty(b);
            }
        }
        rep.proof_error = std::max(rep.proof_error, discrepancy(lhs, proof));
        rep.statement_error = std::max(rep.statement_error, discrepancy(lhs, stmt));
    }
    const bool p = rep.proof_error <= tol, s = rep.statement_error <= tol;
    rep.matched = p && s ? "both" : p ? "proof" : s ? "statement" : "none";
    return rep;
}

inline FreqIdentityReport verify_freq_identity(const std::function<double(const MultiIndex&)>& k, int support, int axis, int N,
                                               const std::vector<PointPair>& pairs, double tol = 1e-8) {
    return verify_freq_identity(k, support, axis, N, pairs, freq_expansion(N), tol);
}

// Two-variable expansion sum c(p,q) h_p(x_i) h_q(y_i) along one axis; the other axes stay fixed.
// Coefficients and evaluation are long double: the identities cancel terms much larger than their result.
class PairExpansion {
public:
    using Key = std::pair<int, int>;
    using Real = long double;

    static PairExpansion product(int p, int q) {
        PairExpansion e;
        if (p >= 0 && q >= 0) e.c_[{p, q}] = 1;
        return e;
    }

    const std::map<Key, Real>& terms() const { return c_; }

    PairExpansion& operator+=(const PairExpansion& o) {
        for (const auto& [k, v] : o.c_) c_[k] += v;
        return *this;
    }
    PairExpansion scaled(double s) const {
        PairExpansion e = *this;
        for (auto& [k, v] : e.c_) v *= Real(s);
        return e;
    }

    // A^y - A^x
    PairExpansion difference_ladder() const {
        PairExpansion e;
        for (const auto& [k, v] : c_) {
            e.c_[{k.first, k.second + 1}] += raise(k.second) * v;
            e.c_[{k.first + 1, k.second}] -= raise(k.first) * v;
        }
        return e;
    }

    // multiplication by (x_i - y_i)
    PairExpansion times_difference() const {
        PairExpansion e;
        for (const auto& [k, v] : c_) {
            const auto [p, q] = k;
            e.c_[{p + 1, q}] += raise(p) * v / 2;
            if (p > 0) e.c_[{p - 1, q}] += lower(p) * v / 2;
            e.c_[{p, q + 1}] -= raise(q) * v / 2;
            if (q > 0) e.c_[{p, q - 1}] -= lower(q) * v / 2;
        }
        return e;
    }

    int max_degree() const {
        int m = 0;
        for (const auto& [k, v] : c_) m = std::max({m, k.first, k.second});
        return m;
    }

    double operator()(double x, double y) const { return static_cast<double>(value(x, y)); }

    Real value(double x, double y) const {
        const int K = max_degree();
        std::vector<Real> hx(static_cast<std::size_t>(K + 1)), hy(static_cast<std::size_t>(K + 1));
        hermite_all(K, Real(x), hx.data());
        hermite_all(K, Real(y), hy.data());
        Real s = 0;
        for (const auto& [k, v] : c_) s += v * hx[static_cast<std::size_t>(k.first)] * hy[static_cast<std::size_t>(k.second)];
        return s;
    }

private:
    static Real raise(int k) { return std::sqrt(Real(2 * k + 2)); }
    static Real lower(int k) { return std::sqrt(Real(2 * k)); }

    std::map<Key, Real> c_;
};

enum class ToolIdentity { raising, lowering, coordinate, commutator, ladder_product, difference_product, summation };

inline std::string tool_name(ToolIdentity id) {
    switch (id) {
        case ToolIdentity::raising: return "raising";
        case ToolIdentity::lowering: return "lowering";
        case ToolIdentity::coordinate: return "coordinate_multiplication";
        case ToolIdentity::commutator: return "difference_commutator";
        case ToolIdentity::ladder_product: return "ladder_on_product";
        case ToolIdentity::difference_product: return "difference_on_product";
        case ToolIdentity::summation: return "summation_by_parts_step";
    }
    return "unknown";
}

struct ToolInstance {
    MultiIndex xi;
    int axis = 0;
    int power = 1;                                          // r in the commutator, k in the summation step
    std::function<double(const MultiIndex&)> coefficients;  // summation step only
    int support = 0;                                        // summation step only
    std::vector<PointPair> pairs;
};

namespace detail {

using Real = long double;

inline Real hermite_ld(int k, Real t) {
    if (k < 0) return 0;
    std::vector<Real> h(static_cast<std::size_t>(k + 1));
    hermite_all(k, t, h.data());
    return h.back();
}

// h_k and h_k' at t; the derivative comes from a complex step, independent of the ladder rules.
inline std::pair<Real, Real> value_and_slope(int k, Real t) {
    if (k < 0) return {0, 0};
    constexpr Real step = 1e-30L;
    std::vector<std::complex<Real>> h(static_cast<std::size_t>(k + 1));
    hermite_all(k, std::complex<Real>(t, step), h.data());
    return {h.back().real(), h.back().imag() / step};
}

inline double others(const MultiIndex& xi, std::span<const double> x, int axis) {
    double p = 1.0;
    for (std::size_t j = 0; j < xi.size(); ++j)
        if (static_cast<int>(j) != axis) p *= hermite(xi[j], x[j]);
    return p;
}

// (A g)(t) with A = -d + t applied to h_k, by complex step
inline Real raise_numeric(int k, Real t) {
    const auto [v, s] = value_and_slope(k, t);
    return -s + t * v;
}

}  // namespace detail

// Max discrepancy of one ladder identity over the instance's point pairs.
inline double verify_ladder_identity(ToolIdentity id, const ToolInstance& in) {
    if (in.pairs.empty()) throw std::invalid_argument("no point pairs");
    const int i = in.axis;
    double worst = 0.0;
    for (const auto& [x, y] : in.pairs) {
        const auto ii = static_cast<std::size_t>(i);
        const int k = id == ToolIdentity::summation ? 0 : in.xi[ii];
        using detail::Real;
        using detail::hermite_ld;
        const Real xi_ = x[ii], yi_ = y[ii];
        Real lhs = 0, rhs = 0;
        switch (id) {
            case ToolIdentity::raising: {
                const auto [v, s] = detail::value_and_slope(k, xi_);
                const Real o = detail::others(in.xi, x, i);
                lhs = (-s + xi_ * v) * o;
                rhs = std::sqrt(Real(2 * k + 2)) * hermite_ld(k + 1, xi_) * o;
                break;
            }
            case ToolIdentity::lowering: {
                const auto [v, s] = detail::value_and_slope(k, xi_);
                const Real o = detail::others(in.xi, x, i);
                lhs = (s + xi_ * v) * o;
                rhs = std::sqrt(Real(2 * k)) * hermite_ld(k - 1, xi_) * o;
                break;
            }
            case ToolIdentity::coordinate: {
                const Real o = detail::others(in.xi, x, i);
                lhs = 2 * xi_ * hermite_ld(k, xi_) * o;
                rhs = (std::sqrt(Real(2 * k + 2)) * hermite_ld(k + 1, xi_) + std::sqrt(Real(2 * k)) * hermite_ld(k - 1, xi_)) * o;
                break;
            }
            case ToolIdentity::commutator: {
                if (in.power < 1) throw std::invalid_argument("commutator needs r >= 1");
                const Real o = detail::others(in.xi, x, i) * detail::others(in.xi, y, i);
                PairExpansion F = PairExpansion::product(k, k);
                PairExpansion Dr = F, Dr1 = F;
                for (int r = 0; r < in.power; ++r) Dr = Dr.difference_ladder();
                for (int r = 0; r + 1 < in.power; ++r) Dr1 = Dr1.difference_ladder();
                PairExpansion R = F.times_difference();
                for (int r = 0; r < in.power; ++r) R = R.difference_ladder();
                R += Dr1.scaled(-2.0 * in.power);
                lhs = (xi_ - yi_) * Dr.value(x[ii], y[ii]) * o;
                rhs = R.value(x[ii], y[ii]) * o;
                break;
            }
            case ToolIdentity::ladder_product: {
                const Real o = detail::others(in.xi, x, i) * detail::others(in.xi, y, i);
                lhs = (hermite_ld(k, xi_) * detail::raise_numeric(k, yi_) - detail::raise_numeric(k, xi_) * hermite_ld(k, yi_)) * o;
                rhs = std::sqrt(Real(2 * k + 2)) * (hermite_ld(k, xi_) * hermite_ld(k + 1, yi_) - hermite_ld(k + 1, xi_) * hermite_ld(k, yi_)) * o;
                break;
            }
            case ToolIdentity::difference_product: {
                const Real o = detail::others(in.xi, x, i) * detail::others(in.xi, y, i);
                lhs = 2 * (xi_ - yi_) * hermite_ld(k, xi_) * hermite_ld(k, yi_) * o;
                // -(A^y - A^x) applied to h_k h_k - h_{k-1} h_{k-1} (or h_0 h_0 alone when k = 0)
                auto D = [&](int m) {
                    return hermite_ld(m, xi_) * detail::raise_numeric(m, yi_) - detail::raise_numeric(m, xi_) * hermite_ld(m, yi_);
                };
                rhs = (k >= 1 ? -(D(k) - D(k - 1)) : -D(0)) * o;
                break;
            }
            case ToolIdentity::summation: {
                if (!in.coefficients) throw std::invalid_argument("summation step needs coefficients");
                const int n = static_cast<int>(x.size());
                const BasisSpec basis(n, in.support);
                auto f = [&](const MultiIndex& z) { return degree(z) <= in.support ? in.coefficients(z) : 0.0; };
                for (const auto& xi : basis) {
                    const int p = xi[ii];
                    const Real o = detail::others(xi, x, i) * detail::others(xi, y, i);
                    PairExpansion L = PairExpansion::product(p, p).times_difference().scaled(2.0);
                    for (int r = 0; r < in.power; ++r) L = L.difference_ladder();
                    PairExpansion R = PairExpansion::product(p, p);
                    for (int r = 0; r <= in.power; ++r) R = R.difference_ladder();
                    const Real df = Real(f(shifted(xi, i, 1))) - Real(f(xi));
                    lhs += Real(f(xi)) * L.value(x[ii], y[ii]) * o;
                    rhs += df * R.value(x[ii], y[ii]) * o;
                }
                break;
            }
        }
        worst = std::max(worst, discrepancy(lhs, rhs));
    }
    return worst;
}

// One product of a_k factors times an integer.
struct AMonomial {
    std::int64_t scalar = 1;
    std::vector<int> factors;  // sorted indices k of a_k = sqrt(k/2)

    double value() const {
        double v = static_cast<double>(scalar);
        for (int k : factors) v *= ladder_half(k);
        return v;
    }
};

struct SpatialTerm {
    int ell;
    int alpha;
    int beta;
    std::vector<AMonomial> coeff;

    double value() const {
        double s = 0.0;
        for (const auto& m : coeff) s += m.value();
        return s;
    }
};

struct SpatialExpansion {
    int N = 0;
    int xi = 0;
    int eta = 0;
    std::vector<SpatialTerm> terms;
    std::size_t raw_children = 0;  // terms produced by the last step before merging

    // max |C| / <xi v eta>^{N/2}
    double bound_ratio() const {
        double r = 0.0;
        for (const auto& t : terms) r = std::max(r, std::abs(t.value()));
        return r / std::pow(1.0 + std::max(xi, eta), 0.5 * N);
    }
};

namespace detail {

inline void push_child(std::vector<SpatialTerm>& out, const SpatialTerm& parent, int ell, int alpha, int beta, int sign, int factor,
                       std::int64_t mult) {
    SpatialTerm t{ell, alpha, beta, {}};
    for (auto m : parent.coeff) {
        m.scalar *= sign * mult;
        if (factor >= 0) {
            if (factor == 0) return;  // a_0 = 0
            m.factors.insert(std::upper_bound(m.factors.begin(), m.factors.end(), factor), factor);
        }
        if (m.scalar != 0) t.coeff.push_back(std::move(m));
    }
    if (!t.coeff.empty()) out.push_back(std::move(t));
}

inline std::vector<SpatialTerm> merge_terms(const std::vector<SpatialTerm>& in) {
    std::map<std::tuple<int, int, int>, std::map<std::vector<int>, std::int64_t>> acc;
    for (const auto& t : in)
        for (const auto& m : t.coeff) acc[{t.ell, t.alpha, t.beta}][m.factors] += m.scalar;
    std::vector<SpatialTerm> out;
    for (const auto& [key, monos] : acc) {
        SpatialTerm t{std::get<0>(key), std::get<1>(key), std::get<2>(key), {}};
        for (const auto& [f, s] : monos)
            if (s != 0) t.coeff.push_back({s, f});
        if (!t.coeff.empty()) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace detail

inline SpatialExpansion spatial_expansion(int N, int xi, int eta) {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    if (xi < 0 || eta < 0) throw std::invalid_argument("indices must be >= 0");
    SpatialExpansion e;
    e.N = N;
    e.xi = xi;
    e.eta = eta;
    const SpatialTerm unit{0, 0, 0, {AMonomial{}}};
    std::vector<SpatialTerm> level;
    detail::push_child(level, unit, 1, +1, 0, -1, xi + 1, 1);
    detail::push_child(level, unit, 1, -1, 0, +1, xi, 1);
    detail::push_child(level, unit, 1, 0, +1, +1, eta + 1, 1);
    detail::push_child(level, unit, 1, 0, -1, -1, eta, 1);
    e.raw_children = level.size();
    level = detail::merge_terms(level);
    for (int step = 1; step < N; ++step) {
        std::vector<SpatialTerm> next;
        for (const auto& t : level) {
            const int a = t.alpha, b = t.beta, l = t.ell;
            detail::push_child(next, t, l + 1, a + 1, b, -1, xi + a + 1, 1);
            detail::push_child(next, t, l + 1, a - 1, b, +1, xi + a, 1);
            detail::push_child(next, t, l + 1, a, b + 1, +1, eta + b + 1, 1);
            detail::push_child(next, t, l + 1, a, b - 1, -1, eta + b, 1);
            detail::push_child(next, t, l, a, b, +1, -1, 2 * (b - a));
        }
        e.raw_children = next.size();
        level = detail::merge_terms(next);
    }
    e.terms = std::move(level);
    return e;
}

struct SpatialCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double error = 0.0;
};

// Quadrature moments int d_i^l g h_a h_b over a fixed rule, tabulated once per axis and order.
class SpatialMoments {
public:
    SpatialMoments(const Symbol& g, int n, int max_degree, int max_order, const TensorRule& rule)
        : spec_(std::make_shared<const BasisSpec>(n, max_degree)), max_order_(max_order) {
        if (rule.n != n) throw std::invalid_argument("rule dimension differs");
        if (max_order > g.derivative_order)
            throw std::domain_error("symbol '" + g.name + "' lacks x-derivatives of order " + std::to_string(max_order));
        const NodeSet nodes = collect_nodes(rule);
        const Eigen::MatrixXd H = hermite_matrix(*spec_, rule);
        const MultiIndex zero(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            std::vector<Eigen::MatrixXd> per;
            for (int l = 0; l <= max_order; ++l) {
                MultiIndex nu(static_cast<std::size_t>(n), 0);
                nu[static_cast<std::size_t>(i)] = l;
                Eigen::VectorXd gw(nodes.count());
                for (Eigen::Index q = 0; q < nodes.count(); ++q)
                    gw[q] = nodes.lebesgue[q] * g.derivative(nu, nodes.point(q), zero).real();
                per.push_back(H.transpose() * gw.asDiagonal() * H);
            }
            tables_.push_back(std::move(per));
        }
    }

    int max_degree() const { return spec_->max_degree(); }

    double integral(int l, int axis, const MultiIndex& a, const MultiIndex& b) const {
        if (has_negative(a) || has_negative(b)) return 0.0;
        const auto pa = spec_->index_of(a), pb = spec_->index_of(b);
        if (pa < 0 || pb < 0) throw BudgetError("index beyond tabulated degree " + std::to_string(max_degree()));
        if (l > max_order_) throw BudgetError("derivative order beyond table");
        return tables_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(l)](pa, pb);
    }

private:
    std::shared_ptr<const BasisSpec> spec_;
    int max_order_;
    std::vector<std::vector<Eigen::MatrixXd>> tables_;
};

// 2^N (xi_i - eta_i)^N G(xi,eta) against the recursion's right-hand side.
inline SpatialCheck verify_spatial_identity(const SpatialMoments& mom, const MultiIndex& xi, const MultiIndex& eta, int axis, int N) {
    const auto ax = static_cast<std::size_t>(axis);
    SpatialCheck c;
    c.lhs = std::pow(2.0 * (xi[ax] - eta[ax]), N) * mom.integral(0, axis, xi, eta);
    const auto e = spatial_expansion(N, xi[ax], eta[ax]);
    for (const auto& t : e.terms) c.rhs += t.value() * mom.integral(t.ell, axis, shifted(xi, axis, t.alpha), shifted(eta, axis, t.beta));
    c.error = discrepancy(c.lhs, c.rhs);
    return c;
}

struct LagrangeReport {
    double pointwise = 0.0;
    double integrated = 0.0;
};

// v L_i u - u L_i v = d_i(u d_i v - v d_i u), u = h_xi, v = h_eta; L_i u from the eigenrelation, d_i^2 from ladders.
inline double lagrange_pointwise(const MultiIndex& xi, const MultiIndex& eta, int axis, const std::vector<std::vector<double>>& points) {
    const auto ax = static_cast<std::size_t>(axis);
    double scale = 0.0, worst = 0.0;
    std::vector<std::pair<double, double>> vals;
    for (const auto& x : points) {
        const double u = hermite_nd(xi, x), v = hermite_nd(eta, x);
        const double lhs = 2.0 * (xi[ax] - eta[ax]) * u * v;
        const double ou = detail::others(xi, x, axis), ov = detail::others(eta, x, axis);
        const double d2u = hermite_second_derivative_1d(xi[ax], x[ax]) * ou;
        const double d2v = hermite_second_derivative_1d(eta[ax], x[ax]) * ov;
        const double rhs = u * d2v - v * d2u;
        vals.emplace_back(lhs, rhs);
        scale = std::max(scale, std::abs(lhs));
    }
    for (const auto& [l, r] : vals) worst = std::max(worst, scale < 1e-12 ? std::abs(l - r) : std::abs(l - r) / scale);
    return worst;
}

// 2(xi_i - eta_i) int g h_{xi+alpha} h_{eta+beta} against the derivative form with the 2(beta - alpha) correction.
inline double lagrange_integrated(const SpatialMoments& mom, const MultiIndex& xi, const MultiIndex& eta, int axis, int alpha, int beta) {
    const auto ax = static_cast<std::size_t>(axis);
    const MultiIndex a = shifted(xi, axis, alpha), b = shifted(eta, axis, beta);
    if (has_negative(a) || has_negative(b)) throw std::invalid_argument("shifted index is negative");
    const double G = mom.integral(0, axis, a, b);
    const double lhs = 2.0 * (xi[ax] - eta[ax]) * G;
    const int p = a[ax], q = b[ax];
    // d h_p = a_p h_{p-1} - a_{p+1} h_{p+1}
    const double dA = ladder_half(p) * mom.integral(1, axis, shifted(a, axis, -1), b) -
                      ladder_half(p + 1) * mom.integral(1, axis, shifted(a, axis, 1), b);
    const double dB = ladder_half(q) * mom.integral(1, axis, a, shifted(b, axis, -1)) -
                      ladder_half(q + 1) * mom.integral(1, axis, a, shifted(b, axis, 1));
    const double rhs = dA - dB + 2.0 * (beta - alpha) * G;
    return discrepancy(lhs, rhs);
}

// <sigma_k(., xi) h_xi, sigma_j(., eta) h_eta> with xi in I_k, eta in I_j
inline cd almost_orthogonality_entry(const Symbol& sigma, int j, int k, const MultiIndex& xi, const MultiIndex& eta, const TensorRule& rule) {
    const int n = static_cast<int>(xi.size());
    const ShellRange rk = shell_degrees(k, n), rj = shell_degrees(j, n);
    if (degree(xi) < rk.lo || degree(xi) > rk.hi) throw std::invalid_argument("xi is not in shell " + std::to_string(k));
    if (degree(eta) < rj.lo || degree(eta) > rj.hi) throw std::invalid_argument("eta is not in shell " + std::to_string(j));
    check_budget(rule, std::max(degree(xi), degree(eta)));
    const double pk = lp_bump(k, xi), pj = lp_bump(j, eta);
    cd s = 0.0;
    rule.for_each_node([&](std::span<const double> x, double W, double) {
        s += W * sigma(x, xi) * pk * std::conj(sigma(x, eta) * pj) * hermite_nd(xi, x) * hermite_nd(eta, x);
    });
    return s;
}

// |entry| |xi - eta|^N / <|xi| v |eta|>^{(N/2)(1+delta)}
inline double almost_orthogonality_ratio(cd entry, const MultiIndex& xi, const MultiIndex& eta, int N, double delta) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) d2 += double(xi[i] - eta[i]) * double(xi[i] - eta[i]);
    const double big = 1.0 + std::max(degree(xi), degree(eta));
    return std::abs(entry) * std::pow(std::sqrt(d2), N) / std::pow(big, 0.5 * N * (1.0 + delta));
}

}  // namespace hpmult
