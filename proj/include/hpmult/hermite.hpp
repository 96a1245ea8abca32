#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "multi_index.hpp"

namespace hpmult {

inline constexpr double kPi = 3.14159265358979323846;
inline const double kPiQuarterInv = std::pow(kPi, -0.25);

inline double ladder_raise(int k) { return k < 0 ? 0.0 : std::sqrt(2.0 * k + 2.0); }
inline double ladder_lower(int k) { return k <= 0 ? 0.0 : std::sqrt(2.0 * k); }
inline double ladder_half(int k) { return k <= 0 ? 0.0 : std::sqrt(0.5 * k); }

enum class LadderKind { raise, lower, half };

struct LadderCoefficient {
    double value;
    LadderKind kind;
    int k;

    static LadderCoefficient raise(int k) { return {ladder_raise(k), LadderKind::raise, k}; }
    static LadderCoefficient lower(int k) { return {ladder_lower(k), LadderKind::lower, k}; }
    static LadderCoefficient half(int k) { return {ladder_half(k), LadderKind::half, k}; }
};

// h_0..h_K at t. The recurrence is run on a rescaled pair and the accumulated
// log-scale is folded back per entry, so nothing overflows and underflow only
// happens in the final product.
template <class T>
void hermite_all(int K, T t, T* out) {
    using std::exp;
    using std::abs;
    using R = decltype(abs(T{}));
    if (K < 0) return;
    T prev = T(0);
    T cur = T(std::is_same_v<R, double> ? R(kPiQuarterInv) : std::pow(R(3.141592653589793238462643383279502884L), R(-0.25)));
    T lg = -t * t / T(2);
    out[0] = cur * exp(lg);
    for (int k = 0; k < K; ++k) {
        const T next = T(std::sqrt(R(2) / R(k + 1))) * t * cur - T(std::sqrt(R(k) / R(k + 1))) * prev;
        prev = cur;
        cur = next;
        const R m = abs(cur);
        if (m > R(1e100)) {
            prev /= T(m);
            cur /= T(m);
            lg += T(std::log(m));
        }
        out[k + 1] = cur * exp(lg);
    }
}

inline std::vector<double> hermite_all(int K, double t) {
    std::vector<double> v(static_cast<std::size_t>(K + 1));
    hermite_all(K, t, v.data());
    return v;
}

// log|h_k(t)| for k = 0..K (-inf at exact zeros).
inline std::vector<double> hermite_log_abs_all(int K, double t) {
    std::vector<double> v(static_cast<std::size_t>(K + 1));
    double prev = 0.0, cur = kPiQuarterInv, lg = -0.5 * t * t;
    v[0] = std::log(cur) + lg;
    for (int k = 0; k < K; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * t * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        const double m = std::abs(cur);
        if (m > 1e100) {
            prev /= m;
            cur /= m;
            lg += std::log(m);
        }
        v[static_cast<std::size_t>(k + 1)] =
            cur == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(cur)) + lg;
    }
    return v;
}

inline double hermite(int k, double t) {
    if (k < 0) return 0.0;
    return hermite_all(k, t).back();
}

// h_{Q}(t) / h_{Q-1}(t), free of the Gaussian factor.
inline double hermite_ratio(int Q, double t) {
    double prev = 0.0, cur = kPiQuarterInv;
    for (int k = 0; k < Q; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * t * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        const double m = std::abs(cur);
        if (m > 1e100) {
            prev /= m;
            cur /= m;
        }
    }
    return cur / prev;
}

inline double hermite_nd(const MultiIndex& xi, std::span<const double> x) {
    if (xi.size() != x.size()) throw std::invalid_argument("dimension mismatch");
    if (has_negative(xi)) return 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < xi.size(); ++i) p *= hermite(xi[i], x[i]);
    return p;
}

// Per-axis tables h_k(x_i), k <= K, for a fixed point.
template <class T>
class BasicPointTables {
public:
    BasicPointTables(std::span<const double> x, int K) : K_(K) {
        rows_.reserve(x.size());
        for (double xi : x) {
            std::vector<T> v(static_cast<std::size_t>(K + 1));
            hermite_all(K, T(xi), v.data());
            rows_.push_back(std::move(v));
        }
    }
    T axis(int i, int k) const {
        if (k < 0 || k > K_) return T(0);
        return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    T operator()(const MultiIndex& xi) const {
        T p = T(1);
        for (std::size_t i = 0; i < xi.size(); ++i) {
            if (xi[i] < 0) return T(0);
            if (xi[i] > K_) throw std::out_of_range("degree beyond table");
            p *= rows_[i][static_cast<std::size_t>(xi[i])];
        }
        return p;
    }
    int max_degree() const { return K_; }

private:
    int K_;
    std::vector<std::vector<T>> rows_;
};

using PointTables = BasicPointTables<double>;

// d/dx_i h_xi = a_{xi_i} h_{xi - e_i} - a_{xi_i + 1} h_{xi + e_i}
inline double hermite_derivative(int axis, const MultiIndex& xi, std::span<const double> x) {
    if (xi.size() != x.size()) throw std::invalid_argument("dimension mismatch");
    if (axis < 0 || axis >= static_cast<int>(xi.size())) throw std::invalid_argument("axis out of range");
    if (has_negative(xi)) return 0.0;
    const int k = xi[static_cast<std::size_t>(axis)];
    return ladder_half(k) * hermite_nd(shifted(xi, axis, -1), x) -
           ladder_half(k + 1) * hermite_nd(shifted(xi, axis, +1), x);
}

// Second derivative along one axis by composing the ladder rule twice.
inline double hermite_second_derivative_1d(int k, double t) {
    if (k < 0) return 0.0;
    const auto h = hermite_all(k + 2, t);
    const double lo = k >= 2 ? ladder_half(k) * ladder_half(k - 1) * h[static_cast<std::size_t>(k - 2)] : 0.0;
    const double mid = (ladder_half(k) * ladder_half(k) + ladder_half(k + 1) * ladder_half(k + 1)) * h[static_cast<std::size_t>(k)];
    const double hi = ladder_half(k + 1) * ladder_half(k + 2) * h[static_cast<std::size_t>(k + 2)];
    return lo - mid + hi;
}

}  // namespace hpmult
