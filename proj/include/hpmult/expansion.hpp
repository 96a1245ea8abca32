#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "multi_index.hpp"

namespace hpmult {

using cd = std::complex<double>;

// f = sum_xi c_xi h_xi over a graded-lex basis.
struct HermiteExpansion {
    std::shared_ptr<const BasisSpec> spec;
    Eigen::VectorXcd coeffs;

    HermiteExpansion() = default;
    explicit HermiteExpansion(std::shared_ptr<const BasisSpec> s)
        : spec(std::move(s)), coeffs(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spec->size()))) {}
    HermiteExpansion(int n, int max_degree) : HermiteExpansion(std::make_shared<const BasisSpec>(n, max_degree)) {}

    int dim() const { return spec->dim(); }
    int max_degree() const { return spec->max_degree(); }

    cd coeff(const MultiIndex& xi) const {
        const auto p = spec->index_of(xi);
        return p < 0 ? cd(0.0) : coeffs[p];
    }
    void set(const MultiIndex& xi, cd v) {
        const auto p = spec->index_of(xi);
        if (p < 0) throw std::out_of_range("index outside basis: " + to_string(xi));
        coeffs[p] = v;
    }
    void add(const MultiIndex& xi, cd v) {
        const auto p = spec->index_of(xi);
        if (p < 0) throw std::out_of_range("index outside basis: " + to_string(xi));
        coeffs[p] += v;
    }

    static HermiteExpansion basis_function(int n, int max_degree, const MultiIndex& xi) {
        HermiteExpansion e(n, max_degree);
        e.set(xi, 1.0);
        return e;
    }

    cd operator()(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("dimension mismatch");
        const PointTables t(x, max_degree());
        cd s = 0.0;
        for (std::size_t p = 0; p < spec->size(); ++p)
            if (coeffs[static_cast<Eigen::Index>(p)] != cd(0.0)) s += coeffs[static_cast<Eigen::Index>(p)] * t((*spec)[p]);
        return s;
    }
};

namespace detail {

inline void check_axis(const HermiteExpansion& f, int i) {
    if (i < 0 || i >= f.dim()) throw std::invalid_argument("axis out of range");
}

// out[xi + shift e_i] += factor(xi_i) * in[xi], output basis one degree higher.
template <class F>
HermiteExpansion shift_map(const HermiteExpansion& f, int i, int shift, F&& factor, int out_degree) {
    HermiteExpansion out(f.dim(), out_degree);
    for (std::size_t p = 0; p < f.spec->size(); ++p) {
        const cd c = f.coeffs[static_cast<Eigen::Index>(p)];
        if (c == cd(0.0)) continue;
        const MultiIndex& xi = (*f.spec)[p];
        const double w = factor(xi[static_cast<std::size_t>(i)]);
        if (w == 0.0) continue;
        const MultiIndex target = shifted(xi, i, shift);
        if (has_negative(target)) continue;
        out.add(target, w * c);
    }
    return out;
}

}  // namespace detail

// A_i = -d_i + x_i : A_i h_xi = sqrt(2 xi_i + 2) h_{xi + e_i}
inline HermiteExpansion apply_raising(int i, const HermiteExpansion& f) {
    detail::check_axis(f, i);
    return detail::shift_map(f, i, +1, [](int k) { return ladder_raise(k); }, f.max_degree() + 1);
}

// A_i^* = d_i + x_i : A_i^* h_xi = sqrt(2 xi_i) h_{xi - e_i}
inline HermiteExpansion apply_lowering(int i, const HermiteExpansion& f) {
    detail::check_axis(f, i);
    return detail::shift_map(f, i, -1, [](int k) { return ladder_lower(k); }, f.max_degree() + 1);
}

inline HermiteExpansion multiply_by_coordinate(int i, const HermiteExpansion& f) {
    HermiteExpansion out = apply_raising(i, f);
    out.coeffs += apply_lowering(i, f).coeffs;
    out.coeffs *= 0.5;
    return out;
}

// d_i = (A_i^* - A_i) / 2
inline HermiteExpansion differentiate(int i, const HermiteExpansion& f) {
    HermiteExpansion out = apply_lowering(i, f);
    out.coeffs -= apply_raising(i, f).coeffs;
    out.coeffs *= 0.5;
    return out;
}

// Lifts f into a basis of larger degree.
inline HermiteExpansion promote(const HermiteExpansion& f, int max_degree) {
    if (max_degree < f.max_degree()) throw std::invalid_argument("cannot promote to a smaller basis");
    HermiteExpansion out(f.dim(), max_degree);
    // graded-lex is a prefix order, so positions agree on the common part
    out.coeffs.head(f.coeffs.size()) = f.coeffs;
    return out;
}

inline HermiteExpansion apply_oscillator(const HermiteExpansion& f) {
    HermiteExpansion out = f;
    for (std::size_t p = 0; p < f.spec->size(); ++p)
        out.coeffs[static_cast<Eigen::Index>(p)] *= oscillator_eigenvalue((*f.spec)[p]);
    return out;
}

}  // namespace hpmult
