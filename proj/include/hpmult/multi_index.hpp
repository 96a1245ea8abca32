#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpmult {

// Entries may go negative after shifting; such an index denotes the zero function.
using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& xi) {
    int d = 0;
    for (int v : xi) d += v;
    return d;
}

inline bool has_negative(const MultiIndex& xi) {
    for (int v : xi)
        if (v < 0) return true;
    return false;
}

inline MultiIndex shifted(MultiIndex xi, int axis, int by) {
    xi.at(static_cast<std::size_t>(axis)) += by;
    return xi;
}

inline MultiIndex unit_index(int n, int axis) {
    MultiIndex e(static_cast<std::size_t>(n), 0);
    e.at(static_cast<std::size_t>(axis)) = 1;
    return e;
}

inline std::string to_string(const MultiIndex& xi) {
    std::string s = "(";
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(xi[i]);
    }
    return s + ")";
}

inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

inline double oscillator_eigenvalue(const MultiIndex& xi) {
    return 2.0 * degree(xi) + static_cast<double>(xi.size());
}

namespace detail {

// Lex-ascending compositions of `total` into xi[pos..n-1].
template <class F>
void compositions(MultiIndex& xi, std::size_t pos, int total, F&& emit) {
    if (pos + 1 == xi.size()) {
        xi[pos] = total;
        emit(xi);
        return;
    }
    for (int v = 0; v <= total; ++v) {
        xi[pos] = v;
        compositions(xi, pos + 1, total - v, emit);
    }
}

}  // namespace detail

// Calls emit(xi) for every xi with |xi| == d, lexicographically ascending.
template <class F>
void for_each_of_degree(int n, int d, F&& emit) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (d < 0) return;
    MultiIndex xi(static_cast<std::size_t>(n), 0);
    detail::compositions(xi, 0, d, emit);
}

// Graded-lex enumeration of {xi : |xi| <= max_degree}.
class BasisSpec {
public:
    BasisSpec() = default;
    BasisSpec(int dim, int max_degree) : n_(dim), lambda_(max_degree) {
        if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
        if (max_degree < 0) throw std::invalid_argument("max degree must be >= 0");
        const auto D = binomial(max_degree + dim, dim);
        if (D > 50'000'000ULL) throw std::invalid_argument("basis too large: " + std::to_string(D));
        list_.reserve(static_cast<std::size_t>(D));
        for (int d = 0; d <= max_degree; ++d)
            for_each_of_degree(dim, d, [&](const MultiIndex& xi) { list_.push_back(xi); });
    }

    // number of xi in N^n with |xi| <= max_degree
    static std::uint64_t count(int dim, int max_degree) { return binomial(max_degree + dim, dim); }

    int dim() const { return n_; }
    int max_degree() const { return lambda_; }
    std::size_t size() const { return list_.size(); }
    const MultiIndex& operator[](std::size_t pos) const { return list_[pos]; }
    const std::vector<MultiIndex>& indices() const { return list_; }
    auto begin() const { return list_.begin(); }
    auto end() const { return list_.end(); }

    // Position of xi, or -1 when xi is outside the set (or has a negative entry).
    std::ptrdiff_t index_of(const MultiIndex& xi) const {
        if (static_cast<int>(xi.size()) != n_) throw std::invalid_argument("dimension mismatch");
        if (has_negative(xi)) return -1;
        const int d = degree(xi);
        if (d > lambda_) return -1;
        std::uint64_t rank = d == 0 ? 0 : binomial(d - 1 + n_, n_);
        int rem = d;
        for (int i = 0; i + 1 < n_; ++i) {
            const int parts = n_ - i - 1;
            for (int v = 0; v < xi[static_cast<std::size_t>(i)]; ++v)
                rank += binomial(rem - v + parts - 1, parts - 1);
            rem -= xi[static_cast<std::size_t>(i)];
        }
        return static_cast<std::ptrdiff_t>(rank);
    }

    bool operator==(const BasisSpec& o) const { return n_ == o.n_ && lambda_ == o.lambda_; }

private:
    int n_ = 1;
    int lambda_ = 0;
    std::vector<MultiIndex> list_;
};

// Degree bounds of the shell I_j = {1/2 4^{j-2} - n/2 <= |xi| <= 1/2 4^j - n/2}, clipped to >= 0.
struct ShellRange {
    int lo = 0;
    int hi = -1;
    bool empty() const { return hi < lo; }
};

inline ShellRange shell_degrees(int j, int n) {
    if (j < 0) throw std::invalid_argument("block index must be >= 0");
    const double lower = 0.5 * std::pow(4.0, j - 2) - 0.5 * n;
    const double upper = 0.5 * std::pow(4.0, j) - 0.5 * n;
    ShellRange r;
    r.lo = std::max(0, static_cast<int>(std::ceil(lower)));
    r.hi = static_cast<int>(std::floor(upper));
    return r;
}

inline std::vector<MultiIndex> enumerate_shell(int j, int n) {
    const ShellRange r = shell_degrees(j, n);
    std::vector<MultiIndex> out;
    for (int d = r.lo; d <= r.hi; ++d)
        for_each_of_degree(n, d, [&](const MultiIndex& xi) { out.push_back(xi); });
    return out;
}

}  // namespace hpmult
