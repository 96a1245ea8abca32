#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hpmult/expansion.hpp"
#include "hpmult/hermite.hpp"
#include "hpmult/quadrature.hpp"
#include "oracles.hpp"

using namespace hpmult;

TEST(Hermite, BasicValues) {
    EXPECT_NEAR(hermite(0, 0.0), 0.7511255444649425, 1e-15);
    EXPECT_EQ(hermite(1, 0.0), 0.0);
    const double h21 = std::pow(8.0 * std::sqrt(kPi), -0.5) * 2.0 * std::exp(-0.5);
    EXPECT_NEAR(hermite(2, 1.0), h21, 1e-15);
    EXPECT_NEAR(hermite(2, 1.0), 0.3221, 1e-4);
    EXPECT_EQ(hermite(-1, 0.3), 0.0);
}

TEST(Hermite, MatchesExplicitPolynomials) {
    for (int k = 0; k <= 18; ++k)
        for (double t : {-3.1, -1.0, -0.2, 0.0, 0.7, 1.9, 4.0}) {
            const double ref = oracle::hermite_explicit(k, t);
            EXPECT_NEAR(hermite(k, t), ref, 1e-12 * std::max(1.0, std::abs(ref))) << k << " " << t;
        }
}

TEST(Hermite, NoOverflowFarOut) {
    // plain recurrence underflows h_0 for |t| > ~38
    const auto h = hermite_all(4000, 60.0);
    for (double v : h) EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(std::abs(h[3000]), 0.0);
    const auto lg = hermite_log_abs_all(4000, 60.0);
    EXPECT_NEAR(std::log(std::abs(h[3000])), lg[3000], 1e-9 * std::abs(lg[3000]));
    EXPECT_NEAR(lg[0], std::log(kPiQuarterInv) - 1800.0, 1e-9);
}

TEST(Hermite, RatioAgreesWithValues) {
    for (int Q : {3, 10, 41})
        for (double t : {-2.0, 0.3, 1.7}) EXPECT_NEAR(hermite_ratio(Q, t), hermite(Q, t) / hermite(Q - 1, t), 1e-10);
}

TEST(Hermite, MultiDimensional) {
    const std::vector<double> z{0.0, 0.0};
    EXPECT_NEAR(hermite_nd({0, 0}, z), 1.0 / std::sqrt(kPi), 1e-15);
    const std::vector<double> one{1.0, 1.0};
    EXPECT_EQ(hermite_nd({-1, 2}, one), 0.0);
    EXPECT_DOUBLE_EQ(hermite_nd({1, 2}, one), hermite(1, 1.0) * hermite(2, 1.0));
    const PointTables t(one, 5);
    EXPECT_DOUBLE_EQ(t({1, 2}), hermite_nd({1, 2}, one));
    EXPECT_THROW(t({6, 0}), std::out_of_range);
}

TEST(Hermite, DerivativeFiniteDifference) {
    const std::vector<double> x0{0.0};
    EXPECT_EQ(hermite_derivative(0, {0}, x0), -ladder_half(1) * hermite(1, 0.0));
    EXPECT_NEAR(hermite_derivative(0, {0}, x0), 0.0, 1e-15);
    const double h = 1e-5;
    const double fd = (hermite(1, h) - hermite(1, -h)) / (2 * h);
    EXPECT_NEAR(hermite_derivative(0, {1}, x0), fd, 1e-6);
    EXPECT_NEAR(hermite_derivative(0, {1}, x0), ladder_half(1) * hermite(0, 0.0) - ladder_half(2) * hermite(2, 0.0), 1e-15);
}

TEST(Hermite, DerivativeComplexStep) {
    for (int k = 0; k <= 20; ++k)
        for (double t : {-2.5, -0.4, 1.1, 3.0}) {
            const double ref = oracle::complex_step(
                [k](std::complex<double> z) {
                    std::vector<std::complex<double>> v(static_cast<std::size_t>(k + 1));
                    hermite_all(k, z, v.data());
                    return v.back();
                },
                t);
            const std::vector<double> x{t};
            EXPECT_NEAR(hermite_derivative(0, {k}, x), ref, 1e-12 * std::max(1.0, std::abs(ref)));
            const double ref2 = (hermite_derivative(0, {k}, std::vector<double>{t + 1e-5}) -
                                 hermite_derivative(0, {k}, std::vector<double>{t - 1e-5})) / 2e-5;
            EXPECT_NEAR(hermite_second_derivative_1d(k, t), ref2, 1e-5 * std::max(1.0, std::abs(ref2)));
        }
}

TEST(Ladders, RaisingAndLowering) {
    auto f = HermiteExpansion::basis_function(1, 3, {0});
    auto g = apply_raising(0, f);
    EXPECT_NEAR(std::abs(g.coeff({1}) - std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_EQ(g.max_degree(), 4);
    const HermiteExpansion zero(1, 3);
    EXPECT_EQ(apply_raising(0, zero).coeffs.norm(), 0.0);
    auto h = HermiteExpansion::basis_function(2, 5, {2, 3});
    auto a = apply_raising(0, h);
    EXPECT_NEAR(std::abs(a.coeff({3, 3}) - std::sqrt(6.0)), 0.0, 1e-15);
    EXPECT_EQ(apply_lowering(0, HermiteExpansion::basis_function(1, 2, {0})).coeffs.norm(), 0.0);
    auto l = apply_lowering(0, HermiteExpansion::basis_function(1, 2, {1}));
    EXPECT_NEAR(std::abs(l.coeff({0}) - std::sqrt(2.0)), 0.0, 1e-15);
    for (int k = 0; k <= 10; ++k) {
        auto r = apply_lowering(0, apply_raising(0, HermiteExpansion::basis_function(1, 10, {k})));
        EXPECT_NEAR(std::abs(r.coeff({k}) - cd(2.0 * k + 2)), 0.0, 1e-12);
        EXPECT_NEAR((r.coeffs).norm(), 2.0 * k + 2, 1e-12);
    }
    EXPECT_THROW(apply_raising(1, f), std::invalid_argument);
}

TEST(Ladders, DifferentiateMatchesPointwise) {
    for (int k = 0; k <= 20; ++k) {
        auto d = differentiate(0, HermiteExpansion::basis_function(1, 20, {k}));
        for (double t : {-1.3, 0.2, 2.2}) {
            const std::vector<double> x{t};
            EXPECT_NEAR(d(x).real(), hermite_derivative(0, {k}, x), 1e-12);
        }
    }
}

TEST(Ladders, CoordinateMultiplication) {
    auto f = multiply_by_coordinate(0, HermiteExpansion::basis_function(1, 0, {0}));
    EXPECT_NEAR(std::abs(f.coeff({1}) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int L : {5, 17, 30}) {
        HermiteExpansion e(2, L);
        for (Eigen::Index p = 0; p < e.coeffs.size(); ++p) e.coeffs[p] = cd(U(g), U(g));
        for (int i = 0; i < 2; ++i) {
            const auto m = multiply_by_coordinate(i, e);
            EXPECT_EQ(m.max_degree(), L + 1);
            for (int s = 0; s < 5; ++s) {
                const std::vector<double> x{U(g) * 2, U(g) * 2};
                const cd lhs = m(x), rhs = x[static_cast<std::size_t>(i)] * e(x);
                EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
    // x (x h_0) = x h_1 / sqrt2 = (sqrt2 h_2 + h_0) / 2
    auto xx = multiply_by_coordinate(0, multiply_by_coordinate(0, HermiteExpansion::basis_function(1, 0, {0})));
    EXPECT_NEAR(std::abs(xx.coeff({0}) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(xx.coeff({2}) - std::sqrt(2.0) / 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(xx.coeff({1})), 0.0, 1e-15);
}

TEST(Ladders, OscillatorEigenrelationByQuadrature) {
    const TensorRule rule(2, 40);
    for (const MultiIndex& xi : {MultiIndex{0, 0}, MultiIndex{2, 1}, MultiIndex{4, 3}}) {
        double s = 0.0;
        rule.for_each_node([&](std::span<const double> x, double W, double) {
            double lap = 0.0;
            for (int i = 0; i < 2; ++i) {
                double other = hermite(xi[static_cast<std::size_t>(1 - i)], x[static_cast<std::size_t>(1 - i)]);
                lap += hermite_second_derivative_1d(xi[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]) * other;
            }
            const double h = hermite_nd(xi, x);
            s += W * (-lap + (x[0] * x[0] + x[1] * x[1]) * h) * h;
        });
        EXPECT_NEAR(s, oscillator_eigenvalue(xi), 1e-10);
    }
    auto f = apply_oscillator(HermiteExpansion::basis_function(3, 2, {0, 0, 0}));
    EXPECT_NEAR(f.coeff({0, 0, 0}).real(), 3.0, 0);
}

TEST(Expansion, PromoteKeepsCoefficients) {
    HermiteExpansion e(2, 3);
    e.set({1, 2}, cd(2.0, -1.0));
    const auto p = promote(e, 6);
    EXPECT_EQ(p.coeff({1, 2}), cd(2.0, -1.0));
    EXPECT_THROW(promote(p, 2), std::invalid_argument);
    EXPECT_THROW(e.set({4, 0}, 1.0), std::out_of_range);
}
