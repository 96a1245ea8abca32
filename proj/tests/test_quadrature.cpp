#include <gtest/gtest.h>

#include <cmath>

#include "hpmult/pseudomult.hpp"
#include "hpmult/quadrature.hpp"
#include "oracles.hpp"

using namespace hpmult;

TEST(GaussHermite, SmallRules) {
    const auto r1 = gauss_hermite(1);
    EXPECT_EQ(r1.nodes[0], 0.0);
    EXPECT_NEAR(r1.weights[0], std::sqrt(kPi), 1e-15);
    const auto r2 = gauss_hermite(2);
    EXPECT_NEAR(r2.nodes[0], -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r2.weights[0], std::sqrt(kPi) / 2.0, 1e-15);
    EXPECT_NEAR(r2.weights[1], std::sqrt(kPi) / 2.0, 1e-15);
}

TEST(GaussHermite, Moments) {
    const auto r = gauss_hermite(10);
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += r.weights[i] * std::pow(r.nodes[i], 8);
    EXPECT_NEAR(s / oracle::gaussian_moment(4), 1.0, 1e-12);
    EXPECT_NEAR(oracle::gaussian_moment(4), 105.0 / 16.0 * std::sqrt(kPi), 1e-13);
    for (int Q : {7, 33, 120}) {
        const auto q = gauss_hermite(Q);
        for (int p = 0; p < Q; p += 3) {
            double m = 0.0;
            for (int i = 0; i < Q; ++i) m += q.weights[static_cast<std::size_t>(i)] * std::pow(q.nodes[static_cast<std::size_t>(i)], 2 * p);
            if (2 * p <= 2 * Q - 1) {
                EXPECT_NEAR(m / oracle::gaussian_moment(p), 1.0, 1e-11) << Q << " " << p;
            }
        }
    }
}

TEST(GaussHermite, AgreesWithEigenvectorWeights) {
    for (int Q : {5, 20, 60}) {
        const auto r = gauss_hermite(Q);
        const auto [x, w] = oracle::golub_welsch(Q);
        for (int i = 0; i < Q; ++i) {
            EXPECT_NEAR(r.nodes[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)], 1e-12);
            // eigenvector components carry absolute, not relative, accuracy
            const double wi = w[static_cast<std::size_t>(i)];
            EXPECT_NEAR(r.weights[static_cast<std::size_t>(i)], wi, 1e-14);
            if (wi > 1e-8) {
                EXPECT_NEAR(r.weights[static_cast<std::size_t>(i)] / wi, 1.0, 1e-8);
            }
        }
    }
}

TEST(GaussHermite, LargeRuleStaysFinite) {
    const auto r = gauss_hermite(4112);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        ASSERT_TRUE(std::isfinite(r.lebesgue[i]));
        s += r.weights[i];
        if (i) {
            ASSERT_LT(r.nodes[i - 1], r.nodes[i]);
        }
    }
    EXPECT_NEAR(s, std::sqrt(kPi), 1e-12);
    EXPECT_THROW(gauss_hermite(kMaxQuadratureNodes + 1), BudgetError);
    EXPECT_THROW(gauss_hermite(0), std::invalid_argument);
}

TEST(InnerProducts, Lebesgue) {
    const TensorRule rule(1, 20);
    auto h = [](int k) { return GridFunction([k](std::span<const double> x) { return std::complex<double>(hermite(k, x[0])); }); };
    EXPECT_NEAR(inner_product(h(0), h(0), rule).real(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(inner_product(h(3), h(5), rule)), 0.0, 1e-12);
    const GridFunction g0 = [](std::span<const double> x) { return std::complex<double>(std::exp(-x[0] * x[0]) * hermite(0, x[0])); };
    // e^{-2x^2} is not polynomial against e^{-x^2}; a larger rule converges
    EXPECT_NEAR(inner_product(g0, h(0), TensorRule(1, 60)).real(), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(InnerProducts, Gaussian) {
    const TensorRule rule(1, 12);
    const GridFunction one = [](std::span<const double>) { return std::complex<double>(1.0); };
    const GridFunction H1 = [](std::span<const double> x) { return std::complex<double>(std::sqrt(2.0) * x[0]); };
    const GridFunction H2 = [](std::span<const double> x) { return std::complex<double>((4 * x[0] * x[0] - 2) / std::sqrt(8.0)); };
    EXPECT_NEAR(gaussian_inner_product(one, one, rule).real(), 1.0, 1e-14);
    EXPECT_NEAR(gaussian_inner_product(H1, H1, rule).real(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(gaussian_inner_product(H2, one, rule)), 0.0, 1e-14);
}

TEST(Orthonormality, GramDeviation) {
    for (int n = 1; n <= 2; ++n)
        for (int L : {10, 25, 40}) {
            const BasisSpec spec(n, L);
            EXPECT_LE(quadrature_self_test(spec, TensorRule(n, L + 1)), 1e-10) << n << " " << L;
            EXPECT_LE(quadrature_self_test(spec, TensorRule(n, default_quadrature_size(L))), 1e-10);
        }
}

TEST(Budget, Check) {
    EXPECT_NO_THROW(check_budget(TensorRule(1, 11), 10));
    EXPECT_THROW(check_budget(TensorRule(1, 10), 10), BudgetError);
    EXPECT_EQ(default_quadrature_size(10), 36);
    EXPECT_EQ(TensorRule(3, 4).node_count(), 64u);
}
