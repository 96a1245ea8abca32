// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "hpmult/hpmult.hpp"
#include "oracles.hpp"

using namespace hpmult;

namespace {

constexpr double kTolPointwise = 1e-9;
constexpr double kTolQuadrature = 1e-7;
constexpr double kMaxIdentitySeconds = 120.0;
constexpr double kTolGram = 1e-10;
constexpr double kTolParseval = 1e-10;
constexpr double kSlopeTol = 0.4;
constexpr double kZeroBlock = 1e-12;
constexpr double kUniformity = 1.25;
constexpr double kProjectionRatio = 3.0;
constexpr double kProjectionTrend = 0.1;
constexpr double kThetaZeroTol = 0.05;
constexpr double kTolTransfer = 1e-10;
constexpr double kPlateau = 0.10;
constexpr double kSobolevSpread = 1.10;
constexpr double kCoefficientDrift = 1.10;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

std::vector<PointPair> pairs(std::mt19937_64& g, int n, int count, double r = 2.5) {
    std::vector<PointPair> out;
    for (int c = 0; c < count; ++c) {
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (auto& v : x) v = -r + 2.0 * r * static_cast<double>(g() >> 11) * 0x1.0p-53;
        for (auto& v : y) v = -r + 2.0 * r * static_cast<double>(g() >> 11) * 0x1.0p-53;
        out.emplace_back(x, y);
    }
    return out;
}

std::function<double(const MultiIndex&)> coefficients(std::mt19937_64& g, int n, int support) {
    auto t = std::make_shared<std::map<MultiIndex, double>>();
    for (const auto& xi : BasisSpec(n, support)) (*t)[xi] = -1.0 + 2.0 * static_cast<double>(g() >> 11) * 0x1.0p-53;
    return [t](const MultiIndex& z) {
        const auto it = t->find(z);
        return it == t->end() ? 0.0 : it->second;
    };
}

void exact_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 g(2024);
    const int L = 10;
    double pointwise = 0.0, quadrature = 0.0;
    std::string worst_name = "-";
    auto note = [&](double e, bool quad, const std::string& name) {
        double& w = quad ? quadrature : pointwise;
        if (e > w) {
            w = e;
            if (!quad) worst_name = name;
        }
    };
    for (int n = 1; n <= 2; ++n) {
        const BasisSpec basis(n, L);
        // single-index ladder identities on every xi with |xi| <= 10
        for (const auto& xi : basis)
            for (int i = 0; i < n; ++i) {
                ToolInstance in;
                in.xi = xi;
                in.axis = i;
                in.pairs = pairs(g, n, 6);
                for (auto id : {ToolIdentity::raising, ToolIdentity::lowering, ToolIdentity::coordinate, ToolIdentity::ladder_product,
                                ToolIdentity::difference_product})
                    note(verify_ladder_identity(id, in), false, tool_name(id));
                for (int r = 1; r <= 3; ++r) {
                    in.power = r;
                    note(verify_ladder_identity(ToolIdentity::commutator, in), false, tool_name(ToolIdentity::commutator));
                }
            }
        for (int i = 0; i < n; ++i)
            for (int k = 0; k <= 2; ++k) {
                ToolInstance in;
                in.xi = MultiIndex(static_cast<std::size_t>(n), 0);
                in.axis = i;
                in.power = k;
                in.support = L;
                in.coefficients = coefficients(g, n, L);
                in.pairs = pairs(g, n, 10);
                note(verify_ladder_identity(ToolIdentity::summation, in), false, tool_name(ToolIdentity::summation));
            }
        for (int N = 1; N <= 4; ++N)
            for (int i = 0; i < n; ++i) {
                const auto rep = verify_freq_identity(coefficients(g, n, L), L, i, N, pairs(g, n, 25), kTolPointwise);
                note(rep.proof_error, false, "frequency_by_parts");
            }
        std::vector<std::vector<double>> pts;
        for (const auto& p : pairs(g, n, 20, 3.0)) pts.push_back(p.first);
        for (const auto& xi : basis)
            for (const auto& eta : basis)
                for (int i = 0; i < n; ++i) note(lagrange_pointwise(xi, eta, i, pts), false, "lagrange_pointwise");

        const int deg = L + 3;
        const TensorRule rule(n, 3 * deg + 32);
        for (const std::string key : {"gaussian_x", "poly_gaussian", "sin_gaussian"}) {
            const SpatialMoments mom(builtin_symbol(key), n, deg, 3, rule);
            for (const auto& xi : basis)
                for (const auto& eta : basis)
                    for (int i = 0; i < n; ++i) {
                        if (xi[static_cast<std::size_t>(i)] != eta[static_cast<std::size_t>(i)])
                            for (int N = 1; N <= 3; ++N) note(verify_spatial_identity(mom, xi, eta, i, N).error, true, "spatial_by_parts/" + key);
                        for (int a = -1; a <= 1; ++a)
                            for (int b = -1; b <= 1; ++b)
                                if (xi[static_cast<std::size_t>(i)] + a >= 0 && eta[static_cast<std::size_t>(i)] + b >= 0)
                                    note(lagrange_integrated(mom, xi, eta, i, a, b), true, "lagrange_integrated/" + key);
                    }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = pointwise <= kTolPointwise && quadrature <= kTolQuadrature && secs < kMaxIdentitySeconds;
    report(1, "exact identities", ok,
           "pointwise max " + fmt("%.2e", pointwise) + " (<= 1e-9), quadrature max " + fmt("%.2e", quadrature) + " (<= 1e-7), " +
               fmt("%.1f", secs) + " s (< 120), largest pointwise in " + worst_name);
}

void coefficient_crosscheck() {
    const auto rec = oracle::coefficient_recursion(6);
    bool exact = true;
    for (int N = 1; N <= 6; ++N)
        for (const auto& t : freq_expansion(N)) {
            const std::int64_t sign = ((N - t.nu) % 2) ? -1 : 1;
            const auto it = rec.find({t.ell, N});
            exact = exact && it != rec.end() && t.coeff == sign * it->second;
        }
    bool cap = true;
    for (int N = 1; N <= 5; ++N)
        for (int xi : {0, 1, 5, 17})
            for (int eta : {0, 2, 9}) {
                const auto e = spatial_expansion(N, xi, eta);
                const auto bound = static_cast<std::size_t>(std::pow(5.0, N));
                cap = cap && e.raw_children <= bound && e.terms.size() <= bound;
            }
    // c_N over the box [0,64]^2 against [0,32]^2: stable means no growth when the range doubles
    double drift = 0.0, cmax = 0.0;
    for (int N = 1; N <= 3; ++N) {
        double half = 0.0, full = 0.0;
        for (int a = 0; a <= 64; ++a)
            for (int b = 0; b <= 64; ++b) {
                const double r = spatial_expansion(N, a, b).bound_ratio();
                full = std::max(full, r);
                if (a <= 32 && b <= 32) half = std::max(half, r);
            }
        drift = std::max(drift, full / half);
        cmax = std::max(cmax, full);
    }
    const bool ok = exact && cap && drift <= kCoefficientDrift && std::isfinite(cmax);
    report(2, "coefficient cross-validation", ok,
           std::string("closed form == recursion (N<=6): ") + (exact ? "yes" : "no") + ", 5^N cap: " + (cap ? "yes" : "no") +
               ", c_N drift [0,64] vs [0,32] " + fmt("%.4f", drift) + " (<= 1.10), max c_N " + fmt("%.3f", cmax));
}

void parseval() {
    double gram = 0.0, pars = 0.0;
    std::mt19937_64 g(17);
    std::normal_distribution<double> Nd;
    for (int n = 1; n <= 2; ++n)
        for (int L : {10, 20, 40}) {
            const BasisSpec spec(n, L);
            const TensorRule rule(n, default_quadrature_size(L));
            gram = std::max(gram, quadrature_self_test(spec, rule));
            const Eigen::MatrixXd H = hermite_matrix(spec, rule);
            const NodeSet nodes = collect_nodes(rule);
            Eigen::VectorXcd c(static_cast<Eigen::Index>(spec.size()));
            for (Eigen::Index p = 0; p < c.size(); ++p) c[p] = cd(Nd(g), Nd(g));
            const Eigen::VectorXcd f = H.cast<cd>() * c;
            double energy = 0.0;
            for (Eigen::Index q = 0; q < f.size(); ++q) energy += nodes.lebesgue[q] * std::norm(f[q]);
            pars = std::max(pars, std::abs(energy - c.squaredNorm()) / c.squaredNorm());
            const Eigen::VectorXcd back = H.transpose().cast<cd>() * (nodes.lebesgue.cast<cd>().asDiagonal() * f);
            pars = std::max(pars, (back - c).cwiseAbs().maxCoeff() / c.cwiseAbs().maxCoeff());
        }
    report(3, "orthonormality and Parseval", gram <= kTolGram && pars <= kTolParseval,
           "Gram deviation " + fmt("%.2e", gram) + " (<= 1e-10), Parseval " + fmt("%.2e", pars) + " (<= 1e-10), n<=2, lambda<=40");
}

void kernel_decay() {
    bool ok = true;
    std::string d;
    for (int n = 1; n <= 2; ++n) {
        const auto sw = kernel_decay_sweep(builtin_symbol("identity"), n, {3, 4, 5, 6, 7}, 2);
        for (const auto& s : sw) {
            const bool good = std::abs(s.fit.slope - s.predicted) <= kSlopeTol && s.fit.rms <= kMaxFitResidual;
            ok = ok && good;
            d += " n=" + std::to_string(n) + ",M=" + std::to_string(s.moment) + ": " + fmt("%.3f", s.fit.slope) + " vs " +
                 fmt("%.1f", s.predicted) + " rms " + fmt("%.3f", s.fit.rms) + ";";
        }
    }
    report(4, "kernel decay slopes", ok, "tol +-0.4, rms <= 0.5;" + d);
}

void cks() {
    const Symbol osc = builtin_symbol("oscillatory", {{"delta", 0.5}});
    const int jmax = 6;
    const auto spec = std::make_shared<const BasisSpec>(1, shell_degrees(jmax, 1).hi);
    const auto L = cks_ledger(osc, jmax, spec, TensorRule(1, default_quadrature_size(spec->max_degree())));
    double zero = 0.0;
    for (int a = 0; a <= jmax; ++a)
        for (int b = 0; b <= jmax; ++b)
            if (std::abs(a - b) >= 2) zero = std::max(zero, L.star_right(a, b));
    const auto spec2 = std::make_shared<const BasisSpec>(2, shell_degrees(3, 2).hi);
    const auto L2 = cks_ledger(builtin_symbol("sin_gaussian"), 3, spec2, TensorRule(2, default_quadrature_size(spec2->max_degree())));
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            if (std::abs(a - b) >= 2) zero = std::max(zero, L2.star_right(a, b));
    const bool ok = zero <= kZeroBlock && L.epsilon > 0.0 && L.decay.rms <= kMaxFitResidual && L.uniformity < kUniformity;
    report(5, "almost orthogonality", ok,
           "max ||T_j T_k*|| (|j-k|>=2) " + fmt("%.1e", zero) + " (<= 1e-12), epsilon " + fmt("%.3f", L.epsilon) + " rms " +
               fmt("%.3f", L.decay.rms) + ", C0 " + fmt("%.4f", L.c0) + ", block norm max/min j=3..6 " + fmt("%.4f", L.uniformity) +
               " (< 1.25), reference epsilon " + fmt("%.2f", reference_epsilon(1, 0.5)));
}

void projection() {
    const auto s = projection_bound_sweep({4, 8, 16, 32, 64, 128, 256}, 1);
    const auto z = projection_point(0, 1);
    const bool ok = s.c_ratio <= kProjectionRatio && s.c_trend.slope <= kProjectionTrend && s.theta_min > 0.0 &&
                    std::abs(z.theta - 0.5) <= kThetaZeroTol;
    report(6, "projection bounds", ok,
           "C max/min " + fmt("%.3f", s.c_ratio) + " (<= 3), log-log trend " + fmt("%.4f", s.c_trend.slope) + " (<= 0.1), min theta " +
               fmt("%.4f", s.theta_min) + " (> 0), N=0 theta " + fmt("%.4f", z.theta) + " (0.5 +- 0.05)");
}

void transfer() {
    double entry = 0.0, sv = 0.0;
    for (const auto& key : registry_keys()) {
        const auto spec = std::make_shared<const BasisSpec>(1, 12);
        const TensorRule rule(1, default_quadrature_size(12));
        const Symbol s = builtin_symbol(key);
        const auto H = assemble_matrix(s, spec, rule), G = gaussian_transfer_matrix(s, spec, rule);
        entry = std::max(entry, (H.m - G.m).cwiseAbs().maxCoeff());
        sv = std::max(sv, std::abs(oracle::spectral_norm(H.m) - oracle::spectral_norm(G.m)));
    }
    report(7, "Gaussian transfer", entry <= kTolTransfer && sv <= kTolTransfer,
           "max entry difference " + fmt("%.2e", entry) + ", top singular value difference " + fmt("%.2e", sv) + " (<= 1e-10), " +
               std::to_string(registry_keys().size()) + " symbols, n=1, lambda=12");
}

void plateaus() {
    bool ok = true;
    std::string d;
    for (const auto& key : registry_keys()) {
        const Symbol s = builtin_symbol(key);
        if (!class_certified(s, 1)) {
            d += " " + key + ": not certified;";
            continue;
        }
        const auto sw = boundedness_sweep(s, 1, {8, 16, 32, 64});
        const double growth = sw.tail_growth();
        ok = ok && growth < kPlateau;
        d += " " + key + " " + fmt("%+.4f", growth) + ";";
    }
    double pmax = 0.0;
    for (int n = 1; n <= 2; ++n)
        for (const auto& p : boundedness_sweep(builtin_symbol("power", {{"m", -2}}), n, {8, 16, 32}).points) pmax = std::max(pmax, p.norm);
    ok = ok && pmax <= 1.0 + 1e-10;
    double lo = 1e300, hi = 0.0;
    for (int L : {8, 16, 32}) {
        const auto c = sobolev_criterion_check(builtin_symbol("sobolev_x"), std::make_shared<const BasisSpec>(1, L),
                                               TensorRule(1, default_quadrature_size(L)));
        lo = std::min(lo, c.ratio);
        hi = std::max(hi, c.ratio);
    }
    ok = ok && hi / lo <= kSobolevSpread;
    report(8, "boundedness plateaus", ok,
           "growth 32->64 (< 0.10):" + d + " power(m=-2) max norm " + fmt("%.12f", pmax) + " (<= 1+1e-10), sobolev ratio max/min " +
               fmt("%.4f", hi / lo) + " (<= 1.10)");
}

}  // namespace

int main() {
    exact_identities();
    coefficient_crosscheck();
    parseval();
    kernel_decay();
    cks();
    projection();
    transfer();
    plateaus();
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
