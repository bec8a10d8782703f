#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "platelab/numerics/bessel.hpp"
#include "platelab/numerics/generalized_eigen.hpp"
#include "platelab/numerics/jet.hpp"
#include "platelab/numerics/quadrature.hpp"
#include "platelab/numerics/roots.hpp"
#include "platelab/numerics/summation.hpp"

using namespace platelab;
using namespace platelab::numerics;

namespace {

constexpr double pi = std::numbers::pi;

// Independent oracles: plain ascending series in extended precision.
long double series_j(int n, long double x) {
    long double t = 1.0L;
    for (int k = 1; k <= n; ++k) t *= x / 2 / k;
    long double s = t;
    for (int k = 0; k < 200; ++k) {
        t *= -(x * x / 4) / ((k + 1.0L) * (k + 1.0L + n));
        s += t;
    }
    return s;
}

long double series_i(int n, long double x) {
    long double t = 1.0L;
    for (int k = 1; k <= n; ++k) t *= x / 2 / k;
    long double s = t;
    for (int k = 0; k < 200; ++k) {
        t *= (x * x / 4) / ((k + 1.0L) * (k + 1.0L + n));
        s += t;
    }
    return s;
}

// derivative of the J / I series, termwise
long double series_dj(int n, long double x) {
    if (n == 0) return -series_j(1, x);
    return 0.5L * (series_j(n - 1, x) - series_j(n + 1, x));
}
long double series_di(int n, long double x) {
    if (n == 0) return series_i(1, x);
    return 0.5L * (series_i(n - 1, x) + series_i(n + 1, x));
}

double bisect_series_j0(double a, double b) {
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if ((series_j(0, a) > 0) == (series_j(0, m) > 0))
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(GaussLegendre, OnePointIsMidpoint) {
    const auto q = gauss_legendre(1);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_DOUBLE_EQ(q.nodes[0], 0.0);
    EXPECT_DOUBLE_EQ(q.weights[0], 2.0);
}

TEST(GaussLegendre, TwoPointRule) {
    const auto q = gauss_legendre(2);
    EXPECT_NEAR(q.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(q.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(q.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(q.weights[1], 1.0, 1e-15);
}

TEST(GaussLegendre, EightPointIntegratesX8) {
    const auto q = gauss_legendre(8);
    EXPECT_NEAR(q.integrate([](double x) { return std::pow(x, 8); }), 2.0 / 9.0, 1e-14);
}

TEST(GaussLegendre, ExactnessDegreeAndInvariants) {
    for (int n : {1, 3, 7, 16, 48}) {
        const auto q = gauss_legendre(n);
        double wsum = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            EXPECT_GT(q.weights[i], 0.0);
            if (i > 0) { EXPECT_LT(q.nodes[i - 1], q.nodes[i]); }
            wsum += q.weights[i];
        }
        EXPECT_NEAR(wsum, 2.0, 1e-14);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(q.integrate([p](double x) { return std::pow(x, p); }), exact, 1e-13)
                << "n=" << n << " p=" << p;
        }
    }
}

TEST(PeriodicTrapezoid, Examples) {
    EXPECT_NEAR(periodic_trapezoid(4).integrate([](double) { return 1.0; }), 2 * pi, 1e-15);
    EXPECT_NEAR(periodic_trapezoid(8).integrate([](double t) { return std::cos(t) * std::cos(t); }), pi,
                1e-14);
    EXPECT_NEAR(
        periodic_trapezoid(16).integrate([](double t) { return std::cos(3 * t) * std::sin(5 * t); }),
        0.0, 1e-14);
}

TEST(PeriodicTrapezoid, TrigExactness) {
    const int m = 12;
    const auto q = periodic_trapezoid(m);
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    EXPECT_NEAR(wsum, 2 * pi, 1e-14);
    for (int a = 0; a < m / 2; ++a)
        for (int b = 0; a + b < m; ++b) {
            const double exact = (a == b) ? (a == 0 ? 2 * pi : pi) : 0.0;
            EXPECT_NEAR(q.integrate([&](double t) { return std::cos(a * t) * std::cos(b * t); }), exact,
                        1e-13);
        }
}

TEST(Bessel, ValuesAtOrigin) {
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1, 0.0), 0.0);
    EXPECT_EQ(bessel_i_scaled(0, 0.0), 1.0);
}

TEST(Bessel, FirstZeroOfJ0) {
    const double z = bisect_series_j0(2.0, 3.0);
    EXPECT_NEAR(z, 2.404825557695773, 1e-14);
    EXPECT_NEAR(bessel_j(0, 2.404825557695773), 0.0, 1e-12);
}

TEST(Bessel, ScaledIAtOne) {
    long double s = 0.0L, t = 1.0L;
    for (int k = 0; k < 40; ++k) {
        s += t;
        t *= 0.25L / ((k + 1.0L) * (k + 1.0L));
    }
    const double oracle = static_cast<double>(std::exp(-1.0L) * s);
    EXPECT_NEAR(oracle, 0.46575960759364, 1e-13);
    EXPECT_NEAR(bessel_i_scaled(0, 1.0), oracle, 1e-12);
}

TEST(Bessel, ScaledI1Positive) {
    for (double x = 0.01; x < 60.0; x *= 1.3) EXPECT_GT(bessel_i_scaled(1, x), 0.0);
}

TEST(Bessel, AgreesWithSeriesAcrossRegimes) {
    for (int n : {0, 1, 2, 5, 10})
        for (double x : {0.3, 4.0, 11.9, 12.1, 15.0, 19.5}) {
            const double j = static_cast<double>(series_j(n, x));
            const double i = static_cast<double>(std::exp(-(long double)x) * series_i(n, x));
            EXPECT_NEAR(bessel_j(n, x), j, 1e-12) << n << " " << x;
            EXPECT_NEAR(bessel_i_scaled(n, x), i, 1e-12 * std::abs(i)) << n << " " << x;
        }
}

TEST(Bessel, DerivativesMatchFiniteDifferences) {
    const double h = 1e-4;
    for (int n : {0, 1, 3})
        for (double x : {1.5, 7.0, 14.0})
            for (int d = 1; d <= 3; ++d) {
                const double fd_j = (bessel_j(n, x + h, d - 1) - bessel_j(n, x - h, d - 1)) / (2 * h);
                EXPECT_NEAR(bessel_j(n, x, d), fd_j, 1e-7);
                // scaled: d/dx [e^{-x} I^{(d-1)}] = e^{-x} I^{(d)} - e^{-x} I^{(d-1)}
                const double fd_i =
                    (bessel_i_scaled(n, x + h, d - 1) - bessel_i_scaled(n, x - h, d - 1)) / (2 * h) +
                    bessel_i_scaled(n, x, d - 1);
                EXPECT_NEAR(bessel_i_scaled(n, x, d), fd_i, 1e-7);
            }
}

TEST(Bessel, WronskianMatchesSeries) {
    for (int n = 0; n <= 10; ++n)
        for (double x = 0.5; x <= 20.0; x += 1.25) {
            const double e = std::exp(x);
            const double w = bessel_j(n, x) * bessel_i_scaled(n, x, 1) * e -
                             bessel_j(n, x, 1) * bessel_i_scaled(n, x) * e;
            const long double ws = series_j(n, x) * series_di(n, x) - series_dj(n, x) * series_i(n, x);
            ASSERT_TRUE(std::isfinite(w));
            EXPECT_NEAR(w, static_cast<double>(ws), 1e-10 * std::max(1.0L, std::abs(ws)))
                << "n=" << n << " x=" << x;
        }
}

TEST(Bessel, RejectsNegativeArgument) {
    EXPECT_THROW(bessel_j(0, -1.0), InvalidInput);
    EXPECT_THROW(bessel_i_scaled(0, -1.0), InvalidInput);
}

TEST(FindRoots, SquareRootOfTwo) {
    const auto r = find_roots([](double x) { return x * x - 2.0; }, 0.0, 2.0, 10, 1e-14);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], std::sqrt(2.0), 1e-14 * std::sqrt(2.0));
}

TEST(FindRoots, SineOnOneToSeven) {
    const auto r = find_roots([](double x) { return std::sin(x); }, 1.0, 7.0, 100, 1e-15);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], pi, 1e-14);
    EXPECT_NEAR(r[1], 2 * pi, 1e-14);
}

TEST(FindRoots, ZerosOfJ0AgainstSeriesOracle) {
    const auto r = find_roots([](double x) { return bessel_j(0, x); }, 0.0, 10.0, 400, 1e-15);
    ASSERT_EQ(r.size(), 3u);  // 2.405, 5.520, 8.654
    EXPECT_NEAR(r[0], bisect_series_j0(2.0, 3.0), 1e-13);
    EXPECT_NEAR(r[1], bisect_series_j0(5.0, 6.0), 1e-13);
    EXPECT_NEAR(r[1], 5.520078110286311, 1e-13);
}

TEST(FindRoots, ResidualAtRootsIsSmall) {
    auto f = [](double x) { return std::cos(x) - 0.3 * x; };
    const auto r = find_roots(f, -10.0, 10.0, 200, 1e-15);
    const double scale = std::max(std::abs(f(-10.0)), std::abs(f(10.0)));
    for (double x : r) EXPECT_LE(std::abs(f(x)), 1e-14 * scale);
}

TEST(FindRoots, NoSignChangeAndNonFinite) {
    EXPECT_TRUE(find_roots([](double x) { return x * x + 1.0; }, -1.0, 1.0, 10, 1e-12).empty());
    EXPECT_THROW(find_roots([](double x) { return 1.0 / x; }, 0.0, 1.0, 10, 1e-12), SolverFailure);
}

TEST(SymGeneralizedEig, DiagonalCase) {
    SymMatrix a(2), b(2);
    a(0, 0) = 1;
    a(1, 1) = 2;
    b(0, 0) = b(1, 1) = 1;
    const auto e = sym_generalized_eig(a, b);
    EXPECT_NEAR(e.values[0], 1.0, 1e-15);
    EXPECT_NEAR(e.values[1], 2.0, 1e-15);
    EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-15);
}

TEST(SymGeneralizedEig, TwoByTwoClosedForm) {
    SymMatrix a(2), b(2);
    a(0, 0) = a(1, 1) = 2;
    a(0, 1) = 1;
    b(0, 0) = b(1, 1) = 1;
    const auto e = sym_generalized_eig(a, b);
    EXPECT_NEAR(e.values[0], 1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 3.0, 1e-14);
    EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(e.vectors(0, 0), -e.vectors(1, 0), 1e-14);
    EXPECT_NEAR(e.vectors(0, 1), e.vectors(1, 1), 1e-14);
}

TEST(SymGeneralizedEig, RandomResidualsAndBOrthonormality) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6;
        SymMatrix a(n), b(n);
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                a(i, j) = g(rng);
                double s = (i == j) ? 1.0 : 0.0;
                for (std::size_t k = 0; k < n; ++k) s += m(k, i) * m(k, j);
                b(i, j) = s;
            }
        const auto e = sym_generalized_eig(a, b);
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) { EXPECT_LE(e.values[k - 1], e.values[k]); }
            const auto w = e.vectors.column(k);
            const auto aw = multiply(a, w), bw = multiply(b, w);
            double res = 0.0, nw = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                res += std::pow(aw[i] - e.values[k] * bw[i], 2);
                nw += w[i] * w[i];
            }
            EXPECT_LE(std::sqrt(res / nw), 1e-10);
            for (std::size_t l = 0; l < n; ++l)
                EXPECT_NEAR(bilinear(b, w, e.vectors.column(l)), k == l ? 1.0 : 0.0, 1e-10);
        }
    }
}

TEST(SymGeneralizedEig, IndefiniteBNamesPivot) {
    SymMatrix a(3), b(3);
    b(0, 0) = 1;
    b(1, 1) = -1;
    b(2, 2) = 1;
    try {
        sym_generalized_eig(a, b);
        FAIL() << "expected failure";
    } catch (const SolverFailure& e) {
        EXPECT_NE(std::string(e.what()).find("pivot 1"), std::string::npos);
    }
}

TEST(PairwiseSum, DeterministicAndAccurate) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 1.0);
    double naive = 0.0;
    for (double x : v) naive += x;
    EXPECT_NEAR(pairwise_sum(v), naive, 1e-12);
    EXPECT_EQ(pairwise_sum(v), pairwise_sum(v));
}

TEST(Jet, PolynomialDerivativesAreExact) {
    // f = x^3 y - 2 x y^2 at (0.7, -1.3)
    const double x0 = 0.7, y0 = -1.3;
    const auto x = Jet<4>::variable_x(x0), y = Jet<4>::variable_y(y0);
    const auto f = x * x * x * y - 2.0 * x * y * y;
    EXPECT_NEAR(f.value(), x0 * x0 * x0 * y0 - 2 * x0 * y0 * y0, 1e-14);
    EXPECT_NEAR(f.d(1, 0), 3 * x0 * x0 * y0 - 2 * y0 * y0, 1e-14);
    EXPECT_NEAR(f.d(1, 1), 3 * x0 * x0 - 4 * y0, 1e-14);
    EXPECT_NEAR(f.d(3, 1), 6.0, 1e-14);
    EXPECT_NEAR(f.d(0, 2), -4 * x0, 1e-14);
}

TEST(Jet, CompositionMatchesClosedForms) {
    const double x0 = 0.4, y0 = 0.9;
    const auto x = Jet<3>::variable_x(x0), y = Jet<3>::variable_y(y0);
    const auto r = sqrt(x * x + y * y);
    const double r0 = std::hypot(x0, y0);
    EXPECT_NEAR(r.d(1, 0), x0 / r0, 1e-14);
    EXPECT_NEAR(r.d(2, 0), y0 * y0 / std::pow(r0, 3), 1e-14);
    const auto th = polar_angle(x, y);
    EXPECT_NEAR(th.value(), std::atan2(y0, x0), 1e-15);
    EXPECT_NEAR(th.d(1, 0), -y0 / (r0 * r0), 1e-14);
    EXPECT_NEAR(th.d(0, 1), x0 / (r0 * r0), 1e-14);
    EXPECT_NEAR(th.laplacian(), 0.0, 1e-13);  // θ is harmonic
    const auto e = exp(x) * cos(y);  // harmonic
    EXPECT_NEAR(e.laplacian(), 0.0, 1e-13);
    EXPECT_NEAR(e.d(2, 1), -std::exp(x0) * std::sin(y0), 1e-13);
    const auto q = (x / y);
    EXPECT_NEAR(q.d(0, 2), 2 * x0 / std::pow(y0, 3), 1e-13);
}
