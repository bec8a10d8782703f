#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "platelab/shape/density.hpp"
#include "platelab/shape/families.hpp"
#include "platelab/shape/fd.hpp"
#include "platelab/shape/lemmas.hpp"
#include "platelab/shape/radiality.hpp"

using namespace platelab;
using namespace platelab::shape;
using forms::BoundaryProblem;
using forms::PlateParams;
using geometry::NormalPerturbation;
using geometry::StarChart;

namespace {
constexpr double pi = std::numbers::pi;

const StarChart unit_disk = StarChart::disk(1.0);
const StarChart oval(1.0, {0.0, 0.1});

std::vector<reference::EigenCluster<reference::DiskMode>> disk_clusters(ProblemKind k, PlateParams p,
                                                                        std::size_t count, double radius = 1.0) {
    return reference::disk_spectrum(p, BoundaryProblem::of(k), radius, count);
}

// Brute force over all subsets.
double subset_products(const std::vector<double>& x, int s) {
    const int n = static_cast<int>(x.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != s) continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) p *= x[i];
        total += p;
    }
    return total;
}
}  // namespace

TEST(ElementarySymmetric, Examples) {
    EXPECT_DOUBLE_EQ(elementary_symmetric({2, 3}, 1), 5.0);
    EXPECT_DOUBLE_EQ(elementary_symmetric({2, 3}, 2), 6.0);
    EXPECT_DOUBLE_EQ(elementary_symmetric({1, 1, 1}, 2), 3.0);
    EXPECT_THROW(elementary_symmetric({1, 2}, 0), InvalidInput);
    EXPECT_THROW(elementary_symmetric({1, 2}, 3), InvalidInput);
}

TEST(ElementarySymmetric, MatchesSubsetEnumeration) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(1 + trial % 7);
        for (double& v : x) v = d(rng);
        for (int s = 1; s <= static_cast<int>(x.size()); ++s)
            EXPECT_NEAR(elementary_symmetric(x, s), subset_products(x, s), 1e-11 * (1.0 + std::abs(subset_products(x, s))));
    }
}

TEST(VolumeDerivative, Examples) {
    EXPECT_NEAR(volume_derivative(unit_disk, NormalPerturbation::constant(1.0)), 2.0 * pi, 1e-13);
    EXPECT_NEAR(volume_derivative(unit_disk, NormalPerturbation::cosine(2)), 0.0, 1e-13);
    EXPECT_NEAR(volume_derivative(StarChart::disk(2.0), NormalPerturbation::constant(1.0)), 4.0 * pi, 1e-12);
}

TEST(VolumeDerivative, MatchesAreaFiniteDifference) {
    const auto f = NormalPerturbation::sine(3, 0.7);
    auto area = [&](double t) { return geometry::volume(geometry::deformation(oval, f, t)); };
    const auto fd = fd_derivative(area, 1);
    EXPECT_NEAR(volume_derivative(oval, f), fd.value, 1e-10);
}

TEST(GDensity, DirichletIsNonPositive) {
    const auto cs = disk_clusters(ProblemKind::dirichlet, {0.0, 0.3}, 3);
    for (const auto& c : cs) {
        const auto g = g_density(BoundaryProblem::of(ProblemKind::dirichlet), {0.0, 0.3}, c, unit_disk);
        for (const auto& row : g.values)
            for (double v : row) EXPECT_LE(v, 0.0);
        EXPECT_EQ(g.theta.size(), static_cast<std::size_t>(geometry::default_grid_size));
    }
}

TEST(GDensity, NeumannSumIsRotationInvariant) {
    const PlateParams p{1.0, 0.3};
    const auto cs = disk_clusters(ProblemKind::neumann, p, 1);
    const auto& c = cs.front();
    ASSERT_EQ(c.size(), 2u);
    const auto g = g_density(BoundaryProblem::of(ProblemKind::neumann), p, c, unit_disk);
    for (double shift : {0.0123, 0.5, 1.7}) {
        for (int j = 0; j < 16; ++j) {
            const double th = 2.0 * pi * j / 16 + shift;
            double sum = 0.0;
            for (const auto& m : c.members) {
                const auto v = reference::disk_mode_eval(m, 1.0, th);
                double hess2 = 0.0;
                for (double h : v.hess) hess2 += h * h;
                sum += (1 - p.sigma) * hess2 + p.sigma * v.lap * v.lap +
                       p.tau * (v.grad[0] * v.grad[0] + v.grad[1] * v.grad[1]) - c.lambda * v.v * v.v;
            }
            EXPECT_NEAR(sum, g.sum[0], 1e-10 * std::abs(g.sum[0]));
        }
    }
}

TEST(Hadamard, DirichletDilationIsMinusFourLambda) {
    const PlateParams p{0.0, 0.3};
    const auto cs = disk_clusters(ProblemKind::dirichlet, p, 2);
    const double lam = cs[0].lambda;
    const double d = hadamard_derivative(BoundaryProblem::of(ProblemKind::dirichlet), p, unit_disk, cs[0], 1,
                                         NormalPerturbation::constant(1.0));
    EXPECT_NEAR(d, -4.0 * lam, 1e-6 * 4.0 * lam);
    const auto fd = fd_eigen_derivative(disk_dilation_family(p, BoundaryProblem::of(ProblemKind::dirichlet), 1.0, 3),
                                        ClusterSelector::of(cs[0]), 1);
    EXPECT_NEAR(fd.value, -4.0 * lam, 1e-7 * 4.0 * lam);
}

TEST(Hadamard, ZeroPerturbationGivesZero) {
    const PlateParams p{1.0, 0.3};
    for (auto k : forms::all_problems) {
        const auto cs = disk_clusters(k, p, 1);
        EXPECT_EQ(hadamard_derivative(BoundaryProblem::of(k), p, unit_disk, cs[0], 1, NormalPerturbation{}), 0.0);
    }
}

TEST(Hadamard, RejectsOrderOutsideCluster) {
    const PlateParams p{1.0, 0.3};
    const auto cs = disk_clusters(ProblemKind::dirichlet, p, 1);
    EXPECT_THROW(hadamard_derivative(BoundaryProblem::of(ProblemKind::dirichlet), p, unit_disk, cs[0], 0,
                                     NormalPerturbation::constant(1.0)),
                 InvalidInput);
    EXPECT_THROW(hadamard_derivative(BoundaryProblem::of(ProblemKind::dirichlet), p, unit_disk, cs[0], 2,
                                     NormalPerturbation::constant(1.0)),
                 InvalidInput);
}

TEST(Hadamard, NeumannDoubleClusterMatchesRadiusDifference) {
    const PlateParams p{1.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::neumann);
    const auto cs = disk_clusters(ProblemKind::neumann, p, 3);
    ASSERT_EQ(cs[0].size(), 2u);
    const double formula = hadamard_derivative(bp, p, unit_disk, cs[0], 1, NormalPerturbation::constant(1.0));
    // independent: λ₂(R) + λ₃(R) at R = 1 ± h, Richardson in h²
    auto sum_at = [&](double r) {
        const auto c = reference::disk_spectrum(p, bp, r, 1);
        return c[0].members[0].lambda + c[0].members[1].lambda;
    };
    const double h1 = 1e-3, h2 = 5e-4;
    const double d1 = (sum_at(1 + h1) - sum_at(1 - h1)) / (2 * h1);
    const double d2 = (sum_at(1 + h2) - sum_at(1 - h2)) / (2 * h2);
    const double fd = (4.0 * d2 - d1) / 3.0;
    EXPECT_NEAR(formula, fd, 1e-5 * std::abs(fd));
}

TEST(Hadamard, DilationAgreesWithFiniteDifferencesForAllProblems) {
    const PlateParams p{1.0, 0.3};
    const auto f = NormalPerturbation::constant(1.0);
    for (auto k : forms::all_problems) {
        const auto bp = BoundaryProblem::of(k);
        const auto cs = disk_clusters(k, p, 3);
        const auto family = disk_dilation_family(p, bp, 1.0, 4);
        for (const auto& c : cs) {
            const auto g = g_density(bp, p, c, unit_disk);
            for (int s = 1; s <= static_cast<int>(c.size()); ++s) {
                const auto fd = fd_eigen_derivative(family, ClusterSelector::of(c), s);
                EXPECT_LE(relative_error(hadamard_derivative(g, s, f), fd.value), 1e-5)
                    << forms::to_string(k) << " lambda " << c.lambda << " s " << s;
            }
        }
    }
}

TEST(Hadamard, PrintedTensionSignDisagreesWithFiniteDifferences) {
    const auto f = NormalPerturbation::constant(1.0);
    for (auto k : {ProblemKind::navier, ProblemKind::steklov_ks}) {
        const auto bp = BoundaryProblem::of(k);
        for (double tau : {0.0, 1.0}) {
            const PlateParams p{tau, 0.3};
            const auto cs = disk_clusters(k, p, 2);
            const auto fd = fd_eigen_derivative(disk_dilation_family(p, bp, 1.0, 3), ClusterSelector::of(cs[0]), 1);
            const auto printed = g_density(bp, p, cs[0], unit_disk, {{}, DensityVariant::as_printed});
            const double err = relative_error(hadamard_derivative(printed, 1, f), fd.value);
            if (tau == 0.0)
                EXPECT_LE(err, 1e-8);
            else
                EXPECT_GT(err, 1e-2);
        }
    }
}

TEST(Hadamard, VolumePreservingPerturbationsVanishOnDisks) {
    const PlateParams p{1.0, 0.3};
    for (auto k : forms::all_problems) {
        const auto bp = BoundaryProblem::of(k);
        for (const auto& c : disk_clusters(k, p, 3)) {
            const auto g = g_density(bp, p, c, unit_disk);
            for (const auto& f : {NormalPerturbation::cosine(2), NormalPerturbation::sine(3)})
                EXPECT_LE(std::abs(hadamard_derivative(g, 1, f)), 1e-6 * c.lambda * 2.0 * pi);
        }
    }
}

TEST(Hadamard, RitzPipelineOnOvalMatchesFiniteDifferences) {
    const PlateParams p{1.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::neumann);
    const auto f = NormalPerturbation::cosine(2);
    const int degree = 12;
    auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(oval, bp, degree));
    const auto cs = ritz::ritz_solve(p, bp, basis, 2).clusters;
    ASSERT_EQ(cs[0].size(), 1u);
    const double formula = hadamard_derivative(bp, p, oval, cs[0], 1, f);
    const auto fd = fd_eigen_derivative(ritz_family(p, bp, oval, f, degree, 6), ClusterSelector::of(cs[0]), 1);
    EXPECT_LE(relative_error(formula, fd.value), 1e-3);
}

TEST(Hadamard, ClampedRitzPipelineOnOvalMatchesFiniteDifferences) {
    const PlateParams p{1.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::dirichlet);
    const auto f = NormalPerturbation::cosine(2);
    const int degree = 16;
    auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(oval, bp, degree));
    const auto cs = ritz::ritz_solve(p, bp, basis, 1).clusters;
    const double formula = hadamard_derivative(bp, p, oval, cs[0], 1, f);
    const auto fd = fd_eigen_derivative(ritz_family(p, bp, oval, f, degree, 4), ClusterSelector::of(cs[0]), 1);
    EXPECT_LE(relative_error(formula, fd.value), 1e-3);
}

TEST(Hadamard, OrthonormalizationRemovesBasisChoice) {
    const PlateParams p{1.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::navier);
    auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(unit_disk, bp, 10));
    const auto cs = ritz::ritz_solve(p, bp, basis, 2).clusters;
    ASSERT_EQ(cs[1].size(), 2u);
    auto mixed = cs[1];
    const auto& a = cs[1].members[0].coeffs;
    const auto& b = cs[1].members[1].coeffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mixed.members[0].coeffs[i] = 3.0 * (0.6 * a[i] + 0.8 * b[i]);
        mixed.members[1].coeffs[i] = 0.5 * a[i] - 2.0 * b[i];
    }
    const auto g0 = g_density(bp, p, cs[1], unit_disk);
    const auto g1 = g_density(bp, p, mixed, unit_disk);
    for (std::size_t q = 0; q < g0.sum.size(); ++q) EXPECT_NEAR(g0.sum[q], g1.sum[q], 1e-9 * std::abs(g0.sum[q]));
}

TEST(Criticality, BallsAreCritical) {
    for (double tau : {0.5, 1.0, 5.0})
        for (double sigma : {0.0, 0.3}) {
            const PlateParams p{tau, sigma};
            for (auto k : forms::all_problems)
                for (const auto& c : disk_clusters(k, p, 3)) {
                    const auto r = criticality_residual(BoundaryProblem::of(k), p, unit_disk, c);
                    EXPECT_LE(r.rel_residual, 1e-6) << forms::to_string(k) << " tau " << tau << " sigma " << sigma;
                }
        }
}

TEST(Criticality, OvalIsNotCritical) {
    const PlateParams p{1.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::neumann);
    auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(oval, bp, 12));
    const auto cs = ritz::ritz_solve(p, bp, basis, 1).clusters;
    EXPECT_GT(criticality_residual(bp, p, oval, cs[0]).rel_residual, 1e-2);
}

TEST(Radiality, FullClustersAreRadial) {
    const std::vector<double> radii{0.25, 0.5, 0.75, 1.0};
    const PlateParams p{1.0, 0.3};
    for (auto k : forms::all_problems)
        for (const auto& c : disk_clusters(k, p, 3)) {
            for (const auto& prof : radiality_profiles(c, p, unit_disk, radii)) {
                const double tol = c.size() == 1 ? 1e-10 : 1e-8;
                EXPECT_LE(prof.max_variation(), tol) << forms::to_string(k) << " r " << prof.radius;
            }
        }
}

TEST(Radiality, SingleMemberOfDoubleClusterIsNotRadial) {
    const PlateParams p{1.0, 0.3};
    const auto cs = disk_clusters(ProblemKind::navier, p, 2);
    const auto& pair = cs[1];
    ASSERT_EQ(pair.size(), 2u);
    EXPECT_THROW(radiality_profiles(pair, p, unit_disk, {0.5}, {128, {0}}), InvalidInput);
    RadialityOptions opts;
    opts.members = {0};
    opts.allow_partial = true;
    const auto prof = radiality_profiles(pair, p, unit_disk, {0.5}, opts);
    EXPECT_GE(prof[0].variation[0], 0.1);
    EXPECT_THROW(radiality_profiles(pair, p, oval, {0.5}), InvalidInput);
}

TEST(FiniteDifference, ExtrapolationIsExactForPolynomialsInStep) {
    // D(h) = 3 + 2h² − h⁴ from three steps
    std::vector<double> xs{0.04, 0.01, 0.0025}, ys;
    for (double x : xs) ys.push_back(3 + 2 * x - x * x);
    EXPECT_NEAR(extrapolate_to_zero(xs, ys), 3.0, 1e-14);
}

TEST(FiniteDifference, RectangleStretchThroughSquare) {
    const double tau = 0.0;
    const auto family = rectangle_stretch_family(tau, 6);
    const ClusterSelector pair{1, 2};
    // μ₁₂ = π²(e^{−2s} + 4e^{2s}), μ₂₁ = π²(4e^{−2s} + e^{2s}) and their derivatives at 0
    const double pi2 = pi * pi;
    const double mu = 5 * pi2, d12 = 6 * pi2, d21 = -6 * pi2, dd = 20 * pi2;
    const double l1 = 2 * mu * d12 + tau * d12, l2 = 2 * mu * d21 + tau * d21;
    const double ll1 = 2 * d12 * d12 + (2 * mu + tau) * dd, ll2 = 2 * d21 * d21 + (2 * mu + tau) * dd;
    const double lam = mu * mu + tau * mu;

    const auto first = fd_eigen_derivative(family, pair, 1);
    EXPECT_NEAR(first.value, 0.0, 1e-6 * lam);
    const auto second1 = fd_eigen_derivative(family, pair, 1, {{1e-3, 5e-4, 2.5e-4}}, 2);
    EXPECT_NEAR(second1.value, ll1 + ll2, 1e-6 * (ll1 + ll2));
    const double e2 = ll1 * lam + 2 * l1 * l2 + lam * ll2;
    const auto second2 = fd_eigen_derivative(family, pair, 2, {{1e-3, 5e-4, 2.5e-4}}, 2);
    EXPECT_NEAR(second2.value, e2, 1e-6 * std::abs(e2));

    const auto slopes = fd_one_sided_slopes([&](double s) { return family(s)[1]; }, {{1e-4, 5e-5, 2.5e-5}});
    EXPECT_NEAR(slopes.jump(), l2 - l1, 1e-6 * std::abs(l2 - l1));
    EXPECT_NEAR(std::abs(slopes.jump()), 120 * pi2 * pi2, 1e-6 * 120 * pi2 * pi2);
}

TEST(FiniteDifference, LargeStepIsAmbiguous) {
    const PlateParams p{0.0, 0.3};
    const auto bp = BoundaryProblem::of(ProblemKind::dirichlet);
    const auto cs = disk_clusters(ProblemKind::dirichlet, p, 3);
    EXPECT_THROW(fd_eigen_derivative(disk_dilation_family(p, bp, 1.0, 4), ClusterSelector::of(cs[1]), 1, {{0.3}}),
                 AmbiguousCluster);
}

TEST(Lemmas, PresetsSatisfyIdentities) {
    for (Lemma l : all_lemmas)
        for (int k = 1; k <= lemma_preset_count; ++k) {
            const auto r = lemma_check(l, k);
            EXPECT_LE(r.rel_err, 1e-7) << to_string(l) << " preset " << k;
            EXPECT_GT(std::abs(r.lhs_fd), 1e-3) << to_string(l) << " preset " << k;
        }
}

TEST(Lemmas, IdentitiesHoldOnCurvedBoundary) {
    for (Lemma l : all_lemmas) {
        if (l == Lemma::dJ2) continue;
        for (int k = 1; k <= lemma_preset_count; ++k)
            EXPECT_LE(lemma_check(l, k, oval).rel_err, 1e-7) << to_string(l) << " preset " << k;
    }
}

TEST(Lemmas, Examples) {
    const PolynomialField zero;
    for (Lemma l : all_lemmas) {
        const auto q = lemma_preset(l, 3);
        const auto r = lemma_check(l, q.u1, q.u2, zero, unit_disk);
        EXPECT_EQ(r.lhs_fd, 0.0);
        EXPECT_EQ(r.rhs_formula, 0.0);
    }
    const PolynomialField dilation{Polynomial::x(), Polynomial::y()};
    const auto det = lemma_check(Lemma::dDet, Polynomial::constant(1.0), Polynomial::constant(1.0), dilation, unit_disk);
    EXPECT_NEAR(det.lhs_fd, 2 * pi, 1e-10);
    EXPECT_NEAR(det.rhs_formula, 2 * pi, 1e-12);

    // L(t) = π/(1+t) for u = x under x ↦ ((1+t)x, y)
    const PolynomialField stretch{Polynomial::x(), Polynomial{}};
    const auto dl = lemma_check(Lemma::dL, Polynomial::x(), Polynomial::x(), stretch, unit_disk);
    EXPECT_LE(relative_error(dl.rhs_formula, -pi), 1e-12);
    EXPECT_LE(dl.rel_err, 1e-8);
    LemmaOptions printed;
    printed.variant = LemmaVariant::as_printed;
    EXPECT_NEAR(lemma_check(Lemma::dL, Polynomial::x(), Polynomial::x(), stretch, unit_disk, printed).rhs_formula, pi,
                1e-12);
}

TEST(Lemmas, PinnedPreconditionForBoundaryNormalForm) {
    const PolynomialField psi{Polynomial::x(), Polynomial::y()};
    try {
        lemma_check(Lemma::dJ2, Polynomial::x(), Polynomial::x(), psi, unit_disk);
        FAIL() << "expected InvalidInput";
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("max |trace| = 1.000e+00"), std::string::npos) << e.what();
    }
    EXPECT_THROW(lemma_preset(Lemma::dM, 6), InvalidInput);
    EXPECT_THROW(parse_lemma("dQ"), InvalidInput);
    EXPECT_EQ(parse_lemma("dJ3"), Lemma::dJ3);
}

TEST(BoundaryOperators, PolarDivergenceMatchesTraceDifferences) {
    const PlateParams p{1.0, 0.3};
    for (auto k : forms::all_problems)
        for (const auto& c : disk_clusters(k, p, 4))
            for (const auto& m : c.members) {
                if (m.n == 0) continue;
                auto tdn = [&](double th) {
                    const auto v = reference::disk_mode_eval(m, 1.0, th);
                    const double nu[2] = {std::cos(th), std::sin(th)}, t[2] = {-nu[1], nu[0]};
                    return t[0] * (v.hess[0] * nu[0] + v.hess[1] * nu[1]) + t[1] * (v.hess[2] * nu[0] + v.hess[3] * nu[1]);
                };
                for (double th : {0.1, 1.3, 2.9}) {
                    const auto fd = fd_derivative([&](double d) { return tdn(th + d); }, 1, {{1e-3, 5e-4, 2.5e-4}});
                    const double closed = polar_boundary_divergence(m, th);
                    EXPECT_NEAR(closed, fd.value, 1e-6 * (1.0 + std::abs(closed)));
                }
            }
}

TEST(BoundaryOperators, SecondNormalDerivativeMatchesRadialDifferences) {
    const PlateParams p{1.0, 0.3};
    for (const auto& c : disk_clusters(ProblemKind::steklov_ks, p, 3))
        for (const auto& m : c.members)
            for (double th : {0.2, 2.0}) {
                auto vn = [&](double r) {
                    const auto v = reference::disk_mode_eval(m, r, th);
                    return v.grad[0] * std::cos(th) + v.grad[1] * std::sin(th);
                };
                const auto v = reference::disk_mode_eval(m, 1.0, th);
                const double nu[2] = {std::cos(th), std::sin(th)};
                const double vnn = nu[0] * (v.hess[0] * nu[0] + v.hess[1] * nu[1]) + nu[1] * (v.hess[2] * nu[0] + v.hess[3] * nu[1]);
                // one-sided, extrapolated: the mode lives on r ≤ 1
                std::vector<double> hs{2e-3, 1e-3, 5e-4}, ds;
                for (double h : hs) ds.push_back((3 * vn(1.0) - 4 * vn(1.0 - h) + vn(1.0 - 2 * h)) / (2 * h));
                std::vector<double> h2;
                for (double h : hs) h2.push_back(h * h);
                const double fd = extrapolate_to_zero(h2, ds);
                EXPECT_NEAR(2 * vn(1.0) * vnn, 2 * vn(1.0) * fd, 1e-6 * (1.0 + std::abs(2 * vn(1.0) * vnn)));
            }
}
