#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "platelab/reference/disk.hpp"
#include "platelab/ritz/solver.hpp"

using namespace platelab;
using namespace platelab::ritz;
using forms::ProblemKind;

namespace {
const StarChart unit_disk = StarChart::disk(1.0);
StarChart oval() { return StarChart(1.0, {0.0, 0.05}); }

std::vector<double> lowest(const std::vector<EigenCluster<RitzSolution>>& cs) {
    std::vector<double> out;
    for (const auto& c : cs)
        for (const auto& m : c.members) out.push_back(m.lambda);
    return out;
}
}  // namespace

TEST(Ritz, DirichletMatchesDiskReference) {
    const auto problem = BoundaryProblem::of(ProblemKind::dirichlet);
    const auto ritz = ritz_spectrum({0.0, 0.3}, problem, default_basis(unit_disk, problem, 12), 1);
    const auto ref = reference::disk_spectrum({0.0, 0.3}, problem, 1.0, 1);
    EXPECT_NEAR(ritz[0].lambda / ref[0].lambda, 1.0, 1e-6);
    EXPECT_NEAR(ritz[0].lambda, 104.3631, 1e-3);
}

TEST(Ritz, DiskAgreementAllProblems) {
    const PlateParams p{1.0, 0.3};
    for (auto kind : forms::all_problems) {
        const auto problem = BoundaryProblem::of(kind);
        const auto ritz = ritz_spectrum(p, problem, default_basis(unit_disk, problem, 16), 5);
        const auto ref = reference::disk_spectrum(p, problem, 1.0, 5);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_EQ(ritz[i].size(), ref[i].size()) << to_string(kind) << " cluster " << i;
            EXPECT_NEAR(ritz[i].lambda / ref[i].lambda, 1.0, 1e-4) << to_string(kind) << " cluster " << i;
            // Ritz values are upper bounds
            EXPECT_GE(ritz[i].lambda, ref[i].lambda * (1 - 1e-10));
        }
    }
}

TEST(Ritz, NeumannQuotientedSpectrumIsPositive) {
    const auto problem = BoundaryProblem::of(ProblemKind::neumann);
    const auto cs = ritz_spectrum({1.0, 0.3}, problem, default_basis(unit_disk, problem, 8), 3);
    EXPECT_GT(cs[0].lambda, 1e-3);
}

TEST(Ritz, SteklovBPOnOvalDecreasesWithDegree) {
    const auto problem = BoundaryProblem::of(ProblemKind::steklov_bp);
    std::vector<double> prev;
    for (int d : {6, 8, 10, 12}) {
        const auto cur = lowest(ritz_spectrum({1.0, 0.3}, problem, default_basis(oval(), problem, d), 4));
        for (double v : cur) EXPECT_GT(v, 0.0);
        for (std::size_t k = 0; k < std::min(prev.size(), cur.size()); ++k) EXPECT_LE(cur[k], prev[k] + 1e-12);
        prev = cur;
    }
}

TEST(Ritz, ClampedOvalConvergesGeometrically) {
    const StarChart peanut(1.0, {0.0, 0.1});
    const auto bp = forms::BoundaryProblem::of(ProblemKind::dirichlet);
    auto lambda1 = [&](int degree) {
        return ritz_spectrum({1.0, 0.3}, bp, default_basis(peanut, bp, degree), 1).front().lambda;
    };
    const double coarse = lambda1(12), fine = lambda1(20);
    EXPECT_LE(std::abs(coarse - fine) / fine, 1e-6);
}

TEST(Ritz, MinMaxMonotonicityUnderEnrichment) {
    const PlateParams p{0.5, 0.2};
    for (auto kind : forms::all_problems) {
        const auto problem = BoundaryProblem::of(kind);
        std::vector<double> prev;
        for (int d = 4; d <= 10; d += 2) {
            const auto spec = ritz_solve(p, problem, std::make_shared<RitzBasis>(default_basis(oval(), problem, d)), 1);
            const auto& cur = spec.eigenvalues;
            for (std::size_t k = 0; k < std::min<std::size_t>(6, std::min(prev.size(), cur.size())); ++k)
                EXPECT_LE(cur[k], prev[k] + 1e-12) << to_string(kind) << " d=" << d << " k=" << k;
            prev = cur;
        }
    }
}

TEST(Ritz, SolutionsArePNormalizedAndOrthogonal) {
    const PlateParams p{1.0, 0.3};
    for (auto kind : forms::all_problems) {
        const auto problem = BoundaryProblem::of(kind);
        const auto basis = default_basis(oval(), problem, 8);
        const auto cs = ritz_spectrum(p, problem, basis, 3);
        const auto full = forms::assemble(oval(), p, problem, basis, {}, {false, false});
        for (const auto& c : cs)
            for (std::size_t i = 0; i < c.size(); ++i) {
                const auto& u = c.members[i].coeffs;
                const double pu = numerics::bilinear(full.P, u, u);
                EXPECT_NEAR(pu, 1.0, 1e-10);
                const double ju = numerics::bilinear(full.j_form(problem.form_index), u, u);
                EXPECT_NEAR(pu / ju / c.members[i].lambda, 1.0, 1e-8);
                for (std::size_t j = 0; j < i; ++j)
                    EXPECT_NEAR(numerics::bilinear(full.P, u, c.members[j].coeffs), 0.0, 1e-9);
            }
    }
}

TEST(Ritz, KernelAppearsWithoutQuotient) {
    const PlateParams p{1.0, 0.3};
    for (auto kind : {ProblemKind::neumann, ProblemKind::steklov_bp}) {
        const auto problem = BoundaryProblem::of(kind);
        RitzOptions opts;
        opts.quotient = false;
        const auto cs = ritz_spectrum(p, problem, default_basis(unit_disk, problem, 8), 2, opts);
        EXPECT_LE(std::abs(cs[0].lambda), 1e-8);
        EXPECT_LE(constant_deviation(cs[0].members[0]), 1e-6);
        const auto q = ritz_spectrum(p, problem, default_basis(unit_disk, problem, 8), 1);
        EXPECT_NEAR(cs[1].lambda / q[0].lambda, 1.0, 1e-8);
    }
}

TEST(RitzEval, EssentialConstraintsAreExact) {
    const PlateParams p{1.0, 0.3};
    const auto chart = oval();
    const geometry::BoundaryGrid grid(chart, 64);
    for (auto kind : {ProblemKind::navier, ProblemKind::steklov_ks, ProblemKind::dirichlet}) {
        const auto problem = BoundaryProblem::of(kind);
        const auto cs = ritz_spectrum(p, problem, default_basis(chart, problem, 8), 2);
        for (const auto& c : cs)
            for (const auto& m : c.members)
                for (std::size_t q = 0; q < grid.size(); ++q) {
                    const auto& f = grid.frame(q);
                    const auto v = ritz_eval(m, f.point[0], f.point[1]);
                    EXPECT_NEAR(v.v, 0.0, 1e-12);
                    if (kind == ProblemKind::dirichlet) {
                        EXPECT_NEAR(v.grad[0] * f.normal[0] + v.grad[1] * f.normal[1], 0.0, 1e-12);
                    }
                }
    }
}

TEST(RitzEval, TraceIdentityAndExteriorRejection) {
    const auto problem = BoundaryProblem::of(ProblemKind::neumann);
    const auto cs = ritz_spectrum({1.0, 0.3}, problem, default_basis(oval(), problem, 8), 2);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.65, 0.65);
    for (int i = 0; i < 50; ++i) {
        const auto v = ritz_eval(cs[1].members[0], u(rng), u(rng));
        EXPECT_NEAR(v.hess[0] + v.hess[3], v.lap, 1e-11);
    }
    EXPECT_THROW(ritz_eval(cs[0].members[0], 1.2, 0.0), InvalidInput);
}

TEST(Ritz, RejectsBadRequests) {
    const auto problem = BoundaryProblem::of(ProblemKind::navier);
    EXPECT_THROW(ritz_spectrum({0.0, 0.3}, problem, default_basis(unit_disk, problem, 2), 10), InvalidInput);
    EXPECT_THROW(ritz_spectrum({0.0, 0.3}, problem, default_basis(unit_disk, BoundaryProblem::of(ProblemKind::dirichlet), 4), 1),
                 InvalidInput);
}
