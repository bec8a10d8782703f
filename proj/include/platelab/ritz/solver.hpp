#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "platelab/forms/assemble.hpp"
#include "platelab/forms/basis.hpp"
#include "platelab/forms/problem.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/generalized_eigen.hpp"
#include "platelab/reference/cluster.hpp"
#include "platelab/reference/disk.hpp"

namespace platelab::ritz {

using forms::BoundaryProblem;
using forms::PlateParams;
using forms::QuadratureSizes;
using forms::RitzBasis;
using geometry::StarChart;
using reference::EigenCluster;

struct RitzSolution {
    double lambda = 0.0;
    std::vector<double> coeffs;  ///< over the (unreduced) basis
    forms::ProblemKind kind = forms::ProblemKind::dirichlet;
    std::shared_ptr<const RitzBasis> basis;

    const StarChart& chart() const { return basis->chart(); }
};

struct RitzOptions {
    QuadratureSizes quad{};
    /// Remove constants for Neumann and SteklovBP. When false the kernel is kept
    /// and the pencil is shifted: J w = μ(P + J)w, λ = 1/μ − 1, members
    /// normalized in P + J.
    bool quotient = true;
};

struct RitzSpectrum {
    std::vector<EigenCluster<RitzSolution>> clusters;
    std::vector<double> eigenvalues;  ///< every finite Ritz eigenvalue, ascending
    forms::FormMatrices matrices;
};

namespace detail {

inline std::vector<double> expand(const numerics::Matrix& t, const std::vector<double>& w) {
    std::vector<double> c(t.rows(), 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) c[i] += t(i, j) * w[j];
    return c;
}

}  // namespace detail

/// Ritz eigenvalues of P[u][v] = λ J_i[u][v] on the span of the basis; the first `count` clusters.
inline RitzSpectrum ritz_solve(const PlateParams& params, const BoundaryProblem& problem,
                               std::shared_ptr<const RitzBasis> basis, std::size_t count,
                               const RitzOptions& opts = {}) {
    const StarChart& chart = basis->chart();
    const bool shift = problem.quotient_constants && !opts.quotient;
    RitzSpectrum out;
    out.matrices = forms::assemble(chart, params, problem, *basis, opts.quad, {opts.quotient, !shift});
    const auto& fm = out.matrices;
    numerics::SymMatrix rhs = fm.P;
    if (shift)
        for (std::size_t i = 0; i < rhs.order(); ++i)
            for (std::size_t j = 0; j <= i; ++j) rhs(i, j) += fm.J(i, j);

    numerics::EigenDecomposition eig;
    try {
        eig = numerics::sym_generalized_eig(fm.J, rhs);
    } catch (const SolverFailure& e) {
        throw SolverFailure(std::string("ritz: ") + e.what());
    }
    const double mu_max = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    if (!(mu_max > 0.0)) throw SolverFailure("ritz: J vanishes on the trial space");
    if (eig.values.front() < -1e-10 * mu_max)
        throw SolverFailure("ritz: J is indefinite on the trial space (mu = " + std::to_string(eig.values.front()) +
                            ")");

    std::vector<RitzSolution> sols;
    for (std::size_t k = eig.values.size(); k-- > 0;) {
        const double mu = eig.values[k];
        if (mu <= 1e-13 * mu_max) break;  // J-null directions carry no finite eigenvalue
        RitzSolution s;
        s.lambda = shift ? 1.0 / mu - 1.0 : 1.0 / mu;
        s.coeffs = detail::expand(fm.transform, eig.vectors.column(k));
        s.kind = problem.kind;
        s.basis = basis;
        sols.push_back(std::move(s));
    }
    for (const auto& s : sols) out.eigenvalues.push_back(s.lambda);
    out.clusters = reference::group_clusters(sols, count, [](const RitzSolution& s) { return s.lambda; });
    if (out.clusters.size() < count || out.clusters.back().indices.back() + 1 >= sols.size())
        throw InvalidInput("ritz: " + std::to_string(count) + " clusters requested but the basis resolves only " +
                           std::to_string(sols.size()) + " finite eigenvalues; raise the degree");
    return out;
}

inline std::vector<EigenCluster<RitzSolution>> ritz_spectrum(const PlateParams& params, const BoundaryProblem& problem,
                                                             const RitzBasis& basis, std::size_t count,
                                                             const RitzOptions& opts = {}) {
    return ritz_solve(params, problem, std::make_shared<const RitzBasis>(basis), count, opts).clusters;
}

/// Zernike basis of the given degree matching the problem's space constraint.
inline RitzBasis default_basis(const StarChart& chart, const BoundaryProblem& problem, int degree) {
    return RitzBasis::zernike(chart, problem.space_constraint, degree);
}

template <int K>
numerics::Jet<K> ritz_jet(const RitzSolution& s, double x, double y) {
    if (!s.chart().contains(x, y, 1e-12))
        throw InvalidInput("ritz_eval: point (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") outside the domain");
    return s.basis->combine<K>(s.coeffs, x, y);
}

/// v, ∇v, D²v, Δv, ∇Δv at (x, y).
inline reference::ModeValues ritz_eval(const RitzSolution& s, double x, double y) {
    return reference::mode_values(ritz_jet<3>(s, x, y));
}

/// sqrt(∫(u − ū)² / ∫u²): distance of a solution from the constants.
inline double constant_deviation(const RitzSolution& s, const QuadratureSizes& quad = {}) {
    const auto nodes = forms::volume_nodes(s.chart(), quad);
    double area = 0.0, mean = 0.0, sq = 0.0;
    std::vector<double> v(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        v[q] = s.basis->combine<0>(s.coeffs, nodes[q].x, nodes[q].y).value();
        area += nodes[q].weight;
        mean += nodes[q].weight * v[q];
        sq += nodes[q].weight * v[q] * v[q];
    }
    mean /= area;
    double var = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) var += nodes[q].weight * (v[q] - mean) * (v[q] - mean);
    return std::sqrt(var / sq);
}

}  // namespace platelab::ritz
