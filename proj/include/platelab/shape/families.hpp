#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "platelab/geometry/perturbation.hpp"
#include "platelab/reference/disk.hpp"
#include "platelab/reference/rectangle.hpp"
#include "platelab/ritz/solver.hpp"
#include "platelab/shape/fd.hpp"

namespace platelab::shape {

template <class Member>
std::vector<double> flatten(const std::vector<EigenCluster<Member>>& clusters) {
    std::vector<double> out;
    for (const auto& c : clusters)
        for (const auto& m : c.members) out.push_back(member_lambda(m));
    return out;
}

/// t ↦ eigenvalues on the disk of radius R + t (Bessel solver, first `clusters` clusters).
inline SpectrumProvider disk_dilation_family(const PlateParams& p, const BoundaryProblem& problem, double radius,
                                             std::size_t clusters) {
    return [=](double t) { return flatten(reference::disk_spectrum(p, problem, radius + t, clusters)); };
}

/// t ↦ Ritz eigenvalues on the chart R + t f with the default basis of the given degree.
inline SpectrumProvider ritz_family(const PlateParams& p, const BoundaryProblem& problem, const StarChart& chart,
                                   const geometry::NormalPerturbation& f, int degree, std::size_t count,
                                   const ritz::RitzOptions& opts = {}) {
    return [=](double t) {
        const auto deformed = geometry::deformation(chart, f, t);
        auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(deformed, problem, degree));
        auto eigs = ritz::ritz_solve(p, problem, basis, count, opts).eigenvalues;
        if (eigs.size() > count) eigs.resize(count);
        return eigs;
    };
}

/// s ↦ Navier eigenvalues of the rectangle (0, e^s) × (0, e^{−s}).
inline SpectrumProvider rectangle_stretch_family(double tau, std::size_t count) {
    return [=](double s) {
        std::vector<double> out;
        for (const auto& m : reference::rectangle_navier_spectrum(std::exp(s), std::exp(-s), tau, count))
            out.push_back(m.lambda);
        return out;
    };
}

}  // namespace platelab::shape
