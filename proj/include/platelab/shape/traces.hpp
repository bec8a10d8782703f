#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "platelab/forms/problem.hpp"
#include "platelab/forms/quadrature.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/parallel.hpp"
#include "platelab/numerics/summation.hpp"
#include "platelab/reference/cluster.hpp"
#include "platelab/reference/disk.hpp"
#include "platelab/ritz/solver.hpp"

namespace platelab::shape {

using forms::BoundaryProblem;
using forms::PlateParams;
using forms::ProblemKind;
using geometry::StarChart;
using reference::EigenCluster;
using reference::ModeValues;

template <int K>
numerics::Jet<K> member_jet(const reference::DiskMode& m, double x, double y) {
    return reference::disk_mode_jet<K>(m, x, y);
}
template <int K>
numerics::Jet<K> member_jet(const ritz::RitzSolution& m, double x, double y) {
    return ritz::ritz_jet<K>(m, x, y);
}

inline double member_lambda(const reference::DiskMode& m) { return m.lambda; }
inline double member_lambda(const ritz::RitzSolution& m) { return m.lambda; }

struct TraceOptions {
    int grid_size = geometry::default_grid_size;
    forms::QuadratureSizes quad{};
};

/// Boundary data of a P-orthonormalized cluster basis on the periodic grid.
struct ClusterTraces {
    geometry::BoundaryGrid grid;
    double lambda = 0.0;
    std::vector<std::vector<ModeValues>> values;  ///< [member][node]
    std::vector<std::vector<double>> div_term;    ///< div_∂(νᵀD²v)_∂ per member and node
    std::vector<std::vector<double>> gram;        ///< P-Gram matrix of the raw members

    std::size_t members() const { return values.size(); }
};

namespace detail {

inline ModeValues scaled_add(const ModeValues& a, double s, const ModeValues& b) {
    ModeValues r = a;
    r.v += s * b.v;
    r.lap += s * b.lap;
    for (int i = 0; i < 2; ++i) {
        r.grad[i] += s * b.grad[i];
        r.grad_lap[i] += s * b.grad_lap[i];
    }
    for (int i = 0; i < 4; ++i) r.hess[i] += s * b.hess[i];
    return r;
}

inline ModeValues scaled(const ModeValues& a, double s) {
    ModeValues z{};
    return scaled_add(z, s, a);
}

}  // namespace detail

/// P[u][v] for every pair of members, by volume quadrature on the chart.
template <class Member>
std::vector<std::vector<double>> p_gram(const std::vector<Member>& ms, const PlateParams& p, const StarChart& chart,
                                        const forms::QuadratureSizes& quad) {
    const auto nodes = forms::volume_nodes(chart, quad);
    const std::size_t n = ms.size(), nv = nodes.size();
    std::vector<std::vector<std::array<double, 6>>> d(n, std::vector<std::array<double, 6>>(nv));
    numerics::parallel_for(nv, [&](std::size_t q) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = member_jet<2>(ms[i], nodes[q].x, nodes[q].y);
            d[i][q] = {j.d(1, 0), j.d(0, 1), j.d(2, 0), j.d(1, 1), j.d(0, 2), 0.0};
        }
    });
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    std::vector<double> terms(nv);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            for (std::size_t q = 0; q < nv; ++q) {
                const auto &a = d[i][q], &b = d[j][q];
                const double m = a[2] * b[2] + 2.0 * a[3] * b[3] + a[4] * b[4];
                const double bb = (a[2] + a[4]) * (b[2] + b[4]);
                const double l = a[0] * b[0] + a[1] * b[1];
                terms[q] = nodes[q].weight * ((1.0 - p.sigma) * m + p.sigma * bb + p.tau * l);
            }
            g[i][j] = g[j][i] = numerics::pairwise_sum(terms);
        }
    return g;
}

/// Rows c[l] of the modified Gram–Schmidt map v_l = Σ_k c[l][k] m_k for a Gram matrix.
inline std::vector<std::vector<double>> p_orthonormal_coefficients(const std::vector<std::vector<double>>& gram) {
    const std::size_t n = gram.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += a[i] * gram[i][j] * b[j];
        return s;
    };
    for (std::size_t l = 0; l < n; ++l) {
        c[l][l] = 1.0;
        for (std::size_t k = 0; k < l; ++k) {
            const double proj = inner(c[l], c[k]);
            for (std::size_t i = 0; i < n; ++i) c[l][i] -= proj * c[k][i];
        }
        const double nrm = inner(c[l], c[l]);
        if (!(nrm > 0.0)) throw SolverFailure("p_orthonormal_coefficients: members are P-dependent");
        for (double& v : c[l]) v /= std::sqrt(nrm);
    }
    return c;
}

/// Modified Gram–Schmidt in the P inner product followed by boundary sampling.
template <class Member>
ClusterTraces cluster_traces(const std::vector<Member>& ms, double lambda_f, const PlateParams& p,
                             const StarChart& chart, const TraceOptions& opts = {}) {
    if (ms.empty()) throw InvalidInput("cluster_traces: empty cluster");
    ClusterTraces t{geometry::BoundaryGrid(chart, opts.grid_size), lambda_f, {}, {}, {}};
    t.gram = p_gram(ms, p, chart, opts.quad);
    const std::size_t n = ms.size(), nb = t.grid.size();

    const auto c = p_orthonormal_coefficients(t.gram);

    std::vector<std::vector<ModeValues>> raw(n, std::vector<ModeValues>(nb));
    numerics::parallel_for(nb, [&](std::size_t q) {
        const auto& f = t.grid.frame(q);
        for (std::size_t i = 0; i < n; ++i)
            raw[i][q] = reference::mode_values(member_jet<3>(ms[i], f.point[0], f.point[1]));
    });
    t.values.assign(n, std::vector<ModeValues>(nb));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t q = 0; q < nb; ++q) {
            ModeValues acc{};
            for (std::size_t k = 0; k < n; ++k)
                if (c[l][k] != 0.0) acc = detail::scaled_add(acc, c[l][k], raw[k][q]);
            t.values[l][q] = acc;
        }
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<double> tdn(nb);
        for (std::size_t q = 0; q < nb; ++q) {
            const auto& f = t.grid.frame(q);
            const auto& h = t.values[l][q].hess;
            tdn[q] = f.tangent[0] * (h[0] * f.normal[0] + h[1] * f.normal[1]) +
                     f.tangent[1] * (h[2] * f.normal[0] + h[3] * f.normal[1]);
        }
        t.div_term.push_back(geometry::tangential_derivative(t.grid, tdn));
    }
    return t;
}

template <class Member>
ClusterTraces cluster_traces(const EigenCluster<Member>& c, const PlateParams& p, const StarChart& chart,
                             const TraceOptions& opts = {}) {
    return cluster_traces(c.members, c.lambda, p, chart, opts);
}

}  // namespace platelab::shape
