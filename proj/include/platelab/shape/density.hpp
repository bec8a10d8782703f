#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "platelab/geometry/perturbation.hpp"
#include "platelab/shape/traces.hpp"

namespace platelab::shape {

/// Sign convention for the tension term τ(∂νv)² of the pinned densities.
///
/// `corrected` uses −τ(∂νv)², which is what the first variation of the
/// pinned energy produces; `as_printed` keeps +τ(∂νv)².
enum class DensityVariant { corrected, as_printed };

struct DensityOptions {
    TraceOptions traces{};
    DensityVariant variant = DensityVariant::corrected;
};

struct GDensitySample {
    std::vector<double> theta;
    std::vector<std::vector<double>> values;  ///< [member][node]
    std::vector<double> sum;                  ///< Σ_l G(v_l) per node
    ProblemKind kind = ProblemKind::dirichlet;
    double lambda = 0.0;
    geometry::BoundaryGrid grid;

    std::size_t members() const { return values.size(); }
};

/// G(v) at one boundary node from the derivative data of v.
inline double g_value(ProblemKind kind, const PlateParams& p, double lambda, const ModeValues& mv,
                      const geometry::BoundaryFrame& f, double div_term,
                      DensityVariant variant = DensityVariant::corrected) {
    const auto& n = f.normal;
    const auto& h = mv.hess;
    const double vn = mv.grad[0] * n[0] + mv.grad[1] * n[1];
    const double vnn = n[0] * (h[0] * n[0] + h[1] * n[1]) + n[1] * (h[2] * n[0] + h[3] * n[1]);
    const double hess2 = h[0] * h[0] + h[1] * h[1] + h[2] * h[2] + h[3] * h[3];
    const double grad2 = mv.grad[0] * mv.grad[0] + mv.grad[1] * mv.grad[1];
    const double dn_lap = mv.grad_lap[0] * n[0] + mv.grad_lap[1] * n[1];
    const double energy = (1.0 - p.sigma) * hess2 + p.sigma * mv.lap * mv.lap;
    const double tau_pinned = variant == DensityVariant::corrected ? -p.tau : p.tau;
    switch (kind) {
        case ProblemKind::dirichlet:
            return -vnn * vnn;
        case ProblemKind::neumann:
            return energy + p.tau * grad2 - lambda * mv.v * mv.v;
        case ProblemKind::navier:
            return 2.0 * vn * (dn_lap + (1.0 - p.sigma) * div_term) + energy + tau_pinned * vn * vn;
        case ProblemKind::steklov_ks:
            return 2.0 * vn * (dn_lap + (1.0 - p.sigma) * div_term) + energy + tau_pinned * vn * vn -
                   lambda * f.curvature * vn * vn - 2.0 * lambda * vn * vnn;
        case ProblemKind::steklov_bp:
            return energy + p.tau * grad2 - lambda * f.curvature * mv.v * mv.v - 2.0 * lambda * mv.v * vn;
    }
    throw InvalidInput("g_value: unknown problem");
}

inline GDensitySample g_density(ProblemKind kind, const PlateParams& p, const ClusterTraces& t,
                                DensityVariant variant = DensityVariant::corrected) {
    GDensitySample s{{}, {}, {}, kind, t.lambda, t.grid};
    const std::size_t nb = t.grid.size();
    for (std::size_t q = 0; q < nb; ++q) s.theta.push_back(t.grid.theta(q));
    s.values.assign(t.members(), std::vector<double>(nb));
    s.sum.assign(nb, 0.0);
    for (std::size_t l = 0; l < t.members(); ++l)
        for (std::size_t q = 0; q < nb; ++q) {
            const double g = g_value(kind, p, t.lambda, t.values[l][q], t.grid.frame(q), t.div_term[l][q], variant);
            if (!std::isfinite(g)) throw SolverFailure("g_density: non-finite value at node " + std::to_string(q));
            s.values[l][q] = g;
        }
    for (std::size_t q = 0; q < nb; ++q) {
        double acc = 0.0;
        for (std::size_t l = 0; l < t.members(); ++l) acc += s.values[l][q];
        s.sum[q] = acc;
    }
    return s;
}

template <class Member>
GDensitySample g_density(const BoundaryProblem& problem, const PlateParams& p, const EigenCluster<Member>& cluster,
                         const StarChart& chart, const DensityOptions& opts = {}) {
    forms::validate(p, problem);
    return g_density(problem.kind, p, cluster_traces(cluster, p, chart, opts.traces), opts.variant);
}

/// Σ_{i1<…<is} x_{i1}⋯x_{is} by the one-pass product recurrence.
inline double elementary_symmetric(const std::vector<double>& values, int s) {
    if (s < 1 || s > static_cast<int>(values.size()))
        throw InvalidInput("elementary_symmetric: s = " + std::to_string(s) + " outside 1.." +
                           std::to_string(values.size()));
    std::vector<double> e(s + 1, 0.0);
    e[0] = 1.0;
    for (double x : values)
        for (int j = s; j >= 1; --j) e[j] += x * e[j - 1];
    return e[s];
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

/// λ_F^s·C(|F|−1, s−1), the prefactor of the cluster derivative.
inline double hadamard_prefactor(const GDensitySample& g, int s) {
    const int n = static_cast<int>(g.members());
    if (s < 1 || s > n)
        throw InvalidInput("hadamard_derivative: s = " + std::to_string(s) + " outside 1.." + std::to_string(n));
    return std::pow(g.lambda, s) * binomial(n - 1, s - 1);
}

/// dΛ_{F,s} along the normal perturbation f.
inline double hadamard_derivative(const GDensitySample& g, int s, const geometry::NormalPerturbation& f) {
    const double pre = hadamard_prefactor(g, s);
    f.validate();
    const auto& chart = g.grid.chart();
    const double integral =
        g.grid.integrate([&](std::size_t q) { return g.sum[q] * geometry::normal_speed(chart, f, g.grid.theta(q)); });
    return pre * integral;
}

/// λ_F^s·C(|F|−1, s−1)·∮|ΣG||ζ·ν|dσ: the size the derivative is measured against
/// when it cancels.
inline double hadamard_scale(const GDensitySample& g, int s, const geometry::NormalPerturbation& f) {
    const double pre = hadamard_prefactor(g, s);
    const auto& chart = g.grid.chart();
    return std::abs(pre) * g.grid.integrate([&](std::size_t q) {
        return std::abs(g.sum[q] * geometry::normal_speed(chart, f, g.grid.theta(q)));
    });
}

template <class Member>
double hadamard_derivative(const BoundaryProblem& problem, const PlateParams& p, const StarChart& chart,
                           const EigenCluster<Member>& cluster, int s, const geometry::NormalPerturbation& f,
                           const DensityOptions& opts = {}) {
    if (s < 1 || s > static_cast<int>(cluster.members.size()))
        throw InvalidInput("hadamard_derivative: s = " + std::to_string(s) + " outside 1.." +
                           std::to_string(cluster.members.size()));
    return hadamard_derivative(g_density(problem, p, cluster, chart, opts), s, f);
}

struct CriticalityResidual {
    double c_mean = 0.0;
    double max_abs_dev = 0.0;
    double rel_residual = 0.0;
};

inline CriticalityResidual criticality_residual(const GDensitySample& g) {
    CriticalityResidual r;
    r.c_mean = g.grid.integrate([&](std::size_t q) { return g.sum[q]; }) / g.grid.perimeter();
    for (double v : g.sum) r.max_abs_dev = std::max(r.max_abs_dev, std::abs(v - r.c_mean));
    r.rel_residual = r.max_abs_dev / std::max(std::abs(r.c_mean), 1e-12);
    return r;
}

template <class Member>
CriticalityResidual criticality_residual(const BoundaryProblem& problem, const PlateParams& p,
                                         const StarChart& chart, const EigenCluster<Member>& cluster,
                                         const DensityOptions& opts = {}) {
    return criticality_residual(g_density(problem, p, cluster, chart, opts));
}

/// ∮ ζ·ν dσ for the radial perturbation f.
inline double volume_derivative(const StarChart& chart, const geometry::NormalPerturbation& f,
                                int grid_size = geometry::default_grid_size) {
    f.validate();
    const geometry::BoundaryGrid grid(chart, grid_size);
    return grid.integrate([&](std::size_t q) { return geometry::normal_speed(chart, f, grid.theta(q)); });
}

/// div_∂(νᵀD²v)_∂ of a disk mode on its boundary circle, from the radial profile:
/// −(n²/R²)(f′(R) − f(R)/R)·(cos nθ | sin nθ).
inline double polar_boundary_divergence(const reference::DiskMode& m, double theta) {
    const auto f = reference::radial_derivatives(m, m.radius);
    const double n = m.n, R = m.radius;
    const double ang = m.parity == reference::Parity::cos ? std::cos(n * theta) : std::sin(n * theta);
    return -(n * n / (R * R)) * (f[1] - f[0] / R) * ang;
}

}  // namespace platelab::shape
