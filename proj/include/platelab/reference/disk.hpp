#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "platelab/forms/problem.hpp"
#include "platelab/numerics/bessel.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/jet.hpp"
#include "platelab/numerics/parallel.hpp"
#include "platelab/numerics/quadrature.hpp"
#include "platelab/numerics/roots.hpp"
#include "platelab/reference/cluster.hpp"

namespace platelab::reference {

using forms::BoundaryProblem;
using forms::PlateParams;
using forms::ProblemKind;
using numerics::Jet;

enum class Parity { cos, sin };

/// Radial ansatz families: Bessel pair J_n(kr), I_n(lr) for interior problems;
/// (r/R)^n with I_n(√τ r) or (r/R)^{n+2} for Steklov problems.
enum class RadialFamily { bessel, harmonic_modified, harmonic_biharmonic };

/// u(r, θ) = [A g₁(r) + B g₂(r)]·(cos nθ | sin nθ), P-normalized.
///
/// For the Bessel family g₁ = J_n(kr), g₂ = I_n(lr)e^{-lR}; for Steklov
/// families g₁ = (r/R)^n and g₂ = I_n(√τ r)e^{-√τ R} or (r/R)^{n+2}.
struct DiskMode {
    ProblemKind kind = ProblemKind::dirichlet;
    int n = 0;
    Parity parity = Parity::cos;
    double lambda = 0.0;
    RadialFamily family = RadialFamily::bessel;
    double k = 0.0, l = 0.0;  ///< wavenumbers (l = √τ for harmonic_modified)
    double a = 0.0, b = 0.0;  ///< coefficients, already P-normalized
    double radius = 1.0;
    double normalization = 1.0;  ///< factor applied to the unnormalized null vector
};

namespace detail {

/// d^d/dr^d of the two radial columns at r, d = 0..4.
inline std::array<std::array<double, 5>, 2> radial_columns(RadialFamily family, int n, double k, double l, double radius,
                                                           double r) {
    std::array<std::array<double, 5>, 2> c{};
    switch (family) {
        case RadialFamily::bessel: {
            const double e = std::exp(l * (r - radius));
            double kp = 1.0, lp = 1.0;
            for (int d = 0; d <= 4; ++d) {
                c[0][d] = kp * numerics::bessel_j(n, k * r, d);
                c[1][d] = lp * e * numerics::bessel_i_scaled(n, l * r, d);
                kp *= k;
                lp *= l;
            }
            break;
        }
        case RadialFamily::harmonic_modified:
        case RadialFamily::harmonic_biharmonic: {
            // (r/R)^p and its derivatives
            auto power = [&](int p, int d) {
                if (d > p) return 0.0;
                double f = 1.0;
                for (int q = 0; q < d; ++q) f *= (p - q);
                return f * std::pow(r / radius, p - d) / std::pow(radius, d);
            };
            for (int d = 0; d <= 4; ++d) c[0][d] = power(n, d);
            if (family == RadialFamily::harmonic_biharmonic) {
                for (int d = 0; d <= 4; ++d) c[1][d] = power(n + 2, d);
            } else {
                const double e = std::exp(l * (r - radius));
                double lp = 1.0;
                for (int d = 0; d <= 4; ++d) {
                    c[1][d] = lp * e * numerics::bessel_i_scaled(n, l * r, d);
                    lp *= l;
                }
            }
            break;
        }
    }
    return c;
}

/// Δ acting on column c equals kappa[c] times the column (Bessel and modified
/// Bessel families); for the biharmonic family Δ(r^{n+2}cos nθ) = 4(n+1)r^n cos nθ.
inline std::array<double, 2> laplacian_factor(RadialFamily family, double k, double l) {
    switch (family) {
        case RadialFamily::bessel: return {-k * k, l * l};
        case RadialFamily::harmonic_modified: return {0.0, l * l};
        case RadialFamily::harmonic_biharmonic: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

struct BoundaryData {
    std::array<std::array<double, 5>, 2> f;  ///< radial derivatives at R
    std::array<double, 2> lap, lap_r;        ///< radial parts of Δu and ∂rΔu at R
};

inline BoundaryData boundary_data(RadialFamily family, int n, double k, double l, double radius) {
    BoundaryData bd;
    bd.f = radial_columns(family, n, k, l, radius, radius);
    const auto kappa = laplacian_factor(family, k, l);
    for (int c = 0; c < 2; ++c) {
        bd.lap[c] = kappa[c] * bd.f[c][0];
        bd.lap_r[c] = kappa[c] * bd.f[c][1];
    }
    if (family == RadialFamily::harmonic_biharmonic) {
        // Δ[(r/R)^{n+2}] = 4(n+1)(r/R)^n / R²
        const double s = 4.0 * (n + 1) / (radius * radius);
        bd.lap[1] = s * bd.f[0][0];
        bd.lap_r[1] = s * bd.f[0][1];
    }
    return bd;
}

/// (1−σ)u_rr + σΔu
inline double bending_row(const BoundaryData& bd, int c, double sigma) {
    return (1.0 - sigma) * bd.f[c][2] + sigma * bd.lap[c];
}

/// τu_r − ∂rΔu − (1−σ)div_∂(νᵀD²u)_∂ with div_∂(…) = −(n²/R²)(u_r − u/R) on the circle.
inline double shear_row(const BoundaryData& bd, int c, int n, double radius, const PlateParams& p) {
    const double div = -(static_cast<double>(n) * n / (radius * radius)) * (bd.f[c][1] - bd.f[c][0] / radius);
    return p.tau * bd.f[c][1] - bd.lap_r[c] - (1.0 - p.sigma) * div;
}

/// Rows of the 2×2 boundary system for interior problems.
inline std::array<std::array<double, 2>, 2> interior_rows(ProblemKind kind, const BoundaryData& bd, int n,
                                                          double radius, const PlateParams& p) {
    std::array<std::array<double, 2>, 2> m{};
    for (int c = 0; c < 2; ++c) {
        switch (kind) {
            case ProblemKind::dirichlet:
                m[0][c] = bd.f[c][0];
                m[1][c] = bd.f[c][1];
                break;
            case ProblemKind::navier:
                m[0][c] = bd.f[c][0];
                m[1][c] = bending_row(bd, c, p.sigma);
                break;
            case ProblemKind::neumann:
                m[0][c] = bending_row(bd, c, p.sigma);
                m[1][c] = shear_row(bd, c, n, radius, p);
                break;
            default: throw InvalidInput("interior_rows: Steklov problem");
        }
    }
    return m;
}

inline double wavenumber_l(double k, double tau) { return std::sqrt(k * k + tau); }

/// Null vector of a singular 2×2 system, taken from its larger row.
inline std::array<double, 2> null_vector(const std::array<std::array<double, 2>, 2>& m) {
    const double n0 = std::hypot(m[0][0], m[0][1]), n1 = std::hypot(m[1][0], m[1][1]);
    const auto& row = n0 >= n1 ? m[0] : m[1];
    std::array<double, 2> v = {row[1], -row[0]};
    if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) v = {-v[0], -v[1]};
    return v;
}

/// ∫_0^R f(r)² r dr for the radial combination.
inline double radial_mass(RadialFamily family, int n, double k, double l, double radius, double a, double b) {
    const auto gl = numerics::gauss_legendre(96, 0.0, radius);
    double s = 0.0;
    for (std::size_t q = 0; q < gl.size(); ++q) {
        const double r = gl.nodes[q];
        const auto c = radial_columns(family, n, k, l, radius, r);
        const double f = a * c[0][0] + b * c[1][0];
        s += gl.weights[q] * f * f * r;
    }
    return s;
}

}  // namespace detail

/// Radial profile f^{(d)}(r), d = 0..4, of a mode.
inline std::array<double, 5> radial_derivatives(const DiskMode& m, double r) {
    const auto c = detail::radial_columns(m.family, m.n, m.k, m.l, m.radius, r);
    std::array<double, 5> out{};
    for (int d = 0; d <= 4; ++d) out[d] = m.a * c[0][d] + m.b * c[1][d];
    return out;
}

namespace detail {

/// Fills coefficients, wavenumbers and P-normalization for a mode at eigenvalue λ.
inline DiskMode make_mode(ProblemKind kind, const PlateParams& p, int n, double lambda, RadialFamily family, double k,
                          double l, double radius, std::array<double, 2> ab) {
    DiskMode m;
    m.kind = kind;
    m.n = n;
    m.lambda = lambda;
    m.family = family;
    m.k = k;
    m.l = l;
    m.radius = radius;
    m.a = ab[0];
    m.b = ab[1];
    // P[u][u] = λ J_i[u][u] for an eigenfunction
    const double ang = n == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
    const auto bd = boundary_data(family, n, k, l, radius);
    const double fR = m.a * bd.f[0][0] + m.b * bd.f[1][0], dfR = m.a * bd.f[0][1] + m.b * bd.f[1][1];
    double j = 0.0;
    switch (BoundaryProblem::of(kind).form_index) {
        case 1: j = ang * radial_mass(family, n, k, l, radius, m.a, m.b); break;
        case 2: j = ang * radius * dfR * dfR; break;
        default: j = ang * radius * fR * fR; break;
    }
    const double energy = lambda * j;
    if (!(energy > 0.0) || !std::isfinite(energy))
        throw SolverFailure("disk mode normalization failed for n = " + std::to_string(n));
    m.normalization = 1.0 / std::sqrt(energy);
    m.a *= m.normalization;
    m.b *= m.normalization;
    (void)p;
    return m;
}

inline std::vector<DiskMode> interior_modes_for_n(ProblemKind kind, const PlateParams& p, double radius, int n,
                                                  double kmax, double step) {
    auto det = [&](double k) {
        const auto bd = boundary_data(RadialFamily::bessel, n, k, wavenumber_l(k, p.tau), radius);
        const auto m = interior_rows(kind, bd, n, radius, p);
        return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    };
    const double k0 = step;
    if (!(kmax > k0)) return {};
    const int steps = std::max(2, static_cast<int>(std::ceil((kmax - k0) / step)));
    const auto roots = numerics::find_roots(det, k0, kmax, steps, 1e-16);
    std::vector<DiskMode> out;
    for (double k : roots) {
        const double l = wavenumber_l(k, p.tau);
        const auto bd = boundary_data(RadialFamily::bessel, n, k, l, radius);
        const auto ab = null_vector(interior_rows(kind, bd, n, radius, p));
        const double lambda = k * k * (k * k + p.tau);
        out.push_back(make_mode(kind, p, n, lambda, RadialFamily::bessel, k, l, radius, ab));
    }
    return out;
}

/// Steklov eigenvalue for angular index n, or none when only λ = 0 survives.
inline std::vector<DiskMode> steklov_modes_for_n(ProblemKind kind, const PlateParams& p, double radius, int n) {
    const RadialFamily family = p.tau > 0.0 ? RadialFamily::harmonic_modified : RadialFamily::harmonic_biharmonic;
    const double l = std::sqrt(p.tau);
    auto bd = boundary_data(family, n, 0.0, l, radius);
    // rescale both columns to unit size so the degeneracy test is relative
    std::array<double, 2> col_scale{};
    for (int c = 0; c < 2; ++c) {
        col_scale[c] = std::max({std::abs(bd.f[c][0]), std::abs(bd.f[c][1]), std::abs(bd.f[c][2])});
        if (!(col_scale[c] > 0.0) || !std::isfinite(col_scale[c]))
            throw SolverFailure(to_string(kind) + ": radial column underflow for n = " + std::to_string(n));
        for (double& v : bd.f[c]) v /= col_scale[c];
        bd.lap[c] /= col_scale[c];
        bd.lap_r[c] /= col_scale[c];
    }
    constexpr double tiny = 1e-14;
    std::array<double, 2> ab;
    double numerator = 0.0, denominator = 0.0;
    if (kind == ProblemKind::steklov_ks) {
        // u(R) = 0 selects the combination; λ = (u_rr + σu_r/R)/u_r
        ab = null_vector({{{bd.f[0][0], bd.f[1][0]}, {bd.f[0][0], bd.f[1][0]}}});
        const double d1 = ab[0] * bd.f[0][1] + ab[1] * bd.f[1][1];
        const double d2 = ab[0] * bd.f[0][2] + ab[1] * bd.f[1][2];
        numerator = d2 + p.sigma * d1 / radius;
        denominator = d1;
    } else {
        const double r0 = detail::bending_row(bd, 0, p.sigma), r1 = detail::bending_row(bd, 1, p.sigma);
        ab = null_vector({{{r0, r1}, {r0, r1}}});
        const double s0 = ab[0] * shear_row(bd, 0, n, radius, p), s1 = ab[1] * shear_row(bd, 1, n, radius, p);
        numerator = s0 + s1;
        denominator = ab[0] * bd.f[0][0] + ab[1] * bd.f[1][0];
        if (std::abs(numerator) <= 1e-13 * (std::abs(s0) + std::abs(s1))) return {};  // constant kernel
    }
    const double scale = std::abs(ab[0]) + std::abs(ab[1]);
    if (std::abs(denominator) <= tiny * scale)
        throw SolverFailure(to_string(kind) + ": degenerate Steklov denominator for n = " + std::to_string(n));
    ab[0] /= col_scale[0];
    ab[1] /= col_scale[1];
    const double lambda = numerator / denominator;
    return {make_mode(kind, p, n, lambda, family, 0.0, l, radius, ab)};
}

}  // namespace detail

struct DiskSpectrumOptions {
    int n_max = -1;        ///< largest angular index; defaults to count + 8
    double step = 0.01;    ///< scan step in k
};

/// The first `count` eigenvalue clusters on the disk of radius R.
inline std::vector<EigenCluster<DiskMode>> disk_spectrum(const PlateParams& params, const BoundaryProblem& problem,
                                                         double radius, std::size_t count,
                                                         DiskSpectrumOptions opts = {}) {
    forms::validate(params, problem);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("disk_spectrum: radius must be positive");
    if (count == 0) return {};
    const int n_max = opts.n_max >= 0 ? opts.n_max : static_cast<int>(count) + 8;
    if (n_max < static_cast<int>(count) / 2)
        throw InvalidInput("disk_spectrum: n_max = " + std::to_string(n_max) + " too small for count " +
                           std::to_string(count));

    auto emit = [](const std::vector<DiskMode>& per_n, std::vector<DiskMode>& all) {
        for (const auto& m : per_n) {
            all.push_back(m);
            if (m.n > 0) {
                all.push_back(m);
                all.back().parity = Parity::sin;
            }
        }
    };
    auto finish = [&](std::vector<DiskMode> all) {
        std::stable_sort(all.begin(), all.end(), [](const DiskMode& x, const DiskMode& y) {
            return std::tie(x.lambda, x.n, x.parity) < std::tie(y.lambda, y.n, y.parity);
        });
        auto clusters = group_clusters(all, count, [](const DiskMode& m) { return m.lambda; });
        for (auto& c : clusters)
            std::stable_sort(c.members.begin(), c.members.end(), [](const DiskMode& x, const DiskMode& y) {
                return std::tie(x.n, x.parity) < std::tie(y.n, y.parity);
            });
        return clusters;
    };

    if (problem.is_steklov()) {
        std::vector<std::vector<DiskMode>> per_n(n_max + 1);
        numerics::parallel_for(per_n.size(), [&](std::size_t n) {
            per_n[n] = detail::steklov_modes_for_n(problem.kind, params, radius, static_cast<int>(n));
        });
        std::vector<DiskMode> all;
        for (const auto& v : per_n) emit(v, all);
        auto clusters = finish(all);
        if (clusters.size() < count)
            throw SolverFailure("disk_spectrum: only " + std::to_string(clusters.size()) + " clusters for n <= " +
                                std::to_string(n_max) + "; increase n_max");
        const double top = clusters.back().lambda;
        for (int n = std::max(0, n_max - 1); n <= n_max; ++n)
            for (const auto& m : per_n[n])
                if (m.lambda <= top)
                    throw SolverFailure("disk_spectrum: count " + std::to_string(count) +
                                        " unreachable within n_max = " + std::to_string(n_max));
        return clusters;
    }

    double kmax = 8.0 / radius;
    for (int attempt = 0; attempt < 12; ++attempt, kmax *= 1.5) {
        std::vector<std::vector<DiskMode>> per_n(n_max + 1);
        numerics::parallel_for(per_n.size(), [&](std::size_t n) {
            per_n[n] = detail::interior_modes_for_n(problem.kind, params, radius, static_cast<int>(n), kmax, opts.step);
        });
        std::vector<DiskMode> all;
        for (const auto& v : per_n) emit(v, all);
        auto clusters = finish(all);
        const double lambda_cap = kmax * kmax * (kmax * kmax + params.tau);
        // the count-th cluster is complete only if a later, strictly larger value exists below the scan cap
        if (clusters.size() < count || all.size() <= clusters.back().indices.back() + 1) continue;
        if (clusters.back().lambda >= lambda_cap * (1.0 - 1e-9)) continue;
        for (const auto& m : per_n[n_max])
            if (m.lambda <= clusters.back().lambda)
                throw SolverFailure("disk_spectrum: count " + std::to_string(count) +
                                    " unreachable within n_max = " + std::to_string(n_max));
        return clusters;
    }
    throw SolverFailure("disk_spectrum: scan did not reach " + std::to_string(count) + " clusters");
}

/// Jet of the mode at (x, y); exact series in |x|² near the centre, polar form elsewhere.
template <int K>
Jet<K> disk_mode_jet(const DiskMode& m, double x, double y) {
    const double r = std::hypot(x, y);
    if (r > m.radius * (1.0 + 1e-12))
        throw InvalidInput("disk_mode_eval: point at r = " + std::to_string(r) + " outside the disk");
    const Jet<K> X = Jet<K>::variable_x(x), Y = Jet<K>::variable_y(y);
    const double wave = std::max(m.k, m.l);
    if (r <= 0.25 * m.radius && wave * r <= 4.0) {
        // u = G(|x|²)·Re/Im (x+iy)^n with G(s) = Σ_j g_j s^j
        constexpr int terms = 40;
        std::array<double, terms> g{};
        auto add_bessel = [&](double coeff, double kk, double sign, double shift) {
            if (coeff == 0.0) return;
            double t = coeff * std::exp(shift);
            for (int q = 1; q <= m.n; ++q) t *= (kk / 2.0) / q;
            for (int j = 0; j < terms; ++j) {
                g[j] += t;
                t *= sign * (kk / 2.0) * (kk / 2.0) / ((j + 1.0) * (j + 1.0 + m.n));
            }
        };
        switch (m.family) {
            case RadialFamily::bessel:
                add_bessel(m.a, m.k, -1.0, 0.0);
                add_bessel(m.b, m.l, 1.0, -m.l * m.radius);
                break;
            case RadialFamily::harmonic_modified:
                g[0] += m.a / std::pow(m.radius, m.n);
                add_bessel(m.b, m.l, 1.0, -m.l * m.radius);
                break;
            case RadialFamily::harmonic_biharmonic:
                g[0] += m.a / std::pow(m.radius, m.n);
                g[1] += m.b / std::pow(m.radius, m.n + 2);
                break;
        }
        const double s0 = r * r;
        numerics::Taylor1<K> gs;
        for (int d = 0; d <= K; ++d) {
            double c = 0.0, binom = 1.0;  // Σ_j g_j C(j, d) s0^{j−d}
            for (int j = d; j < terms; ++j) {
                c += g[j] * binom * std::pow(s0, j - d);
                binom = binom * (j + 1) / (j + 1 - d);
            }
            gs.c[d] = c;
        }
        Jet<K> re = Jet<K>::constant(1.0), im;
        for (int q = 0; q < m.n; ++q) {
            const Jet<K> nr = re * X - im * Y, ni = re * Y + im * X;
            re = nr;
            im = ni;
        }
        const Jet<K> s = X * X + Y * Y;
        return s.compose(gs) * (m.parity == Parity::cos ? re : im);
    }
    const Jet<K> rj = numerics::sqrt(X * X + Y * Y);
    const auto f = radial_derivatives(m, r);
    std::array<double, K + 1> fd{};
    for (int d = 0; d <= K; ++d) fd[d] = f[d];
    const Jet<K> radial = rj.compose(numerics::Taylor1<K>::from_derivatives(fd));
    if (m.n == 0) return radial;
    const Jet<K> theta = numerics::polar_angle(X, Y) * static_cast<double>(m.n);
    return radial * (m.parity == Parity::cos ? numerics::cos(theta) : numerics::sin(theta));
}

/// Cartesian derivative data of a mode.
struct ModeValues {
    double v;
    std::array<double, 2> grad;
    std::array<double, 4> hess;  ///< row-major
    double lap;
    std::array<double, 2> grad_lap;
};

template <int K>
ModeValues mode_values(const Jet<K>& j) {
    static_assert(K >= 3);
    return {j.value(), j.gradient(), j.hessian(), j.laplacian(), j.grad_laplacian()};
}

/// v, ∇v, D²v, Δv, ∇Δv at polar point (r, θ).
inline ModeValues disk_mode_eval(const DiskMode& m, double r, double theta) {
    if (r < 0.0) throw InvalidInput("disk_mode_eval: negative radius");
    return mode_values(disk_mode_jet<3>(m, r * std::cos(theta), r * std::sin(theta)));
}

}  // namespace platelab::reference
