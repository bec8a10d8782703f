#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "platelab/forms/pullback.hpp"
#include "platelab/forms/quadrature.hpp"
#include "platelab/geometry/polynomial.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/summation.hpp"
#include "platelab/shape/fd.hpp"

namespace platelab::shape {

using geometry::Polynomial;
using geometry::PolynomialField;

/// First variations at the identity of the forms and of the Jacobian determinant.
enum class Lemma { dM, dB, dL, dDet, dJ1, dJ2, dJ3 };

inline constexpr std::array<Lemma, 7> all_lemmas{Lemma::dM,  Lemma::dB,  Lemma::dL, Lemma::dDet,
                                                 Lemma::dJ1, Lemma::dJ2, Lemma::dJ3};

inline std::string to_string(Lemma l) {
    static const char* names[] = {"dM", "dB", "dL", "dDet", "dJ1", "dJ2", "dJ3"};
    return names[static_cast<int>(l)];
}

inline Lemma parse_lemma(const std::string& s) {
    for (Lemma l : all_lemmas)
        if (to_string(l) == s) return l;
    throw InvalidInput("unknown lemma '" + s + "' (expected dM, dB, dL, dDet, dJ1, dJ2 or dJ3)");
}

/// `as_printed` flips the overall sign of the dL right-hand side; the other
/// identities have a single form.
enum class LemmaVariant { corrected, as_printed };

struct LemmaOptions {
    forms::QuadratureSizes quad{};
    FdOptions fd{{1e-2, 5e-3, 2.5e-3}};
    LemmaVariant variant = LemmaVariant::corrected;
};

struct LemmaCheck {
    double lhs_fd = 0.0;
    double rhs_formula = 0.0;
    double rel_err = 0.0;
};

struct LemmaPreset {
    Polynomial u1, u2;
    PolynomialField psi;
};

inline constexpr int lemma_preset_count = 5;

namespace detail {

inline Polynomial poly(std::initializer_list<std::array<double, 3>> terms) {
    Polynomial p;
    for (const auto& t : terms) p.add(static_cast<int>(t[0]), static_cast<int>(t[1]), t[2]);
    return p;
}

/// max |u| over the boundary nodes.
inline double boundary_trace(const Polynomial& u, const geometry::BoundaryGrid& g) {
    double m = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) m = std::max(m, std::abs(u(g.frame(q).point[0], g.frame(q).point[1])));
    return m;
}

struct PointData {
    double v;
    std::array<double, 2> grad;
    std::array<double, 4> hess;
    double lap;
    std::array<double, 2> grad_lap;
    double bilap;
};

inline PointData point_data(const Polynomial& u, double x, double y) {
    const auto j = u.jet<4>(x, y);
    return {j.value(),
            j.gradient(),
            j.hessian(),
            j.laplacian(),
            j.grad_laplacian(),
            j.d(4, 0) + 2.0 * j.d(2, 2) + j.d(0, 4)};
}

inline double dot(const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] * b[0] + a[1] * b[1]; }

inline std::array<double, 2> mat_vec(const std::array<double, 4>& m, const std::array<double, 2>& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

}  // namespace detail

/// Preset `index` in 1..5 for the lemma; the dJ2 presets carry the factor
/// 1 − |x|² so they vanish on the unit circle.
inline LemmaPreset lemma_preset(Lemma lemma, int index) {
    using detail::poly;
    LemmaPreset p;
    switch (index) {
        case 1:
            p = {poly({{1, 0, 1}, {2, 1, 1}, {0, 2, 1}}), poly({{1, 0, 1}, {0, 2, -0.5}, {2, 0, 1}}), {poly({{1, 0, 1}}), Polynomial{}}};
            break;
        case 2:
            p = {poly({{2, 0, 1}, {0, 2, 1}}), poly({{2, 0, 1}, {0, 2, 2}, {1, 1, 1}}), {poly({{1, 0, 1}, {0, 2, 0.25}}), poly({{0, 1, 1}, {1, 0, -0.1}})}};
            break;
        case 3:
            p = {poly({{3, 0, 1}, {1, 2, -2}, {0, 1, 1}, {2, 0, 1}}), poly({{2, 1, 1}, {1, 0, 0.5}, {0, 2, 1}}),
                 {poly({{0, 2, 1}, {1, 0, 0.5}}), poly({{1, 1, 1}, {0, 0, 0.2}})}};
            break;
        case 4:
            p = {poly({{4, 0, 1}, {1, 1, 1}}), poly({{0, 3, 1}, {2, 0, -1}, {0, 0, 1}}),
                 {poly({{2, 0, 0.3}, {0, 1, -1}}), poly({{1, 1, 0.2}, {3, 0, 1}})}};
            break;
        case 5:
            p = {poly({{2, 2, 1}, {1, 0, -1}, {0, 0, 2}}), poly({{5, 0, 1}, {0, 1, -1}}),
                 {poly({{0, 0, 1}, {1, 1, 1}}), poly({{0, 2, 1}, {1, 0, -0.5}})}};
            break;
        default:
            throw InvalidInput("lemma_preset: index " + std::to_string(index) + " outside 1.." +
                               std::to_string(lemma_preset_count));
    }
    if (lemma == Lemma::dJ2) {
        const Polynomial w = poly({{0, 0, 1}, {2, 0, -1}, {0, 2, -1}});
        p.u1 = p.u1 * w;
        p.u2 = p.u2 * w;
    }
    return p;
}

/// Left-hand side functional t ↦ F(id + tψ) whose derivative at 0 the lemma states.
inline double lemma_functional(Lemma lemma, const Polynomial& u1, const Polynomial& u2, const PolynomialField& psi,
                               const geometry::StarChart& chart, double t, const forms::QuadratureSizes& quad = {}) {
    using forms::FormKind;
    switch (lemma) {
        case Lemma::dM: return forms::pullback_form_value(FormKind::M, psi, t, u1, u2, chart, quad);
        case Lemma::dB: return forms::pullback_form_value(FormKind::B, psi, t, u1, u2, chart, quad);
        case Lemma::dL: return forms::pullback_form_value(FormKind::L, psi, t, u1, u2, chart, quad);
        case Lemma::dJ1: return forms::pullback_form_value(FormKind::J1, psi, t, u1, u2, chart, quad);
        case Lemma::dJ2: return forms::pullback_form_value(FormKind::J2, psi, t, u1, u2, chart, quad);
        case Lemma::dJ3: return forms::pullback_form_value(FormKind::J3, psi, t, u1, u2, chart, quad);
        case Lemma::dDet: {
            psi.validate();
            const auto nodes = forms::volume_nodes(chart, quad);
            std::vector<double> terms(nodes.size());
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                const double x = nodes[q].x, y = nodes[q].y;
                const auto j = psi.jacobian(x, y);
                const double det = (1.0 + t * j[0]) * (1.0 + t * j[3]) - t * t * j[1] * j[2];
                terms[q] = nodes[q].weight * u1(x, y) * u2(x, y) * std::abs(det);
            }
            return numerics::pairwise_sum(terms);
        }
    }
    throw InvalidInput("lemma_functional: unknown lemma");
}

/// Right-hand side of the identity, with ζ = ψ and v_i = u_i at the identity.
inline double lemma_rhs(Lemma lemma, const Polynomial& u1, const Polynomial& u2, const PolynomialField& psi,
                        const geometry::StarChart& chart, const forms::QuadratureSizes& quad = {},
                        LemmaVariant variant = LemmaVariant::corrected) {
    using detail::dot;
    using detail::mat_vec;
    psi.validate();
    quad.validate();
    const geometry::BoundaryGrid grid(chart, quad.boundary);
    const std::size_t nb = grid.size();

    if (lemma == Lemma::dJ2) {
        const double trace = std::max(detail::boundary_trace(u1, grid), detail::boundary_trace(u2, grid));
        if (trace > 1e-9) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "lemma dJ2: u1, u2 must vanish on the boundary (max |trace| = %.3e)",
                          trace);
            throw InvalidInput(buf);
        }
    }

    // volume part
    double volume = 0.0;
    if (lemma == Lemma::dM || lemma == Lemma::dB || lemma == Lemma::dL || lemma == Lemma::dJ1 ||
        lemma == Lemma::dDet) {
        const auto nodes = forms::volume_nodes(chart, quad);
        std::vector<double> terms(nodes.size());
        const Polynomial divpsi = psi.divergence();
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double x = nodes[q].x, y = nodes[q].y;
            const auto a = detail::point_data(u1, x, y), b = detail::point_data(u2, x, y);
            const auto z = psi(x, y);
            double f = 0.0;
            switch (lemma) {
                case Lemma::dM:
                case Lemma::dB:
                    f = -(a.bilap * dot(b.grad, z) + b.bilap * dot(a.grad, z));
                    break;
                case Lemma::dL:
                    f = a.lap * dot(b.grad, z) + b.lap * dot(a.grad, z);
                    break;
                default:
                    f = a.v * b.v * divpsi(x, y);
                    break;
            }
            terms[q] = nodes[q].weight * f;
        }
        volume = numerics::pairwise_sum(terms);
    }
    if (lemma == Lemma::dDet || lemma == Lemma::dJ1) return volume;

    // boundary part
    std::vector<detail::PointData> a(nb), b(nb);
    std::vector<double> td1(nb), td2(nb), g2(nb);
    for (std::size_t q = 0; q < nb; ++q) {
        const auto& f = grid.frame(q);
        a[q] = detail::point_data(u1, f.point[0], f.point[1]);
        b[q] = detail::point_data(u2, f.point[0], f.point[1]);
        td1[q] = dot(f.tangent, mat_vec(a[q].hess, f.normal));
        td2[q] = dot(f.tangent, mat_vec(b[q].hess, f.normal));
        g2[q] = dot(a[q].grad, f.normal) * dot(b[q].grad, f.normal);
    }
    const auto div1 = geometry::tangential_derivative(grid, td1);
    const auto div2 = geometry::tangential_derivative(grid, td2);
    const auto dg2 = geometry::tangential_derivative(grid, g2);

    std::vector<double> terms(nb);
    for (std::size_t q = 0; q < nb; ++q) {
        const auto& f = grid.frame(q);
        const auto& nu = f.normal;
        const auto& A = a[q];
        const auto& B = b[q];
        const auto z = psi(f.point[0], f.point[1]);
        const auto dz = mat_vec(psi.jacobian(f.point[0], f.point[1]), nu);  // ∂νζ
        const double zn = dot(z, nu);
        const auto dn_grad1 = mat_vec(A.hess, nu), dn_grad2 = mat_vec(B.hess, nu);
        const double v1nn = dot(nu, dn_grad1), v2nn = dot(nu, dn_grad2);
        double h = 0.0;
        switch (lemma) {
            case Lemma::dM: {
                double frob = 0.0;
                for (int i = 0; i < 4; ++i) frob += A.hess[i] * B.hess[i];
                h = frob * zn;
                h += div1[q] * dot(B.grad, z) + div2[q] * dot(A.grad, z);
                h += dot(A.grad_lap, nu) * dot(B.grad, z) + dot(B.grad_lap, nu) * dot(A.grad, z);
                h -= v1nn * dot(B.grad, dz) + v2nn * dot(A.grad, dz);
                h -= v1nn * dot(dn_grad2, z) + v2nn * dot(dn_grad1, z);
                break;
            }
            case Lemma::dB:
                h = A.lap * B.lap * zn;
                h += dot(A.grad_lap, nu) * dot(B.grad, z) + dot(B.grad_lap, nu) * dot(A.grad, z);
                h -= A.lap * dot(B.grad, dz) + B.lap * dot(A.grad, dz);
                h -= A.lap * dot(dn_grad2, z) + B.lap * dot(dn_grad1, z);
                break;
            case Lemma::dL:
                h = dot(A.grad, B.grad) * zn - (dot(A.grad, nu) * dot(B.grad, z) + dot(B.grad, nu) * dot(A.grad, z));
                break;
            case Lemma::dJ3: {
                const double w = A.v * B.v;
                const std::array<double, 2> gw{A.grad[0] * B.v + A.v * B.grad[0], A.grad[1] * B.v + A.v * B.grad[1]};
                h = (f.curvature * w + dot(gw, nu)) * zn - dot(gw, z);
                break;
            }
            case Lemma::dJ2:
                // ∂νg ζ·ν − ∇g·ζ only sees the tangential derivative of g
                h = f.curvature * g2[q] * zn - dg2[q] * dot(f.tangent, z) - 2.0 * g2[q] * dot(dz, nu);
                break;
            default:
                break;
        }
        terms[q] = grid.weight(q) * h;
    }
    const double total = volume + numerics::pairwise_sum(terms);
    if (lemma == Lemma::dL && variant == LemmaVariant::as_printed) return -total;
    return total;
}

inline LemmaCheck lemma_check(Lemma lemma, const Polynomial& u1, const Polynomial& u2, const PolynomialField& psi,
                              const geometry::StarChart& chart, const LemmaOptions& opts = {}) {
    LemmaCheck r;
    r.rhs_formula = lemma_rhs(lemma, u1, u2, psi, chart, opts.quad, opts.variant);
    r.lhs_fd = fd_derivative([&](double t) { return lemma_functional(lemma, u1, u2, psi, chart, t, opts.quad); }, 1,
                             opts.fd)
                   .value;
    r.rel_err = r.rhs_formula == 0.0 && r.lhs_fd == 0.0 ? 0.0 : relative_error(r.rhs_formula, r.lhs_fd);
    return r;
}

inline LemmaCheck lemma_check(Lemma lemma, int preset, const geometry::StarChart& chart = geometry::StarChart::disk(1.0),
                              const LemmaOptions& opts = {}) {
    const auto p = lemma_preset(lemma, preset);
    return lemma_check(lemma, p.u1, p.u2, p.psi, chart, opts);
}

}  // namespace platelab::shape
