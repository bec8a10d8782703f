#pragma once

#include <array>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "platelab/forms/quadrature.hpp"
#include "platelab/geometry/polynomial.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/summation.hpp"

namespace platelab::forms {

enum class FormKind { M, B, L, J1, J2, J3 };

inline std::string to_string(FormKind f) {
    static const char* names[] = {"M", "B", "L", "J1", "J2", "J3"};
    return names[static_cast<int>(f)];
}

namespace detail {

/// Derivatives of v = u ∘ φ⁻¹ at φ(x) for φ = id + tψ.
struct TransportedDerivatives {
    double value;
    std::array<double, 2> grad;
    std::array<double, 4> hess;  ///< row-major
};

struct AffinePart {
    std::array<double, 4> a;     ///< Dφ_t, row-major
    std::array<double, 4> ainv;  ///< (Dφ_t)⁻¹
    double det;
};

inline AffinePart affine_part(const geometry::PolynomialField& psi, double t, double x, double y) {
    const auto j = psi.jacobian(x, y);
    AffinePart p;
    p.a = {1.0 + t * j[0], t * j[1], t * j[2], 1.0 + t * j[3]};
    p.det = p.a[0] * p.a[3] - p.a[1] * p.a[2];
    if (!(p.det > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "pullback: det(I + t Dpsi) = %.6g <= 0 at (%.6g, %.6g); map not injective", p.det,
                      x, y);
        throw InvalidInput(buf);
    }
    p.ainv = {p.a[3] / p.det, -p.a[1] / p.det, -p.a[2] / p.det, p.a[0] / p.det};
    return p;
}

inline TransportedDerivatives transport(const geometry::Polynomial& u, const geometry::PolynomialField& psi,
                                        const AffinePart& ap, double t, double x, double y) {
    const auto ju = u.jet<2>(x, y);
    TransportedDerivatives out;
    out.value = ju.value();
    const double ux = ju.d(1, 0), uy = ju.d(0, 1);
    const auto& ai = ap.ainv;
    // ∇v = A^{-T} ∇u
    out.grad = {ai[0] * ux + ai[2] * uy, ai[1] * ux + ai[3] * uy};
    // A^T D²v A = D²u − t Σ_a (∇v)_a D²ψ_a
    const auto j1 = psi.px.jet<2>(x, y), j2 = psi.py.jet<2>(x, y);
    std::array<double, 4> s = {ju.d(2, 0), ju.d(1, 1), ju.d(1, 1), ju.d(0, 2)};
    const std::array<double, 4> h1 = {j1.d(2, 0), j1.d(1, 1), j1.d(1, 1), j1.d(0, 2)};
    const std::array<double, 4> h2 = {j2.d(2, 0), j2.d(1, 1), j2.d(1, 1), j2.d(0, 2)};
    for (int k = 0; k < 4; ++k) s[k] -= t * (out.grad[0] * h1[k] + out.grad[1] * h2[k]);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double v = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) v += ai[i * 2 + a] * s[i * 2 + j] * ai[j * 2 + b];
            out.hess[a * 2 + b] = v;
        }
    return out;
}

}  // namespace detail

/// Value of a form on φ_t(Ω), φ_t = id + tψ, for v_i = u_i ∘ φ_t⁻¹.
inline double pullback_form_value(FormKind form, const geometry::PolynomialField& psi, double t,
                                  const geometry::Polynomial& u1, const geometry::Polynomial& u2,
                                  const geometry::StarChart& chart, const QuadratureSizes& quad = {}) {
    psi.validate();
    quad.validate();
    std::vector<double> terms;
    if (form == FormKind::J2 || form == FormKind::J3) {
        const int n = quad.boundary;
        const double dtheta = 2.0 * std::numbers::pi / n;
        terms.resize(n);
        for (int k = 0; k < n; ++k) {
            const double th = k * dtheta, r = chart.radius(th), dr = chart.radius_derivative(th, 1);
            const double c = std::cos(th), s = std::sin(th);
            const double x = r * c, y = r * s;
            const auto ap = detail::affine_part(psi, t, x, y);
            const double dx = dr * c - r * s, dy = dr * s + r * c;
            const double tx = ap.a[0] * dx + ap.a[1] * dy, ty = ap.a[2] * dx + ap.a[3] * dy;
            const double speed = std::hypot(tx, ty);
            if (form == FormKind::J3) {
                terms[k] = dtheta * speed * u1(x, y) * u2(x, y);
            } else {
                const double nx = ty / speed, ny = -tx / speed;
                const auto d1 = detail::transport(u1, psi, ap, t, x, y);
                const auto d2 = detail::transport(u2, psi, ap, t, x, y);
                terms[k] = dtheta * speed * (d1.grad[0] * nx + d1.grad[1] * ny) * (d2.grad[0] * nx + d2.grad[1] * ny);
            }
        }
        return numerics::pairwise_sum(terms);
    }
    const auto nodes = volume_nodes(chart, quad);
    terms.resize(nodes.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double x = nodes[q].x, y = nodes[q].y;
        const auto ap = detail::affine_part(psi, t, x, y);
        const double w = nodes[q].weight * ap.det;
        if (form == FormKind::J1) {
            terms[q] = w * u1(x, y) * u2(x, y);
            continue;
        }
        const auto d1 = detail::transport(u1, psi, ap, t, x, y);
        const auto d2 = detail::transport(u2, psi, ap, t, x, y);
        switch (form) {
            case FormKind::M: {
                double f = 0.0;
                for (int k = 0; k < 4; ++k) f += d1.hess[k] * d2.hess[k];
                terms[q] = w * f;
                break;
            }
            case FormKind::B:
                terms[q] = w * (d1.hess[0] + d1.hess[3]) * (d2.hess[0] + d2.hess[3]);
                break;
            default:
                terms[q] = w * (d1.grad[0] * d2.grad[0] + d1.grad[1] * d2.grad[1]);
                break;
        }
    }
    return numerics::pairwise_sum(terms);
}

}  // namespace platelab::forms
