#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/quadrature.hpp"

namespace platelab::forms {

struct QuadratureSizes {
    int radial = 48;    ///< Gauss–Legendre nodes in ρ
    int angular = 128;  ///< trapezoid nodes in θ
    int boundary = geometry::default_grid_size;

    void validate() const {
        if (radial <= 0 || angular <= 0 || boundary <= 0)
            throw InvalidInput("quadrature sizes must be positive (got " + std::to_string(radial) + ", " +
                               std::to_string(angular) + ", " + std::to_string(boundary) + ")");
    }
};

struct VolumeNode {
    double x, y, weight;
};

/// Nodes for ∫_Ω · dx through x = ρR(θ)(cos θ, sin θ) with Jacobian ρR(θ)².
inline std::vector<VolumeNode> volume_nodes(const geometry::StarChart& chart, const QuadratureSizes& q) {
    q.validate();
    const auto gl = numerics::gauss_legendre(q.radial, 0.0, 1.0);
    const double dtheta = 2.0 * std::numbers::pi / q.angular;
    std::vector<VolumeNode> out;
    out.reserve(static_cast<std::size_t>(q.radial) * q.angular);
    for (int b = 0; b < q.angular; ++b) {
        const double th = b * dtheta, r = chart.radius(th), c = std::cos(th), s = std::sin(th);
        for (int a = 0; a < q.radial; ++a) {
            const double rho = gl.nodes[a];
            out.push_back({rho * r * c, rho * r * s, gl.weights[a] * dtheta * rho * r * r});
        }
    }
    return out;
}

}  // namespace platelab::forms
