#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::reference {

struct RectangleMode {
    double lambda;
    int m, n;  ///< eigenfunction sin(mπx/a) sin(nπy/b)
};

/// Navier eigenvalues λ = μ² + τμ, μ = π²(m²/a² + n²/b²), ascending; ties keep (m, n) order.
inline std::vector<RectangleMode> rectangle_navier_spectrum(double a, double b, double tau, std::size_t count) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("rectangle: side lengths must be positive");
    if (tau < 0.0) throw InvalidInput("rectangle: tau must be non-negative");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const int top = static_cast<int>(count) + 1;
    std::vector<RectangleMode> modes;
    for (int m = 1; m <= top; ++m)
        for (int n = 1; n <= top; ++n) {
            const double mu = pi2 * (m * m / (a * a) + n * n / (b * b));
            modes.push_back({mu * mu + tau * mu, m, n});
        }
    std::stable_sort(modes.begin(), modes.end(), [](const RectangleMode& x, const RectangleMode& y) {
        return std::tie(x.lambda, x.m, x.n) < std::tie(y.lambda, y.m, y.n);
    });
    modes.resize(std::min(count, modes.size()));
    return modes;
}

/// λ_mn on the stretched square a = e^s, b = e^{-s} (unit area).
inline double stretched_square_lambda(int m, int n, double s, double tau) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double mu = pi2 * (m * m * std::exp(-2.0 * s) + n * n * std::exp(2.0 * s));
    return mu * mu + tau * mu;
}

}  // namespace platelab::reference
