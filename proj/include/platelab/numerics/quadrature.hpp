#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::numerics {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// n-point Gauss–Legendre rule on [-1, 1], nodes ascending.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw InvalidInput("gauss_legendre: n must be >= 1");
    QuadratureRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, refined by Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            const double pn = (n == 1) ? x : p1;
            const double pm = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[n - 1 - i] = x;
        q.nodes[i] = -x;
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.nodes[n / 2] = 0.0;
    return q;
}

/// Gauss–Legendre rule mapped affinely onto [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule q = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < q.size(); ++i) {
        q.nodes[i] = mid + half * q.nodes[i];
        q.weights[i] *= half;
    }
    return q;
}

/// Equispaced rule on [0, 2π): θ_j = 2πj/m, weights 2π/m.
inline QuadratureRule periodic_trapezoid(int m) {
    if (m < 1) throw InvalidInput("periodic_trapezoid: m must be >= 1");
    QuadratureRule q;
    q.nodes.resize(m);
    q.weights.assign(m, 2.0 * std::numbers::pi / m);
    for (int j = 0; j < m; ++j) q.nodes[j] = 2.0 * std::numbers::pi * j / m;
    return q;
}

}  // namespace platelab::numerics
