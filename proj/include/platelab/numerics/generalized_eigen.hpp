#pragma once

// Dense symmetric-definite generalized eigenproblem A w = μ B w:
// Cholesky factorization of B, reduction to L^{-1} A L^{-T}, cyclic Jacobi.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "platelab/numerics/dense.hpp"
#include "platelab/numerics/error.hpp"

namespace platelab::numerics {

struct EigenDecomposition {
    std::vector<double> values;  ///< ascending
    Matrix vectors;              ///< column k belongs to values[k]
};

/// Lower-triangular L with B = L L^T, returned row-major in a Matrix.
inline Matrix cholesky(const SymMatrix& b) {
    const std::size_t n = b.order();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = b(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw SolverFailure("cholesky: matrix is not positive definite (pivot " +
                                std::to_string(j) + " = " + std::to_string(d) + ")");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

/// Cyclic Jacobi diagonalization of a symmetric matrix (full storage copy).
inline EigenDecomposition symmetric_eig(const SymMatrix& sym, int max_sweeps = 100) {
    const std::size_t n = sym.order();
    Matrix a(n, n), v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) a(i, j) = sym(i, j);
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));

    bool converged = n <= 1 || scale == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-17 * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                // skip entries negligible relative to both diagonals
                if (std::abs(apq) < 1e-18 * std::min(std::abs(app), std::abs(aqq)) &&
                    std::abs(apq) < 1e-18 * scale) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off > 1e-14 * scale)
            throw SolverFailure("symmetric_eig: Jacobi iteration did not converge in " +
                                std::to_string(max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Solves A w = μ B w with B symmetric positive definite. Eigenvalues come
/// back ascending; eigenvectors are B-orthonormal.
inline EigenDecomposition sym_generalized_eig(const SymMatrix& a, const SymMatrix& b) {
    const std::size_t n = a.order();
    if (b.order() != n) throw InvalidInput("sym_generalized_eig: order mismatch");
    if (!a.all_finite() || !b.all_finite())
        throw InvalidInput("sym_generalized_eig: non-finite matrix entries");
    const Matrix l = cholesky(b);

    // X = L^{-1} A  (forward substitution on columns)
    Matrix x(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, j);
            x(i, j) = s / l(i, i);
        }
    // C = X L^{-T}: solve C L^T = X row by row
    SymMatrix c(n);
    Matrix cf(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = x(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= cf(i, k) * l(j, k);
            cf(i, j) = s / l(j, j);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) c(i, j) = 0.5 * (cf(i, j) + cf(j, i));

    EigenDecomposition e = symmetric_eig(c);
    // W = L^{-T} Y
    Matrix w(n, n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t ii = n; ii-- > 0;) {
            double s = e.vectors(ii, col);
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * w(k, col);
            w(ii, col) = s / l(ii, ii);
        }
    e.vectors = std::move(w);
    return e;
}

}  // namespace platelab::numerics
