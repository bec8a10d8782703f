#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::numerics {

/// Dense symmetric matrix in packed lower-triangular storage, so A(i,j) and
/// A(j,i) are the same memory location.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order) : n_(order), a_(order * (order + 1) / 2, 0.0) {}

    std::size_t order() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[index(i, j)]; }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    static std::size_t index(std::size_t i, std::size_t j) {
        return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
    }
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Row-major dense rectangular matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : r_(rows), c_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> a_;
};

/// x^T A y
inline double bilinear(const SymMatrix& a, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.order(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.order(); ++j) row += a(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

inline std::vector<double> multiply(const SymMatrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.order(), 0.0);
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

/// T^T A T for a rectangular T (basis change).
inline SymMatrix congruence(const SymMatrix& a, const Matrix& t) {
    const std::size_t n = a.order(), m = t.cols();
    Matrix at(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) at(i, j) += aik * t(k, j);
        }
    SymMatrix out(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += t(k, i) * at(k, j);
            out(i, j) = s;
        }
    return out;
}

}  // namespace platelab::numerics
