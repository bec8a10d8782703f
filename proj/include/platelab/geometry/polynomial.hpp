#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "platelab/numerics/error.hpp"
#include "platelab/numerics/jet.hpp"

namespace platelab::geometry {

/// Bivariate polynomial Σ c_ij x^i y^j with exact coefficient arithmetic for
/// differentiation.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(double c) {
        Polynomial p;
        p.add(0, 0, c);
        return p;
    }
    static Polynomial monomial(int i, int j, double c = 1.0) {
        Polynomial p;
        p.add(i, j, c);
        return p;
    }
    static Polynomial x() { return monomial(1, 0); }
    static Polynomial y() { return monomial(0, 1); }

    void add(int i, int j, double c) {
        if (i < 0 || j < 0) throw InvalidInput("Polynomial: negative exponent");
        if (c == 0.0) return;
        auto& v = c_[{i, j}];
        v += c;
        if (v == 0.0) c_.erase({i, j});
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, v] : c_) d = std::max(d, e.first + e.second);
        return d;
    }
    bool is_zero() const { return c_.empty(); }
    const std::map<std::pair<int, int>, double>& terms() const { return c_; }

    Polynomial diff(int dx, int dy) const {
        Polynomial out;
        for (const auto& [e, v] : c_) {
            auto [i, j] = e;
            if (i < dx || j < dy) continue;
            double c = v;
            for (int k = 0; k < dx; ++k) c *= (i - k);
            for (int k = 0; k < dy; ++k) c *= (j - k);
            out.add(i - dx, j - dy, c);
        }
        return out;
    }

    double operator()(double x, double y) const {
        double s = 0.0;
        for (const auto& [e, v] : c_) s += v * std::pow(x, e.first) * std::pow(y, e.second);
        return s;
    }

    /// All partial derivatives up to total order K at (x0, y0).
    template <int K>
    numerics::Jet<K> jet(double x0, double y0) const {
        numerics::Jet<K> out;
        const int deg = std::max(degree(), 0);
        std::vector<double> px(deg + 1, 1.0), py(deg + 1, 1.0);
        for (int k = 1; k <= deg; ++k) {
            px[k] = px[k - 1] * x0;
            py[k] = py[k - 1] * y0;
        }
        for (const auto& [e, v] : c_) {
            const auto [i, j] = e;
            double ca = 1.0;
            for (int a = 0; a <= std::min(i, K); ++a) {
                double cb = 1.0;
                for (int b = 0; b <= std::min(j, K - a); ++b) {
                    out.coeff(a, b) += v * ca * cb * px[i - a] * py[j - b];
                    cb = cb * (j - b) / (b + 1);
                }
                ca = ca * (i - a) / (a + 1);
            }
        }
        return out;
    }

    Polynomial laplacian() const { return diff(2, 0) + diff(0, 2); }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) {
        for (const auto& [e, v] : b.c_) a.add(e.first, e.second, v);
        return a;
    }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) {
        for (const auto& [e, v] : b.c_) a.add(e.first, e.second, -v);
        return a;
    }
    friend Polynomial operator*(double s, Polynomial a) {
        Polynomial out;
        for (const auto& [e, v] : a.c_) out.add(e.first, e.second, s * v);
        return out;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ea, va] : a.c_)
            for (const auto& [eb, vb] : b.c_) out.add(ea.first + eb.first, ea.second + eb.second, va * vb);
        return out;
    }

private:
    std::map<std::pair<int, int>, double> c_;
};

/// Vector field ψ = (ψ₁, ψ₂) with polynomial components of total degree <= 6.
struct PolynomialField {
    Polynomial px, py;

    static constexpr int max_degree = 6;

    void validate() const {
        if (px.degree() > max_degree || py.degree() > max_degree)
            throw InvalidInput("PolynomialField: total degree exceeds " + std::to_string(max_degree));
    }

    std::array<double, 2> operator()(double x, double y) const { return {px(x, y), py(x, y)}; }

    /// Row-major Jacobian {∂xψ₁, ∂yψ₁, ∂xψ₂, ∂yψ₂}.
    std::array<double, 4> jacobian(double x, double y) const {
        return {px.diff(1, 0)(x, y), px.diff(0, 1)(x, y), py.diff(1, 0)(x, y), py.diff(0, 1)(x, y)};
    }

    Polynomial divergence() const { return px.diff(1, 0) + py.diff(0, 1); }
};

}  // namespace platelab::geometry
