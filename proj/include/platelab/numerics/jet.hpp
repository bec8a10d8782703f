#pragma once

// Truncated Taylor arithmetic. Jet<K> carries every partial derivative of a
// function of two variables up to total order K at one point; Taylor1<K> is
// the univariate counterpart used to compose scalar functions with jets.

#include <array>
#include <cmath>
#include <cstddef>

namespace platelab::numerics {

template <int K>
struct Taylor1 {
    std::array<double, K + 1> c{};  ///< c[k] = f^{(k)}(a) / k!

    static Taylor1 variable(double a) {
        Taylor1 t;
        t.c[0] = a;
        if constexpr (K >= 1) t.c[1] = 1.0;
        return t;
    }
    static Taylor1 constant(double v) {
        Taylor1 t;
        t.c[0] = v;
        return t;
    }
    /// From derivative values f^{(k)}(a).
    static Taylor1 from_derivatives(const std::array<double, K + 1>& d) {
        Taylor1 t;
        double fact = 1.0;
        for (int k = 0; k <= K; ++k) {
            if (k > 0) fact *= k;
            t.c[k] = d[k] / fact;
        }
        return t;
    }

    friend Taylor1 operator+(Taylor1 a, const Taylor1& b) {
        for (int k = 0; k <= K; ++k) a.c[k] += b.c[k];
        return a;
    }
    friend Taylor1 operator-(Taylor1 a, const Taylor1& b) {
        for (int k = 0; k <= K; ++k) a.c[k] -= b.c[k];
        return a;
    }
    friend Taylor1 operator*(const Taylor1& a, const Taylor1& b) {
        Taylor1 r;
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Taylor1 operator*(double s, Taylor1 a) {
        for (auto& v : a.c) v *= s;
        return a;
    }
    friend Taylor1 operator+(double s, Taylor1 a) {
        a.c[0] += s;
        return a;
    }

    Taylor1 reciprocal() const {
        Taylor1 r;
        r.c[0] = 1.0 / c[0];
        for (int k = 1; k <= K; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += c[j] * r.c[k - j];
            r.c[k] = -s / c[0];
        }
        return r;
    }
};

template <int K>
class Jet {
public:
    static constexpr int order = K;
    static constexpr std::size_t size = (K + 1) * (K + 2) / 2;

    static constexpr std::size_t index(int i, int j) {
        const int d = i + j;
        return static_cast<std::size_t>(d * (d + 1) / 2 + j);
    }

    Jet() = default;
    static Jet constant(double v) {
        Jet r;
        r.c_[0] = v;
        return r;
    }
    static Jet variable_x(double x0) {
        Jet r;
        r.c_[0] = x0;
        if constexpr (K >= 1) r.c_[index(1, 0)] = 1.0;
        return r;
    }
    static Jet variable_y(double y0) {
        Jet r;
        r.c_[0] = y0;
        if constexpr (K >= 1) r.c_[index(0, 1)] = 1.0;
        return r;
    }

    double value() const { return c_[0]; }
    double coeff(int i, int j) const { return c_[index(i, j)]; }
    double& coeff(int i, int j) { return c_[index(i, j)]; }

    /// Partial derivative ∂^{i+j} / ∂x^i ∂y^j.
    double d(int i, int j) const { return c_[index(i, j)] * factorial(i) * factorial(j); }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) { return a *= -1.0; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator+(double s, Jet a) { return a + s; }
    friend Jet operator-(Jet a, double s) {
        a.c_[0] -= s;
        return a;
    }
    friend Jet operator-(double s, Jet a) { return (-a) + s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int da = 0; da <= K; ++da)
            for (int ia = 0; ia <= da; ++ia) {
                const double av = a.c_[index(ia, da - ia)];
                if (av == 0.0) continue;
                for (int db = 0; da + db <= K; ++db)
                    for (int ib = 0; ib <= db; ++ib)
                        r.c_[index(ia + ib, da - ia + db - ib)] += av * b.c_[index(ib, db - ib)];
            }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    /// f ∘ this, where f is expanded about this->value().
    Jet compose(const Taylor1<K>& f) const {
        Jet delta = *this;
        delta.c_[0] = 0.0;
        Jet r = Jet::constant(f.c[K]);
        for (int k = K - 1; k >= 0; --k) r = r * delta + f.c[k];
        return r;
    }

    Taylor1<K> base_variable() const { return Taylor1<K>::variable(c_[0]); }

    Jet reciprocal() const { return compose(Taylor1<K>::variable(c_[0]).reciprocal()); }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
    friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

    Jet pow_int(int p) const {
        Jet r = Jet::constant(1.0);
        for (int k = 0; k < p; ++k) r = r * (*this);
        return r;
    }

    // ---- derivative views used throughout the library ----
    std::array<double, 2> gradient() const { return {d(1, 0), d(0, 1)}; }
    /// Row-major 2×2 Hessian {xx, xy, yx, yy}.
    std::array<double, 4> hessian() const {
        return {d(2, 0), d(1, 1), d(1, 1), d(0, 2)};
    }
    double laplacian() const { return d(2, 0) + d(0, 2); }
    std::array<double, 2> grad_laplacian() const {
        return {d(3, 0) + d(1, 2), d(2, 1) + d(0, 3)};
    }

private:
    static constexpr double factorial(int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }
    std::array<double, size> c_{};
};

template <int K>
Jet<K> sqrt(const Jet<K>& g) {
    Taylor1<K> t;
    const double a = g.value();
    double coef = std::sqrt(a);
    double binom = 1.0;
    for (int k = 0; k <= K; ++k) {
        t.c[k] = binom * coef;
        binom *= (0.5 - k) / (k + 1.0);
        coef /= a;
    }
    return g.compose(t);
}

template <int K>
Jet<K> exp(const Jet<K>& g) {
    Taylor1<K> t;
    double f = std::exp(g.value());
    for (int k = 0; k <= K; ++k) {
        t.c[k] = f;
        f /= (k + 1.0);
    }
    return g.compose(t);
}

template <int K>
Jet<K> cos(const Jet<K>& g) {
    Taylor1<K> t;
    const double c = std::cos(g.value()), s = std::sin(g.value());
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        const double dk = (k % 4 == 0) ? c : (k % 4 == 1) ? -s : (k % 4 == 2) ? -c : s;
        t.c[k] = dk / fact;
    }
    return g.compose(t);
}

template <int K>
Jet<K> sin(const Jet<K>& g) {
    Taylor1<K> t;
    const double c = std::cos(g.value()), s = std::sin(g.value());
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        const double dk = (k % 4 == 0) ? s : (k % 4 == 1) ? c : (k % 4 == 2) ? -s : -c;
        t.c[k] = dk / fact;
    }
    return g.compose(t);
}

template <int K>
Jet<K> atan(const Jet<K>& g) {
    const double a = g.value();
    const Taylor1<K> s = Taylor1<K>::variable(a);
    const Taylor1<K> q = (1.0 + s * s).reciprocal();
    Taylor1<K> t;
    t.c[0] = std::atan(a);
    for (int k = 0; k < K; ++k) t.c[k + 1] = q.c[k] / (k + 1.0);
    return g.compose(t);
}

/// Polar angle of (x, y) as a jet; requires (x, y) away from the origin.
template <int K>
Jet<K> polar_angle(const Jet<K>& x, const Jet<K>& y) {
    const double x0 = x.value(), y0 = y.value();
    const Jet<K> num = x0 * (y - y0) - y0 * (x - x0);
    const Jet<K> den = x0 * x + y0 * y;
    Jet<K> th = atan(num / den);
    return th + std::atan2(y0, x0);
}

}  // namespace platelab::numerics
