#pragma once

// Bessel functions of the first kind J_n and exponentially scaled modified
// Bessel functions e^{-x} I_n for integer order and real x >= 0, with
// derivatives obtained from the standard order recurrences.

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::numerics {

namespace detail {

inline constexpr double series_limit = 12.0;

inline void check_argument(const char* who, double x) {
    if (!std::isfinite(x)) throw InvalidInput(std::string(who) + ": non-finite argument");
    if (x < 0.0) throw InvalidInput(std::string(who) + ": negative argument");
}

// Ascending series, evaluated in extended precision to tame the cancellation
// of the alternating J series near the upper end of its range.
inline double j_series(int n, double x) {
    const long double h = 0.5L * x;
    long double t = 1.0L;
    for (int k = 1; k <= n; ++k) t *= h / k;
    long double s = t;
    const long double h2 = h * h;
    for (int k = 0; k < 400; ++k) {
        t *= -h2 / ((k + 1.0L) * (k + 1.0L + n));
        s += t;
        if (k > h && std::abs(t) <= 1e-22L * std::abs(s)) break;
    }
    return static_cast<double>(s);
}

inline double i_series_scaled(int n, double x) {
    const long double h = 0.5L * x;
    long double t = 1.0L;
    for (int k = 1; k <= n; ++k) t *= h / k;
    long double s = t;
    const long double h2 = h * h;
    for (int k = 0; k < 400; ++k) {
        t *= h2 / ((k + 1.0L) * (k + 1.0L + n));
        s += t;
        if (k > h && t <= 1e-22L * s) break;
    }
    return static_cast<double>(s * std::exp(-static_cast<long double>(x)));
}

// Miller's backward recurrence, normalized with J_0 + 2 Σ J_{2k} = 1.
inline double j_miller(int n, double x) {
    const int top = 2 * ((std::max(n, static_cast<int>(x)) + 30 +
                          static_cast<int>(std::sqrt(60.0 * std::max<double>(n, x)))) / 2);
    double jp = 0.0, j = 1e-300, result = 0.0, norm = 0.0;
    for (int k = top; k > 0; --k) {
        const double jm = 2.0 * k / x * j - jp;
        jp = j;
        j = jm;  // j now holds J_{k-1}
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        if (k - 1 == n) result = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    norm += j;
    return result / norm;
}

// Backward recurrence for I_n, normalized with I_0 + 2 Σ_{k>=1} I_k = e^x,
// which delivers the scaled value directly.
inline double i_miller_scaled(int n, double x) {
    const int top = std::max(n, static_cast<int>(x)) + 40 + static_cast<int>(12.0 * std::sqrt(x));
    double ip = 0.0, i = 1e-300, result = 0.0, norm = 0.0;
    for (int k = top; k > 0; --k) {
        const double im = 2.0 * k / x * i + ip;
        ip = i;
        i = im;  // I_{k-1}
        if (i > 1e250) {
            i *= 1e-250;
            ip *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        if (k - 1 == n) result = i;
        if (k - 1 > 0) norm += 2.0 * i;
    }
    norm += i;
    return result / norm;
}

inline double j_value(int n, double x) {
    if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * j_value(-n, x);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return x <= series_limit ? j_series(n, x) : j_miller(n, x);
}

inline double i_scaled_value(int n, double x) {
    n = std::abs(n);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return x <= series_limit ? i_series_scaled(n, x) : i_miller_scaled(n, x);
}

inline double binomial(int m, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (m - k + i) / i;
    return b;
}

}  // namespace detail

/// d^deriv/dx^deriv J_n(x), deriv in 0..4.
inline double bessel_j(int n, double x, int deriv = 0) {
    detail::check_argument("bessel_j", x);
    if (n < 0) throw InvalidInput("bessel_j: negative order");
    if (deriv < 0 || deriv > 4) throw InvalidInput("bessel_j: derivative order out of range");
    double s = 0.0;
    for (int k = 0; k <= deriv; ++k)
        s += (k % 2 == 0 ? 1.0 : -1.0) * detail::binomial(deriv, k) *
             detail::j_value(n - deriv + 2 * k, x);
    return std::ldexp(s, -deriv);
}

/// e^{-x} · d^deriv/dx^deriv I_n(x), deriv in 0..4.
inline double bessel_i_scaled(int n, double x, int deriv = 0) {
    detail::check_argument("bessel_i_scaled", x);
    if (n < 0) throw InvalidInput("bessel_i_scaled: negative order");
    if (deriv < 0 || deriv > 4) throw InvalidInput("bessel_i_scaled: derivative order out of range");
    double s = 0.0;
    for (int k = 0; k <= deriv; ++k)
        s += detail::binomial(deriv, k) * detail::i_scaled_value(n - deriv + 2 * k, x);
    return std::ldexp(s, -deriv);
}

}  // namespace platelab::numerics
