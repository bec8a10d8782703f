#pragma once

// Star-shaped planar domains  Ω = { ρ R(θ) (cos θ, sin θ) : 0 <= ρ < 1 }
// with a truncated Fourier radius profile
//   R(θ) = base_radius · (1 + Σ_m a_m cos mθ + b_m sin mθ),  m = 1..order.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "platelab/numerics/error.hpp"
#include "platelab/numerics/jet.hpp"
#include "platelab/numerics/quadrature.hpp"

namespace platelab::geometry {

inline constexpr int default_grid_size = 256;
inline constexpr int max_fourier_order = 32;

/// Truncated Fourier series  c0 + Σ_{m>=1} cos_coeffs[m-1] cos mθ + sin_coeffs[m-1] sin mθ.
struct FourierSeries {
    double c0 = 0.0;
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    int order() const { return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size())); }

    /// k-th derivative in θ.
    double derivative(double theta, int k) const {
        double s = (k == 0) ? c0 : 0.0;
        for (int m = 1; m <= order(); ++m) {
            const double a = m <= static_cast<int>(cos_coeffs.size()) ? cos_coeffs[m - 1] : 0.0;
            const double b = m <= static_cast<int>(sin_coeffs.size()) ? sin_coeffs[m - 1] : 0.0;
            if (a == 0.0 && b == 0.0) continue;
            // d^k/dθ^k of cos(mθ) = m^k cos(mθ + kπ/2)
            const double phase = m * theta + k * std::numbers::pi / 2;
            s += std::pow(m, k) * (a * std::cos(phase) + b * std::sin(phase));
        }
        return s;
    }
    double operator()(double theta) const { return derivative(theta, 0); }

    template <int K>
    numerics::Taylor1<K> taylor(double theta) const {
        std::array<double, K + 1> d{};
        for (int k = 0; k <= K; ++k) d[k] = derivative(theta, k);
        return numerics::Taylor1<K>::from_derivatives(d);
    }

    bool all_finite() const {
        if (!std::isfinite(c0)) return false;
        for (double v : cos_coeffs)
            if (!std::isfinite(v)) return false;
        for (double v : sin_coeffs)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

class StarChart {
public:
    /// Validates positivity of R on a fine grid and the truncation order.
    StarChart(double base_radius, std::vector<double> cos_coeffs = {}, std::vector<double> sin_coeffs = {})
        : base_radius_(base_radius), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
        if (!(base_radius_ > 0.0) || !std::isfinite(base_radius_))
            throw InvalidInput("StarChart: base_radius must be positive and finite");
        series_.c0 = base_radius_;
        for (double a : cos_) series_.cos_coeffs.push_back(base_radius_ * a);
        for (double b : sin_) series_.sin_coeffs.push_back(base_radius_ * b);
        if (!series_.all_finite()) throw InvalidInput("StarChart: non-finite Fourier coefficient");
        if (series_.order() > max_fourier_order)
            throw InvalidInput("StarChart: Fourier order " + std::to_string(series_.order()) +
                               " exceeds limit " + std::to_string(max_fourier_order));
        const int n = 4096;
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n;
            if (!(series_(th) > 0.0))
                throw InvalidInput("StarChart: radius profile not positive at theta = " + std::to_string(th));
        }
    }

    static StarChart disk(double radius) { return StarChart(radius); }

    double base_radius() const { return base_radius_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }
    const FourierSeries& radius_series() const { return series_; }
    int order() const { return series_.order(); }

    bool is_disk() const {
        return std::all_of(cos_.begin(), cos_.end(), [](double v) { return v == 0.0; }) &&
               std::all_of(sin_.begin(), sin_.end(), [](double v) { return v == 0.0; });
    }

    double radius(double theta) const { return series_(theta); }
    double radius_derivative(double theta, int k) const { return series_.derivative(theta, k); }

    /// Extremes of R sampled on a fine grid.
    std::pair<double, double> radius_range() const {
        double lo = series_(0.0), hi = lo;
        for (int j = 1; j < 2048; ++j) {
            const double r = series_(2.0 * std::numbers::pi * j / 2048);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return {lo, hi};
    }

    /// Cartesian image of the reference point (ρ, θ).
    std::array<double, 2> map(double rho, double theta) const {
        const double r = rho * radius(theta);
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    /// True when x lies in the closed domain (with relative slack).
    bool contains(double x, double y, double slack = 1e-12) const {
        const double r = std::hypot(x, y);
        if (r == 0.0) return true;
        return r <= radius(std::atan2(y, x)) * (1.0 + slack);
    }

    /// Smallest trapezoid size that integrates R^p exactly for p <= power.
    int exact_grid_size(int power) const { return std::max(16, 2 * power * order() + 2); }

    friend bool operator==(const StarChart& a, const StarChart& b) {
        return a.base_radius_ == b.base_radius_ && a.cos_ == b.cos_ && a.sin_ == b.sin_;
    }

private:
    double base_radius_;
    std::vector<double> cos_, sin_;
    FourierSeries series_;
};

struct BoundaryFrame {
    std::array<double, 2> point;
    std::array<double, 2> normal;   ///< unit outward normal ν
    std::array<double, 2> tangent;  ///< unit tangent, counter-clockwise
    double curvature;               ///< K = div ν
    double arc_weight;              ///< dσ/dθ
};

inline BoundaryFrame boundary_frame(const StarChart& chart, double theta) {
    const double r = chart.radius(theta), r1 = chart.radius_derivative(theta, 1),
                 r2 = chart.radius_derivative(theta, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    const double speed = std::sqrt(r * r + r1 * r1);
    BoundaryFrame f;
    f.point = {r * c, r * s};
    // tangent X'(θ) = R' e_r + R e_θ
    f.tangent = {(r1 * c - r * s) / speed, (r1 * s + r * c) / speed};
    f.normal = {(r * c + r1 * s) / speed, (r * s - r1 * c) / speed};
    f.arc_weight = speed;
    f.curvature = (r * r + 2.0 * r1 * r1 - r * r2) / (speed * speed * speed);
    return f;
}

/// |Ω| = ½ ∮ R(θ)² dθ.
inline double volume(const StarChart& chart) {
    const auto q = numerics::periodic_trapezoid(chart.exact_grid_size(2));
    return 0.5 * q.integrate([&](double t) { return std::pow(chart.radius(t), 2); });
}

/// Boundary sampled on the equispaced periodic grid.
class BoundaryGrid {
public:
    BoundaryGrid(const StarChart& chart, int size = default_grid_size) : chart_(chart) {
        if (size < 4) throw InvalidInput("BoundaryGrid: grid size must be >= 4");
        const auto q = numerics::periodic_trapezoid(size);
        theta_ = q.nodes;
        dtheta_ = q.weights.front();
        frames_.reserve(size);
        for (double t : theta_) frames_.push_back(boundary_frame(chart, t));
    }

    const StarChart& chart() const { return chart_; }
    std::size_t size() const { return theta_.size(); }
    double theta(std::size_t j) const { return theta_[j]; }
    const BoundaryFrame& frame(std::size_t j) const { return frames_[j]; }
    /// Quadrature weight for ∮ · dσ at node j.
    double weight(std::size_t j) const { return dtheta_ * frames_[j].arc_weight; }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t j = 0; j < size(); ++j) s += weight(j) * f(j);
        return s;
    }

    double perimeter() const {
        return integrate([](std::size_t) { return 1.0; });
    }

private:
    StarChart chart_;
    std::vector<double> theta_;
    double dtheta_ = 0.0;
    std::vector<BoundaryFrame> frames_;
};

/// d/dσ of periodic boundary samples: spectral differentiation in θ divided by
/// the arc weight. The Nyquist mode of an even grid is dropped.
inline std::vector<double> tangential_derivative(const BoundaryGrid& grid, const std::vector<double>& samples) {
    const std::size_t n = grid.size();
    if (samples.size() != n)
        throw InvalidInput("tangential_derivative: expected " + std::to_string(n) + " samples, got " +
                           std::to_string(samples.size()));
    const int kmax = static_cast<int>((n - 1) / 2);
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> centred(n), cos_table(n), sin_table(n);
    for (std::size_t j = 0; j < n; ++j) {
        centred[j] = samples[j] - mean;
        const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        cos_table[j] = std::cos(ph);
        sin_table[j] = std::sin(ph);
    }
    std::vector<double> a(kmax + 1, 0.0), b(kmax + 1, 0.0);
    for (int k = 1; k <= kmax; ++k) {
        double sa = 0.0, sb = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t m = (j * static_cast<std::size_t>(k)) % n;
            sa += centred[j] * cos_table[m];
            sb += centred[j] * sin_table[m];
        }
        a[k] = 2.0 * sa / static_cast<double>(n);
        b[k] = 2.0 * sb / static_cast<double>(n);
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            const std::size_t m = (j * static_cast<std::size_t>(k)) % n;
            d += k * (b[k] * cos_table[m] - a[k] * sin_table[m]);
        }
        out[j] = d / grid.frame(j).arc_weight;
    }
    return out;
}

}  // namespace platelab::geometry
