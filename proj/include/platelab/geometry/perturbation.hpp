#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "platelab/geometry/star_chart.hpp"

namespace platelab::geometry {

/// Radial boundary displacement speed f(θ) of the family R_t = R + t f.
struct NormalPerturbation {
    FourierSeries profile;

    static NormalPerturbation constant(double c) { return {FourierSeries{c, {}, {}}}; }
    static NormalPerturbation cosine(int m, double amplitude = 1.0) {
        NormalPerturbation p;
        p.profile.cos_coeffs.assign(m, 0.0);
        p.profile.cos_coeffs[m - 1] = amplitude;
        return p;
    }
    static NormalPerturbation sine(int m, double amplitude = 1.0) {
        NormalPerturbation p;
        p.profile.sin_coeffs.assign(m, 0.0);
        p.profile.sin_coeffs[m - 1] = amplitude;
        return p;
    }

    double operator()(double theta) const { return profile(theta); }

    bool is_zero() const {
        if (profile.c0 != 0.0) return false;
        for (double v : profile.cos_coeffs)
            if (v != 0.0) return false;
        for (double v : profile.sin_coeffs)
            if (v != 0.0) return false;
        return true;
    }

    void validate() const {
        if (!profile.all_finite()) throw InvalidInput("NormalPerturbation: non-finite coefficient");
        if (profile.order() > max_fourier_order)
            throw InvalidInput("NormalPerturbation: Fourier order exceeds limit");
    }
};

/// Normal component ζ·ν of the radial velocity f(θ) e_r at the boundary node.
inline double normal_speed(const StarChart& chart, const NormalPerturbation& f, double theta) {
    const double r = chart.radius(theta), r1 = chart.radius_derivative(theta, 1);
    return f(theta) * r / std::sqrt(r * r + r1 * r1);
}

/// The chart with profile R + t f.
inline StarChart deformation(const StarChart& chart, const NormalPerturbation& f, double t) {
    f.validate();
    if (t == 0.0 || f.is_zero()) return chart;
    const double base = chart.base_radius() + t * f.profile.c0;
    const int order = std::max(chart.order(), f.profile.order());
    std::vector<double> a(order, 0.0), b(order, 0.0);
    const auto& rs = chart.radius_series();
    for (int m = 0; m < order; ++m) {
        double am = m < static_cast<int>(rs.cos_coeffs.size()) ? rs.cos_coeffs[m] : 0.0;
        double bm = m < static_cast<int>(rs.sin_coeffs.size()) ? rs.sin_coeffs[m] : 0.0;
        if (m < static_cast<int>(f.profile.cos_coeffs.size())) am += t * f.profile.cos_coeffs[m];
        if (m < static_cast<int>(f.profile.sin_coeffs.size())) bm += t * f.profile.sin_coeffs[m];
        a[m] = am;
        b[m] = bm;
    }
    // positivity check before normalizing by the new base radius
    const int n = 4096;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n;
        const double r = chart.radius(th) + t * f(th);
        if (!(r > 0.0))
            throw InvalidInput("deformation: radius not positive at theta = " + std::to_string(th));
    }
    if (!(base > 0.0)) throw InvalidInput("deformation: base radius not positive");
    for (auto& v : a) v /= base;
    for (auto& v : b) v /= base;
    while (!a.empty() && a.back() == 0.0 && (b.empty() || b.back() == 0.0)) {
        a.pop_back();
        b.pop_back();
    }
    return StarChart(base, a, b);
}

}  // namespace platelab::geometry
