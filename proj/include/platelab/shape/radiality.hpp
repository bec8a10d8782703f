#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "platelab/shape/traces.hpp"

namespace platelab::shape {

struct RadialityOptions {
    int angular = 128;
    /// Subset of cluster members to sum over; empty means the whole cluster.
    std::vector<std::size_t> members;
    /// Accept a strict subset of the cluster (counterexample runs).
    bool allow_partial = false;
    /// Variations are measured against max(max_θ|S|, floor_fraction · G), G the largest
    /// value any of the four sums takes on any radius.
    double floor_fraction = 1e-6;
    forms::QuadratureSizes quad{};
};

/// Relative angular variation of Σv², Σ|∇v|², Σ(Δv)², Σ|D²v|² at one radius.
struct RadialityProfile {
    double radius = 0.0;
    std::array<double, 4> variation{};
    std::array<double, 4> mean{};

    double max_variation() const { return *std::max_element(variation.begin(), variation.end()); }
};

inline const std::array<const char*, 4> radiality_sum_names{"v^2", "|grad v|^2", "(lap v)^2", "|D^2 v|^2"};

/// Angular variation of the four eigenspace sums of a disk cluster, after
/// P-orthonormalization of the selected members.
template <class Member>
std::vector<RadialityProfile> radiality_profiles(const EigenCluster<Member>& cluster, const PlateParams& p,
                                                 const StarChart& chart, const std::vector<double>& radii,
                                                 const RadialityOptions& opts = {}) {
    if (!chart.is_disk()) throw InvalidInput("radiality_profiles: requires a disk chart");
    if (opts.angular < 4) throw InvalidInput("radiality_profiles: angular grid too small");
    std::vector<Member> ms;
    if (opts.members.empty()) {
        ms = cluster.members;
    } else {
        for (std::size_t i : opts.members) {
            if (i >= cluster.members.size())
                throw InvalidInput("radiality_profiles: member index " + std::to_string(i) + " out of range");
            ms.push_back(cluster.members[i]);
        }
    }
    if (ms.empty()) throw InvalidInput("radiality_profiles: empty cluster");
    if (ms.size() < cluster.members.size() && !opts.allow_partial)
        throw InvalidInput("radiality_profiles: " + std::to_string(ms.size()) + " of " +
                           std::to_string(cluster.members.size()) +
                           " cluster members selected; the radial identities need the whole eigenspace");
    const double R = chart.base_radius();
    for (double r : radii)
        if (!(r >= 0.0) || r > R * (1.0 + 1e-12))
            throw InvalidInput("radiality_profiles: radius " + std::to_string(r) + " outside [0, R]");
    const auto c = p_orthonormal_coefficients(p_gram(ms, p, chart, opts.quad));

    std::vector<std::vector<std::array<double, 4>>> sums(radii.size(), std::vector<std::array<double, 4>>(opts.angular));
    numerics::parallel_for(radii.size() * opts.angular, [&](std::size_t idx) {
        const std::size_t ir = idx / opts.angular, ia = idx % opts.angular;
        const double th = 2.0 * std::numbers::pi * ia / opts.angular;
        const double x = radii[ir] * std::cos(th), y = radii[ir] * std::sin(th);
        std::vector<ModeValues> raw;
        for (const auto& m : ms) raw.push_back(reference::mode_values(member_jet<3>(m, x, y)));
        std::array<double, 4> acc{};
        for (std::size_t l = 0; l < ms.size(); ++l) {
            ModeValues v{};
            for (std::size_t k = 0; k < ms.size(); ++k) v = detail::scaled_add(v, c[l][k], raw[k]);
            acc[0] += v.v * v.v;
            acc[1] += v.grad[0] * v.grad[0] + v.grad[1] * v.grad[1];
            acc[2] += v.lap * v.lap;
            acc[3] += v.hess[0] * v.hess[0] + v.hess[1] * v.hess[1] + v.hess[2] * v.hess[2] + v.hess[3] * v.hess[3];
        }
        sums[ir][ia] = acc;
    });

    std::array<double, 4> global{};
    for (const auto& row : sums)
        for (const auto& a : row)
            for (int k = 0; k < 4; ++k) global[k] = std::max(global[k], std::abs(a[k]));
    const double floor = opts.floor_fraction * *std::max_element(global.begin(), global.end());
    std::vector<RadialityProfile> out;
    for (std::size_t ir = 0; ir < radii.size(); ++ir) {
        RadialityProfile prof;
        prof.radius = radii[ir];
        for (int k = 0; k < 4; ++k) {
            double lo = sums[ir][0][k], hi = lo, mx = 0.0, mean = 0.0;
            for (const auto& a : sums[ir]) {
                lo = std::min(lo, a[k]);
                hi = std::max(hi, a[k]);
                mx = std::max(mx, std::abs(a[k]));
                mean += a[k];
            }
            const double scale = std::max({mx, floor, 1e-300});
            prof.variation[k] = (hi - lo) / scale;
            prof.mean[k] = mean / opts.angular;
        }
        out.push_back(prof);
    }
    return out;
}

}  // namespace platelab::shape
