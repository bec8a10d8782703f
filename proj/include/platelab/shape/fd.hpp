#pragma once

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "platelab/numerics/error.hpp"
#include "platelab/numerics/parallel.hpp"
#include "platelab/shape/density.hpp"

namespace platelab::shape {

/// Value at x = 0 of the interpolating polynomial through (x_i, y_i) (Neville).
inline double extrapolate_to_zero(const std::vector<double>& xs, std::vector<double> ys) {
    if (xs.empty() || xs.size() != ys.size()) throw InvalidInput("extrapolate_to_zero: mismatched samples");
    const std::size_t n = xs.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) {
            const double denom = xs[i] - xs[i + m];
            if (denom == 0.0) throw InvalidInput("extrapolate_to_zero: repeated abscissa");
            ys[i] = (xs[i] * ys[i + 1] - xs[i + m] * ys[i]) / denom;
        }
    return ys[0];
}

struct FdOptions {
    std::vector<double> steps{1e-3, 5e-4};
};

struct FdEstimate {
    double value = 0.0;              ///< Richardson-extrapolated
    std::vector<double> steps;
    std::vector<double> raw;         ///< plain difference quotient per step
};

namespace detail {

inline void check_steps(const std::vector<double>& steps) {
    if (steps.empty()) throw InvalidInput("fd: empty step sequence");
    for (double h : steps)
        if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("fd: steps must be positive");
}

/// g evaluated at every t in ts, concurrently, in input order.
inline std::vector<double> evaluate_all(const std::function<double(double)>& g, const std::vector<double>& ts) {
    std::vector<double> out(ts.size());
    std::vector<std::exception_ptr> errors(ts.size());
    numerics::parallel_for(ts.size(), [&](std::size_t i) {
        try {
            out[i] = g(ts[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace detail

/// Central first (order 1) or second (order 2) derivative of g at 0 with
/// Richardson extrapolation in h².
inline FdEstimate fd_derivative(const std::function<double(double)>& g, int order, const FdOptions& opts = {}) {
    detail::check_steps(opts.steps);
    if (order != 1 && order != 2) throw InvalidInput("fd_derivative: order must be 1 or 2");
    std::vector<double> ts;
    for (double h : opts.steps) {
        ts.push_back(h);
        ts.push_back(-h);
    }
    if (order == 2) ts.push_back(0.0);
    const auto v = detail::evaluate_all(g, ts);
    FdEstimate r;
    r.steps = opts.steps;
    std::vector<double> xs;
    for (std::size_t i = 0; i < opts.steps.size(); ++i) {
        const double h = opts.steps[i], gp = v[2 * i], gm = v[2 * i + 1];
        r.raw.push_back(order == 1 ? (gp - gm) / (2.0 * h) : (gp - 2.0 * v.back() + gm) / (h * h));
        xs.push_back(h * h);
    }
    r.value = extrapolate_to_zero(xs, r.raw);
    return r;
}

struct OneSidedSlopes {
    FdEstimate right;  ///< (g(h) − g(0))/h, extrapolated in h
    FdEstimate left;   ///< (g(0) − g(−h))/h, extrapolated in h
    double jump() const { return right.value - left.value; }
};

inline OneSidedSlopes fd_one_sided_slopes(const std::function<double(double)>& g, const FdOptions& opts = {}) {
    detail::check_steps(opts.steps);
    std::vector<double> ts{0.0};
    for (double h : opts.steps) {
        ts.push_back(h);
        ts.push_back(-h);
    }
    const auto v = detail::evaluate_all(g, ts);
    OneSidedSlopes r;
    r.right.steps = r.left.steps = opts.steps;
    for (std::size_t i = 0; i < opts.steps.size(); ++i) {
        const double h = opts.steps[i];
        r.right.raw.push_back((v[1 + 2 * i] - v[0]) / h);
        r.left.raw.push_back((v[0] - v[2 + 2 * i]) / h);
    }
    r.right.value = extrapolate_to_zero(opts.steps, r.right.raw);
    r.left.value = extrapolate_to_zero(opts.steps, r.left.raw);
    return r;
}

/// Ascending eigenvalues of the problem on the member of the family at parameter t.
using SpectrumProvider = std::function<std::vector<double>(double)>;

/// Positions [first, first + size) of a cluster in the ascending ordering.
struct ClusterSelector {
    std::size_t first = 0;
    std::size_t size = 1;

    template <class Member>
    static ClusterSelector of(const EigenCluster<Member>& c) {
        if (c.indices.empty()) throw InvalidInput("ClusterSelector: cluster without indices");
        return {c.indices.front(), c.indices.size()};
    }
};

/// Follows the cluster from t = 0 to nearby t: the eigenvalues within half the
/// spectral gap of λ_F(0) must be exactly those at the cluster's positions.
class ClusterTracker {
public:
    ClusterTracker(const std::vector<double>& base, ClusterSelector sel) : sel_(sel) {
        if (sel.size == 0 || sel.first + sel.size > base.size())
            throw InvalidInput("ClusterTracker: selector outside the base spectrum of size " +
                               std::to_string(base.size()));
        double s = 0.0;
        for (std::size_t k = 0; k < sel.size; ++k) s += base[sel.first + k];
        centre_ = s / static_cast<double>(sel.size);
        double gap = std::numeric_limits<double>::infinity();
        if (sel.first > 0) gap = std::min(gap, centre_ - base[sel.first - 1]);
        if (sel.first + sel.size < base.size()) gap = std::min(gap, base[sel.first + sel.size] - centre_);
        if (!(gap > 0.0)) throw AmbiguousCluster("ClusterTracker: cluster is not separated from its neighbours");
        half_gap_ = 0.5 * gap;
    }

    double half_gap() const { return half_gap_; }

    /// The cluster's eigenvalues at t; throws AmbiguousCluster when the match is not unique.
    std::vector<double> track(const std::vector<double>& eigs, double t) const {
        if (sel_.first + sel_.size > eigs.size())
            throw SolverFailure("ClusterTracker: spectrum at t = " + std::to_string(t) + " has only " +
                                std::to_string(eigs.size()) + " values");
        auto fail = [&](const std::string& what) {
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "cluster at position %zu cannot be re-identified at t = %.3g (%s; half gap %.6g); "
                          "use a smaller step",
                          sel_.first, t, what.c_str(), half_gap_);
            throw AmbiguousCluster(buf);
        };
        std::vector<double> out;
        for (std::size_t k = 0; k < sel_.size; ++k) {
            const double v = eigs[sel_.first + k];
            if (!(std::abs(v - centre_) < half_gap_)) fail("member moved by more than half the gap");
            out.push_back(v);
        }
        if (sel_.first > 0 && std::abs(eigs[sel_.first - 1] - centre_) < half_gap_) fail("lower neighbour entered");
        const std::size_t above = sel_.first + sel_.size;
        if (above < eigs.size() && std::abs(eigs[above] - centre_) < half_gap_) fail("upper neighbour entered");
        return out;
    }

private:
    ClusterSelector sel_;
    double centre_ = 0.0;
    double half_gap_ = 0.0;
};

/// d/dt Λ_{F,s}(t) at t = 0 (order 1) or its second derivative (order 2).
inline FdEstimate fd_eigen_derivative(const SpectrumProvider& spectrum, ClusterSelector sel, int s,
                                      const FdOptions& opts = {}, int order = 1) {
    if (s < 1 || s > static_cast<int>(sel.size))
        throw InvalidInput("fd_eigen_derivative: s = " + std::to_string(s) + " outside 1.." +
                           std::to_string(sel.size));
    const ClusterTracker tracker(spectrum(0.0), sel);
    return fd_derivative(
        [&](double t) { return elementary_symmetric(tracker.track(spectrum(t), t), s); }, order, opts);
}

struct HadamardReport {
    double formula_value = 0.0;
    double fd_value = 0.0;
    double rel_err = 0.0;
    double scale = 0.0;          ///< hadamard_scale of the formula
    double scaled_err = 0.0;     ///< |formula − fd| / max(scale, floor)
    std::vector<double> steps;
    std::vector<double> fd_raw;
    int s = 1;
    ClusterSelector cluster;
    double lambda = 0.0;
};

inline constexpr double rel_err_floor = 1e-12;

inline double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(value), rel_err_floor);
}

inline HadamardReport make_report(double formula, const FdEstimate& fd, double scale, int s, ClusterSelector sel,
                                  double lambda) {
    HadamardReport r;
    r.formula_value = formula;
    r.fd_value = fd.value;
    r.rel_err = relative_error(formula, fd.value);
    r.scale = scale;
    r.scaled_err = std::abs(formula - fd.value) / std::max(scale, rel_err_floor);
    r.steps = fd.steps;
    r.fd_raw = fd.raw;
    r.s = s;
    r.cluster = sel;
    r.lambda = lambda;
    return r;
}

}  // namespace platelab::shape
