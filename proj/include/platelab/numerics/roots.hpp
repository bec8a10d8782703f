#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::numerics {

/// Scans [a, b] on `scan_steps` equal intervals and bisects every sign change
/// to relative width `rel_tol`. Returns ascending roots, one per sign change;
/// an empty result means no sign change was seen. Non-finite samples throw.
template <class F>
std::vector<double> find_roots(F&& f, double a, double b, int scan_steps, double rel_tol) {
    if (!(a < b)) throw InvalidInput("find_roots: require a < b");
    if (scan_steps < 2) throw InvalidInput("find_roots: scan_steps must be >= 2");
    if (!(rel_tol > 0.0)) throw InvalidInput("find_roots: rel_tol must be positive");

    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw SolverFailure("find_roots: non-finite function value at x = " + std::to_string(x));
        return v;
    };

    std::vector<double> roots;
    auto push = [&](double r) {
        if (roots.empty() || r > roots.back()) roots.push_back(r);
    };

    double x0 = a, f0 = eval(a);
    if (f0 == 0.0) push(a);
    for (int i = 1; i <= scan_steps; ++i) {
        const double x1 = (i == scan_steps) ? b : a + (b - a) * i / scan_steps;
        const double f1 = eval(x1);
        if (f1 == 0.0) {
            push(x1);
        } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
                const double fm = eval(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace platelab::numerics
