#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "platelab/forms/problem.hpp"
#include "platelab/geometry/polynomial.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/jet.hpp"

namespace platelab::forms {

using geometry::Polynomial;
using geometry::StarChart;
using numerics::Jet;

/// w = 1 − |x|² H(x), vanishing exactly on the boundary of the chart.
///
/// H = h₀ + q²(1/R(θ)² − h₀) with q = |x|²/R(θ)² and h₀ = 1/max R², so H = 1/R²
/// on a disk. With ρ = |x|/R and a = R²h₀ ≤ 1, w = (1 − ρ²)(1 + (1 − a)(ρ² + ρ⁴)):
/// positive inside, a simple zero on the boundary. The angular part enters at
/// order |x|⁶, so w is C⁵ at the origin for any chart.
class BoundaryFactor {
public:
    explicit BoundaryFactor(const StarChart& chart) : chart_(chart) {
        const auto [lo, hi] = chart.radius_range();
        h0_ = 1.0 / (hi * hi);
        r_core_ = 1e-5 * lo;
    }

    template <int K>
    Jet<K> jet(double x, double y) const {
        const Jet<K> X = Jet<K>::variable_x(x), Y = Jet<K>::variable_y(y);
        const Jet<K> r2 = X * X + Y * Y;
        if (chart_.is_disk()) {
            const double r = chart_.base_radius();
            return 1.0 - r2 * (1.0 / (r * r));
        }
        // the O(|x|⁶) angular term and its third derivatives are below 1e-15 here
        if (std::hypot(x, y) <= r_core_) return 1.0 - r2 * h0_;
        const Jet<K> theta = numerics::polar_angle(X, Y);
        const Jet<K> radius = theta.compose(chart_.radius_series().taylor<K>(theta.value()));
        const Jet<K> inv_r2 = (radius * radius).reciprocal();
        const Jet<K> q = r2 * inv_r2;
        return 1.0 - r2 * (h0_ + q * q * (inv_r2 - h0_));
    }

private:
    StarChart chart_;
    double h0_, r_core_;
};

/// Trial functions p(x)·w(x)^c with c = 0, 1, 2 for free, pinned and clamped spaces.
class RitzBasis {
public:
    /// Zernike-type polynomials Re/Im (x+iy)^m · R_n^m(|x|/ℓ) with n ≤ degree,
    /// m ≤ angular_cap (all m when negative) and ℓ the base radius of the chart.
    static RitzBasis zernike(const StarChart& chart, SpaceConstraint constraint, int degree, int angular_cap = -1) {
        if (degree < 0) throw InvalidInput("RitzBasis: degree must be non-negative");
        RitzBasis b(chart, constraint);
        b.degree_ = degree;
        const double ell = chart.base_radius();
        const Polynomial s = (1.0 / (ell * ell)) * (Polynomial::monomial(2, 0) + Polynomial::monomial(0, 2));
        for (int n = 0; n <= degree; ++n)
            for (int m = n % 2; m <= n; m += 2) {
                if (angular_cap >= 0 && m > angular_cap) continue;
                const auto [re, im] = complex_power(m, ell);
                const int q = (n - m) / 2;
                Polynomial radial;
                for (int k = 0; k <= q; ++k) {
                    const double c = (k % 2 ? -1.0 : 1.0) * factorial(n - k) /
                                     (factorial(k) * factorial((n + m) / 2 - k) * factorial(q - k));
                    Polynomial term = Polynomial::constant(c);
                    for (int p = 0; p < q - k; ++p) term = term * s;
                    radial = radial + term;
                }
                b.add(radial * re, "Z(" + std::to_string(n) + "," + std::to_string(m) + ",cos)");
                if (m > 0) b.add(radial * im, "Z(" + std::to_string(n) + "," + std::to_string(m) + ",sin)");
            }
        return b;
    }

    static RitzBasis custom(const StarChart& chart, SpaceConstraint constraint, const std::vector<Polynomial>& polys) {
        if (polys.empty()) throw InvalidInput("RitzBasis: empty custom basis");
        RitzBasis b(chart, constraint);
        for (std::size_t i = 0; i < polys.size(); ++i) {
            b.add(polys[i], "p" + std::to_string(i));
            b.degree_ = std::max(b.degree_, polys[i].degree());
        }
        return b;
    }

    std::size_t size() const { return polys_.size(); }
    SpaceConstraint constraint() const { return constraint_; }
    int degree() const { return degree_; }
    const StarChart& chart() const { return chart_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Polynomial& polynomial(std::size_t i) const { return polys_[i]; }

    /// Power c of the boundary factor.
    int factor_power() const {
        return constraint_ == SpaceConstraint::free ? 0 : constraint_ == SpaceConstraint::pinned ? 1 : 2;
    }

    /// Index of a constant trial function, or -1.
    int constant_index() const {
        if (factor_power() != 0) return -1;
        for (std::size_t i = 0; i < polys_.size(); ++i)
            if (polys_[i].degree() == 0) return static_cast<int>(i);
        return -1;
    }

    template <int K>
    Jet<K> factor_jet(double x, double y) const {
        const int c = factor_power();
        if (c == 0) return Jet<K>::constant(1.0);
        const Jet<K> w = factor_.jet<K>(x, y);
        return c == 1 ? w : w * w;
    }

    template <int K>
    Jet<K> evaluate(std::size_t i, double x, double y) const {
        return polys_.at(i).template jet<K>(x, y) * factor_jet<K>(x, y);
    }

    template <int K>
    std::vector<Jet<K>> evaluate_all(double x, double y) const {
        const Jet<K> wc = factor_jet<K>(x, y);
        std::vector<Jet<K>> out;
        out.reserve(polys_.size());
        for (const auto& p : polys_) out.push_back(p.template jet<K>(x, y) * wc);
        return out;
    }

    /// Σ_i c_i φ_i at (x, y).
    template <int K>
    Jet<K> combine(const std::vector<double>& coeffs, double x, double y) const {
        if (coeffs.size() != polys_.size()) throw InvalidInput("RitzBasis: coefficient count mismatch");
        Jet<K> p;
        for (std::size_t i = 0; i < polys_.size(); ++i)
            if (coeffs[i] != 0.0) p += coeffs[i] * polys_[i].template jet<K>(x, y);
        return p * factor_jet<K>(x, y);
    }

private:
    RitzBasis(const StarChart& chart, SpaceConstraint constraint)
        : chart_(chart), constraint_(constraint), factor_(chart) {}

    void add(Polynomial p, std::string label) {
        polys_.push_back(std::move(p));
        labels_.push_back(std::move(label));
    }

    static double factorial(int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    }

    /// Real and imaginary parts of ((x + iy)/ℓ)^m.
    static std::pair<Polynomial, Polynomial> complex_power(int m, double ell) {
        Polynomial re, im;
        double binom = 1.0;
        const double scale = std::pow(ell, -m);
        for (int k = 0; k <= m; ++k) {
            const double c = binom * scale;
            switch (k % 4) {
                case 0: re.add(m - k, k, c); break;
                case 1: im.add(m - k, k, c); break;
                case 2: re.add(m - k, k, -c); break;
                case 3: im.add(m - k, k, -c); break;
            }
            binom = binom * (m - k) / (k + 1);
        }
        return {re, im};
    }

    StarChart chart_;
    SpaceConstraint constraint_;
    BoundaryFactor factor_;
    std::vector<Polynomial> polys_;
    std::vector<std::string> labels_;
    int degree_ = 0;
};

}  // namespace platelab::forms
