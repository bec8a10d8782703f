// Shape derivative of the first clusters on the oval R = 1 + 0.1 cos 2θ under
// the deformation f = cos 2θ: boundary formula against finite differences of
// Ritz eigenvalues, at two basis degrees. The free problems converge fastest;
// the pinned and clamped densities need boundary derivatives up to third order.

#include <cstdio>
#include <memory>

#include "platelab/shape/density.hpp"
#include "platelab/shape/families.hpp"
#include "platelab/shape/fd.hpp"

int main() {
    using namespace platelab;
    const forms::PlateParams p{1.0, 0.3};
    const geometry::StarChart oval(1.0, {0.0, 0.1});
    const auto f = geometry::NormalPerturbation::cosine(2);
    std::printf("%-11s %6s %14s %18s %18s %10s\n", "problem", "degree", "lambda", "formula", "finite diff",
                "rel_err");
    for (auto k : forms::all_problems)
        for (int degree : {14, 20}) {
            const auto bp = forms::BoundaryProblem::of(k);
            auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(oval, bp, degree));
            const auto c = ritz::ritz_solve(p, bp, basis, 1).clusters.front();
            const auto g = shape::g_density(bp, p, c, oval);
            const double formula = shape::hadamard_derivative(g, 1, f);
            const auto fd = shape::fd_eigen_derivative(shape::ritz_family(p, bp, oval, f, degree, 6),
                                                       shape::ClusterSelector::of(c), 1);
            std::printf("%-11s %6d %14.8f %18.10f %18.10f %10.2e\n", forms::to_string(k).c_str(), degree, c.lambda,
                        formula, fd.value, shape::relative_error(formula, fd.value));
        }
}
