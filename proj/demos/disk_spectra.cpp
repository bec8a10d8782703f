// First clusters of all five plate problems on the unit disk, from the Bessel
// solver and from a Zernike Ritz basis.

#include <cstdio>
#include <memory>

#include "platelab/reference/disk.hpp"
#include "platelab/ritz/solver.hpp"

int main() {
    using namespace platelab;
    const forms::PlateParams p{1.0, 0.3};
    const auto disk = geometry::StarChart::disk(1.0);
    std::printf("%-11s %3s %4s %20s %20s\n", "problem", "#", "mult", "bessel", "ritz (degree 14)");
    for (auto k : forms::all_problems) {
        const auto bp = forms::BoundaryProblem::of(k);
        const auto exact = reference::disk_spectrum(p, bp, 1.0, 4);
        auto basis = std::make_shared<const forms::RitzBasis>(ritz::default_basis(disk, bp, 14));
        const auto approx = ritz::ritz_solve(p, bp, basis, 4).clusters;
        for (std::size_t c = 0; c < exact.size(); ++c)
            std::printf("%-11s %3zu %4zu %20.12f %20.12f\n", forms::to_string(k).c_str(), c + 1, exact[c].size(),
                        exact[c].lambda, approx[c].lambda);
    }
}
