// Navier eigenvalues of the rectangle (0, e^s) x (0, e^-s) near the square.
// The second and third eigenvalues cross at s = 0: each ordered branch has a
// kink, while their sum and product stay smooth.

#include <cstdio>

#include "platelab/shape/families.hpp"
#include "platelab/shape/fd.hpp"

int main() {
    using namespace platelab;
    const auto family = shape::rectangle_stretch_family(0.0, 4);
    std::printf("%8s %16s %16s %16s %20s\n", "s", "lambda_2", "lambda_3", "sum", "product");
    for (int i = -5; i <= 5; ++i) {
        const double s = 0.02 * i;
        const auto e = family(s);
        std::printf("%8.3f %16.6f %16.6f %16.6f %20.6f\n", s, e[1], e[2], e[1] + e[2], e[1] * e[2]);
    }
    const auto slopes = shape::fd_one_sided_slopes([&](double s) { return family(s)[1]; });
    std::printf("lambda_2 slopes at s = 0: left %.6f, right %.6f, jump %.6f\n", slopes.left.value,
                slopes.right.value, slopes.jump());
    const shape::ClusterSelector pair{1, 2};
    for (int s = 1; s <= 2; ++s)
        std::printf("Lambda_%d: first derivative %.3e, second derivative %.6f\n", s,
                    shape::fd_eigen_derivative(family, pair, s).value,
                    shape::fd_eigen_derivative(family, pair, s, {}, 2).value);
}
