#pragma once

#include <array>
#include <string>
#include <vector>

#include "platelab/forms/basis.hpp"
#include "platelab/forms/problem.hpp"
#include "platelab/forms/quadrature.hpp"
#include "platelab/geometry/star_chart.hpp"
#include "platelab/numerics/dense.hpp"
#include "platelab/numerics/error.hpp"
#include "platelab/numerics/generalized_eigen.hpp"
#include "platelab/numerics/parallel.hpp"
#include "platelab/numerics/summation.hpp"

namespace platelab::forms {

using numerics::Matrix;
using numerics::SymMatrix;

struct FormMatrices {
    SymMatrix M, B, L, P;
    SymMatrix J1, J2, J3;
    SymMatrix J;  ///< J_i of the problem
    /// Columns express the reduced trial functions in the original basis.
    Matrix transform;
    std::vector<std::string> labels;
    int form_index = 1;

    std::size_t size() const { return P.order(); }
    const SymMatrix& j_form(int i) const { return i == 1 ? J1 : i == 2 ? J2 : J3; }
};

struct AssembleOptions {
    bool quotient = true;          ///< remove constants when the problem asks for it
    bool require_definite = true;  ///< fail when P is not positive definite
};

namespace detail {

struct NodeData {
    std::vector<double> v, gx, gy, hxx, hxy, hyy;
    explicit NodeData(std::size_t n) : v(n), gx(n), gy(n), hxx(n), hxy(n), hyy(n) {}
};

}  // namespace detail

/// Deflation matrix T whose columns e_k − (J[k][c]/J[c][c]) e_c span the
/// J-orthogonal complement of the constant trial function c.
inline Matrix deflation_transform(const SymMatrix& j, std::size_t c) {
    const std::size_t n = j.order();
    if (!(j(c, c) > 0.0)) throw SolverFailure("deflation: constant mode has zero J-norm");
    Matrix t(n, n - 1);
    std::size_t col = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == c) continue;
        t(k, col) = 1.0;
        t(c, col) = -j(k, c) / j(c, c);
        ++col;
    }
    return t;
}

inline FormMatrices assemble(const geometry::StarChart& chart, const PlateParams& params,
                             const BoundaryProblem& problem, const RitzBasis& basis,
                             const QuadratureSizes& quad = {}, const AssembleOptions& options = {}) {
    validate(params, problem);
    quad.validate();
    if (basis.constraint() != problem.space_constraint)
        throw InvalidInput("assemble: basis constraint '" + to_string(basis.constraint()) + "' does not match the " +
                           to_string(problem.space_constraint) + " space of " + to_string(problem.kind));
    if (!(basis.chart() == chart)) throw InvalidInput("assemble: basis was built for a different chart");

    const std::size_t n = basis.size();
    const auto nodes = volume_nodes(chart, quad);
    const std::size_t nv = nodes.size();
    std::vector<detail::NodeData> vol(n, detail::NodeData(nv));
    numerics::parallel_for(nv, [&](std::size_t q) {
        const auto jets = basis.evaluate_all<2>(nodes[q].x, nodes[q].y);
        for (std::size_t i = 0; i < n; ++i) {
            vol[i].v[q] = jets[i].value();
            vol[i].gx[q] = jets[i].d(1, 0);
            vol[i].gy[q] = jets[i].d(0, 1);
            vol[i].hxx[q] = jets[i].d(2, 0);
            vol[i].hxy[q] = jets[i].d(1, 1);
            vol[i].hyy[q] = jets[i].d(0, 2);
        }
    });

    const geometry::BoundaryGrid grid(chart, quad.boundary);
    const std::size_t nb = grid.size();
    std::vector<std::vector<double>> bval(n, std::vector<double>(nb)), bdn(n, std::vector<double>(nb));
    numerics::parallel_for(nb, [&](std::size_t q) {
        const auto& f = grid.frame(q);
        const auto jets = basis.evaluate_all<1>(f.point[0], f.point[1]);
        for (std::size_t i = 0; i < n; ++i) {
            bval[i][q] = jets[i].value();
            bdn[i][q] = jets[i].d(1, 0) * f.normal[0] + jets[i].d(0, 1) * f.normal[1];
        }
    });

    FormMatrices fm;
    fm.M = SymMatrix(n), fm.B = SymMatrix(n), fm.L = SymMatrix(n), fm.J1 = SymMatrix(n);
    fm.J2 = SymMatrix(n), fm.J3 = SymMatrix(n);
    numerics::parallel_for(n, [&](std::size_t i) {
        std::vector<double> bm(nv), bbv(nv), bl(nv), bj(nv), b2(nb), b3(nb);
        const auto& a = vol[i];
        for (std::size_t j = 0; j <= i; ++j) {
            const auto& b = vol[j];
            for (std::size_t q = 0; q < nv; ++q) {
                const double w = nodes[q].weight;
                bm[q] = w * (a.hxx[q] * b.hxx[q] + 2.0 * a.hxy[q] * b.hxy[q] + a.hyy[q] * b.hyy[q]);
                bbv[q] = w * (a.hxx[q] + a.hyy[q]) * (b.hxx[q] + b.hyy[q]);
                bl[q] = w * (a.gx[q] * b.gx[q] + a.gy[q] * b.gy[q]);
                bj[q] = w * a.v[q] * b.v[q];
            }
            for (std::size_t q = 0; q < nb; ++q) {
                b2[q] = grid.weight(q) * bdn[i][q] * bdn[j][q];
                b3[q] = grid.weight(q) * bval[i][q] * bval[j][q];
            }
            fm.M(i, j) = numerics::pairwise_sum(bm);
            fm.B(i, j) = numerics::pairwise_sum(bbv);
            fm.L(i, j) = numerics::pairwise_sum(bl);
            fm.J1(i, j) = numerics::pairwise_sum(bj);
            fm.J2(i, j) = numerics::pairwise_sum(b2);
            fm.J3(i, j) = numerics::pairwise_sum(b3);
        }
    });

    fm.labels = basis.labels();
    fm.form_index = problem.form_index;
    fm.transform = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) fm.transform(i, i) = 1.0;

    if (problem.quotient_constants && options.quotient) {
        const int c = basis.constant_index();
        if (c < 0) throw InvalidInput("assemble: quotienting constants needs a constant trial function");
        const Matrix t = deflation_transform(fm.j_form(problem.form_index), static_cast<std::size_t>(c));
        for (SymMatrix* m : {&fm.M, &fm.B, &fm.L, &fm.J1, &fm.J2, &fm.J3}) *m = numerics::congruence(*m, t);
        fm.transform = t;
        fm.labels.erase(fm.labels.begin() + c);
    }

    const std::size_t m = fm.M.order();
    fm.P = SymMatrix(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            fm.P(i, j) = (1.0 - params.sigma) * fm.M(i, j) + params.sigma * fm.B(i, j) + params.tau * fm.L(i, j);
    fm.J = fm.j_form(problem.form_index);
    if (!fm.P.all_finite() || !fm.J.all_finite()) throw SolverFailure("assemble: non-finite matrix entry");
    if (options.require_definite) {
        try {
            numerics::cholesky(fm.P);
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string("assemble: P is singular on the trial space (") + e.what() + ")");
        }
    }
    return fm;
}

}  // namespace platelab::forms
