#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "platelab/numerics/error.hpp"

namespace platelab::forms {

enum class ProblemKind { dirichlet, navier, neumann, steklov_ks, steklov_bp };

/// Essential constraint imposed on the trial space.
enum class SpaceConstraint { free, pinned, clamped };

inline constexpr std::array<ProblemKind, 5> all_problems = {ProblemKind::dirichlet, ProblemKind::navier,
                                                           ProblemKind::neumann, ProblemKind::steklov_ks,
                                                           ProblemKind::steklov_bp};

inline std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::dirichlet: return "dirichlet";
        case ProblemKind::navier: return "navier";
        case ProblemKind::neumann: return "neumann";
        case ProblemKind::steklov_ks: return "steklov-ks";
        case ProblemKind::steklov_bp: return "steklov-bp";
    }
    return "?";
}

inline std::string to_string(SpaceConstraint c) {
    switch (c) {
        case SpaceConstraint::free: return "free";
        case SpaceConstraint::pinned: return "pinned";
        case SpaceConstraint::clamped: return "clamped";
    }
    return "?";
}

inline ProblemKind parse_problem(std::string_view name) {
    for (ProblemKind k : all_problems)
        if (to_string(k) == name) return k;
    if (name == "steklov_ks" || name == "ks") return ProblemKind::steklov_ks;
    if (name == "steklov_bp" || name == "bp") return ProblemKind::steklov_bp;
    throw InvalidInput("unknown problem '" + std::string(name) +
                       "' (expected dirichlet, navier, neumann, steklov-ks or steklov-bp)");
}

/// Lateral tension τ and Poisson ratio σ.
struct PlateParams {
    double tau = 0.0;
    double sigma = 0.3;
};

struct BoundaryProblem {
    ProblemKind kind = ProblemKind::dirichlet;
    int form_index = 1;  ///< i in P[u][v] = λ J_i[u][v]
    SpaceConstraint space_constraint = SpaceConstraint::clamped;
    bool quotient_constants = false;

    static BoundaryProblem of(ProblemKind kind) {
        switch (kind) {
            case ProblemKind::dirichlet: return {kind, 1, SpaceConstraint::clamped, false};
            case ProblemKind::navier: return {kind, 1, SpaceConstraint::pinned, false};
            case ProblemKind::neumann: return {kind, 1, SpaceConstraint::free, true};
            case ProblemKind::steklov_ks: return {kind, 2, SpaceConstraint::pinned, false};
            case ProblemKind::steklov_bp: return {kind, 3, SpaceConstraint::free, true};
        }
        throw InvalidInput("unknown problem kind");
    }

    /// Steklov problems carry the eigenvalue in a boundary condition.
    bool is_steklov() const { return kind == ProblemKind::steklov_ks || kind == ProblemKind::steklov_bp; }

    friend bool operator==(const BoundaryProblem&, const BoundaryProblem&) = default;
};

inline void validate(const PlateParams& p, const BoundaryProblem& problem) {
    if (!std::isfinite(p.tau) || !std::isfinite(p.sigma)) throw InvalidInput("tau and sigma must be finite");
    if (!(p.sigma > -1.0 && p.sigma < 1.0))
        throw InvalidInput("sigma = " + std::to_string(p.sigma) + " outside the coercive range (-1, 1)");
    if (p.tau < 0.0) throw InvalidInput("tau must be non-negative");
    if (problem.quotient_constants && !(p.tau > 0.0))
        throw InvalidInput(to_string(problem.kind) + " requires tau > 0");
    if (!(problem == BoundaryProblem::of(problem.kind)))
        throw InvalidInput("inconsistent boundary problem description for " + to_string(problem.kind));
}

}  // namespace platelab::forms
