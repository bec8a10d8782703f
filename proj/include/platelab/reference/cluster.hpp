#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "platelab/numerics/error.hpp"

namespace platelab::reference {

inline constexpr double cluster_rel_tol = 1e-9;

/// Partition of ascending values into maximal runs whose consecutive relative
/// gaps do not exceed rel_tol. Indices are 0-based.
inline std::vector<std::vector<std::size_t>> cluster(const std::vector<double>& eigs, double rel_tol = cluster_rel_tol) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (i > 0 && eigs[i] < eigs[i - 1]) throw InvalidInput("cluster: input is not ascending");
        const bool joins = i > 0 && std::abs(eigs[i] - eigs[i - 1]) <=
                                        rel_tol * std::max(std::abs(eigs[i]), std::abs(eigs[i - 1]));
        if (!joins) out.emplace_back();
        out.back().push_back(i);
    }
    return out;
}

/// A numerically multiple eigenvalue with a P-orthonormal basis of its eigenspace.
template <class Member>
struct EigenCluster {
    double lambda = 0.0;                ///< mean of the member eigenvalues
    std::vector<Member> members;
    std::vector<std::size_t> indices;   ///< positions in the global ascending ordering (0-based)

    std::size_t size() const { return members.size(); }
};

/// Groups members sorted by eigenvalue into the first `count` clusters.
template <class Member, class LambdaOf>
std::vector<EigenCluster<Member>> group_clusters(const std::vector<Member>& sorted, std::size_t count,
                                                 LambdaOf&& lambda_of, double rel_tol = cluster_rel_tol) {
    std::vector<double> eigs;
    eigs.reserve(sorted.size());
    for (const auto& m : sorted) eigs.push_back(lambda_of(m));
    std::vector<EigenCluster<Member>> out;
    for (const auto& idx : cluster(eigs, rel_tol)) {
        if (out.size() == count) break;
        EigenCluster<Member> c;
        double s = 0.0;
        for (std::size_t i : idx) {
            c.members.push_back(sorted[i]);
            c.indices.push_back(i);
            s += eigs[i];
        }
        c.lambda = s / static_cast<double>(idx.size());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace platelab::reference
