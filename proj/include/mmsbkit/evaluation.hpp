#pragma once

#include "mmsbkit/model.hpp"

#include <optional>
#include <vector>

namespace mmsb {

struct ErrorReport {
    double error = 0.0;
    // Column permutation O: (pi_hat O)(:, k) = pi_hat(:, permutation[k]).
    std::vector<int> permutation;
    Vector per_node;  // ||(pi_hat O)(i,:) - pi(i,:)||_1
};

/// Mixed-Hamming error: (1/n) min over column permutations O of
/// sum_i ||(pi_hat O)(i,:) - pi(i,:)||_1. All K! permutations are scored, so
/// K is limited to 10. Among equally good permutations the
/// lexicographically first wins.
ErrorReport mixed_hamming_error(const MembershipMatrix& pi_hat, const MembershipMatrix& pi);

struct NetworkStats {
    Index n = 0;
    std::optional<Index> k;
    double average_degree = 0.0;
    double density = 0.0;
    std::optional<double> overlap;  // fraction of rows with max entry < 1 - 1e-12
};

NetworkStats network_stats(const Graph& graph, const MembershipMatrix* pi = nullptr);

/// Spectral norm ||L_tau - population L_tau||.
double laplacian_concentration(const Graph& graph, const PopulationMatrix& omega, double tau);

}  // namespace mmsb
