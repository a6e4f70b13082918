#include "mmsbkit/evaluation.hpp"

#include "mmsbkit/error.hpp"
#include "mmsbkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmsb {

namespace {
constexpr Index kMaxPermutationK = 10;
}

ErrorReport mixed_hamming_error(const MembershipMatrix& pi_hat, const MembershipMatrix& pi) {
    if (pi_hat.n() != pi.n() || pi_hat.k() != pi.k()) {
        throw InvalidInput("membership matrices differ in shape");
    }
    const Index n = pi.n();
    const Index k = pi.k();
    if (k > kMaxPermutationK) throw InvalidInput("mixed-Hamming error enumerates K! permutations; K must be <= 10");
    if (n == 0) throw InvalidInput("mixed-Hamming error of an empty membership matrix");

    // The l1 distance separates over columns: cost(k, l) is the price of
    // matching truth column k with estimate column l.
    Matrix cost(k, k);
    for (Index a = 0; a < k; ++a) {
        for (Index b = 0; b < k; ++b) cost(a, b) = (pi_hat.matrix().col(b) - pi.matrix().col(a)).cwiseAbs().sum();
    }

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (Index a = 0; a < k; ++a) total += cost(a, perm[a]);
        if (total < best_cost) {
            best_cost = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Report the error summed node by node, the order the definition reads.
    ErrorReport report;
    report.permutation = best;
    report.per_node.resize(n);
    for (Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Index a = 0; a < k; ++a) row += std::abs(pi_hat(i, best[a]) - pi(i, a));
        report.per_node(i) = row;
    }
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += report.per_node(i);
    report.error = total / static_cast<double>(n);
    return report;
}

NetworkStats network_stats(const Graph& graph, const MembershipMatrix* pi) {
    NetworkStats stats;
    stats.n = graph.n();
    const double n = static_cast<double>(graph.n());
    const double twice_edges = 2.0 * static_cast<double>(graph.edge_count());
    stats.average_degree = graph.n() > 0 ? twice_edges / n : 0.0;
    stats.density = graph.n() > 1 ? twice_edges / (n * (n - 1.0)) : 0.0;
    if (pi != nullptr) {
        if (pi->n() != graph.n()) throw InvalidInput("membership row count does not match the graph");
        stats.k = pi->k();
        stats.overlap = graph.n() > 0 ? static_cast<double>(pi->mixed_count()) / n : 0.0;
    }
    return stats;
}

double laplacian_concentration(const Graph& graph, const PopulationMatrix& omega, double tau) {
    if (graph.n() != omega.n()) throw InvalidInput("graph and population matrix differ in size");
    if (graph.n() == 0) return 0.0;
    const Matrix diff = regularized_laplacian(graph, tau).matrix - regularized_laplacian(omega, tau).matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace mmsb
