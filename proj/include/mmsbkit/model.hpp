#pragma once

#include "mmsbkit/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mmsb {

/// n x K row-stochastic membership matrix. Row i is the community
/// probability vector of node i.
class MembershipMatrix {
public:
    MembershipMatrix() = default;

    /// Validates that every entry lies in [0, 1] and every row sums to 1
    /// (both within 1e-12). Throws InvalidInput otherwise.
    explicit MembershipMatrix(Matrix rows);

    Index n() const { return rows_.rows(); }
    Index k() const { return rows_.cols(); }
    const Matrix& matrix() const { return rows_; }
    double operator()(Index i, Index k) const { return rows_(i, k); }

    /// max_k pi_i(k).
    double purity(Index i) const;
    bool is_pure(Index i, double tol = 1e-12) const { return purity(i) >= 1.0 - tol; }
    Index mixed_count(double tol = 1e-12) const;

    /// Identifiability condition: at least one pure node per community.
    bool has_pure_node_per_community(double tol = 1e-12) const;

    /// One pure node per community (the first found, in community order),
    /// or nullopt when some community has no pure node.
    std::optional<IndexList> pure_representatives(double tol = 1e-12) const;

private:
    Matrix rows_;
};

/// Connectivity P = rho * tildeP with tildeP symmetric, nonnegative,
/// full-rank and max entry 1.
class BlockModel {
public:
    BlockModel(Matrix tilde_p, double rho);

    /// Accepts any symmetric nonnegative full-rank matrix and moves its
    /// largest entry into rho, so that rho * tildeP equals rho_in * raw.
    static BlockModel from_unnormalized(const Matrix& raw, double rho);

    Index k() const { return tilde_p_.rows(); }
    double rho() const { return rho_; }
    const Matrix& tilde_p() const { return tilde_p_; }
    Matrix connectivity() const { return rho_ * tilde_p_; }

private:
    Matrix tilde_p_;
    double rho_;
};

/// Expected adjacency Omega = Pi P Pi'. The diagonal is kept as computed
/// (it is part of the population Laplacian's degree sums).
class PopulationMatrix {
public:
    explicit PopulationMatrix(Matrix omega);

    Index n() const { return omega_.rows(); }
    const Matrix& matrix() const { return omega_; }
    double operator()(Index i, Index j) const { return omega_(i, j); }

private:
    Matrix omega_;
};

/// Simple undirected graph stored as sorted adjacency lists.
class Graph {
public:
    using Edge = std::pair<Index, Index>;

    explicit Graph(Index n = 0);

    /// Duplicate and reversed pairs collapse to one edge. Self-loops and
    /// out-of-range ids throw InvalidInput.
    Graph(Index n, std::span<const Edge> edges);

    Index n() const { return static_cast<Index>(adjacency_.size()); }
    Index degree(Index i) const { return static_cast<Index>(adjacency_[i].size()); }
    Vector degrees() const;
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<Index>& neighbors(Index i) const { return adjacency_[i]; }
    bool has_edge(Index i, Index j) const;

    /// Each undirected edge once, as (i, j) with i < j, in lexicographic order.
    std::vector<Edge> edges() const;

    Matrix dense() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<Index>> adjacency_;
    std::size_t edge_count_ = 0;
};

PopulationMatrix build_population_matrix(const MembershipMatrix& pi, const BlockModel& block);

/// For every i < j draws A(i,j) ~ Bernoulli(Omega(i,j)) in row-major order
/// from Rng(seed). The diagonal of Omega is ignored.
Graph sample_adjacency(const PopulationMatrix& omega, std::uint64_t seed);

enum class MixingProfile {
    // K = 3: (0.4,0.4,0.2), (0.4,0.2,0.4), (0.2,0.4,0.4), (1/3,1/3,1/3) in
    // equal counts; the last profile absorbs any remainder.
    FourProfiles,
    // Every mixed row is 1/K in each community.
    Uniform,
    // K = 3: two entries rand/2, third the remainder.
    RandomHalf,
};

/// First K*n0 rows pure in blocks of n0 per community, the rest mixed
/// according to `profile`. `seed` is used by RandomHalf only.
MembershipMatrix planted_memberships(Index n, Index k, Index n0, MixingProfile profile,
                                     std::uint64_t seed = 0);

/// Unit diagonal, constant off-diagonal.
Matrix constant_connectivity(Index k, double diagonal, double off_diagonal);

/// The 3 x 3 family whose (2,3) entry is 0.075 * i.
Matrix lambda_sweep_connectivity(int i);

}  // namespace mmsb
