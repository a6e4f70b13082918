#include "mmsbkit/model.hpp"

#include "mmsbkit/error.hpp"
#include "mmsbkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmsb {

namespace {

constexpr double kStochasticTol = 1e-12;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// MembershipMatrix

MembershipMatrix::MembershipMatrix(Matrix rows) : rows_(std::move(rows)) {
    for (Index i = 0; i < rows_.rows(); ++i) {
        double sum = 0.0;
        for (Index k = 0; k < rows_.cols(); ++k) {
            const double v = rows_(i, k);
            require(std::isfinite(v) && v >= -kStochasticTol && v <= 1.0 + kStochasticTol,
                    "membership entry (" + std::to_string(i) + "," + std::to_string(k) +
                        ") outside [0, 1]");
            sum += v;
        }
        require(rows_.cols() == 0 || std::abs(sum - 1.0) <= kStochasticTol,
                "membership row " + std::to_string(i) + " does not sum to 1");
    }
}

double MembershipMatrix::purity(Index i) const { return rows_.row(i).maxCoeff(); }

Index MembershipMatrix::mixed_count(double tol) const {
    Index count = 0;
    for (Index i = 0; i < n(); ++i) {
        if (!is_pure(i, tol)) ++count;
    }
    return count;
}

bool MembershipMatrix::has_pure_node_per_community(double tol) const {
    return pure_representatives(tol).has_value();
}

std::optional<IndexList> MembershipMatrix::pure_representatives(double tol) const {
    IndexList reps(static_cast<std::size_t>(k()), -1);
    for (Index i = 0; i < n(); ++i) {
        Index arg = 0;
        const double top = rows_.row(i).maxCoeff(&arg);
        if (top >= 1.0 - tol && reps[arg] < 0) reps[arg] = i;
    }
    if (std::ranges::any_of(reps, [](Index r) { return r < 0; })) return std::nullopt;
    return reps;
}

// ---------------------------------------------------------------------------
// BlockModel

BlockModel::BlockModel(Matrix tilde_p, double rho) : tilde_p_(std::move(tilde_p)), rho_(rho) {
    require(tilde_p_.rows() == tilde_p_.cols() && tilde_p_.rows() > 0,
            "connectivity matrix must be square and non-empty");
    require(std::isfinite(rho_) && rho_ >= 0.0 && rho_ <= 1.0, "rho must lie in [0, 1]");
    require(tilde_p_.allFinite() && tilde_p_.minCoeff() >= 0.0,
            "connectivity matrix must be nonnegative");
    require((tilde_p_ - tilde_p_.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "connectivity matrix must be symmetric");
    require(std::abs(tilde_p_.maxCoeff() - 1.0) <= 1e-12, "connectivity matrix must have max entry 1");
    const Vector sv = Eigen::JacobiSVD<Matrix>(tilde_p_).singularValues();
    require(sv(sv.size() - 1) > 1e-10, "connectivity matrix is rank deficient");
}

BlockModel BlockModel::from_unnormalized(const Matrix& raw, double rho) {
    require(raw.size() > 0 && raw.allFinite(), "connectivity matrix must be non-empty and finite");
    const double top = raw.maxCoeff();
    require(top > 0.0, "connectivity matrix must have a positive entry");
    return BlockModel(raw / top, rho * top);
}

// ---------------------------------------------------------------------------
// PopulationMatrix

PopulationMatrix::PopulationMatrix(Matrix omega) : omega_(std::move(omega)) {
    require(omega_.rows() == omega_.cols(), "population matrix must be square");
    require(omega_.allFinite(), "population matrix has non-finite entries");
    require(omega_.size() == 0 || (omega_.minCoeff() >= 0.0 && omega_.maxCoeff() <= 1.0),
            "population matrix entries must lie in [0, 1]");
    require(omega_.size() == 0 || (omega_ - omega_.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "population matrix must be symmetric");
}

PopulationMatrix build_population_matrix(const MembershipMatrix& pi, const BlockModel& block) {
    require(pi.k() == block.k(), "membership and connectivity disagree on K");
    Matrix omega = pi.matrix() * block.connectivity() * pi.matrix().transpose();
    // Symmetrize away rounding so downstream symmetric solvers see exact symmetry.
    omega = 0.5 * (omega + omega.transpose()).eval();
    // Rounding can push products of exact 0/1 inputs a hair outside [0, 1].
    omega = omega.cwiseMax(0.0).cwiseMin(1.0);
    return PopulationMatrix(std::move(omega));
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(Index n) : adjacency_(static_cast<std::size_t>(std::max<Index>(n, 0))) {
    require(n >= 0, "node count must be nonnegative");
}

Graph::Graph(Index n, std::span<const Edge> edges) : Graph(n) {
    for (const auto& [i, j] : edges) {
        require(i >= 0 && j >= 0 && i < n && j < n,
                "edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside node range");
        require(i != j, "self-loop on node " + std::to_string(i));
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
    }
    edge_count_ = 0;
    for (auto& list : adjacency_) {
        std::ranges::sort(list);
        list.erase(std::unique(list.begin(), list.end()), list.end());
        edge_count_ += list.size();
    }
    edge_count_ /= 2;
}

Vector Graph::degrees() const {
    Vector d(n());
    for (Index i = 0; i < n(); ++i) d(i) = static_cast<double>(degree(i));
    return d;
}

bool Graph::has_edge(Index i, Index j) const {
    return std::ranges::binary_search(adjacency_[i], j);
}

std::vector<Graph::Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Index i = 0; i < n(); ++i) {
        for (Index j : adjacency_[i]) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

Matrix Graph::dense() const {
    Matrix a = Matrix::Zero(n(), n());
    for (Index i = 0; i < n(); ++i) {
        for (Index j : adjacency_[i]) a(i, j) = 1.0;
    }
    return a;
}

Graph sample_adjacency(const PopulationMatrix& omega, std::uint64_t seed) {
    const Index n = omega.n();
    Rng rng(seed);
    std::vector<Graph::Edge> edges;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double p = omega(i, j);
            require(p >= 0.0 && p <= 1.0, "edge probability outside [0, 1]");
            // One draw per pair regardless of p keeps streams aligned across models.
            if (rng.uniform() < p) edges.emplace_back(i, j);
        }
    }
    return Graph(n, edges);
}

// ---------------------------------------------------------------------------
// Planted memberships

MembershipMatrix planted_memberships(Index n, Index k, Index n0, MixingProfile profile,
                                     std::uint64_t seed) {
    require(k >= 1, "K must be at least 1");
    require(n0 >= 0 && n >= 0 && k * n0 <= n, "K * n0 must not exceed n");
    const bool needs_three = profile == MixingProfile::FourProfiles || profile == MixingProfile::RandomHalf;
    require(!needs_three || k == 3, "this mixing profile is defined for K = 3 only");

    Matrix pi = Matrix::Zero(n, k);
    for (Index c = 0; c < k; ++c) {
        for (Index r = 0; r < n0; ++r) pi(c * n0 + r, c) = 1.0;
    }

    const Index first_mixed = k * n0;
    const Index mixed = n - first_mixed;
    switch (profile) {
    case MixingProfile::Uniform:
        pi.bottomRows(mixed).setConstant(1.0 / static_cast<double>(k));
        break;
    case MixingProfile::FourProfiles: {
        const double third = 1.0 / 3.0;
        const double profiles[4][3] = {
            {0.4, 0.4, 0.2}, {0.4, 0.2, 0.4}, {0.2, 0.4, 0.4}, {third, third, third}};
        const Index share = mixed / 4;
        for (Index r = 0; r < mixed; ++r) {
            const Index p = share == 0 ? 3 : std::min<Index>(r / share, 3);
            for (Index c = 0; c < 3; ++c) pi(first_mixed + r, c) = profiles[p][c];
        }
        break;
    }
    case MixingProfile::RandomHalf: {
        Rng rng(seed);
        for (Index r = first_mixed; r < n; ++r) {
            pi(r, 0) = rng.uniform_open() / 2.0;
            pi(r, 1) = rng.uniform_open() / 2.0;
            pi(r, 2) = 1.0 - pi(r, 0) - pi(r, 1);
        }
        break;
    }
    }
    return MembershipMatrix(std::move(pi));
}

Matrix constant_connectivity(Index k, double diagonal, double off_diagonal) {
    Matrix p = Matrix::Constant(k, k, off_diagonal);
    p.diagonal().setConstant(diagonal);
    return p;
}

Matrix lambda_sweep_connectivity(int i) {
    const double x = 0.075 * i;
    Matrix p(3, 3);
    p << 0.8, 0.2, 0.1,
         0.2, 0.5, x,
         0.1, x, 0.8;
    return p;
}

}  // namespace mmsb
