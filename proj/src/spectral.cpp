#include "mmsbkit/spectral.hpp"

#include "mmsbkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mmsb {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kZeroRowNorm = 1e-14;

}  // namespace

double default_tau(Index n) {
    if (n < 2) throw InvalidInput("default tau needs n >= 2, got " + std::to_string(n));
    return 0.1 * std::log(static_cast<double>(n));
}

RegularizedLaplacian regularized_laplacian(const Matrix& symmetric, const Vector& degrees, double tau) {
    if (!(std::isfinite(tau) && tau >= 0.0)) throw InvalidInput("tau must be a finite value >= 0");
    if (symmetric.rows() != symmetric.cols() || degrees.size() != symmetric.rows()) {
        throw InvalidInput("laplacian input dimensions disagree");
    }
    RegularizedLaplacian lap;
    lap.tau = tau;
    lap.regularized_degrees = degrees.array() + tau;
    for (Index i = 0; i < degrees.size(); ++i) {
        if (!(lap.regularized_degrees(i) > 0.0)) {
            throw InvalidInput("node " + std::to_string(i) +
                               " has zero regularized degree; use tau > 0 or drop isolated nodes");
        }
    }
    const Vector inv_sqrt = lap.regularized_degrees.array().rsqrt();
    lap.matrix = inv_sqrt.asDiagonal() * symmetric * inv_sqrt.asDiagonal();
    return lap;
}

RegularizedLaplacian regularized_laplacian(const Graph& graph, double tau) {
    return regularized_laplacian(graph.dense(), graph.degrees(), tau);
}

RegularizedLaplacian regularized_laplacian(const PopulationMatrix& omega, double tau) {
    return regularized_laplacian(omega.matrix(), omega.matrix().rowwise().sum(), tau);
}

SpectralBasis leading_eigenpairs(const Matrix& symmetric, Index k) {
    const Index n = symmetric.rows();
    if (k < 1 || k > n) {
        throw InvalidInput("need 1 <= K <= n, got K=" + std::to_string(k) + " n=" + std::to_string(n));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
    if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");

    const Vector& values = solver.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::ranges::stable_sort(order, [&](Index a, Index b) {
        const double ma = std::abs(values(a));
        const double mb = std::abs(values(b));
        if (ma != mb) return ma > mb;
        return values(a) > values(b);
    });

    SpectralBasis basis;
    basis.values.resize(k);
    basis.vectors.resize(n, k);
    for (Index c = 0; c < k; ++c) {
        basis.values(c) = values(order[c]);
        basis.vectors.col(c) = solver.eigenvectors().col(order[c]);
        basis.vectors.col(c).normalize();
        const double residual =
            (symmetric * basis.vectors.col(c) - basis.values(c) * basis.vectors.col(c)).norm();
        if (!(residual <= kResidualTol)) {
            throw NumericalFailure("eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
        }
    }
    return basis;
}

SpectralBasis leading_eigenpairs(const RegularizedLaplacian& lap, Index k) {
    return leading_eigenpairs(lap.matrix, k);
}

Matrix scale_rows_by_degree(const Matrix& rows, const RegularizedLaplacian& lap) {
    if (rows.rows() != lap.n()) throw InvalidInput("row count does not match the laplacian");
    return lap.regularized_degrees.cwiseSqrt().asDiagonal() * rows;
}

Matrix scale_rows_by_degree(const SpectralBasis& basis, const RegularizedLaplacian& lap) {
    return scale_rows_by_degree(basis.vectors, lap);
}

RowNormalized normalize_rows(const Matrix& rows) {
    RowNormalized out;
    out.rows.resize(rows.rows(), rows.cols());
    out.factors.resize(rows.rows());
    for (Index i = 0; i < rows.rows(); ++i) {
        const double norm = rows.row(i).norm();
        if (!(norm > kZeroRowNorm)) {
            throw NumericalFailure("row " + std::to_string(i) +
                                   " has zero norm; an isolated node or degenerate eigenvector row");
        }
        out.factors(i) = 1.0 / norm;
        out.rows.row(i) = rows.row(i) / norm;
    }
    return out;
}

}  // namespace mmsb
