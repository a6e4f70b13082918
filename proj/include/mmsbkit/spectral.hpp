#pragma once

#include "mmsbkit/model.hpp"
#include "mmsbkit/types.hpp"

namespace mmsb {

/// L_tau = D_tau^{-1/2} X D_tau^{-1/2} for X = A (empirical) or Omega
/// (population), with D_tau = diag(row sums of X) + tau I.
struct RegularizedLaplacian {
    double tau = 0.0;
    Vector regularized_degrees;  // D(i,i) + tau
    Matrix matrix;

    Index n() const { return matrix.rows(); }
};

/// Leading K eigenpairs ordered by decreasing |lambda|.
struct SpectralBasis {
    Vector values;
    Matrix vectors;  // n x K, unit-norm orthogonal columns

    Index k() const { return values.size(); }
};

/// Rows rescaled to unit l2 norm plus the factors that did it.
struct RowNormalized {
    Matrix rows;
    Vector factors;  // factor i = 1 / ||input row i||
};

/// 0.1 * ln(n). Throws InvalidInput for n < 2.
double default_tau(Index n);

RegularizedLaplacian regularized_laplacian(const Graph& graph, double tau);
RegularizedLaplacian regularized_laplacian(const PopulationMatrix& omega, double tau);

/// Symmetric input with precomputed degree sums; the two overloads above
/// forward here.
RegularizedLaplacian regularized_laplacian(const Matrix& symmetric, const Vector& degrees, double tau);

/// Full dense symmetric eigendecomposition, then the K pairs of largest
/// magnitude. Ties in |lambda| prefer the positive eigenvalue, then the lower
/// index in ascending eigenvalue order. Eigenvector signs are unconstrained.
SpectralBasis leading_eigenpairs(const RegularizedLaplacian& lap, Index k);
SpectralBasis leading_eigenpairs(const Matrix& symmetric, Index k);

/// Row i multiplied by sqrt(tau + D(i,i)).
Matrix scale_rows_by_degree(const Matrix& rows, const RegularizedLaplacian& lap);
Matrix scale_rows_by_degree(const SpectralBasis& basis, const RegularizedLaplacian& lap);

/// Throws NumericalFailure on a row with norm <= 1e-14 (typically the
/// eigenvector row of an isolated node).
RowNormalized normalize_rows(const Matrix& rows);

}  // namespace mmsb
