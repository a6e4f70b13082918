#pragma once

#include "mmsbkit/kmeans.hpp"
#include "mmsbkit/types.hpp"

#include <string_view>

namespace mmsb {

enum class CornerMethod { SuccessiveProjection, SvmCone };

std::string_view to_string(CornerMethod method);

/// K distinct 0-based row indices, in selection order.
struct CornerSet {
    IndexList indices;
    CornerMethod method = CornerMethod::SuccessiveProjection;
};

/// max b  s.t.  w'S(i,:) >= b for all i,  ||w|| <= 1.
struct SvmSolution {
    Vector w;
    double b = 0.0;
    Vector alpha;              // dual weights over rows, nonnegative, sum 1
    IndexList support;         // rows with positive weight
    double kkt_residual = 0.0; // max(0, b - min_i w'S(i,:)) after solving
};

struct MinNormOptions {
    double gap_tolerance = 1e-10;
    // 0 means the default cap of 10 * n * m iterations.
    long long max_iterations = 0;
};

/// Successive projection: K times pick the row of largest l2 norm and
/// project every row onto the orthogonal complement of it. Norms equal to
/// within a relative 1e-12 count as ties and go to the lower index.
/// Throws NumericalFailure if the residual vanishes before K picks.
CornerSet sp_select(const Matrix& rows, Index k);

/// Solves the one-class SVM through its dual, the minimum-norm point p of
/// the convex hull of the rows: w = p/||p||, b = ||p||.
///
/// Away-step Frank-Wolfe drives the Wolfe gap under `gap_tolerance`; an
/// active-set affine refinement on the identified support then brings the
/// solution to machine precision. Rows must have unit norm.
SvmSolution one_class_svm(const Matrix& rows, const MinNormOptions& options = {});

/// Closed form for an exact cone with corner rows S_C:
///   b = 1/sqrt(1'(S_C S_C')^{-1} 1),  w = S_C'(S_C S_C')^{-1} 1 / (b 1'(S_C S_C')^{-1} 1).
/// Throws NumericalFailure if S_C S_C' is singular or (S_C S_C')^{-1} 1 is
/// not strictly positive.
SvmSolution cone_closed_form(const Matrix& corners);

struct SvmConeOptions {
    double gamma_step = 0.05;    // gamma_t = t * gamma_step * b
    int max_gamma_steps = 40;
    double candidate_slack = 1e-9;
    KMeansOptions kmeans;
    MinNormOptions min_norm;
};

/// One-class SVM, then k-means on the rows within gamma of the supporting
/// hyperplane, growing gamma until K non-empty clusters appear. Each cluster
/// contributes the member nearest its centroid (ties to the lower index);
/// clusters are reported in order of their smallest member index.
CornerSet svm_cone_select(const Matrix& rows, Index k, const SvmConeOptions& options = {});

}  // namespace mmsb
