#include "mmsbkit/recovery.hpp"

#include "mmsbkit/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mmsb {

namespace {

constexpr double kRankRelTol = 1e-10;

Matrix select_rows(const Matrix& m, const IndexList& idx) {
    Matrix out(static_cast<Index>(idx.size()), m.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Index>(r)) = m.row(idx[r]);
    return out;
}

void require_well_conditioned(const Matrix& corners, double max_condition) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(corners).singularValues();
    const double smallest = sv(sv.size() - 1);
    const double cond = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
        throw NumericalFailure("corner matrix is singular (condition number " + std::to_string(cond) + ")");
    }
}

// Z = X C^{-1} for square C, via C' Z' = X'.
Matrix right_solve(const Matrix& x, const Matrix& c) {
    return c.transpose().partialPivLu().solve(x.transpose()).transpose();
}

// Z = X C' (C C')^{-1} for K x n corner rows C.
Matrix right_solve_gram(const Matrix& x, const Matrix& c, Matrix& gram) {
    gram = c * c.transpose();
    const Matrix b = x * c.transpose();
    return gram.partialPivLu().solve(b.transpose()).transpose();
}

Method ideal_of(Method m) {
    switch (m) {
    case Method::Srsc: return Method::IdealSrsc;
    case Method::Crsc: return Method::IdealCrsc;
    case Method::SrscEquivalence: return Method::IdealSrscEquivalence;
    case Method::CrscEquivalence: return Method::IdealCrscEquivalence;
    default: return m;
    }
}

// max(0, Z), then l1 row normalization; all-zero rows fall back to uniform.
void finish(RecoveryResult& result) {
    const Matrix& z = result.reconstruction;
    const Index n = z.rows();
    const Index k = z.cols();
    Matrix pi = z.cwiseMax(0.0);
    for (Index i = 0; i < n; ++i) {
        if (z.row(i).minCoeff() < 0.0) ++result.clipped_rows;
        const double total = pi.row(i).sum();
        if (total > 0.0) {
            pi.row(i) /= total;
        } else {
            pi.row(i).setConstant(1.0 / static_cast<double>(k));
            ++result.zero_row_fallbacks;
        }
    }
    result.pi_hat = MembershipMatrix(std::move(pi));
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Srsc: return "srsc";
    case Method::Crsc: return "crsc";
    case Method::SrscEquivalence: return "srsc-eq";
    case Method::CrscEquivalence: return "crsc-eq";
    case Method::IdealSrsc: return "ideal-srsc";
    case Method::IdealCrsc: return "ideal-crsc";
    case Method::IdealSrscEquivalence: return "ideal-srsc-eq";
    case Method::IdealCrscEquivalence: return "ideal-crsc-eq";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::Srsc, Method::Crsc, Method::SrscEquivalence, Method::CrscEquivalence,
                     Method::IdealSrsc, Method::IdealCrsc, Method::IdealSrscEquivalence,
                     Method::IdealCrscEquivalence}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

bool is_cone_method(Method m) {
    return m == Method::Crsc || m == Method::CrscEquivalence || m == Method::IdealCrsc ||
           m == Method::IdealCrscEquivalence;
}

bool is_equivalence_method(Method m) {
    return m == Method::SrscEquivalence || m == Method::CrscEquivalence || m == Method::IdealSrscEquivalence ||
           m == Method::IdealCrscEquivalence;
}

bool is_ideal_method(Method m) {
    return m == Method::IdealSrsc || m == Method::IdealCrsc || m == Method::IdealSrscEquivalence ||
           m == Method::IdealCrscEquivalence;
}

RecoveryResult recover_from_basis(const RegularizedLaplacian& lap, const SpectralBasis& basis, Method method,
                                  const RecoveryOptions& options) {
    const Index k = basis.k();
    const Index n = basis.vectors.rows();
    if (n != lap.n()) throw InvalidInput("basis and laplacian disagree on n");
    if (k < 1) throw InvalidInput("basis has no eigenvectors");

    RecoveryResult result;
    result.basis = basis;
    result.tau = lap.tau;
    result.method = method;

    const Matrix& v = basis.vectors;
    const bool cone = is_cone_method(method);
    const bool equivalence = is_equivalence_method(method);

    // The eigenvector matrix the pipeline works on: V (n x K) or V V' (n x n).
    const Matrix projector = equivalence ? Matrix(v * v.transpose()) : Matrix();
    const Matrix& base = equivalence ? projector : v;

    if (!cone) {
        const Matrix scaled = scale_rows_by_degree(base, lap);
        result.corners = sp_select(scaled, k);
        if (k == 1) {
            result.reconstruction = Matrix::Ones(n, 1);
        } else {
            const Matrix c = select_rows(scaled, result.corners.indices);
            require_well_conditioned(c, options.max_condition);
            if (equivalence) {
                result.reconstruction = right_solve_gram(base, c, result.corner_gram);
            } else {
                result.corner_gram = c * c.transpose();
                result.reconstruction = right_solve(base, c);
            }
        }
    } else {
        const RowNormalized normalized = normalize_rows(base);
        result.row_scales = normalized.factors;
        if (k == 1) {
            result.corners = CornerSet{{0}, CornerMethod::SvmCone};
            result.reconstruction = Matrix::Ones(n, 1);
        } else {
            result.corners = svm_cone_select(normalized.rows, k, options.svm_cone);
            const Matrix c = select_rows(normalized.rows, result.corners.indices);
            require_well_conditioned(c, options.max_condition);
            Matrix y;
            if (equivalence) {
                y = right_solve_gram(base, c, result.corner_gram);
            } else {
                result.corner_gram = c * c.transpose();
                y = right_solve(base, c);
            }
            Vector j(k);
            for (Index r = 0; r < k; ++r) {
                const Index idx = result.corners.indices[r];
                j(r) = normalized.factors(idx) / std::sqrt(lap.regularized_degrees(idx));
            }
            result.reconstruction = y * j.asDiagonal();
        }
    }
    if (k == 1) result.corner_gram = Matrix::Zero(0, 0);
    finish(result);
    return result;
}

RecoveryResult recover(const Graph& graph, Index k, Method method, std::optional<double> tau,
                       const RecoveryOptions& options) {
    if (is_ideal_method(method)) throw InvalidInput("oracle methods take a population matrix, not a graph");
    const double t = tau.value_or(default_tau(graph.n()));
    const RegularizedLaplacian lap = regularized_laplacian(graph, t);
    return recover_from_basis(lap, leading_eigenpairs(lap, k), method, options);
}

RecoveryResult recover(const PopulationMatrix& omega, Index k, Method method, std::optional<double> tau,
                       const RecoveryOptions& options) {
    const Index n = omega.n();
    if (k < 1 || k > n) throw InvalidInput("need 1 <= K <= n");
    const double t = tau.value_or(default_tau(n));
    const RegularizedLaplacian lap = regularized_laplacian(omega, t);

    // Identifiability shows up as rank K: exactly K eigenvalues are nonzero.
    SpectralBasis basis = leading_eigenpairs(lap, std::min(k + 1, n));
    const double top = std::abs(basis.values(0));
    if (!(std::abs(basis.values(k - 1)) > kRankRelTol * top) ||
        (k < n && std::abs(basis.values(k)) > kRankRelTol * top)) {
        throw InvalidInput("population laplacian does not have rank K; identifiability conditions fail");
    }
    if (k < n) {
        basis.values.conservativeResize(k);
        basis.vectors.conservativeResize(Eigen::NoChange, k);
    }
    return recover_from_basis(lap, basis, ideal_of(method), options);
}

RecoveryResult srsc(const Graph& graph, Index k, std::optional<double> tau) {
    return recover(graph, k, Method::Srsc, tau);
}
RecoveryResult crsc(const Graph& graph, Index k, std::optional<double> tau) {
    return recover(graph, k, Method::Crsc, tau);
}
RecoveryResult srsc_equivalence(const Graph& graph, Index k, std::optional<double> tau) {
    return recover(graph, k, Method::SrscEquivalence, tau);
}
RecoveryResult crsc_equivalence(const Graph& graph, Index k, std::optional<double> tau) {
    return recover(graph, k, Method::CrscEquivalence, tau);
}

RecoveryResult ideal_srsc(const PopulationMatrix& omega, Index k, std::optional<double> tau) {
    return recover(omega, k, Method::IdealSrsc, tau);
}
RecoveryResult ideal_crsc(const PopulationMatrix& omega, Index k, std::optional<double> tau) {
    return recover(omega, k, Method::IdealCrsc, tau);
}
RecoveryResult ideal_srsc_equivalence(const PopulationMatrix& omega, Index k, std::optional<double> tau) {
    return recover(omega, k, Method::IdealSrscEquivalence, tau);
}
RecoveryResult ideal_crsc_equivalence(const PopulationMatrix& omega, Index k, std::optional<double> tau) {
    return recover(omega, k, Method::IdealCrscEquivalence, tau);
}

}  // namespace mmsb
