#include "mmsbkit/corners.hpp"

#include "mmsbkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mmsb {

namespace {

constexpr double kTieRelTol = 1e-12;
constexpr double kResidualRelTol = 1e-10;
constexpr double kUnitRowTol = 1e-8;
constexpr double kKktTol = 1e-8;
constexpr double kOriginTol = 1e-10;
constexpr double kSingularCond = 1e12;

void require_unit_rows(const Matrix& rows) {
    for (Index i = 0; i < rows.rows(); ++i) {
        if (std::abs(rows.row(i).norm() - 1.0) > kUnitRowTol) {
            throw InvalidInput("row " + std::to_string(i) + " does not have unit l2 norm");
        }
    }
}

double condition_number(const Matrix& m) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
    const double smallest = sv(sv.size() - 1);
    return smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

// Dual state of the min-norm-point problem: p = S' alpha, g = S p = G alpha.
struct DualState {
    Vector alpha;
    Vector g;
    double pp = 0.0;  // ||p||^2 = alpha' g
};

void recompute(const Matrix& gram, const std::vector<Index>& active, DualState& st) {
    st.g.setZero();
    for (Index j : active) st.g += st.alpha(j) * gram.col(j);
    st.pp = 0.0;
    for (Index j : active) st.pp += st.alpha(j) * st.g(j);
}

std::vector<Index> active_indices(const Vector& alpha) {
    std::vector<Index> active;
    for (Index i = 0; i < alpha.size(); ++i) {
        if (alpha(i) > 0.0) active.push_back(i);
    }
    return active;
}

Index argmin_lowest(const Vector& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (v(i) < v(best)) best = i;
    }
    return best;
}

// Away-step Frank-Wolfe over the simplex of row weights.
DualState frank_wolfe(const Matrix& gram, double tol, long long cap) {
    const Index n = gram.rows();
    DualState st;
    st.alpha = Vector::Zero(n);
    st.alpha(0) = 1.0;
    st.g = gram.col(0);
    st.pp = gram(0, 0);
    std::vector<Index> active{0};

    for (long long it = 0; it < cap; ++it) {
        const Index t = argmin_lowest(st.g);
        const double fw_gap = st.pp - st.g(t);
        if (fw_gap <= tol) break;

        Index a = active.front();
        for (Index j : active) {
            if (st.g(j) > st.g(a)) a = j;
        }
        const double away_gap = st.g(a) - st.pp;

        if (fw_gap >= away_gap) {
            const double curvature = gram(t, t) - 2.0 * st.g(t) + st.pp;
            const double step = curvature > 0.0 ? std::min(1.0, fw_gap / curvature) : 1.0;
            st.alpha *= (1.0 - step);
            st.alpha(t) += step;
            st.g = (1.0 - step) * st.g + step * gram.col(t);
            if (step >= 1.0) {
                st.alpha.setZero();
                st.alpha(t) = 1.0;
                st.g = gram.col(t);
            }
        } else {
            const double max_step = st.alpha(a) / (1.0 - st.alpha(a));
            const double curvature = st.pp - 2.0 * st.g(a) + gram(a, a);
            double step = curvature > 0.0 ? std::min(max_step, away_gap / curvature) : max_step;
            st.alpha *= (1.0 + step);
            st.alpha(a) -= step;
            st.g = (1.0 + step) * st.g - step * gram.col(a);
            if (step >= max_step) st.alpha(a) = 0.0;
        }
        st.alpha = st.alpha.cwiseMax(0.0);
        active = active_indices(st.alpha);
        if (it % 64 == 63) {
            st.alpha /= st.alpha.sum();
            recompute(gram, active, st);
        } else {
            st.pp = st.alpha.dot(st.g);
        }
    }
    st.alpha /= st.alpha.sum();
    recompute(gram, active_indices(st.alpha), st);
    return st;
}

// Wolfe's active-set refinement: repeatedly project the origin onto the
// affine hull of the active rows, stepping back to the hull boundary when
// the projection leaves it, and admitting the most violating row otherwise.
DualState refine_active_set(const Matrix& gram, DualState st) {
    const Index n = gram.rows();
    std::vector<Index> active = active_indices(st.alpha);
    const int cap = static_cast<int>(50 + 10 * n);
    for (int it = 0; it < cap; ++it) {
        const Index s = static_cast<Index>(active.size());
        Matrix kkt = Matrix::Zero(s + 1, s + 1);
        for (Index r = 0; r < s; ++r) {
            for (Index c = 0; c < s; ++c) kkt(r, c) = gram(active[r], active[c]);
            kkt(r, s) = 1.0;
            kkt(s, r) = 1.0;
        }
        Vector rhs = Vector::Zero(s + 1);
        rhs(s) = 1.0;
        const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
        Vector beta = sol.head(s);

        if (beta.minCoeff() > 0.0 || s == 1) {
            if (s == 1) beta(0) = 1.0;
            for (Index r = 0; r < s; ++r) st.alpha(active[r]) = beta(r);
            st.alpha /= st.alpha.sum();
            recompute(gram, active, st);
            const Index t = argmin_lowest(st.g);
            const double scale = std::max(1.0, std::abs(st.pp));
            if (st.pp - st.g(t) <= 1e-14 * scale) break;
            if (std::ranges::find(active, t) != active.end()) break;
            active.push_back(t);
            st.alpha(t) = 0.0;
            continue;
        }

        // Step from alpha toward beta until the first weight hits zero.
        double theta = 1.0;
        for (Index r = 0; r < s; ++r) {
            const double cur = st.alpha(active[r]);
            if (beta(r) < 0.0) theta = std::min(theta, cur / (cur - beta(r)));
        }
        for (Index r = 0; r < s; ++r) {
            const Index j = active[r];
            st.alpha(j) = st.alpha(j) + theta * (beta(r) - st.alpha(j));
            if (st.alpha(j) <= 1e-300 || (beta(r) < 0.0 && st.alpha(j) <= 1e-15)) st.alpha(j) = 0.0;
        }
        active = active_indices(st.alpha);
        if (active.empty()) break;
    }
    st.alpha = st.alpha.cwiseMax(0.0);
    st.alpha /= st.alpha.sum();
    recompute(gram, active_indices(st.alpha), st);
    return st;
}

SvmSolution solution_from_weights(const Matrix& rows, const Vector& alpha) {
    SvmSolution sol;
    sol.alpha = alpha;
    const Vector p = rows.transpose() * alpha;
    sol.b = p.norm();
    if (!(sol.b > kOriginTol)) {
        throw NumericalFailure("convex hull of the rows contains the origin; rows do not form a cone");
    }
    sol.w = p / sol.b;
    sol.support = active_indices(alpha);
    sol.kkt_residual = std::max(0.0, sol.b - (rows * sol.w).minCoeff());
    return sol;
}

}  // namespace

std::string_view to_string(CornerMethod method) {
    switch (method) {
    case CornerMethod::SuccessiveProjection: return "SP";
    case CornerMethod::SvmCone: return "SVMCone";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Successive projection

CornerSet sp_select(const Matrix& rows, Index k) {
    if (k < 1 || k > std::min(rows.rows(), rows.cols())) {
        throw InvalidInput("successive projection needs 1 <= K <= min(n, m)");
    }
    Matrix residual = rows;
    const double initial = residual.rowwise().squaredNorm().maxCoeff();
    if (!(initial > 0.0)) throw NumericalFailure("successive projection input is the zero matrix");

    CornerSet out;
    out.method = CornerMethod::SuccessiveProjection;
    for (Index step = 0; step < k; ++step) {
        const Vector sq = residual.rowwise().squaredNorm();
        Index best = 0;
        for (Index i = 1; i < sq.size(); ++i) {
            if (sq(i) > sq(best) * (1.0 + kTieRelTol)) best = i;
        }
        if (!(sq(best) > kResidualRelTol * kResidualRelTol * initial)) {
            throw NumericalFailure("successive projection residual vanished after " + std::to_string(step) +
                                   " picks; input rank is below K");
        }
        out.indices.push_back(best);
        const Eigen::RowVectorXd u = residual.row(best);
        const Vector coeff = residual * u.transpose() / sq(best);
        residual.noalias() -= coeff * u;
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-class SVM

SvmSolution one_class_svm(const Matrix& rows, const MinNormOptions& options) {
    if (rows.rows() < 1 || rows.cols() < 1) throw InvalidInput("one-class SVM needs a non-empty matrix");
    require_unit_rows(rows);
    const Index n = rows.rows();
    const Matrix gram = rows * rows.transpose();
    const long long cap =
        options.max_iterations > 0 ? options.max_iterations : 10LL * n * static_cast<long long>(rows.cols());

    const DualState fw = frank_wolfe(gram, options.gap_tolerance, cap);
    const DualState refined = refine_active_set(gram, fw);

    // Keep whichever iterate has the smaller Wolfe gap.
    const auto gap = [](const DualState& st) { return st.pp - st.g.minCoeff(); };
    const DualState& best = gap(refined) <= gap(fw) ? refined : fw;

    SvmSolution sol = solution_from_weights(rows, best.alpha);
    if (!(sol.kkt_residual <= kKktTol)) {
        throw NumericalFailure("one-class SVM did not converge (KKT residual " +
                               std::to_string(sol.kkt_residual) + ")");
    }
    return sol;
}

SvmSolution cone_closed_form(const Matrix& corners) {
    if (corners.rows() < 1 || corners.rows() > corners.cols()) {
        throw InvalidInput("closed-form cone solution needs 1 <= K <= m corner rows");
    }
    if (condition_number(corners) > kSingularCond) {
        throw NumericalFailure("corner rows are numerically singular");
    }
    const Matrix gram = corners * corners.transpose();
    const Vector x = gram.partialPivLu().solve(Vector::Ones(corners.rows()));
    if (x.minCoeff() <= 0.0) {
        throw NumericalFailure("cone condition (S_C S_C')^{-1} 1 > 0 is violated");
    }
    const double total = x.sum();
    SvmSolution sol;
    sol.b = 1.0 / std::sqrt(total);
    sol.w = corners.transpose() * x / (total * sol.b);
    sol.alpha = x / total;
    for (Index i = 0; i < corners.rows(); ++i) sol.support.push_back(i);
    sol.kkt_residual = std::max(0.0, sol.b - (corners * sol.w).minCoeff());
    return sol;
}

// ---------------------------------------------------------------------------
// SVM-cone

CornerSet svm_cone_select(const Matrix& rows, Index k, const SvmConeOptions& options) {
    if (k < 1 || k > rows.rows()) throw InvalidInput("SVM-cone needs 1 <= K <= n");
    const SvmSolution svm = one_class_svm(rows, options.min_norm);
    const Vector margin = rows * svm.w;

    for (int t = 0; t <= options.max_gamma_steps; ++t) {
        const double gamma = t * options.gamma_step * svm.b;
        IndexList candidates;
        for (Index i = 0; i < rows.rows(); ++i) {
            if (margin(i) <= svm.b + gamma + options.candidate_slack) candidates.push_back(i);
        }
        if (static_cast<Index>(candidates.size()) < k) continue;

        Matrix points(static_cast<Index>(candidates.size()), rows.cols());
        for (std::size_t r = 0; r < candidates.size(); ++r) points.row(static_cast<Index>(r)) = rows.row(candidates[r]);
        const auto clusters = kmeans(points, k, options.kmeans);
        if (!clusters) continue;

        std::vector<Index> representative(static_cast<std::size_t>(k), -1);
        std::vector<Index> first_member(static_cast<std::size_t>(k), -1);
        std::vector<double> best_dist(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
        for (std::size_t r = 0; r < candidates.size(); ++r) {
            const int c = clusters->labels[r];
            const double d = (points.row(static_cast<Index>(r)) - clusters->centroids.row(c)).squaredNorm();
            if (first_member[c] < 0) first_member[c] = candidates[r];
            if (d < best_dist[c]) {
                best_dist[c] = d;
                representative[c] = candidates[r];
            }
        }
        if (std::ranges::any_of(representative, [](Index r) { return r < 0; })) continue;

        std::vector<std::size_t> order(static_cast<std::size_t>(k));
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return first_member[a] < first_member[b]; });

        CornerSet out;
        out.method = CornerMethod::SvmCone;
        for (std::size_t c : order) out.indices.push_back(representative[c]);
        return out;
    }
    throw NumericalFailure("SVM-cone found no " + std::to_string(k) +
                           " non-empty clusters before the gamma cap");
}

}  // namespace mmsb
