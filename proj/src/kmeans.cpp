#include "mmsbkit/kmeans.hpp"

#include "mmsbkit/error.hpp"
#include "mmsbkit/rng.hpp"

#include <limits>

namespace mmsb {

namespace {

// k-means++: first center uniform, the rest with probability proportional to
// squared distance from the nearest chosen center.
std::optional<Matrix> seed_centers(const Matrix& points, Index k, Rng& rng) {
    const Index n = points.rows();
    Matrix centers(k, points.cols());
    centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    Vector nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < k; ++c) {
        const double total = nearest.sum();
        if (!(total > 0.0)) return std::nullopt;
        const double target = rng.uniform() * total;
        double acc = 0.0;
        Index pick = -1;
        for (Index i = 0; i < n; ++i) {
            if (nearest(i) <= 0.0) continue;
            acc += nearest(i);
            pick = i;
            if (acc > target) break;
        }
        centers.row(c) = points.row(pick);
        nearest = nearest.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

KMeansResult lloyd(const Matrix& points, Matrix centers, int max_iterations) {
    const Index n = points.rows();
    const Index k = centers.rows();
    KMeansResult result;
    result.labels.assign(static_cast<std::size_t>(n), -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Index c = 0; c < k; ++c) {
                const double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (result.labels[i] != best) {
                result.labels[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        Matrix sums = Matrix::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(result.labels[i]) += points.row(i);
            ++counts[result.labels[i]];
        }
        for (Index c = 0; c < k; ++c) {
            // An emptied cluster keeps its previous center.
            if (counts[c] > 0) centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        }
    }
    result.inertia = 0.0;
    for (Index i = 0; i < n; ++i) result.inertia += (points.row(i) - centers.row(result.labels[i])).squaredNorm();
    result.centroids = std::move(centers);
    return result;
}

}  // namespace

std::optional<KMeansResult> kmeans(const Matrix& points, Index k, const KMeansOptions& options) {
    if (k < 1) throw InvalidInput("k-means needs K >= 1");
    if (points.rows() < k) return std::nullopt;

    std::optional<KMeansResult> best;
    for (int r = 0; r < options.restarts; ++r) {
        Rng rng(trial_seed(options.seed, static_cast<std::uint64_t>(r)));
        auto centers = seed_centers(points, k, rng);
        if (!centers) return std::nullopt;
        KMeansResult run = lloyd(points, std::move(*centers), options.max_iterations);
        run.restart = r;
        if (!best || run.inertia < best->inertia) best = std::move(run);
    }
    return best;
}

}  // namespace mmsb
