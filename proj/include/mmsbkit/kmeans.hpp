#pragma once

#include "mmsbkit/types.hpp"

#include <cstdint>
#include <optional>

namespace mmsb {

struct KMeansOptions {
    int restarts = 10;
    int max_iterations = 100;
    std::uint64_t seed = 0x5eedULL;
};

struct KMeansResult {
    std::vector<int> labels;  // one per input row, in [0, K)
    Matrix centroids;         // K x m
    double inertia = 0.0;
    int restart = 0;          // which restart won
};

/// Lloyd's algorithm with k-means++ seeding, best inertia over restarts
/// (ties go to the earlier restart). Restart r draws from Rng(trial_seed(seed, r)).
///
/// Returns nullopt when the points hold fewer than K distinct locations,
/// because k-means++ cannot then place K distinct centers.
std::optional<KMeansResult> kmeans(const Matrix& points, Index k, const KMeansOptions& options = {});

}  // namespace mmsb
