#pragma once

#include "mmsbkit/model.hpp"
#include "mmsbkit/recovery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmsb {

/// How the connectivity matrix of each grid point is built. The raw matrix
/// is passed through BlockModel::from_unnormalized, so P = rho * raw.
struct ConnectivitySpec {
    enum class Kind { Constant, LambdaSweep, Custom };
    Kind kind = Kind::Constant;
    double diagonal = 1.0;      // Constant
    double off_diagonal = 0.5;  // Constant
    int index = 1;              // LambdaSweep: (2,3) entry 0.075 * index
    Matrix custom;              // Custom

    Matrix build(Index k) const;
};

struct SweepConfig {
    std::vector<Index> n{500};
    std::vector<Index> k{3};
    std::vector<Index> n0{100};
    std::vector<double> rho{1.0};
    std::vector<std::optional<double>> tau{std::nullopt};  // nullopt resolves to default_tau(n)
    MixingProfile profile = MixingProfile::FourProfiles;
    ConnectivitySpec connectivity;
    std::vector<Method> methods{Method::Srsc, Method::Crsc};
    int repetitions = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0: MMSBKIT_THREADS, else hardware concurrency
};

struct SweepPoint {
    Index n = 0;
    Index k = 0;
    Index n0 = 0;
    double rho = 0.0;
    double tau = 0.0;  // resolved
    Method method = Method::Srsc;
};

struct SweepPointResult {
    SweepPoint point;
    double mean_error = 0.0;
    double sd_error = 0.0;  // sample SD (n - 1 denominator); 0 for a single repetition
    int repetitions = 0;    // successful repetitions
    int failures = 0;       // repetitions that raised a numerical failure
    std::vector<double> errors;
    std::vector<std::uint64_t> seeds;
    std::string problem;  // non-empty when the point is invalid or every repetition failed
};

struct SweepResult {
    std::vector<SweepPointResult> points;
};

/// Grid order is n, K, n0, rho, tau with methods innermost. Repetition r of
/// every grid point uses seed trial_seed(config.seed, r) for the planted
/// memberships (RandomHalf) and the sampled graph, and all methods of a grid
/// point score the same graph. Invalid points are reported, not fatal.
SweepResult run_sweep(const SweepConfig& config);

/// Worker count for `requested` (0 means: MMSBKIT_THREADS if set, else the
/// number of logical cores). Always at least 1.
unsigned resolve_thread_count(unsigned requested);

}  // namespace mmsb
