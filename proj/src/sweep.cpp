#include "mmsbkit/sweep.hpp"

#include "mmsbkit/error.hpp"
#include "mmsbkit/evaluation.hpp"
#include "mmsbkit/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace mmsb {

Matrix ConnectivitySpec::build(Index k) const {
    switch (kind) {
    case Kind::Constant: return constant_connectivity(k, diagonal, off_diagonal);
    case Kind::LambdaSweep:
        if (k != 3) throw InvalidInput("the lambda-sweep connectivity family is 3 x 3");
        return lambda_sweep_connectivity(index);
    case Kind::Custom:
        if (custom.rows() != k || custom.cols() != k) throw InvalidInput("custom connectivity is not K x K");
        return custom;
    }
    return {};
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MMSBKIT_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct GridCell {
    Index n, k, n0;
    double rho;
    std::optional<double> tau;
    std::string problem;
    std::optional<BlockModel> block;
};

// Per (cell, repetition): one error per method, NaN on numerical failure.
using TrialErrors = std::vector<double>;

TrialErrors run_trial(const GridCell& cell, const SweepConfig& config, std::uint64_t seed) {
    TrialErrors errors(config.methods.size(), std::numeric_limits<double>::quiet_NaN());
    const MembershipMatrix pi = planted_memberships(cell.n, cell.k, cell.n0, config.profile, seed);
    const PopulationMatrix omega = build_population_matrix(pi, *cell.block);
    const Graph graph = sample_adjacency(omega, seed);
    const double tau = cell.tau.value_or(default_tau(cell.n));
    try {
        const RegularizedLaplacian lap = regularized_laplacian(graph, tau);
        const SpectralBasis basis = leading_eigenpairs(lap, cell.k);
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            try {
                const RecoveryResult r = recover_from_basis(lap, basis, config.methods[m]);
                errors[m] = mixed_hamming_error(r.pi_hat, pi).error;
            } catch (const NumericalFailure&) {
            }
        }
    } catch (const Error&) {
        // Isolated nodes at tau = 0 or solver failure: every method fails this trial.
    }
    return errors;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.repetitions < 1) throw InvalidInput("repetitions must be at least 1");
    if (config.methods.empty()) throw InvalidInput("sweep needs at least one method");
    for (Method m : config.methods) {
        if (is_ideal_method(m)) throw InvalidInput("sweeps run the empirical methods only");
    }

    std::vector<GridCell> cells;
    for (Index n : config.n)
        for (Index k : config.k)
            for (Index n0 : config.n0)
                for (double rho : config.rho)
                    for (const auto& tau : config.tau) {
                        GridCell cell{n, k, n0, rho, tau, {}, std::nullopt};
                        try {
                            if (k < 1 || n < 2 || k * n0 > n || n0 < 1) {
                                throw InvalidInput("invalid grid point: need n >= 2, n0 >= 1 and K * n0 <= n");
                            }
                            if (tau && !(*tau >= 0.0)) throw InvalidInput("tau must be >= 0");
                            cell.block = BlockModel::from_unnormalized(config.connectivity.build(k), rho);
                            (void)planted_memberships(n, k, n0, config.profile, 0);
                        } catch (const InvalidInput& e) {
                            cell.problem = e.what();
                        }
                        cells.push_back(std::move(cell));
                    }

    const std::size_t reps = static_cast<std::size_t>(config.repetitions);
    std::vector<TrialErrors> trials(cells.size() * reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < trials.size(); task = next++) {
            const GridCell& cell = cells[task / reps];
            if (!cell.problem.empty()) continue;
            trials[task] = run_trial(cell, config, trial_seed(config.seed, task % reps));
        }
    };
    const unsigned thread_count = std::min<unsigned>(resolve_thread_count(config.threads),
                                                     static_cast<unsigned>(std::max<std::size_t>(trials.size(), 1)));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    }

    SweepResult result;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const GridCell& cell = cells[c];
        double resolved_tau = cell.tau.value_or(cell.n >= 2 ? default_tau(cell.n) : 0.0);
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            SweepPointResult pr;
            pr.point = SweepPoint{cell.n, cell.k, cell.n0, cell.rho, resolved_tau, config.methods[m]};
            pr.problem = cell.problem;
            if (cell.problem.empty()) {
                for (std::size_t r = 0; r < reps; ++r) {
                    const double e = trials[c * reps + r][m];
                    if (std::isnan(e)) {
                        ++pr.failures;
                    } else {
                        pr.errors.push_back(e);
                        pr.seeds.push_back(trial_seed(config.seed, r));
                    }
                }
            }
            pr.repetitions = static_cast<int>(pr.errors.size());
            if (pr.repetitions == 0) {
                if (pr.problem.empty()) pr.problem = "every repetition failed numerically";
                pr.mean_error = std::numeric_limits<double>::quiet_NaN();
                pr.sd_error = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0;
                for (double e : pr.errors) sum += e;
                pr.mean_error = sum / pr.repetitions;
                double sq = 0.0;
                for (double e : pr.errors) sq += (e - pr.mean_error) * (e - pr.mean_error);
                pr.sd_error = pr.repetitions > 1 ? std::sqrt(sq / (pr.repetitions - 1)) : 0.0;
            }
            result.points.push_back(std::move(pr));
        }
    }
    return result;
}

}  // namespace mmsb
