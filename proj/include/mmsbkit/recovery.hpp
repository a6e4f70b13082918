#pragma once

#include "mmsbkit/corners.hpp"
#include "mmsbkit/model.hpp"
#include "mmsbkit/spectral.hpp"

#include <optional>
#include <string_view>

namespace mmsb {

enum class Method {
    Srsc,
    Crsc,
    SrscEquivalence,
    CrscEquivalence,
    IdealSrsc,
    IdealCrsc,
    IdealSrscEquivalence,
    IdealCrscEquivalence,
};

std::string_view to_string(Method method);

/// Parses "srsc", "crsc", "srsc-eq", "crsc-eq" (and the "ideal-" forms).
std::optional<Method> parse_method(std::string_view name);

bool is_cone_method(Method method);
bool is_equivalence_method(Method method);
bool is_ideal_method(Method method);

struct RecoveryOptions {
    SvmConeOptions svm_cone;
    // Corner matrices with a larger condition number are treated as singular.
    double max_condition = 1e12;
};

struct RecoveryResult {
    MembershipMatrix pi_hat;
    CornerSet corners;
    SpectralBasis basis;
    double tau = 0.0;
    Method method = Method::Srsc;
    std::size_t clipped_rows = 0;   // rows that had a negative entry before max(0, .)
    std::size_t zero_row_fallbacks = 0;

    // Intermediates, kept for diagnostics and cross-checks.
    Matrix reconstruction;  // Z before clipping (Z_* for cone pipelines)
    Matrix corner_gram;     // C C' for the corner rows C the pipeline inverted
    Vector row_scales;      // cone pipelines: 1/||row|| of the normalized matrix; empty otherwise
};

/// Runs the corner-hunting and membership-reconstruction steps of `method`
/// on an already computed basis of `lap`. The ideal/empirical distinction
/// only changes the result tag; the computation is identical.
RecoveryResult recover_from_basis(const RegularizedLaplacian& lap, const SpectralBasis& basis, Method method,
                                  const RecoveryOptions& options = {});

/// Builds the laplacian with tau (default_tau(n) when unset) and runs `method`.
RecoveryResult recover(const Graph& graph, Index k, Method method, std::optional<double> tau = std::nullopt,
                       const RecoveryOptions& options = {});
RecoveryResult recover(const PopulationMatrix& omega, Index k, Method method,
                       std::optional<double> tau = std::nullopt, const RecoveryOptions& options = {});

RecoveryResult srsc(const Graph& graph, Index k, std::optional<double> tau = std::nullopt);
RecoveryResult crsc(const Graph& graph, Index k, std::optional<double> tau = std::nullopt);
RecoveryResult srsc_equivalence(const Graph& graph, Index k, std::optional<double> tau = std::nullopt);
RecoveryResult crsc_equivalence(const Graph& graph, Index k, std::optional<double> tau = std::nullopt);

/// Oracle pipelines on the population matrix. Throws InvalidInput when
/// Omega does not have exactly K eigenvalues above 1e-10 in magnitude
/// relative to the largest.
RecoveryResult ideal_srsc(const PopulationMatrix& omega, Index k, std::optional<double> tau = std::nullopt);
RecoveryResult ideal_crsc(const PopulationMatrix& omega, Index k, std::optional<double> tau = std::nullopt);
RecoveryResult ideal_srsc_equivalence(const PopulationMatrix& omega, Index k,
                                      std::optional<double> tau = std::nullopt);
RecoveryResult ideal_crsc_equivalence(const PopulationMatrix& omega, Index k,
                                      std::optional<double> tau = std::nullopt);

}  // namespace mmsb
