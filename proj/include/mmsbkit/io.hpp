#pragma once

#include "mmsbkit/model.hpp"
#include "mmsbkit/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mmsb {

// Edge list: one "i j" pair per line, 0-based ids separated by spaces or
// tabs. Lines starting with '#' are comments, except that a leading
// "# nodes N" line declares the node count. Blank lines are ignored.

/// n defaults to the "# nodes" header if present, else 1 + the largest id.
/// Throws FormatError naming the line for malformed input, self-loops and
/// ids >= n.
Graph read_edge_list(const std::filesystem::path& path, std::optional<Index> n = std::nullopt);
Graph parse_edge_list(std::istream& in, const std::string& source, std::optional<Index> n = std::nullopt);

/// Writes the "# nodes N" header then every edge once as "i j" with i < j.
void write_edge_list(const Graph& graph, const std::filesystem::path& path);

/// Plain numeric CSV, no header. Values parse locale-independently.
Matrix read_matrix_csv(const std::filesystem::path& path);
Matrix parse_matrix_csv(std::istream& in, const std::string& source);

/// Each value with 17 significant digits; an empty matrix writes an empty file.
void write_matrix_csv(const Matrix& matrix, const std::filesystem::path& path);
void write_matrix_csv(const Matrix& matrix, std::ostream& out);

/// Membership CSV. With `normalize`, each row is divided by its l1 norm, so
/// 0/1 multi-label ground truth becomes row-stochastic. Negative entries,
/// ragged rows and (with normalize) all-zero rows are errors.
MembershipMatrix read_memberships(const std::filesystem::path& path, bool normalize = false);

/// Header "n,K,rho,tau,method,mean_err,sd_err,reps", one row per grid point
/// and method. Failed points carry "nan" errors and 0 repetitions.
void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);

/// Locale-independent text with 17 significant digits ("nan", "inf" and
/// "-inf" for non-finite values).
std::string format_double(double value);

}  // namespace mmsb
