#include "mmsbkit/io.hpp"

#include "mmsbkit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace mmsb {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("write to " + path.string() + " failed");
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto start = line.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) break;
        const auto stop = line.find_first_of(" \t\r", start);
        tokens.push_back(line.substr(start, stop == std::string_view::npos ? line.size() - start : stop - start));
        pos = stop == std::string_view::npos ? line.size() : stop;
    }
    return tokens;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

// ---------------------------------------------------------------------------
// Edge lists

Graph parse_edge_list(std::istream& in, const std::string& source, std::optional<Index> n) {
    std::vector<Graph::Edge> edges;
    std::vector<std::size_t> edge_lines;
    std::optional<Index> declared;
    Index max_id = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto tokens = split_whitespace(body.substr(1));
            Index count = 0;
            if (tokens.size() == 2 && tokens[0] == "nodes" && parse_number(tokens[1], count) && count >= 0) {
                declared = count;
            }
            continue;
        }
        const auto tokens = split_whitespace(body);
        Index i = 0;
        Index j = 0;
        if (tokens.size() != 2 || !parse_number(tokens[0], i) || !parse_number(tokens[1], j)) {
            throw FormatError(source, line_no, "expected two integer node ids");
        }
        if (i < 0 || j < 0) throw FormatError(source, line_no, "negative node id");
        if (i == j) throw FormatError(source, line_no, "self-loop on node " + std::to_string(i));
        edges.emplace_back(i, j);
        edge_lines.push_back(line_no);
        max_id = std::max({max_id, i, j});
    }
    const Index nodes = n.value_or(declared.value_or(max_id + 1));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].first >= nodes || edges[e].second >= nodes) {
            throw FormatError(source, edge_lines[e], "node id exceeds declared node count " + std::to_string(nodes));
        }
    }
    return Graph(nodes, edges);
}

Graph read_edge_list(const std::filesystem::path& path, std::optional<Index> n) {
    auto in = open_input(path);
    return parse_edge_list(in, path.string(), n);
}

void write_edge_list(const Graph& graph, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "# nodes " << graph.n() << '\n';
    for (const auto& [i, j] : graph.edges()) out << i << ' ' << j << '\n';
    check_written(out, path);
}

// ---------------------------------------------------------------------------
// Matrices

Matrix parse_matrix_csv(std::istream& in, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            const auto comma = body.find(',', pos);
            const auto field = trim(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            double value = 0.0;
            if (!parse_number(field, value)) {
                throw FormatError(source, line_no, "malformed number '" + std::string(field) + "'");
            }
            row.push_back(value);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError(source, line_no,
                              "expected " + std::to_string(rows.front().size()) + " columns, found " +
                                  std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    const Index r = static_cast<Index>(rows.size());
    const Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_matrix_csv(in, path.string());
}

void write_matrix_csv(const Matrix& matrix, std::ostream& out) {
    for (Index i = 0; i < matrix.rows(); ++i) {
        for (Index j = 0; j < matrix.cols(); ++j) {
            if (!std::isfinite(matrix(i, j))) throw InvalidInput("cannot write a non-finite matrix entry");
            if (j > 0) out << ',';
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const Matrix& matrix, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_matrix_csv(matrix, out);
    check_written(out, path);
}

MembershipMatrix read_memberships(const std::filesystem::path& path, bool normalize) {
    Matrix m = read_matrix_csv(path);
    for (Index i = 0; i < m.rows(); ++i) {
        if (m.row(i).minCoeff() < 0.0) {
            throw InvalidInput(path.string() + ": row " + std::to_string(i) + " has a negative membership");
        }
        if (normalize) {
            const double total = m.row(i).sum();
            if (!(total > 0.0)) {
                throw InvalidInput(path.string() + ": row " + std::to_string(i) + " is all zero and cannot be normalized");
            }
            m.row(i) /= total;
        }
    }
    return MembershipMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Sweep results

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "n,K,rho,tau,method,mean_err,sd_err,reps\n";
    for (const auto& p : result.points) {
        out << p.point.n << ',' << p.point.k << ',' << format_double(p.point.rho) << ','
            << format_double(p.point.tau) << ',' << to_string(p.point.method) << ','
            << format_double(p.mean_error) << ',' << format_double(p.sd_error) << ',' << p.repetitions << '\n';
    }
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_sweep_csv(result, out);
    check_written(out, path);
}

}  // namespace mmsb
