#include <doctest.h>

#include "mmsbkit/error.hpp"
#include "mmsbkit/io.hpp"
#include "mmsbkit/rng.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace mmsb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mmsbkit_io_" + std::to_string(Rng(std::random_device{}()).next()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Graph parse(const std::string& text, std::optional<Index> n = std::nullopt) {
    std::istringstream in(text);
    return parse_edge_list(in, "test", n);
}

}  // namespace

TEST_CASE("edge list: path graph") {
    const Graph g = parse("0 1\n1 2");
    CHECK(g.n() == 3);
    CHECK(g.degrees() == (Vector(3) << 1, 2, 1).finished());
}

TEST_CASE("edge list: reversed duplicates collapse") {
    const Graph g = parse("0 1\n1 0\n");
    CHECK(g.edge_count() == 1);
}

TEST_CASE("edge list: comments, blanks, tabs and the node header") {
    const Graph g = parse("# nodes 6\n# a comment\n\n0\t1\n  2 3  \r\n");
    CHECK(g.n() == 6);
    CHECK(g.edge_count() == 2);
    CHECK(parse("# nodes 6\n0 1\n", 10).n() == 10);
}

TEST_CASE("edge list: errors carry the line number") {
    try {
        parse("0 0");
        FAIL("self-loop accepted");
    } catch (const FormatError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }
    try {
        parse("0 1\n1 x\n");
        FAIL("malformed line accepted");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("0 1 2\n"), FormatError);
    CHECK_THROWS_AS(parse("0 -1\n"), FormatError);
    CHECK_THROWS_AS(parse("0 1.5\n"), FormatError);
    try {
        parse("0 1\n2 5\n", 4);
        FAIL("out-of-range id accepted");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("edge list round trip and permutation invariance") {
    TempDir dir;
    const MembershipMatrix pi = planted_memberships(60, 3, 10, MixingProfile::FourProfiles);
    const Graph g = sample_adjacency(
        build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), 0.2)), 4);
    write_edge_list(g, dir / "g.txt");
    CHECK(read_edge_list(dir / "g.txt") == g);

    // An isolated last node survives through the header.
    const std::vector<Graph::Edge> one{{0, 1}};
    const Graph sparse(5, one);
    write_edge_list(sparse, dir / "s.txt");
    CHECK(read_edge_list(dir / "s.txt") == sparse);
    CHECK(read_file(dir / "s.txt") == "# nodes 5\n0 1\n");

    auto edges = g.edges();
    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
        for (std::size_t i = edges.size(); i > 1; --i) std::swap(edges[i - 1], edges[rng.below(i)]);
        std::ostringstream text;
        for (const auto& [a, b] : edges) (rng.below(2) ? text << a << ' ' << b : text << b << ' ' << a) << '\n';
        CHECK(parse(text.str(), g.n()) == g);
    }
}

TEST_CASE("matrix csv round trip is bit exact") {
    TempDir dir;
    Rng rng(12);
    Matrix m(7, 3);
    for (Index i = 0; i < 7; ++i)
        for (Index j = 0; j < 3; ++j) m(i, j) = rng.uniform() * std::pow(10.0, static_cast<double>(i) - 3.0);
    m(0, 0) = 0.1;
    m(1, 1) = std::numeric_limits<double>::denorm_min();
    m(2, 2) = -1.0 / 3.0;
    m(3, 0) = 0.0;
    write_matrix_csv(m, dir / "m.csv");
    const Matrix back = read_matrix_csv(dir / "m.csv");
    REQUIRE(back.rows() == 7);
    REQUIRE(back.cols() == 3);
    for (Index i = 0; i < 7; ++i)
        for (Index j = 0; j < 3; ++j) CHECK(back(i, j) == m(i, j));

    write_matrix_csv(Matrix(0, 0), dir / "empty.csv");
    CHECK(read_file(dir / "empty.csv").empty());
    const Matrix empty = read_matrix_csv(dir / "empty.csv");
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 0);

    Matrix bad = Matrix::Zero(1, 1);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(write_matrix_csv(bad, dir / "bad.csv"), InvalidInput);
}

TEST_CASE("matrix csv formatting is locale independent and full precision") {
    std::ostringstream out;
    write_matrix_csv((Matrix(1, 3) << 0.1, 1.0, 1e-300).finished(), out);
    CHECK(out.str() == "0.10000000000000001,1,1e-300\n");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("matrix csv errors") {
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_matrix_csv(ragged, "x"), FormatError);
    std::istringstream junk("1,abc\n");
    CHECK_THROWS_AS(parse_matrix_csv(junk, "x"), FormatError);
    std::istringstream comma("1,,2\n");
    CHECK_THROWS_AS(parse_matrix_csv(comma, "x"), FormatError);
}

TEST_CASE("membership files") {
    TempDir dir;
    write_file(dir / "multi.csv", "1,0,1\n1,0,0\n");
    const MembershipMatrix pi = read_memberships(dir / "multi.csv", true);
    CHECK(pi(0, 0) == 0.5);
    CHECK(pi(0, 1) == 0.0);
    CHECK(pi(0, 2) == 0.5);
    CHECK(pi.matrix().row(1) == (Matrix(1, 3) << 1, 0, 0).finished());

    write_file(dir / "zero.csv", "0,0,0\n");
    CHECK_THROWS_AS(read_memberships(dir / "zero.csv", true), InvalidInput);
    write_file(dir / "neg.csv", "1.5,-0.5\n");
    CHECK_THROWS_AS(read_memberships(dir / "neg.csv", false), InvalidInput);
    write_file(dir / "ragged.csv", "1,0\n1\n");
    CHECK_THROWS_AS(read_memberships(dir / "ragged.csv", false), FormatError);
    CHECK_THROWS_AS(read_memberships(dir / "missing.csv", false), InvalidInput);

    const MembershipMatrix planted = planted_memberships(40, 3, 5, MixingProfile::RandomHalf, 3);
    write_matrix_csv(planted.matrix(), dir / "pi.csv");
    CHECK(read_memberships(dir / "pi.csv").matrix() == planted.matrix());
}

TEST_CASE("sweep csv schema") {
    SweepResult r;
    SweepPointResult ok;
    ok.point = SweepPoint{500, 3, 100, 0.5, 0.25, Method::Crsc};
    ok.mean_error = 0.125;
    ok.sd_error = 0.5;
    ok.repetitions = 10;
    SweepPointResult failed;
    failed.point = SweepPoint{500, 3, 200, 0.5, 0.25, Method::Srsc};
    failed.mean_error = std::numeric_limits<double>::quiet_NaN();
    failed.sd_error = std::numeric_limits<double>::quiet_NaN();
    failed.problem = "invalid";
    r.points = {ok, failed};
    std::ostringstream out;
    write_sweep_csv(r, out);
    CHECK(out.str() ==
          "n,K,rho,tau,method,mean_err,sd_err,reps\n"
          "500,3,0.5,0.25,crsc,0.125,0.5,10\n"
          "500,3,0.5,0.25,srsc,nan,nan,0\n");
}
