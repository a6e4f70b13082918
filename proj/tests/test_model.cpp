#include <doctest.h>

#include "mmsbkit/error.hpp"
#include "mmsbkit/model.hpp"
#include "mmsbkit/rng.hpp"

#include <cmath>
#include <set>

using namespace mmsb;

namespace {

Matrix rows3(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& r : rows) {
        Index j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("rng is reproducible and splits streams by xor") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
    }
    CHECK(Rng(42).next() != c.next());
    CHECK(trial_seed(10, 3) == (10u ^ 3u));

    Rng u(7);
    for (int i = 0; i < 10000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0.0 && x < 1.0));
        const double y = u.uniform_open();
        CHECK((y > 0.0 && y < 1.0));
        CHECK(u.below(5) < 5u);
    }
}

TEST_CASE("membership matrix validates rows") {
    CHECK_NOTHROW(MembershipMatrix(rows3({{1, 0}, {0.5, 0.5}})));
    CHECK_THROWS_AS(MembershipMatrix(rows3({{0.6, 0.6}})), InvalidInput);
    CHECK_THROWS_AS(MembershipMatrix(rows3({{1.5, -0.5}})), InvalidInput);

    const MembershipMatrix pi(rows3({{1, 0, 0}, {0.2, 0.3, 0.5}, {0, 0, 1}}));
    CHECK(pi.is_pure(0));
    CHECK_FALSE(pi.is_pure(1));
    CHECK(pi.mixed_count() == 1);
    CHECK_FALSE(pi.has_pure_node_per_community());
    CHECK_FALSE(pi.pure_representatives().has_value());
}

TEST_CASE("block model enforces normalization, symmetry and rank") {
    CHECK_NOTHROW(BlockModel(rows3({{1, 0.5}, {0.5, 1}}), 0.3));
    CHECK_THROWS_AS(BlockModel(rows3({{0.8, 0.1}, {0.1, 0.8}}), 1.0), InvalidInput);  // max entry != 1
    CHECK_THROWS_AS(BlockModel(rows3({{1, 0.5}, {0.4, 1}}), 1.0), InvalidInput);
    CHECK_THROWS_AS(BlockModel(rows3({{1, 1}, {1, 1}}), 1.0), InvalidInput);
    CHECK_THROWS_AS(BlockModel(rows3({{1, -0.1}, {-0.1, 1}}), 1.0), InvalidInput);
    CHECK_THROWS_AS(BlockModel(rows3({{1, 0.5}, {0.5, 1}}), 1.5), InvalidInput);

    const BlockModel b = BlockModel::from_unnormalized(rows3({{0.8, 0.1}, {0.1, 0.8}}), 0.5);
    CHECK(b.tilde_p().maxCoeff() == 1.0);
    CHECK(b.rho() == doctest::Approx(0.4).epsilon(1e-15));
    CHECK((b.connectivity() - 0.5 * rows3({{0.8, 0.1}, {0.1, 0.8}})).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("population matrix examples") {
    const MembershipMatrix id(Matrix::Identity(2, 2));
    const PopulationMatrix o1 = build_population_matrix(id, BlockModel(Matrix::Identity(2, 2), 1.0));
    CHECK(o1.matrix() == Matrix::Identity(2, 2));

    const MembershipMatrix pi(rows3({{1, 0}, {0, 1}, {0.5, 0.5}}));
    const PopulationMatrix o2 = build_population_matrix(pi, BlockModel(rows3({{1, 0.5}, {0.5, 1}}), 1.0));
    CHECK(o2(2, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(o2(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(o2(0, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(o2.matrix() == o2.matrix().transpose());

    const PopulationMatrix zero = build_population_matrix(pi, BlockModel(rows3({{1, 0.5}, {0.5, 1}}), 0.0));
    CHECK(zero.matrix().isZero(0.0));

    const MembershipMatrix three(Matrix::Identity(3, 3));
    CHECK_THROWS_AS(build_population_matrix(three, BlockModel(Matrix::Identity(2, 2), 1.0)), InvalidInput);
}

TEST_CASE("population matrix has rank K") {
    const MembershipMatrix pi = planted_memberships(120, 3, 20, MixingProfile::FourProfiles);
    const PopulationMatrix omega =
        build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), 0.7));
    Eigen::JacobiSVD<Matrix> svd(omega.matrix());
    const Vector s = svd.singularValues();
    CHECK(s(2) > 1e-10 * s(0));
    CHECK(s(3) <= 1e-10 * s(0));
}

TEST_CASE("graph construction deduplicates and rejects bad edges") {
    const std::vector<Graph::Edge> edges{{0, 1}, {1, 0}, {2, 1}, {1, 2}};
    const Graph g(3, edges);
    CHECK(g.edge_count() == 2);
    CHECK(g.degrees() == Vector((Vector(3) << 1, 2, 1).finished()));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK(g.dense() == g.dense().transpose());
    CHECK(g.dense().diagonal().isZero(0.0));

    const std::vector<Graph::Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Graph(3, loop), InvalidInput);
    const std::vector<Graph::Edge> out_of_range{{0, 3}};
    CHECK_THROWS_AS(Graph(3, out_of_range), InvalidInput);
}

TEST_CASE("sampling: degenerate probabilities") {
    const Index n = 12;
    const Graph empty = sample_adjacency(PopulationMatrix(Matrix::Zero(n, n)), 3);
    CHECK(empty.edge_count() == 0);
    CHECK(empty.degrees().isZero(0.0));

    Matrix ones = Matrix::Ones(n, n);
    ones.diagonal().setZero();
    const Graph complete = sample_adjacency(PopulationMatrix(ones), 3);
    CHECK(complete.edge_count() == static_cast<std::size_t>(n * (n - 1) / 2));
    CHECK(complete.degrees() == Vector::Constant(n, n - 1.0));

    // The diagonal of Omega never produces a self-loop.
    const Graph full = sample_adjacency(PopulationMatrix(Matrix::Ones(n, n)), 3);
    for (Index i = 0; i < n; ++i) CHECK_FALSE(full.has_edge(i, i));
}

TEST_CASE("sampling: density within three standard errors over 50 seeds") {
    const Index n = 200;
    const double p = 0.3;
    Matrix omega = Matrix::Constant(n, n, p);
    omega.diagonal().setZero();
    const PopulationMatrix pop(omega);
    const double pairs = n * (n - 1) / 2.0;
    double total = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) total += static_cast<double>(sample_adjacency(pop, s).edge_count()) / pairs;
    const double mean = total / 50.0;
    const double se = std::sqrt(p * (1 - p) / (pairs * 50.0));
    CHECK(std::abs(mean - p) < 3 * se);
}

TEST_CASE("sampling is seed-deterministic") {
    const MembershipMatrix pi = planted_memberships(100, 3, 20, MixingProfile::FourProfiles);
    const PopulationMatrix omega =
        build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), 0.5));
    CHECK(sample_adjacency(omega, 9) == sample_adjacency(omega, 9));
    CHECK_FALSE(sample_adjacency(omega, 9) == sample_adjacency(omega, 10));
}

TEST_CASE("planted memberships: four profiles") {
    const MembershipMatrix pi = planted_memberships(1000, 3, 100, MixingProfile::FourProfiles);
    CHECK(pi.mixed_count() == 700);
    const Matrix profiles = rows3({{0.4, 0.4, 0.2}, {0.4, 0.2, 0.4}, {0.2, 0.4, 0.4}, {1 / 3.0, 1 / 3.0, 1 / 3.0}});
    std::vector<int> counts(4, 0);
    for (Index i = 300; i < 1000; ++i) {
        for (Index p = 0; p < 4; ++p) {
            if ((pi.matrix().row(i) - profiles.row(p)).cwiseAbs().maxCoeff() < 1e-15) ++counts[p];
        }
    }
    CHECK(counts == std::vector<int>{175, 175, 175, 175});
    for (Index c = 0; c < 3; ++c) {
        for (Index i = c * 100; i < (c + 1) * 100; ++i) CHECK(pi(i, c) == 1.0);
    }

    // A remainder lands on the last profile.
    const MembershipMatrix odd = planted_memberships(15, 3, 3, MixingProfile::FourProfiles);
    int last = 0;
    for (Index i = 9; i < 15; ++i) last += (odd.matrix().row(i) - profiles.row(3)).cwiseAbs().maxCoeff() < 1e-15;
    CHECK(last == 3);

    CHECK_THROWS_AS(planted_memberships(100, 4, 10, MixingProfile::FourProfiles), InvalidInput);
    CHECK_THROWS_AS(planted_memberships(10, 3, 4, MixingProfile::Uniform), InvalidInput);
}

TEST_CASE("planted memberships: all pure and uniform") {
    const MembershipMatrix pi = planted_memberships(6, 3, 2, MixingProfile::Uniform);
    Matrix expected = Matrix::Zero(6, 3);
    for (Index i = 0; i < 6; ++i) expected(i, i / 2) = 1.0;
    CHECK(pi.matrix() == expected);

    const MembershipMatrix u = planted_memberships(50, 5, 6, MixingProfile::Uniform);
    for (Index i = 30; i < 50; ++i) CHECK((u.matrix().row(i).array() == 0.2).all());
    const auto reps = u.pure_representatives();
    REQUIRE(reps.has_value());
    CHECK(*reps == IndexList{0, 6, 12, 18, 24});
}

TEST_CASE("planted memberships: random half") {
    const MembershipMatrix a = planted_memberships(800, 3, 200, MixingProfile::RandomHalf, 7);
    const MembershipMatrix b = planted_memberships(800, 3, 200, MixingProfile::RandomHalf, 7);
    CHECK(a.matrix() == b.matrix());
    CHECK(a.mixed_count() == 200);
    for (Index i = 600; i < 800; ++i) {
        CHECK(std::abs(a.matrix().row(i).sum() - 1.0) < 1e-12);
        CHECK(a(i, 0) > 0.0);
        CHECK(a(i, 0) <= 0.5);
        CHECK(a(i, 1) > 0.0);
        CHECK(a(i, 1) <= 0.5);
        CHECK(a(i, 2) >= 0.0);
    }
    CHECK_FALSE(planted_memberships(800, 3, 200, MixingProfile::RandomHalf, 8).matrix() == a.matrix());
}

TEST_CASE("lambda-sweep connectivity template") {
    for (int i = 1; i <= 12; ++i) {
        const Matrix p = lambda_sweep_connectivity(i);
        const Matrix expected = rows3({{0.8, 0.2, 0.1}, {0.2, 0.5, 0.075 * i}, {0.1, 0.075 * i, 0.8}});
        CHECK(p == expected);
    }
    const Matrix c = constant_connectivity(4, 1.0, 0.5);
    CHECK(c.diagonal() == Vector::Ones(4));
    CHECK(c(0, 3) == 0.5);
}
