#include <doctest.h>

#include "mmsbkit/error.hpp"
#include "mmsbkit/model.hpp"
#include "mmsbkit/spectral.hpp"

#include <cmath>

using namespace mmsb;

namespace {

Graph path_graph(Index n) {
    std::vector<Graph::Edge> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

PopulationMatrix mmsb_population(Index n, Index n0, double rho) {
    const MembershipMatrix pi = planted_memberships(n, 3, n0, MixingProfile::FourProfiles);
    return build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), rho));
}

}  // namespace

TEST_CASE("default tau") {
    CHECK(default_tau(1000) == doctest::Approx(0.1 * std::log(1000.0)).epsilon(1e-15));
    CHECK(default_tau(1000) == doctest::Approx(0.6908).epsilon(1e-4));
    CHECK(default_tau(2) == doctest::Approx(0.0693).epsilon(1e-3));
    CHECK(default_tau(22026) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(default_tau(1), InvalidInput);
}

TEST_CASE("laplacian of a single edge") {
    const Graph g = path_graph(2);
    const RegularizedLaplacian l0 = regularized_laplacian(g, 0.0);
    CHECK(l0.matrix(0, 1) == 1.0);
    CHECK(l0.matrix(0, 0) == 0.0);
    const RegularizedLaplacian l2 = regularized_laplacian(g, 2.0);
    CHECK(l2.matrix(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(l2.regularized_degrees == Vector::Constant(2, 3.0));

    CHECK_THROWS_AS(regularized_laplacian(g, -1.0), InvalidInput);
    CHECK_THROWS_AS(regularized_laplacian(g, std::nan("")), InvalidInput);
    CHECK_THROWS_AS(regularized_laplacian(Graph(3), 0.0), InvalidInput);
    CHECK_NOTHROW(regularized_laplacian(Graph(3), 0.5));
}

TEST_CASE("laplacian entries match the elementwise formula") {
    const Graph g = path_graph(5);
    const double tau = 0.7;
    const RegularizedLaplacian lap = regularized_laplacian(g, tau);
    const Matrix a = g.dense();
    for (Index i = 0; i < 5; ++i) {
        for (Index j = 0; j < 5; ++j) {
            const double expected = a(i, j) / std::sqrt((tau + g.degree(i)) * (tau + g.degree(j)));
            CHECK(std::abs(lap.matrix(i, j) - expected) < 1e-15);
        }
    }
}

TEST_CASE("population laplacian of the identity") {
    const RegularizedLaplacian lap = regularized_laplacian(PopulationMatrix(Matrix::Identity(2, 2)), 0.0);
    CHECK(lap.matrix.isApprox(Matrix::Identity(2, 2), 1e-15));
}

TEST_CASE("leading eigenpairs order by magnitude") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 0.9, -0.5, 0.1;
    const SpectralBasis b = leading_eigenpairs(d, 2);
    CHECK(b.values(0) == doctest::Approx(0.9));
    CHECK(b.values(1) == doctest::Approx(-0.5));
    CHECK(std::abs(std::abs(b.vectors(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(b.vectors(1, 1)) - 1.0) < 1e-12);

    CHECK_THROWS_AS(leading_eigenpairs(d, 4), InvalidInput);
    CHECK_THROWS_AS(leading_eigenpairs(d, 0), InvalidInput);
}

TEST_CASE("ties in magnitude prefer the positive eigenvalue") {
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << -0.5, 0.5, 0.9;
    const SpectralBasis b = leading_eigenpairs(d, 2);
    CHECK(b.values(0) == 0.9);
    CHECK(b.values(1) == 0.5);
}

TEST_CASE("population laplacian has rank K and bounded top eigenvalue") {
    const PopulationMatrix omega = mmsb_population(90, 15, 0.6);
    const double tau = default_tau(90);
    const RegularizedLaplacian lap = regularized_laplacian(omega, tau);
    const SpectralBasis b = leading_eigenpairs(lap, 4);
    CHECK(std::abs(b.values(2)) > 1e-10);
    CHECK(std::abs(b.values(3)) < 1e-10);
    const double dmax = omega.matrix().rowwise().sum().maxCoeff();
    CHECK(b.values(0) <= dmax / (tau + dmax) + 1e-10);
}

TEST_CASE("basis properties: residual, orthonormality, spectrum bound") {
    const PopulationMatrix omega = mmsb_population(150, 30, 0.3);
    const Graph g = sample_adjacency(omega, 11);
    const RegularizedLaplacian lap = regularized_laplacian(g, default_tau(150));
    const SpectralBasis b = leading_eigenpairs(lap, 3);
    CHECK((b.vectors.transpose() * b.vectors - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    for (Index k = 0; k < 3; ++k) {
        CHECK((lap.matrix * b.vectors.col(k) - b.values(k) * b.vectors.col(k)).norm() < 1e-8);
        CHECK(std::abs(b.vectors.col(k).norm() - 1.0) < 1e-10);
        CHECK(std::abs(b.values(k)) <= 1.0);
        if (k > 0) CHECK(std::abs(b.values(k - 1)) >= std::abs(b.values(k)));
    }
}

TEST_CASE("row scaling by regularized degree") {
    RegularizedLaplacian lap;
    lap.tau = 0.0;
    lap.regularized_degrees = (Vector(2) << 4.0, 9.0).finished();
    lap.matrix = Matrix::Zero(2, 2);
    const Matrix out = scale_rows_by_degree(Matrix::Identity(2, 2), lap);
    CHECK(out(0, 0) == 2.0);
    CHECK(out(1, 1) == 3.0);
    CHECK(out(0, 1) == 0.0);

    lap.regularized_degrees = Vector::Ones(2);
    const Matrix v = (Matrix(2, 2) << 0.3, -0.7, 1.1, 0.2).finished();
    CHECK(scale_rows_by_degree(v, lap) == v);
    CHECK_THROWS_AS(scale_rows_by_degree(Matrix::Identity(3, 3), lap), InvalidInput);
}

TEST_CASE("ideal scaled basis factors through the pure rows") {
    const MembershipMatrix pi = planted_memberships(90, 3, 15, MixingProfile::FourProfiles);
    const PopulationMatrix omega =
        build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), 0.6));
    const RegularizedLaplacian lap = regularized_laplacian(omega, default_tau(90));
    const Matrix scaled = scale_rows_by_degree(leading_eigenpairs(lap, 3), lap);
    const IndexList corners = *pi.pure_representatives();
    Matrix corner_rows(3, 3);
    for (Index k = 0; k < 3; ++k) corner_rows.row(k) = scaled.row(corners[k]);
    CHECK((pi.matrix() * corner_rows - scaled).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("row normalization") {
    const RowNormalized r = normalize_rows((Matrix(2, 2) << 3.0, 4.0, 0.0, 1.0).finished());
    CHECK(r.rows(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.rows(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(r.factors(0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r.factors(1) == 1.0);
    CHECK_THROWS_AS(normalize_rows((Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished()), NumericalFailure);

    const Matrix unit = (Matrix(2, 2) << 1.0, 0.0, 0.6, 0.8).finished();
    const RowNormalized same = normalize_rows(unit);
    CHECK(same.rows.isApprox(unit, 1e-15));
    CHECK(same.factors.isApprox(Vector::Ones(2), 1e-15));
}

TEST_CASE("ideal rows with the same membership normalize identically") {
    const MembershipMatrix pi = planted_memberships(90, 3, 15, MixingProfile::FourProfiles);
    const PopulationMatrix omega =
        build_population_matrix(pi, BlockModel::from_unnormalized(constant_connectivity(3, 1.0, 0.5), 0.6));
    const RowNormalized r = normalize_rows(leading_eigenpairs(regularized_laplacian(omega, 0.4), 3).vectors);
    // Nodes 45 and 46 share the first mixed profile; 0 and 1 are both pure in community 1.
    CHECK((r.rows.row(45) - r.rows.row(46)).norm() < 1e-10);
    CHECK((r.rows.row(0) - r.rows.row(1)).norm() < 1e-10);
}
