#include <doctest.h>

#include <random>

#include "cqa/spectral.hpp"
#include "support/dense_oracle.hpp"

using namespace cqa;

namespace {

StateVector random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  StateVector psi(dim);
  double n2 = 0;
  for (auto& a : psi) {
    a = {gauss(rng), gauss(rng)};
    n2 += std::norm(a);
  }
  for (auto& a : psi) a /= std::sqrt(n2);
  return psi;
}

double pair_residual(double s, const ProblemDiagonal& diag, const DriverSpec& d,
                     const EigenPairs& pairs, int i) {
  const std::size_t dim = diag.dim();
  std::vector<double> v(dim), hv(dim);
  for (std::size_t b = 0; b < dim; ++b) v[b] = pairs.vectors(static_cast<Eigen::Index>(b), i);
  apply_total<double>(s, diag, d, v, hv);
  double r2 = 0;
  for (std::size_t b = 0; b < dim; ++b) {
    const double r = hv[b] - pairs.values[static_cast<std::size_t>(i)] * v[b];
    r2 += r * r;
  }
  return std::sqrt(r2);
}

}  // namespace

TEST_CASE("eigenpairs at s=1 are the diagonal levels with multiplicity") {
  Graph g = random_regular(4, 3, 1);  // K4
  auto diag = build_problem_diagonal(g, 4);
  auto oracle = coloring_oracle(g, 4);
  auto pairs = lowest_eigenpairs(1.0, diag, DriverSpec::fc(4),
                                 static_cast<int>(oracle.ground_degeneracy) + 1);
  for (std::int64_t i = 0; i < oracle.ground_degeneracy; ++i)
    CHECK(pairs.values[static_cast<std::size_t>(i)] ==
          static_cast<double>(diag.ground_energy));
  CHECK(pairs.values.back() > static_cast<double>(diag.ground_energy));
}

TEST_CASE("eigenpairs at s=0 follow the single-node spectrum") {
  Graph g = random_regular(6, 3, 17);
  auto diag = build_problem_diagonal(g, 4);  // dim 4096: iterative path
  auto pairs = lowest_eigenpairs(0.0, diag, DriverSpec::fc(4), 2);
  CHECK(pairs.values[0] == doctest::Approx(-36.0).epsilon(1e-9));
  // first excitation: promote one node from -6 to +2
  CHECK(pairs.values[1] == doctest::Approx(-28.0).epsilon(1e-9));
  CHECK(pair_residual(0.0, diag, DriverSpec::fc(4), pairs, 0) <= 1e-9);
  CHECK(pair_residual(0.0, diag, DriverSpec::fc(4), pairs, 1) <= 1e-9);
}

TEST_CASE("Lanczos agrees with dense diagonalization on small instances") {
  Graph g = random_regular(4, 3, 5);  // dim 256
  auto diag = build_problem_diagonal(g, 4);
  for (auto kind : {DriverKind::NN, DriverKind::FC}) {
    auto d = DriverSpec::make(kind, 4);
    for (double s : {0.2, 0.5, 0.9}) {
      auto dense = lowest_eigenpairs(s, diag, d, 4);
      auto lanczos = lowest_eigenpairs(s, diag, d, 4, 1e-10, /*force_iterative=*/true);
      for (int i = 0; i < 4; ++i) {
        CHECK(lanczos.values[static_cast<std::size_t>(i)] ==
              doctest::Approx(dense.values[static_cast<std::size_t>(i)]).epsilon(1e-9));
        CHECK(pair_residual(s, diag, d, lanczos, i) <= 1e-9);
      }
      // orthonormality of returned vectors
      Eigen::MatrixXd gram =
          lanczos.vectors.transpose() * lanczos.vectors - Eigen::MatrixXd::Identity(4, 4);
      CHECK(gram.cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("gap curve") {
  SUBCASE("colorable graph has zero gap at s=1 and FC > NN in the interior") {
    Graph g = random_regular(4, 3, 1);
    auto diag = build_problem_diagonal(g, 4);
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    auto nn = gap_curve(diag, DriverSpec::nn(4), grid);
    auto fc = gap_curve(diag, DriverSpec::fc(4), grid);
    CHECK(nn.back().gap <= 1e-9);
    CHECK(fc.back().gap <= 1e-9);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      CHECK(nn[i].gap >= 0);
      CHECK(fc[i].gap > nn[i].gap);
    }
  }
  SUBCASE("s=0 gap equals the single-node spectral gap") {
    Graph g = random_regular(5, 2, 9);
    auto diag = build_problem_diagonal(g, 3);
    for (auto kind : {DriverKind::NN, DriverKind::FC}) {
      auto d = DriverSpec::make(kind, 3);
      auto h = d.hop_matrix();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          Eigen::Map<const Eigen::MatrixXd>(h.data(), 3, 3));
      const double single_gap = es.eigenvalues()(1) - es.eigenvalues()(0);
      std::vector<double> grid = {0.0};
      auto curve = gap_curve(diag, d, grid);
      CHECK(curve[0].gap == doctest::Approx(single_gap).epsilon(1e-9));
    }
  }
}

TEST_CASE("ground population") {
  Graph g = random_regular(4, 3, 7);
  auto diag = build_problem_diagonal(g, 3);  // dim 81
  auto d = DriverSpec::fc(3);

  SUBCASE("an exact eigenstate has population 1") {
    auto pairs = lowest_eigenpairs(0.6, diag, d, 1);
    StateVector psi(diag.dim());
    for (std::size_t b = 0; b < psi.size(); ++b) psi[b] = pairs.vectors(static_cast<Eigen::Index>(b), 0);
    CHECK(ground_population(psi, 0.6, diag, d) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("tol=0 at s<1 equals the plain first-eigenvector overlap") {
    auto psi = random_state(diag.dim(), 31);
    auto pairs = lowest_eigenpairs(0.4, diag, d, 1);
    Complex ov = 0;
    for (std::size_t b = 0; b < psi.size(); ++b)
      ov += pairs.vectors(static_cast<Eigen::Index>(b), 0) * psi[b];
    CHECK(ground_population(psi, 0.4, diag, d, 0.0) ==
          doctest::Approx(std::norm(ov)).epsilon(1e-10));
  }
  SUBCASE("s=1 projects onto the full degenerate manifold") {
    auto psi = random_state(diag.dim(), 32);
    double expect = 0;
    for (std::size_t b = 0; b < psi.size(); ++b)
      if (diag.energies[b] == diag.ground_energy) expect += std::norm(psi[b]);
    CHECK(ground_population(psi, 1.0, diag, d) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("population distribution") {
  Graph g = random_regular(4, 3, 2);
  auto diag = build_problem_diagonal(g, 3);
  auto d = DriverSpec::nn(3);
  auto psi = random_state(diag.dim(), 77);

  SUBCASE("s=1 groups by exact integer diagonal value") {
    auto levels = population_distribution(psi, 1.0, diag, d, 10);
    REQUIRE(levels.size() == 10);
    for (std::size_t i = 1; i < levels.size(); ++i) {
      CHECK(levels[i].energy >= levels[i - 1].energy);
      if (levels[i].energy == levels[i - 1].energy)
        CHECK(levels[i].cluster_id == levels[i - 1].cluster_id);
      else
        CHECK(levels[i].cluster_id == levels[i - 1].cluster_id + 1);
    }
  }
  SUBCASE("reported populations sum to at most 1") {
    auto levels = population_distribution(psi, 0.5, diag, d, 12);
    double total = 0;
    for (const auto& lvl : levels) {
      CHECK(lvl.population >= 0);
      CHECK(lvl.population <= 1.0 + 1e-9);
      total += lvl.population;
    }
    CHECK(total <= 1.0 + 1e-9);
  }
  SUBCASE("all q^N populations sum to 1 on a small instance") {
    auto levels = population_distribution(psi, 0.5, diag, d,
                                          static_cast<int>(diag.dim()));
    double total = 0;
    for (const auto& lvl : levels) total += lvl.population;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("adiabatic time bound") {
  SUBCASE("NN bound exceeds FC bound on a seeded N=6 instance") {
    Graph g = random_regular(6, 3, 23);
    auto diag = build_problem_diagonal(g, 4);
    std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double bound_nn = adiabatic_time_bound(diag, DriverSpec::nn(4), grid);
    const double bound_fc = adiabatic_time_bound(diag, DriverSpec::fc(4), grid);
    CHECK(bound_nn > bound_fc);
  }
  SUBCASE("single node with no edges has zero numerator") {
    Graph g;
    g.n_nodes = 1;
    auto diag = build_problem_diagonal(g, 4);
    std::vector<double> grid = {0.0, 0.5};
    CHECK(adiabatic_time_bound(diag, DriverSpec::fc(4), grid) <= 1e-12);
  }
  SUBCASE("degenerate grid point is rejected") {
    Graph g = random_regular(4, 3, 1);
    auto diag = build_problem_diagonal(g, 4);
    std::vector<double> grid = {0.5, 1.0};  // colorable: gap 0 at s=1
    CHECK_THROWS_AS(adiabatic_time_bound(diag, DriverSpec::fc(4), grid),
                    DegenerateGridError);
  }
}
