#include <doctest.h>

#include <random>

#include "cqa/hilbert.hpp"
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

Complex inner(const StateVector& a, const StateVector& b) {
  Complex acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

TEST_CASE("encode/decode mixed-radix convention") {
  std::vector<int> zeros = {0, 0, 0};
  CHECK(encode(zeros, 4) == 0);
  std::vector<int> one = {1, 0, 0};
  CHECK(encode(one, 4) == 1);
  std::vector<int> four = {0, 1, 0};
  CHECK(encode(four, 4) == 4);
  CHECK(decode(63, 4, 3) == std::vector<int>{3, 3, 3});

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int q = 2 + static_cast<int>(rng() % 4);
    int n = 1 + static_cast<int>(rng() % 5);
    std::size_t b = rng() % subspace_dim(q, n);
    CHECK(encode(decode(b, q, n), q) == b);
  }
  std::vector<int> bad = {0, 4};
  CHECK_THROWS_AS(encode(bad, 4), std::out_of_range);
}

TEST_CASE("problem diagonal entries") {
  SUBCASE("single edge, q=4") {
    Graph g;
    g.n_nodes = 2;
    g.edges = {{0, 1}};
    auto diag = build_problem_diagonal(g, 4);
    std::vector<int> same = {0, 0}, diff = {0, 1};
    CHECK(diag.energies[encode(same, 4)] == 4);
    CHECK(diag.energies[encode(diff, 4)] == 0);
  }
  SUBCASE("colorable 3-regular N=6 has min entry m(q-4) = 0") {
    Graph g = random_regular(6, 3, 21);
    auto diag = build_problem_diagonal(g, 4);
    CHECK(diag.ground_energy == 0);
    CHECK(diag.ground_energy == coloring_oracle(g, 4).min_classical_energy);
  }
  SUBCASE("triangle, q=2 has min entry -2") {
    Graph g;
    g.n_nodes = 3;
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    auto diag = build_problem_diagonal(g, 2);
    CHECK(diag.ground_energy == -2);
  }
  SUBCASE("every entry is congruent to m q mod 4") {
    Graph g = random_regular(5, 2, 3);
    auto diag = build_problem_diagonal(g, 3);
    const int mq = g.num_edges() * 3;
    for (auto e : diag.energies) CHECK(((e - mq) % 4 + 4) % 4 == 0);
  }
}

TEST_CASE("driver pair sets") {
  auto nn = DriverSpec::nn(4);
  CHECK(nn.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
  auto fc = DriverSpec::fc(4);
  CHECK(fc.pairs.size() == 6);  // q(q-1)/2
}

TEST_CASE("hop amplitude -2J from explicit two-spin matrices") {
  // XX + YY between the two single-up-spin configurations of a color
  // pair: basis |ud>, |du> of the 4x4 two-spin matrix.
  Eigen::Matrix2d sx, sy_im;  // sy = i * sy_im with real sy_im
  sx << 0, 1, 1, 0;
  sy_im << 0, -1, 1, 0;  // sy = [[0,-i],[i,0]] = i*[[0,-1],[1,0]]
  Eigen::Matrix4d xx = Eigen::Matrix4d::Zero(), yy = Eigen::Matrix4d::Zero();
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r2 = 0; r2 < 2; ++r2)
        for (int c2 = 0; c2 < 2; ++c2) {
          xx(2 * r1 + r2, 2 * c1 + c2) = sx(r1, c1) * sx(r2, c2);
          // (i A) kron (i B) = -(A kron B)
          yy(2 * r1 + r2, 2 * c1 + c2) = -sy_im(r1, c1) * sy_im(r2, c2);
        }
  Eigen::Matrix4d hop = -(xx + yy);  // -J (XX + YY), J = 1
  // index 0=|uu>, 1=|ud>, 2=|du>, 3=|dd>
  CHECK(hop(1, 2) == -2.0);
  CHECK(hop(2, 1) == -2.0);
  CHECK(hop(1, 1) == 0);
  CHECK(hop(0, 3) == 0);
  CHECK(hop(1, 2) == DriverSpec::hop_amplitude);
}

TEST_CASE("apply_driver small cases") {
  SUBCASE("N=1, q=2, NN") {
    StateVector psi = {1.0, 0.0};
    auto out = apply_driver(DriverSpec::nn(2), 1, psi);
    CHECK(out[0] == Complex(0.0));
    CHECK(out[1] == Complex(-2.0));
  }
  SUBCASE("N=1, q=4, FC uniform is an eigenvector with eigenvalue -6") {
    StateVector psi(4, Complex(0.5));
    auto out = apply_driver(DriverSpec::fc(4), 1, psi);
    for (int a = 0; a < 4; ++a)
      CHECK(std::abs(out[static_cast<std::size_t>(a)] + 6.0 * psi[static_cast<std::size_t>(a)]
                     - Complex(0)) < 1e-14);
  }
  SUBCASE("dimension mismatch") {
    StateVector psi(5);
    CHECK_THROWS_AS(apply_driver(DriverSpec::nn(2), 1, psi), DimensionError);
  }
}

TEST_CASE("matrix-free application equals dense oracle") {
  struct Instance {
    Graph g;
    int q;
  };
  std::vector<Instance> instances;
  instances.push_back({random_regular(4, 3, 1), 4});   // dim 256
  instances.push_back({random_regular(5, 2, 2), 3});   // dim 243
  instances.push_back({random_regular(8, 3, 3), 2});   // dim 256
  Graph empty;
  empty.n_nodes = 3;
  instances.push_back({empty, 4});  // dim 64, H_p = 0

  for (const auto& [g, q] : instances) {
    auto diag = build_problem_diagonal(g, q);
    const std::size_t dim = diag.dim();
    Eigen::MatrixXd hp = test::dense_problem(g, q);
    for (auto kind : {DriverKind::NN, DriverKind::FC}) {
      auto d = DriverSpec::make(kind, q);
      Eigen::MatrixXd hd = test::dense_driver(q, g.n_nodes, d.pairs);
      StateVector psi = random_state(dim, 1000 + static_cast<std::uint64_t>(q));
      Eigen::Map<const Eigen::VectorXcd> psi_map(psi.data(),
                                                 static_cast<Eigen::Index>(dim));
      for (double s : {0.0, 0.3, 0.7, 1.0}) {
        auto out = apply_total(s, diag, d, psi);
        Eigen::VectorXcd expect =
            test::dense_total(s, hp, hd).cast<Complex>() * psi_map;
        double max_dev = 0;
        for (std::size_t b = 0; b < dim; ++b)
          max_dev = std::max(max_dev,
                             std::abs(out[b] - expect(static_cast<Eigen::Index>(b))));
        CHECK(max_dev <= 1e-12);
      }
    }
  }
}

TEST_CASE("Hermiticity of matrix-free applications") {
  Graph g = random_regular(6, 3, 8);
  auto diag = build_problem_diagonal(g, 4);
  auto d = DriverSpec::nn(4);
  StateVector psi = random_state(diag.dim(), 11), phi = random_state(diag.dim(), 12);
  auto h_psi = apply_total(0.4, diag, d, psi);
  auto h_phi = apply_total(0.4, diag, d, phi);
  CHECK(std::abs(inner(phi, h_psi) - std::conj(inner(psi, h_phi))) <= 1e-12);
  // <psi| H_d |psi> is real
  auto hd_psi = apply_driver(d, 6, psi);
  CHECK(std::abs(inner(psi, hd_psi).imag()) <= 1e-12);
}

TEST_CASE("driver never mixes states differing at more than one node") {
  const int q = 3, n = 4;
  const std::size_t dim = subspace_dim(q, n);
  for (auto kind : {DriverKind::NN, DriverKind::FC}) {
    auto d = DriverSpec::make(kind, q);
    for (std::size_t j = 0; j < dim; j += 7) {
      StateVector unit(dim, Complex(0));
      unit[j] = 1.0;
      auto out = apply_driver(d, n, unit);
      auto cj = decode(j, q, n);
      for (std::size_t b = 0; b < dim; ++b) {
        if (out[b] == Complex(0)) continue;
        auto cb = decode(b, q, n);
        int ndiff = 0;
        for (int i = 0; i < n; ++i) ndiff += cj[static_cast<std::size_t>(i)] != cb[static_cast<std::size_t>(i)];
        CHECK(ndiff == 1);
      }
    }
  }
}

TEST_CASE("driver ground state") {
  SUBCASE("FC q=4 n=6 is uniform with energy -36") {
    auto psi = driver_ground_state(DriverSpec::fc(4), 6);
    for (const auto& a : psi) CHECK(std::abs(a - Complex(1.0 / 64.0)) <= 1e-12);
    CHECK(driver_single_node_ground_energy(DriverSpec::fc(4)) * 6 ==
          doctest::Approx(-36.0).epsilon(1e-12));
  }
  SUBCASE("NN q=4 n=1 has sine-profile amplitudes and energy -4 cos(pi/5)") {
    auto psi = driver_ground_state(DriverSpec::nn(4), 1);
    const double e = driver_single_node_ground_energy(DriverSpec::nn(4));
    CHECK(e == doctest::Approx(-4.0 * std::cos(M_PI / 5.0)).epsilon(1e-12));
    double norm = 0;
    for (int a = 0; a < 4; ++a) norm += std::pow(std::sin(M_PI * (a + 1) / 5.0), 2);
    for (int a = 0; a < 4; ++a)
      CHECK(std::abs(psi[static_cast<std::size_t>(a)] -
                     Complex(std::sin(M_PI * (a + 1) / 5.0) / std::sqrt(norm))) <= 1e-10);
  }
  SUBCASE("is an eigenvector of H_d with tensor-additive energy") {
    for (auto kind : {DriverKind::NN, DriverKind::FC}) {
      auto d = DriverSpec::make(kind, 3);
      const int n = 4;
      auto psi = driver_ground_state(d, n);
      const double e = n * driver_single_node_ground_energy(d);
      auto hd_psi = apply_driver(d, n, psi);
      double resid = 0;
      for (std::size_t b = 0; b < psi.size(); ++b)
        resid += std::norm(hd_psi[b] - e * psi[b]);
      CHECK(std::sqrt(resid) <= 1e-10);
      CHECK(inner(psi, hd_psi).real() == doctest::Approx(e).epsilon(1e-12));
    }
  }
}
