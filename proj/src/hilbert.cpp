#include "cqa/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cqa {

std::size_t subspace_dim(int q, int n) {
  if (q < 2) throw DimensionError("need q >= 2");
  if (n < 1) throw DimensionError("need n >= 1");
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) {
    if (dim > (std::size_t{1} << 26) / static_cast<std::size_t>(q))
      throw DimensionError("q^N exceeds memory budget");
    dim *= static_cast<std::size_t>(q);
  }
  return dim;
}

std::size_t encode(std::span<const int> colors, int q) {
  std::size_t index = 0;
  std::size_t radix = 1;
  for (int c : colors) {
    if (c < 0 || c >= q)
      throw std::out_of_range("color " + std::to_string(c) + " not in [0, " +
                              std::to_string(q) + ")");
    index += radix * static_cast<std::size_t>(c);
    radix *= static_cast<std::size_t>(q);
  }
  return index;
}

std::vector<int> decode(std::size_t index, int q, int n) {
  std::vector<int> colors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    colors[i] = static_cast<int>(index % static_cast<std::size_t>(q));
    index /= static_cast<std::size_t>(q);
  }
  return colors;
}

ProblemDiagonal build_problem_diagonal(const Graph& g, int q) {
  ProblemDiagonal diag;
  diag.q = q;
  diag.n = g.n_nodes;
  const std::size_t dim = subspace_dim(q, g.n_nodes);
  diag.energies.assign(dim, 0);

  std::vector<int> colors(static_cast<std::size_t>(g.n_nodes), 0);
  for (std::size_t b = 0; b < dim; ++b) {
    std::int32_t e = 0;
    for (const auto& [i, j] : g.edges)
      e += (colors[i] == colors[j]) ? q : q - 4;
    diag.energies[b] = e;
    for (int v = 0; v < g.n_nodes; ++v) {
      if (++colors[v] < q) break;
      colors[v] = 0;
    }
  }
  diag.ground_energy = g.edges.empty()
                           ? 0
                           : *std::min_element(diag.energies.begin(),
                                               diag.energies.end());
  return diag;
}

const char* to_string(DriverKind k) { return k == DriverKind::NN ? "nn" : "fc"; }

DriverSpec DriverSpec::nn(int q) {
  DriverSpec d{DriverKind::NN, q, {}};
  for (int a = 0; a + 1 < q; ++a) d.pairs.emplace_back(a, a + 1);
  return d;
}

DriverSpec DriverSpec::fc(int q) {
  DriverSpec d{DriverKind::FC, q, {}};
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) d.pairs.emplace_back(a, b);
  return d;
}

DriverSpec DriverSpec::make(DriverKind kind, int q) {
  return kind == DriverKind::NN ? nn(q) : fc(q);
}

std::vector<double> DriverSpec::hop_matrix() const {
  std::vector<double> h(static_cast<std::size_t>(q) * q, 0.0);
  for (const auto& [a, b] : pairs) {
    h[static_cast<std::size_t>(a) * q + b] = hop_amplitude;
    h[static_cast<std::size_t>(b) * q + a] = hop_amplitude;
  }
  return h;
}

template <typename Scalar>
void apply_driver(const DriverSpec& d, int n, std::span<const Scalar> psi,
                  std::span<Scalar> out) {
  const std::size_t dim = subspace_dim(d.q, n);
  if (psi.size() != dim || out.size() != dim)
    throw DimensionError("apply_driver: state length does not match q^N");
  std::fill(out.begin(), out.end(), Scalar{});

  const std::size_t q = static_cast<std::size_t>(d.q);
  std::size_t stride = 1;
  for (int node = 0; node < n; ++node) {
    const std::size_t block = stride * q;
    for (std::size_t base = 0; base < dim; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const Scalar* in = psi.data() + base + inner;
        Scalar* o = out.data() + base + inner;
        for (const auto& [a, b] : d.pairs) {
          const std::size_t ia = static_cast<std::size_t>(a) * stride;
          const std::size_t ib = static_cast<std::size_t>(b) * stride;
          o[ib] += DriverSpec::hop_amplitude * in[ia];
          o[ia] += DriverSpec::hop_amplitude * in[ib];
        }
      }
    }
    stride = block;
  }
}

template <typename Scalar>
void apply_total(double s, const ProblemDiagonal& diag, const DriverSpec& d,
                 std::span<const Scalar> psi, std::span<Scalar> out) {
  if (s < 0.0 || s > 1.0) throw std::out_of_range("schedule parameter outside [0,1]");
  if (psi.size() != diag.dim() || out.size() != diag.dim())
    throw DimensionError("apply_total: state length does not match diagonal");
  apply_driver<Scalar>(d, diag.n, psi, out);
  const double w = 1.0 - s;
  for (std::size_t b = 0; b < psi.size(); ++b)
    out[b] = w * out[b] + (s * diag.energies[b]) * psi[b];
}

StateVector apply_driver(const DriverSpec& d, int n, const StateVector& psi) {
  StateVector out(psi.size());
  apply_driver<Complex>(d, n, psi, out);
  return out;
}

StateVector apply_total(double s, const ProblemDiagonal& diag,
                        const DriverSpec& d, const StateVector& psi) {
  StateVector out(psi.size());
  apply_total<Complex>(s, diag, d, psi, out);
  return out;
}

// Lowest eigenvector of the q x q hop matrix, entries made non-negative.
static Eigen::VectorXd single_node_ground(const DriverSpec& d, double* energy) {
  const auto h = d.hop_matrix();
  Eigen::MatrixXd m =
      Eigen::Map<const Eigen::MatrixXd>(h.data(), d.q, d.q);  // symmetric
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (v.sum() < 0) v = -v;
  if (energy) *energy = es.eigenvalues()(0);
  return v;
}

double driver_single_node_ground_energy(const DriverSpec& d) {
  double e = 0;
  single_node_ground(d, &e);
  return e;
}

StateVector driver_ground_state(const DriverSpec& d, int n) {
  Eigen::VectorXd v = single_node_ground(d, nullptr);
  const std::size_t dim = subspace_dim(d.q, n);
  StateVector psi(dim);
  const std::size_t q = static_cast<std::size_t>(d.q);
  // tensor power: amplitude(b) = prod_i v[color_i(b)]
  std::vector<int> colors(static_cast<std::size_t>(n), 0);
  for (std::size_t b = 0; b < dim; ++b) {
    double amp = 1.0;
    for (int i = 0; i < n; ++i) amp *= v(colors[i]);
    psi[b] = amp;
    for (int i = 0; i < n; ++i) {
      if (++colors[i] < static_cast<int>(q)) break;
      colors[i] = 0;
    }
  }
  double norm2 = 0;
  for (const auto& a : psi) norm2 += std::norm(a);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : psi) a *= inv;
  return psi;
}

template void apply_driver<double>(const DriverSpec&, int,
                                   std::span<const double>, std::span<double>);
template void apply_driver<Complex>(const DriverSpec&, int,
                                    std::span<const Complex>,
                                    std::span<Complex>);
template void apply_total<double>(double, const ProblemDiagonal&,
                                  const DriverSpec&, std::span<const double>,
                                  std::span<double>);
template void apply_total<Complex>(double, const ProblemDiagonal&,
                                   const DriverSpec&, std::span<const Complex>,
                                   std::span<Complex>);

}  // namespace cqa
