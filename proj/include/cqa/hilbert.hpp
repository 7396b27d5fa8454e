#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cqa/graph.hpp"

namespace cqa {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// q^n with an overflow/budget check.
std::size_t subspace_dim(int q, int n);

// Basis convention: a basis index encodes one color per node in mixed
// radix, little-endian in the node index — color of node i is
// (index / q^i) mod q. Fixed project-wide.
std::size_t encode(std::span<const int> colors, int q);
std::vector<int> decode(std::size_t index, int q, int n);

// Diagonal of the problem Hamiltonian in the color basis (J = 1). Every
// entry is an exact integer: each edge contributes q when its endpoints
// share a color and q - 4 otherwise.
struct ProblemDiagonal {
  int q = 0;
  int n = 0;
  std::vector<std::int32_t> energies;
  std::int64_t ground_energy = 0;

  std::size_t dim() const { return energies.size(); }
};

ProblemDiagonal build_problem_diagonal(const Graph& g, int q);

enum class DriverKind { NN, FC };

const char* to_string(DriverKind k);

// Per-node color-hop specification. Each allowed pair (a, b) hops the
// node's single up spin between colors a and b with amplitude -2J; the
// XX + YY term between the two single-excitation configurations has
// matrix element 2.
struct DriverSpec {
  DriverKind kind;
  int q;
  std::vector<std::pair<int, int>> pairs;  // a < b
  static constexpr double hop_amplitude = -2.0;

  // Open chain: pairs (a, a+1) only, no wraparound.
  static DriverSpec nn(int q);
  // All pairs a < b.
  static DriverSpec fc(int q);
  static DriverSpec make(DriverKind kind, int q);

  // q x q single-node hop matrix (row-major, real symmetric).
  std::vector<double> hop_matrix() const;
};

// out = H_d * psi, matrix-free. Scalar is double or Complex.
template <typename Scalar>
void apply_driver(const DriverSpec& d, int n, std::span<const Scalar> psi,
                  std::span<Scalar> out);

// out = s * (diag .* psi) + (1 - s) * H_d * psi.
template <typename Scalar>
void apply_total(double s, const ProblemDiagonal& diag, const DriverSpec& d,
                 std::span<const Scalar> psi, std::span<Scalar> out);

// Convenience value-returning forms.
StateVector apply_driver(const DriverSpec& d, int n, const StateVector& psi);
StateVector apply_total(double s, const ProblemDiagonal& diag,
                        const DriverSpec& d, const StateVector& psi);

// N-fold tensor power of the lowest eigenvector of the single-node hop
// matrix (sign convention: all entries non-negative). Normalized.
StateVector driver_ground_state(const DriverSpec& d, int n);

// Lowest single-node eigenvalue; the N-node driver ground energy is
// n * driver_single_node_ground_energy(d).
double driver_single_node_ground_energy(const DriverSpec& d);

extern template void apply_driver<double>(const DriverSpec&, int,
                                          std::span<const double>,
                                          std::span<double>);
extern template void apply_driver<Complex>(const DriverSpec&, int,
                                           std::span<const Complex>,
                                           std::span<Complex>);
extern template void apply_total<double>(double, const ProblemDiagonal&,
                                         const DriverSpec&,
                                         std::span<const double>,
                                         std::span<double>);
extern template void apply_total<Complex>(double, const ProblemDiagonal&,
                                          const DriverSpec&,
                                          std::span<const Complex>,
                                          std::span<Complex>);

}  // namespace cqa
