#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "cqa/hilbert.hpp"

namespace cqa {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// H(s) is real symmetric in the color basis, so eigenvectors are real.
struct EigenPairs {
  std::vector<double> values;   // ascending
  Eigen::MatrixXd vectors;      // orthonormal columns, one per value
};

// k algebraically smallest eigenpairs of H(s) = s H_p + (1-s) H_d.
// Dense solve for dim <= 1024; Lanczos with full reorthogonalization
// otherwise. At s = 1 the matrix is diagonal and eigenpairs are exact
// basis vectors, reported with multiplicity. Eigenvector sign fixed:
// largest-magnitude component positive.
EigenPairs lowest_eigenpairs(double s, const ProblemDiagonal& diag,
                             const DriverSpec& d, int k, double tol = 1e-10,
                             bool force_iterative = false);

struct SpectrumSample {
  double s = 0;
  std::vector<double> eigenvalues;
  double gap = 0;  // E_1 - E_0
  std::vector<double> populations;  // empty unless a state was supplied
};

std::vector<SpectrumSample> gap_curve(const ProblemDiagonal& diag,
                                      const DriverSpec& d,
                                      std::span<const double> s_grid);

// Population of the instantaneous ground manifold: sum of |<phi_k|psi>|^2
// over eigenstates with E_k - E_min <= degeneracy_tol. With the default
// tolerance this projects onto the full degenerate manifold at s = 1.
double ground_population(std::span<const Complex> psi, double s,
                         const ProblemDiagonal& diag, const DriverSpec& d,
                         double degeneracy_tol = 1e-6);

struct PopulationLevel {
  double energy = 0;
  double population = 0;
  int cluster_id = 0;  // shared within a numerically degenerate cluster
};

// k lowest instantaneous levels with squared overlaps against psi.
// Levels whose neighbor spacing is <= 1e-6 share a cluster id; only the
// per-cluster total is meaningful inside a cluster.
std::vector<PopulationLevel> population_distribution(
    std::span<const Complex> psi, double s, const ProblemDiagonal& diag,
    const DriverSpec& d, int k);

// max_s |<phi_1(s)| (H_p - H_d) |phi_0(s)>| / min_s gap(s)^2.
// Throws DegenerateGridError if any grid gap < 1e-9.
double adiabatic_time_bound(const ProblemDiagonal& diag, const DriverSpec& d,
                            std::span<const double> s_grid);

}  // namespace cqa
