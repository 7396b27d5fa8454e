#include "cqa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cqa {

namespace {

constexpr std::size_t kDenseLimit = 1024;
constexpr double kClusterTol = 1e-6;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
}

// Exact eigenpairs at s = 1: the matrix is diagonal, eigenvalues are the
// diagonal entries (with multiplicity) and eigenvectors are basis vectors.
EigenPairs diagonal_eigenpairs(const ProblemDiagonal& diag, int k) {
  const std::size_t dim = diag.dim();
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return diag.energies[a] != diag.energies[b]
                                 ? diag.energies[a] < diag.energies[b]
                                 : a < b;
                    });
  EigenPairs out;
  out.values.resize(static_cast<std::size_t>(k));
  out.vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), k);
  for (int i = 0; i < k; ++i) {
    out.values[static_cast<std::size_t>(i)] = diag.energies[order[i]];
    out.vectors(static_cast<Eigen::Index>(order[i]), i) = 1.0;
  }
  return out;
}

EigenPairs dense_eigenpairs(double s, const ProblemDiagonal& diag,
                            const DriverSpec& d, int k) {
  const std::size_t dim = diag.dim();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(dim),
                    static_cast<Eigen::Index>(dim));
  std::vector<double> unit(dim, 0.0), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    unit[j] = 1.0;
    apply_total<double>(s, diag, d, unit, col);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  EigenPairs out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  out.vectors = es.eigenvectors().leftCols(k);
  for (int i = 0; i < k; ++i) fix_sign(out.vectors.col(i));
  return out;
}

// One Krylov pass restricted to the orthogonal complement of `deflated`.
// Returns the converged prefix of the lowest Ritz pairs (at most `want`,
// at least one). The recurrence stays strictly tridiagonal: a breakdown
// means the Krylov space is invariant, so the run stops and whatever
// converged there is returned; the caller restarts with a fresh vector.
EigenPairs lanczos_run(double s, const ProblemDiagonal& diag,
                       const DriverSpec& d, int want, double tol,
                       const Eigen::MatrixXd& deflated, std::mt19937_64& rng) {
  const std::size_t dim = diag.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  const int free_dim = static_cast<int>(n - deflated.cols());
  const int m_max = std::min(free_dim, 1000);

  Eigen::MatrixXd v_basis(n, m_max);
  Eigen::VectorXd alpha(m_max), beta(m_max), w(n);
  std::normal_distribution<double> gauss;

  auto project_out = [&](Eigen::VectorXd& r, int j) {
    if (deflated.cols() > 0) r -= deflated * (deflated.transpose() * r);
    if (j > 0) r -= v_basis.leftCols(j) * (v_basis.leftCols(j).transpose() * r);
  };
  {
    Eigen::VectorXd r(n);
    double nrm = 0;
    for (int attempt = 0; attempt < 16 && nrm <= 1e-8; ++attempt) {
      for (Eigen::Index i = 0; i < n; ++i) r(i) = gauss(rng);
      project_out(r, 0);
      nrm = r.norm();
    }
    if (nrm <= 1e-8)
      throw ConvergenceError("lanczos: failed to start a Krylov basis");
    v_basis.col(0) = r / nrm;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  // leading Ritz pairs (lowest first) whose residual |beta_m y_m| is
  // within tol; an exhausted Krylov space is exact
  auto converged_prefix = [&](int m, bool exhausted) -> int {
    tri.computeFromTridiagonal(alpha.head(m), beta.head(m - 1));
    const int cap = std::min(want, m);
    if (exhausted) return cap;
    int p = 0;
    while (p < cap &&
           std::abs(beta(m - 1) * tri.eigenvectors()(m - 1, p)) <= tol)
      ++p;
    return p;
  };

  int m = 0, prefix = 0;
  while (m < m_max) {
    apply_total<double>(s, diag, d,
                        std::span<const double>(v_basis.col(m).data(), dim),
                        std::span<double>(w.data(), dim));
    alpha(m) = v_basis.col(m).dot(w);
    // full reorthogonalization (and deflation), two passes
    for (int pass = 0; pass < 2; ++pass) project_out(w, m + 1);
    beta(m) = w.norm();
    ++m;
    const bool exhausted = beta(m - 1) < 1e-13 || m == free_dim;
    if (exhausted || m == m_max || m % 8 == 0) {
      prefix = converged_prefix(m, exhausted);
      if (prefix >= want || exhausted || m == m_max) break;
    }
    v_basis.col(m) = w / beta(m - 1);
  }
  if (prefix == 0)
    throw ConvergenceError("lanczos: not converged after " +
                           std::to_string(m) + " iterations");

  EigenPairs out;
  out.values.assign(tri.eigenvalues().data(), tri.eigenvalues().data() + prefix);
  out.vectors = v_basis.leftCols(m) * tri.eigenvectors().leftCols(prefix);
  for (int i = 0; i < prefix; ++i) out.vectors.col(i).normalize();
  return out;
}

// Lanczos with full reorthogonalization and deflated restarts. A single
// Krylov pass finds each eigenvalue once; degenerate copies are
// recovered by restarting orthogonally to everything already converged,
// so the k lowest pairs are returned with correct multiplicity.
EigenPairs lanczos_eigenpairs(double s, const ProblemDiagonal& diag,
                              const DriverSpec& d, int k, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(diag.dim());
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  Eigen::MatrixXd found(n, 0);
  std::vector<double> values;
  while (found.cols() < k) {
    const int want = k - static_cast<int>(found.cols());
    EigenPairs batch = lanczos_run(s, diag, d, want, tol, found, rng);
    Eigen::MatrixXd merged(n, found.cols() + batch.vectors.cols());
    merged << found, batch.vectors;
    found = std::move(merged);
    values.insert(values.end(), batch.values.begin(), batch.values.end());
  }
  // a single pass converges each eigenvalue once, so degenerate copies
  // can be skipped: probe the deflated complement until its lowest
  // eigenvalue no longer undercuts the k-th collected value
  while (true) {
    std::vector<double> sorted = values;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    const double kth = sorted[static_cast<std::size_t>(k - 1)];
    if (found.cols() == n) break;
    EigenPairs probe = lanczos_run(s, diag, d, 1, tol, found, rng);
    if (probe.values[0] >= kth - 10 * tol) break;
    Eigen::MatrixXd merged(n, found.cols() + 1);
    merged << found, probe.vectors;
    found = std::move(merged);
    values.push_back(probe.values[0]);
  }
  std::vector<int> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)]; });
  EigenPairs out;
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values.push_back(values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]);
    out.vectors.col(i) = found.col(order[static_cast<std::size_t>(i)]);
    fix_sign(out.vectors.col(i));
  }
  return out;
}

std::vector<int> cluster_ids(std::span<const double> energies, double tol) {
  std::vector<int> ids(energies.size(), 0);
  int id = 0;
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] - energies[i - 1] > tol) ++id;
    ids[i] = id;
  }
  return ids;
}

double overlap2(std::span<const Complex> psi,
                Eigen::Ref<const Eigen::VectorXd> phi) {
  Complex acc = 0;
  for (std::size_t b = 0; b < psi.size(); ++b) acc += phi(static_cast<Eigen::Index>(b)) * psi[b];
  return std::norm(acc);
}

}  // namespace

EigenPairs lowest_eigenpairs(double s, const ProblemDiagonal& diag,
                             const DriverSpec& d, int k, double tol,
                             bool force_iterative) {
  if (k < 1 || static_cast<std::size_t>(k) > diag.dim())
    throw std::invalid_argument("lowest_eigenpairs: need 1 <= k <= q^N");
  if (s == 1.0) return diagonal_eigenpairs(diag, k);
  if (diag.dim() <= kDenseLimit && !force_iterative)
    return dense_eigenpairs(s, diag, d, k);
  return lanczos_eigenpairs(s, diag, d, k, tol);
}

std::vector<SpectrumSample> gap_curve(const ProblemDiagonal& diag,
                                      const DriverSpec& d,
                                      std::span<const double> s_grid) {
  std::vector<SpectrumSample> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    auto pairs = lowest_eigenpairs(s, diag, d, 2);
    SpectrumSample smp;
    smp.s = s;
    smp.eigenvalues = pairs.values;
    smp.gap = pairs.values[1] - pairs.values[0];
    out.push_back(std::move(smp));
  }
  return out;
}

double ground_population(std::span<const Complex> psi, double s,
                         const ProblemDiagonal& diag, const DriverSpec& d,
                         double degeneracy_tol) {
  if (psi.size() != diag.dim())
    throw DimensionError("ground_population: state length mismatch");
  if (s == 1.0) {
    // diagonal manifold: exact integer energies
    double pop = 0;
    for (std::size_t b = 0; b < psi.size(); ++b)
      if (diag.energies[b] - diag.ground_energy <= degeneracy_tol)
        pop += std::norm(psi[b]);
    return pop;
  }
  int k = 3;
  for (;;) {
    k = static_cast<int>(std::min<std::size_t>(k, diag.dim()));
    auto pairs = lowest_eigenpairs(s, diag, d, k);
    const bool manifold_complete =
        pairs.values.back() - pairs.values.front() > degeneracy_tol ||
        static_cast<std::size_t>(k) == diag.dim();
    if (manifold_complete || k >= 64) {
      double pop = 0;
      for (int i = 0; i < k; ++i)
        if (pairs.values[static_cast<std::size_t>(i)] - pairs.values[0] <=
            degeneracy_tol)
          pop += overlap2(psi, pairs.vectors.col(i));
      return pop;
    }
    k *= 2;
  }
}

std::vector<PopulationLevel> population_distribution(
    std::span<const Complex> psi, double s, const ProblemDiagonal& diag,
    const DriverSpec& d, int k) {
  if (psi.size() != diag.dim())
    throw DimensionError("population_distribution: state length mismatch");
  std::vector<PopulationLevel> out;
  auto pairs = lowest_eigenpairs(s, diag, d, k);
  auto ids = cluster_ids(pairs.values, kClusterTol);
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    PopulationLevel lvl;
    lvl.energy = pairs.values[static_cast<std::size_t>(i)];
    lvl.population = overlap2(psi, pairs.vectors.col(i));
    lvl.cluster_id = ids[static_cast<std::size_t>(i)];
    out.push_back(lvl);
  }
  return out;
}

double adiabatic_time_bound(const ProblemDiagonal& diag, const DriverSpec& d,
                            std::span<const double> s_grid) {
  const std::size_t dim = diag.dim();
  double max_numer = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> hp_phi0(dim), hd_phi0(dim), phi0(dim);
  for (double s : s_grid) {
    auto pairs = lowest_eigenpairs(s, diag, d, 2);
    const double gap = pairs.values[1] - pairs.values[0];
    if (gap < 1e-9)
      throw DegenerateGridError("adiabatic_time_bound: gap < 1e-9 at s=" +
                                std::to_string(s));
    // dH/ds = H_p - H_d
    for (std::size_t b = 0; b < dim; ++b) phi0[b] = pairs.vectors(static_cast<Eigen::Index>(b), 0);
    for (std::size_t b = 0; b < dim; ++b)
      hp_phi0[b] = diag.energies[b] * phi0[b];
    apply_driver<double>(d, diag.n, phi0, hd_phi0);
    double elem = 0;
    for (std::size_t b = 0; b < dim; ++b)
      elem += pairs.vectors(static_cast<Eigen::Index>(b), 1) * (hp_phi0[b] - hd_phi0[b]);
    max_numer = std::max(max_numer, std::abs(elem));
    min_gap = std::min(min_gap, gap);
  }
  return max_numer / (min_gap * min_gap);
}

}  // namespace cqa
