#include "cqa/dynamics.hpp"

#include <cmath>

namespace cqa {

double Schedule::total_time() const {
  return kind == Kind::Linear ? tau : 15.0 * tau;
}

double Schedule::s_at(double t) const {
  const double T = total_time();
  if (t < 0.0 || t > T * (1.0 + 1e-12))
    throw std::out_of_range("schedule time outside [0, T]");
  double s = kind == Kind::Linear ? t / tau : 1.0 - std::exp(-t / tau);
  return std::min(1.0, std::max(0.0, s));
}

const char* to_string(Schedule::Kind k) {
  return k == Schedule::Kind::Linear ? "linear" : "exp";
}

double instantaneous_residual(std::span<const Complex> psi,
                              const ProblemDiagonal& diag) {
  double e = 0;
  for (std::size_t b = 0; b < psi.size(); ++b)
    e += diag.energies[b] * std::norm(psi[b]);
  return e - static_cast<double>(diag.ground_energy);
}

namespace {

double state_norm(const StateVector& psi) {
  double n2 = 0;
  for (const auto& a : psi) n2 += std::norm(a);
  return std::sqrt(n2);
}

// One RK4 step of i dpsi/dt = H(s(t)) psi over [t, t + h].
void rk4_step(const ProblemDiagonal& diag, const DriverSpec& d,
              const Schedule& sch, double t, double h, StateVector& psi,
              StateVector& k1, StateVector& k2, StateVector& k3,
              StateVector& k4, StateVector& tmp) {
  const std::size_t dim = psi.size();
  const Complex mi(0.0, -1.0);
  auto deriv = [&](double time, const StateVector& y, StateVector& out) {
    apply_total<Complex>(sch.s_at(time), diag, d, y, out);
    for (auto& a : out) a *= mi;
  };
  deriv(t, psi, k1);
  for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + (0.5 * h) * k1[b];
  deriv(t + 0.5 * h, tmp, k2);
  for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + (0.5 * h) * k2[b];
  deriv(t + 0.5 * h, tmp, k3);
  for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + h * k3[b];
  deriv(t + h, tmp, k4);
  const double h6 = h / 6.0;
  for (std::size_t b = 0; b < dim; ++b)
    psi[b] += h6 * (k1[b] + 2.0 * (k2[b] + k3[b]) + k4[b]);
}

}  // namespace

Trajectory evolve(const ProblemDiagonal& diag, const DriverSpec& d,
                  const Schedule& sch, const EvolveOptions& opts,
                  const SampleCallback& on_sample) {
  const double T = sch.total_time();
  if (opts.dt <= 0.0 || opts.dt > T)
    throw std::out_of_range("evolve: need 0 < dt <= T");
  if (opts.sample_count < 1)
    throw std::out_of_range("evolve: need sample_count >= 1");

  const std::size_t dim = diag.dim();
  Trajectory traj;
  StateVector psi = driver_ground_state(d, diag.n);
  StateVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  auto record = [&](double t) {
    TrajectorySample smp;
    smp.t = t;
    smp.s = sch.s_at(t);
    smp.instantaneous_residual = instantaneous_residual(psi, diag);
    smp.norm = state_norm(psi);
    if (std::abs(smp.norm - 1.0) > 1e-6)
      throw NormDriftError("norm drift " + std::to_string(smp.norm - 1.0) +
                           " at t=" + std::to_string(t) + "; reduce dt");
    if (on_sample) on_sample(smp, psi);
    traj.samples.push_back(std::move(smp));
  };

  record(0.0);
  double t = 0.0;
  for (int i = 1; i <= opts.sample_count; ++i) {
    const double t_sample = T * i / opts.sample_count;
    while (t < t_sample - 1e-12 * T) {
      const double h = std::min(opts.dt, t_sample - t);
      rk4_step(diag, d, sch, t, h, psi, k1, k2, k3, k4, tmp);
      t += h;
    }
    t = t_sample;
    record(t);
  }
  traj.final_state = std::move(psi);
  return traj;
}

}  // namespace cqa
