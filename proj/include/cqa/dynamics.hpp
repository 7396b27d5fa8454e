#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cqa/hilbert.hpp"

namespace cqa {

struct NormDriftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Schedule {
  enum class Kind { Linear, Exponential };
  Kind kind = Kind::Linear;
  double tau = 1.0;

  // Linear: T = tau. Exponential: T = 15 * tau, so 1 - s(T) < 1e-6.
  double total_time() const;
  // s(t): t/tau (linear) or 1 - exp(-t/tau) (exponential), clamped to
  // [0, 1]. Throws std::out_of_range for t outside [0, T].
  double s_at(double t) const;
};

const char* to_string(Schedule::Kind k);

struct TrajectorySample {
  double t = 0;
  double s = 0;
  double instantaneous_residual = 0;
  std::optional<double> ground_population;
  double norm = 1;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StateVector final_state;
};

// <psi| H_p |psi> - E_0. Non-negative up to roundoff.
double instantaneous_residual(std::span<const Complex> psi,
                              const ProblemDiagonal& diag);

struct EvolveOptions {
  double dt = 0.005;       // units hbar/J
  int sample_count = 100;  // records sample_count + 1 samples
};

// Called at each recorded sample with the instantaneous state; may fill
// sample.ground_population or record other observables.
using SampleCallback =
    std::function<void(TrajectorySample&, std::span<const Complex>)>;

// Integrates i d(psi)/dt = H(s(t)) psi from the driver ground state with
// classical fixed-step RK4 (steps shortened to land exactly on sample
// times and on T). No renormalization: the run fails with NormDriftError
// if |norm - 1| exceeds 1e-6 at any sample.
Trajectory evolve(const ProblemDiagonal& diag, const DriverSpec& d,
                  const Schedule& sch, const EvolveOptions& opts = {},
                  const SampleCallback& on_sample = nullptr);

}  // namespace cqa
