#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cpt/density_matrix.hpp"
#include "cpt/errors.hpp"
#include "cpt/generator.hpp"

namespace cpt {

/// Sampled solution of the reduced dynamics. States are stored in the real
/// coordinate representation, which is Hermitian by construction; trace is
/// deliberately not renormalized (its drift is a quality signal).
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector9d> states;
  double min_eigenvalue_seen = 0.0;
  bool positivity_warning = false;  // smallest eigenvalue fell below -1e-8

  std::size_t size() const { return times.size(); }

  DensityMatrix3 state(std::size_t j) const {
    return DensityMatrix3::from_coords(states[j]).hermitized();
  }

  double population(std::size_t j, int level) const {
    return states[j][level];
  }

  double s(std::size_t j) const { return states[j][3]; }

  double C(std::size_t j) const {
    return states[j][0] + states[j][1] - 2.0 * states[j][3];
  }

  double observable_A(std::size_t j) const { return 2.0 * states[j][3]; }
};

// ---------------------------------------------------------------------------
// Matrix exponential (independent oracle for the linear dynamics)
// ---------------------------------------------------------------------------

/// exp(M) by scaling and squaring with a truncated series. The scaled matrix
/// has infinity norm <= 1/2, so 24 series terms leave a truncation error far
/// below 1e-12.
inline Matrix9d expm(const Matrix9d& M) {
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5)
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix9d A = M / std::ldexp(1.0, squarings);

  Matrix9d term = Matrix9d::Identity();
  Matrix9d sum = Matrix9d::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = (term * A) / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-20 * sum.norm()) break;
  }
  for (int j = 0; j < squarings; ++j) sum = sum * sum;
  return sum;
}

/// State at time t under the generator, via the matrix exponential.
inline DensityMatrix3 evolve_exact(const Superoperator& L,
                                   const DensityMatrix3& rho0, double t) {
  if (t == 0.0) return rho0;
  const Matrix9d e = expm(t * L.matrix);
  return DensityMatrix3::from_coords(e * rho0.coords()).hermitized();
}

// ---------------------------------------------------------------------------
// Fixed-step classical Runge-Kutta integration
// ---------------------------------------------------------------------------

/// Integrates the linear system with the classical 4th-order rule at a fixed
/// step. The step is shrunk (never enlarged) so an integer number of steps
/// lands exactly on the horizon; trajectories are bit-reproducible.
///
/// Preconditions: dt > 0 and dt * spectral_radius(L) < 1 (stability guard).
inline Trajectory evolve_rk(const Superoperator& L, const DensityMatrix3& rho0,
                            double horizon, double dt, int samples = 200) {
  if (!(dt > 0.0)) throw UsageError("evolve_rk requires dt > 0");
  if (!(horizon >= 0.0)) throw UsageError("evolve_rk requires horizon >= 0");
  if (samples < 1) throw UsageError("evolve_rk requires samples >= 1");
  const double radius = L.spectral_radius();
  if (dt * radius >= 1.0)
    throw UsageError(
        "unstable step: dt * spectral_radius(L) must be below 1 (got " +
        std::to_string(dt * radius) + ")");

  const std::int64_t nsteps =
      horizon > 0.0
          ? std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-12)))
          : 0;
  const double h = nsteps > 0 ? horizon / static_cast<double>(nsteps) : 0.0;
  const std::int64_t stride =
      std::max<std::int64_t>(1, nsteps / std::max(1, samples));

  Trajectory traj;
  Vector9d x = rho0.coords();
  traj.min_eigenvalue_seen = rho0.min_eigenvalue();

  auto record = [&](double t, const Vector9d& state) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    const double mineig = DensityMatrix3::from_coords(state).min_eigenvalue();
    traj.min_eigenvalue_seen = std::min(traj.min_eigenvalue_seen, mineig);
    if (mineig < -1e-8) traj.positivity_warning = true;
  };

  record(0.0, x);
  const Matrix9d& A = L.matrix;
  for (std::int64_t step = 1; step <= nsteps; ++step) {
    const Vector9d k1 = A * x;
    const Vector9d k2 = A * (x + 0.5 * h * k1);
    const Vector9d k3 = A * (x + 0.5 * h * k2);
    const Vector9d k4 = A * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % stride == 0 || step == nsteps)
      record(static_cast<double>(step) * h, x);
  }
  return traj;
}

/// Trajectory sampled from the exact flow at evenly spaced times (one
/// exponential per step, then repeated application).
inline Trajectory sample_exact(const Superoperator& L,
                               const DensityMatrix3& rho0, double horizon,
                               int samples = 200) {
  if (!(horizon >= 0.0)) throw UsageError("sample_exact requires horizon >= 0");
  if (samples < 2) throw UsageError("sample_exact requires samples >= 2");
  Trajectory traj;
  traj.min_eigenvalue_seen = rho0.min_eigenvalue();
  const double step = horizon / static_cast<double>(samples - 1);
  const Matrix9d E = expm(step * L.matrix);
  Vector9d x = rho0.coords();
  for (int j = 0; j < samples; ++j) {
    traj.times.push_back(static_cast<double>(j) * step);
    traj.states.push_back(x);
    const double mineig = DensityMatrix3::from_coords(x).min_eigenvalue();
    traj.min_eigenvalue_seen = std::min(traj.min_eigenvalue_seen, mineig);
    if (mineig < -1e-8) traj.positivity_warning = true;
    x = E * x;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Excited-coherence decay check
// ---------------------------------------------------------------------------

struct DecayReport {
  double fitted_rate = 0.0;       // least-squares slope of -log ||coh(t)||
  double min_rate_bound = 0.0;    // analytic lower bound c
  double coh_spectral_abscissa = 0.0;
  double initial_norm = 0.0;
  bool bound_satisfied = true;    // ||coh(t)|| <= ||coh(0)|| e^{-ct} (1+1e-6)
};

inline double coherence_norm(const Vector9d& x) {
  return std::sqrt(x[5] * x[5] + x[6] * x[6] + x[7] * x[7] + x[8] * x[8]);
}

/// Fits the decay rate of the excited coherences (rho13, rho23) along the
/// exact evolution and checks it against the analytic bound and the block
/// spectrum.
inline DecayReport v0_decay_check(const Superoperator& L,
                                  const DensityMatrix3& rho0, double horizon,
                                  int samples = 80) {
  const Vector9d x0 = rho0.coords();
  const double n0 = coherence_norm(x0);
  if (n0 < 1e-10)
    throw UsageError(
        "v0_decay_check requires an initial excited-coherence component");
  if (!(horizon > 0.0)) throw UsageError("v0_decay_check requires horizon > 0");

  DecayReport report;
  report.initial_norm = n0;
  const BlockReport blocks = decompose_blocks(L);
  report.min_rate_bound = blocks.min_rate_bound;
  report.coh_spectral_abscissa = blocks.coh_spectral_abscissa;

  const double step = horizon / static_cast<double>(samples - 1);
  const Matrix9d E = expm(step * L.matrix);
  Vector9d x = x0;

  // Least squares of log||coh|| against t, ignoring samples that decayed
  // below the meaningful range.
  double sw = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double c = report.min_rate_bound;
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) * step;
    const double n = coherence_norm(x);
    if (c > 0.0 && n > n0 * std::exp(-c * t) * (1.0 + 1e-6))
      report.bound_satisfied = false;
    if (n > n0 * 1e-12) {
      const double y = std::log(n);
      sw += 1.0;
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    x = E * x;
  }
  const double denom = sw * stt - st * st;
  report.fitted_rate = denom > 0.0 ? -(sw * sty - st * sy) / denom : 0.0;
  return report;
}

}  // namespace cpt
