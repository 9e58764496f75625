#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cpt/bath.hpp"
#include "cpt/density_matrix.hpp"
#include "cpt/errors.hpp"
#include "cpt/evolution.hpp"
#include "cpt/generator.hpp"

namespace cpt {

// ---------------------------------------------------------------------------
// Density-matrix admissibility (diagnostic form)
// ---------------------------------------------------------------------------

struct DensityCheck {
  bool ok = true;
  std::string violation;  // names the first violated condition
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
  double min_diagonal = 0.0;
  double coherence_excess = 0.0;  // |rho12|^2 - rho11*rho22 when positive
  double min_eigenvalue = 0.0;
};

/// True iff rho is a density matrix: unit trace, Hermitian, non-negative
/// diagonal, and |rho12|^2 <= rho11 rho22 for states supported on the
/// population sector (full eigenvalue test otherwise). Boundary states are
/// accepted with 1e-10 slack.
inline DensityCheck check_density(const DensityMatrix3& rho) {
  constexpr double kSlack = 1e-10;
  DensityCheck out;
  out.trace_defect = std::abs(rho.trace_real() - 1.0);
  out.hermiticity_defect = rho.hermiticity_defect();
  out.min_diagonal = std::min({rho.m(0, 0).real(), rho.m(1, 1).real(),
                               rho.m(2, 2).real()});
  out.min_eigenvalue = rho.min_eigenvalue();

  if (out.trace_defect > 1e-9) {
    out.ok = false;
    out.violation = "trace differs from 1";
    return out;
  }
  if (out.hermiticity_defect > 1e-9) {
    out.ok = false;
    out.violation = "matrix is not Hermitian";
    return out;
  }
  if (out.min_diagonal < -kSlack) {
    out.ok = false;
    out.violation = "negative diagonal population";
    return out;
  }
  const bool population_supported =
      std::abs(rho.m(0, 2)) < 1e-12 && std::abs(rho.m(1, 2)) < 1e-12;
  if (population_supported) {
    const double bound =
        rho.m(0, 0).real() * rho.m(1, 1).real() - std::norm(rho.m(0, 1));
    out.coherence_excess = std::max(0.0, -bound);
    if (bound < -kSlack) {
      out.ok = false;
      out.violation = "ground coherence exceeds the population bound";
      return out;
    }
  } else if (out.min_eigenvalue < -kSlack) {
    out.ok = false;
    out.violation = "negative eigenvalue";
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The one-parameter stationary family
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
};

/// Admissible family parameters for a given emission-absorption ratio:
/// [-1/2, 1/(2(1+R))]. R = 1 is accepted as the high-intensity limit.
inline Interval admissible_interval(double R) {
  if (!(R >= 0.0 && R <= 1.0))
    throw DomainError("emission-absorption ratio must lie in [0, 1]");
  return Interval{-0.5, 1.0 / (2.0 * (1.0 + R))};
}

namespace detail {

/// Family member without the admissibility check (used for sweeps that
/// deliberately step outside the interval). Entries are affine in s:
///   excited population (1+2s)R/(2+R), ground diagonals (1-ρ_e)/2,
///   ground off-diagonal s.
inline DensityMatrix3 family_state_unchecked(double R, double s) {
  const double rho_e = (1.0 + 2.0 * s) * R / (2.0 + R);
  const double rho_g = 0.5 * (1.0 - rho_e);
  DensityMatrix3 rho;
  rho.m(0, 0) = rho_g;
  rho.m(1, 1) = rho_g;
  rho.m(2, 2) = rho_e;
  rho.m(0, 1) = s;
  rho.m(1, 0) = s;
  return rho;
}

}  // namespace detail

/// Member of the stationary family at parameter s.
inline DensityMatrix3 family_state(double R, double s) {
  const Interval interval = admissible_interval(R);
  if (!interval.contains(s, 1e-12)) {
    std::ostringstream msg;
    msg << "family parameter s = " << s << " outside the admissible interval ["
        << interval.lo << ", " << interval.hi << "] for R = " << R;
    throw DomainError(msg.str());
  }
  return detail::family_state_unchecked(R, s);
}

/// Descriptor of the full stationary family for a given ratio R.
struct FamilyDescriptor {
  double R = 0.0;

  double s_min() const { return -0.5; }
  double s_max() const { return 1.0 / (2.0 * (1.0 + R)); }
  Interval interval() const { return Interval{s_min(), s_max()}; }
  DensityMatrix3 member(double s) const { return family_state(R, s); }
};

/// The two extremal family members: the pure dark state at s = -1/2 and the
/// maximal-coherence mixture at s = 1/(2(1+R)).
inline std::pair<DensityMatrix3, DensityMatrix3> extremal_states(double R) {
  const Interval interval = admissible_interval(R);
  return {family_state(R, interval.lo), family_state(R, interval.hi)};
}

/// Smallest ground-state diagonal over the stationary family at occupation N:
/// (N+1)/(2(2N+1)), attained at s_max. Tends to 1/4 as N grows.
inline double min_ground_population(double N) {
  if (!(N >= 0.0)) throw DomainError("occupation must be non-negative");
  if (std::isinf(N)) return 0.25;
  return 0.5 * (N + 1.0) / (2.0 * N + 1.0);
}

// ---------------------------------------------------------------------------
// Predicted limit state from the conserved quantity
// ---------------------------------------------------------------------------

/// The family member the state converges to, selected by the conserved C of
/// the initial state. Requires transition-independent susceptivities with
/// strictly positive Re(g|g)+ and Re(g|g)-.
inline DensityMatrix3 predict_stationary(const DensityMatrix3& rho0,
                                         const SusceptivitySet& set) {
  if (!set.alpha_beta_independent())
    throw RegimeError(
        "predict_stationary requires transition-independent susceptivities; "
        "use solve_nullspace for the general case");
  const double re_minus = set.re(0, 0, Sign::minus);
  const double re_plus = set.re(0, 0, Sign::plus);
  const double scale = std::max(1e-300, set.max_abs());
  if (!(re_minus > 1e-12 * scale))
    throw RegimeError(
        "predict_stationary requires Re(g|g)- > 0; the formfactor support "
        "misses the resonant surface");
  if (!(re_plus > 1e-12 * scale))
    throw RegimeError(
        "predict_stationary requires Re(g|g)+ > 0; use solve_nullspace "
        "(degenerate family) or beats (oscillatory regime) instead");
  const double R = re_plus / re_minus;
  const double C = conserved_C(rho0);
  const double s_limit = 0.5 * (1.0 - C - 0.5 * C * R) / (1.0 + R);
  return family_state(R, s_limit);
}

// ---------------------------------------------------------------------------
// Quantum beats
// ---------------------------------------------------------------------------

/// Undamped rotation of D = rho22 - rho11 + rho12 - rho21 when the on-shell
/// '+' rate vanishes but its level shift does not.
struct BeatsDescriptor {
  double frequency = 0.0;       // 2 * Im(g|g)+, radians per unit time
  double damping = 0.0;         // 2 * Re(g|g)+
  double initial_modulus = 0.0; // |D(0)|
};

inline std::complex<double> beat_amplitude(const DensityMatrix3& rho) {
  // D = rho22 - rho11 + rho12 - rho21 = (rho22 - rho11) + 2i Im rho12.
  return {rho.m(1, 1).real() - rho.m(0, 0).real(), 2.0 * rho.m(0, 1).imag()};
}

/// Characterizes the oscillatory regime and verifies it against the exact
/// evolution: |D| stays constant, the phase of D advances linearly at the
/// stated frequency, and s(t) settles to a constant in [-1/2, 1/2].
inline BeatsDescriptor beats(const SusceptivitySet& set,
                             const DensityMatrix3& rho0) {
  if (!set.alpha_beta_independent())
    throw RegimeError("beats requires transition-independent susceptivities");
  const double re_plus = set.re(0, 0, Sign::plus);
  const double re_minus = set.re(0, 0, Sign::minus);
  const double scale = std::max(1e-300, set.max_abs());
  if (std::abs(re_plus) > 1e-12 * scale)
    throw RegimeError(
        "beats requires Re(g|g)+ = 0; the system converges instead (use "
        "predict_stationary)");
  if (!(re_minus > 0.0))
    throw RegimeError("beats requires Re(g|g)- > 0 (no dissipation present)");

  BeatsDescriptor out;
  out.frequency = 2.0 * set.im(0, 0, Sign::plus);
  out.damping = 2.0 * re_plus;
  const std::complex<double> d0 = beat_amplitude(rho0);
  out.initial_modulus = std::abs(d0);

  // Verification over ten periods (or ten dissipation times when there is
  // no rotation).
  const Superoperator L = build_generator(set);
  const double horizon = std::abs(out.frequency) > 0.0
                             ? 10.0 * 2.0 * std::numbers::pi /
                                   std::abs(out.frequency)
                             : 10.0 / re_minus;
  const int n = 160;
  const double step = horizon / (n - 1);
  const Matrix9d E = expm(step * L.matrix);
  Vector9d x = rho0.coords();

  double phase_prev = std::arg(d0);
  double unwrapped = phase_prev;
  double max_modulus_drift = 0.0;
  const bool track_phase =
      out.initial_modulus > 1e-12 && std::abs(out.frequency) > 0.0;
  for (int j = 1; j < n; ++j) {
    x = E * x;
    const std::complex<double> d =
        beat_amplitude(DensityMatrix3::from_coords(x));
    max_modulus_drift =
        std::max(max_modulus_drift, std::abs(std::abs(d) - out.initial_modulus));
    if (track_phase) {
      double ph = std::arg(d);
      double delta = ph - phase_prev;
      while (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
      while (delta < -std::numbers::pi) delta += 2.0 * std::numbers::pi;
      unwrapped += delta;
      phase_prev = ph;
    }
  }
  if (max_modulus_drift > 1e-8 * std::max(1.0, out.initial_modulus))
    throw NumericalError("beats verification failed: |D(t)| drifted by " +
                         std::to_string(max_modulus_drift));
  if (track_phase) {
    const double measured_rate = (unwrapped - std::arg(d0)) / horizon;
    if (std::abs(measured_rate - out.frequency) >
        1e-6 * std::abs(out.frequency))
      throw NumericalError(
          "beats verification failed: phase rate " +
          std::to_string(measured_rate) + " vs expected " +
          std::to_string(out.frequency));
  }
  const double s_final = x[3];
  if (!(s_final >= -0.5 - 1e-9 && s_final <= 0.5 + 1e-9))
    throw NumericalError("beats verification failed: s(t) settled outside "
                         "[-1/2, 1/2]");
  return out;
}

// ---------------------------------------------------------------------------
// Stationary set from the generator kernel
// ---------------------------------------------------------------------------

enum class StationaryKind { unique, family, oscillatory, frozen };

inline const char* to_string(StationaryKind k) {
  switch (k) {
    case StationaryKind::unique: return "unique";
    case StationaryKind::family: return "family";
    case StationaryKind::oscillatory: return "oscillatory";
    case StationaryKind::frozen: return "frozen";
  }
  return "?";
}

struct StationaryResult {
  StationaryKind kind = StationaryKind::frozen;
  int kernel_dim = 0;   // dimension of ker L restricted to the population block
  double residual = 0.0;  // ||L(solution)||_F / ||L||_F
  std::optional<DensityMatrix3> state;       // unique
  std::optional<FamilyDescriptor> family;    // family
  std::optional<BeatsDescriptor> beats;      // oscillatory
};

namespace detail {

inline Vector9d pad_population(const Eigen::Matrix<double, 5, 1>& v) {
  Vector9d x = Vector9d::Zero();
  x.head<5>() = v;
  return x;
}

inline double relative_residual(const Superoperator& L, const Vector9d& x) {
  const double denom = std::max(1e-300, L.norm_frobenius());
  const Eigen::Matrix3cd image =
      DensityMatrix3::from_coords(L.matrix * x).m;
  return image.norm() / denom;
}

}  // namespace detail

/// Kernel analysis of the generator restricted to the population block,
/// intersected with the trace-1 slice. Classifies the stationary set as a
/// unique state, a family (with its fitted descriptor), an oscillatory
/// regime, or frozen dynamics.
inline StationaryResult solve_nullspace(const Superoperator& L) {
  StationaryResult out;
  if (L.norm_inf() < 1e-14) {
    out.kind = StationaryKind::frozen;
    out.kernel_dim = 5;
    return out;
  }

  const Eigen::Matrix<double, 5, 5> block = L.population_block();
  const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
  const double zero_tol = 1e-10 * scale;

  // Neutral rotating pair => no convergence; the state keeps oscillating.
  Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> es(block, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigen decomposition of the population block failed");
  double rotation = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto ev = es.eigenvalues()[k];
    if (std::abs(ev.real()) < zero_tol && std::abs(ev.imag()) > zero_tol)
      rotation = std::max(rotation, std::abs(ev.imag()));
  }

  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(
      block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma_max = svd.singularValues()[0];
  int dim = 0;
  for (int k = 4; k >= 0; --k) {
    if (svd.singularValues()[k] <= 1e-10 * std::max(sigma_max, 1e-300))
      ++dim;
    else
      break;
  }
  out.kernel_dim = dim;

  if (rotation > 0.0) {
    out.kind = StationaryKind::oscillatory;
    BeatsDescriptor b;
    b.frequency = rotation;  // magnitude; the sign needs the level shifts
    b.damping = 0.0;
    out.beats = b;
    return out;
  }

  const Eigen::Matrix<double, 5, 5>& V = svd.matrixV();
  const auto kernel = V.rightCols(dim);

  if (dim <= 0)
    throw NumericalError(
        "generator has no stationary direction; transcription is broken");

  if (dim == 1) {
    Eigen::Matrix<double, 5, 1> v = kernel.col(0);
    const double tr = v[0] + v[1] + v[2];
    if (std::abs(tr) < 1e-12)
      throw NumericalError(
          "one-dimensional kernel carries no trace; no stationary state "
          "exists, which contradicts trace preservation");
    v /= tr;
    const Vector9d x = detail::pad_population(v);
    const DensityMatrix3 rho = DensityMatrix3::from_coords(x);
    const DensityCheck chk = check_density(rho);
    if (!chk.ok)
      throw NumericalError(
          "unique stationary solution fails the density-matrix test (" +
          chk.violation + "); generator transcription is suspect");
    out.kind = StationaryKind::unique;
    out.state = rho;
    out.residual = detail::relative_residual(L, x);
    return out;
  }

  // Family: fit the one-parameter descriptor to the kernel. Solve for the
  // kernel combination with trace 1, ground coherence s, no imaginary
  // coherence, and balanced ground populations; entries are affine in s.
  Eigen::MatrixXd constraints(4, dim);
  for (int c = 0; c < dim; ++c) {
    const auto v = kernel.col(c);
    constraints(0, c) = v[0] + v[1] + v[2];  // trace
    constraints(1, c) = v[3];                // ground coherence (s)
    constraints(2, c) = v[4];                // imaginary ground coherence
    constraints(3, c) = v[0] - v[1];         // population imbalance
  }
  auto member_at = [&](double s) -> Eigen::Matrix<double, 5, 1> {
    Eigen::Vector4d rhs(1.0, s, 0.0, 0.0);
    const Eigen::VectorXd coeff =
        constraints.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
            .solve(rhs);
    Eigen::Matrix<double, 5, 1> x = kernel * coeff;
    if (std::abs(x[0] + x[1] + x[2] - 1.0) > 1e-8 ||
        std::abs(x[3] - s) > 1e-8)
      throw NumericalError(
          "kernel does not contain the requested family member; the "
          "stationary set is not the expected one-parameter family");
    return x;
  };

  const Eigen::Matrix<double, 5, 1> at0 = member_at(0.0);
  const Eigen::Matrix<double, 5, 1> at1 = member_at(0.1);
  const double slope_e = (at1[2] - at0[2]) / 0.1;
  // excited population is (1+2s)R/(2+R): slope 2R/(2+R) in s.
  double R = 2.0 * slope_e / (2.0 - slope_e);
  R = std::clamp(R, 0.0, 1.0);

  FamilyDescriptor family{R};
  out.kind = StationaryKind::family;
  out.family = family;
  double residual = 0.0;
  for (double s : {family.s_min(), 0.0, family.s_max()})
    residual = std::max(
        residual,
        detail::relative_residual(L, family.member(s).coords()));
  out.residual = residual;
  return out;
}

}  // namespace cpt
