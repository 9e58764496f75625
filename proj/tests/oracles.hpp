// Test-only independent oracles for the bath integrals. These deliberately
// avoid the closed-form delta reduction and the singularity-subtraction path
// used by the library.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cpt/bath.hpp"
#include "cpt/quadrature.hpp"

namespace cpt::testing {

/// Resonant integral via a narrow-Gaussian mollification of the delta with
/// Richardson extrapolation of the width to zero (error O(eps^4) after one
/// extrapolation level).
inline double resonant_oracle(const FormFactor& ga, const FormFactor& gb,
                              const OccupationSpectrum& occupation,
                              const DispersionSpec& disp, double omega,
                              Sign sign, double cutoff) {
  auto mollified = [&](double eps) {
    auto integrand = [&](double r) {
      const double n = occupation.value(r, disp);
      const double weight = sign == Sign::plus ? n : n + 1.0;
      const double x = disp.omega_of(r) - omega;
      const double phi = std::exp(-0.5 * (x / eps) * (x / eps)) /
                         (eps * std::sqrt(2.0 * std::numbers::pi));
      return std::numbers::pi * 4.0 * std::numbers::pi * r * r * ga(r) *
             gb(r) * weight * phi;
    };
    const double rstar = disp.resonant_radius(omega);
    const double halfwidth = 12.0 * eps / disp.slope_of(rstar);
    std::vector<double> breakpoints = {rstar - halfwidth, rstar,
                                       rstar + halfwidth};
    ga.profile.append_breakpoints(breakpoints);
    gb.profile.append_breakpoints(breakpoints);
    occupation.append_breakpoints(breakpoints);
    return quad::integrate_segmented(integrand, 0.0, cutoff, breakpoints,
                                     1e-11, 40000)
        .value;
  };
  const double eps = 0.01;
  return (4.0 * mollified(eps / 2.0) - mollified(eps)) / 3.0;
}

/// Principal-value integral via a symmetric exclusion window around the
/// resonant radius with two Richardson levels in the window half-width
/// (the excluded mass is odd in the half-width, so the error after two
/// levels is O(eps^5)). Only valid for linear dispersion (p = 1), which is
/// what the tests use it for. Returns the library's sign convention
/// (-P.P. integral).
inline double principal_oracle(const FormFactor& ga, const FormFactor& gb,
                               const OccupationSpectrum& occupation,
                               const DispersionSpec& disp, double omega,
                               Sign sign, double cutoff) {
  auto windowed = [&](double eps) {
    auto integrand = [&](double r) {
      const double n = occupation.value(r, disp);
      const double weight = sign == Sign::plus ? n : n + 1.0;
      return 4.0 * std::numbers::pi * r * r * ga(r) * gb(r) * weight /
             (r - omega);
    };
    std::vector<double> breakpoints;
    ga.profile.append_breakpoints(breakpoints);
    gb.profile.append_breakpoints(breakpoints);
    occupation.append_breakpoints(breakpoints);
    const double left =
        quad::integrate_segmented(integrand, 0.0, omega - eps, breakpoints,
                                  5e-12, 40000)
            .value;
    const double right =
        quad::integrate_segmented(integrand, omega + eps, cutoff, breakpoints,
                                  5e-12, 40000)
            .value;
    return left + right;
  };
  const double eps = 0.04;
  const double j0 = windowed(eps);
  const double j1 = windowed(eps / 2.0);
  const double j2 = windowed(eps / 4.0);
  const double r1 = 2.0 * j1 - j0;
  const double r2 = 2.0 * j2 - j1;
  return -(8.0 * r2 - r1) / 7.0;
}

}  // namespace cpt::testing
