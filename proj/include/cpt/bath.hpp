#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "cpt/errors.hpp"
#include "cpt/quadrature.hpp"

namespace cpt {

using Complex = std::complex<double>;

/// Weight selector for the bath integrals: '+' weighs the integrand with the
/// occupation N, '-' with N + 1.
enum class Sign { plus = 0, minus = 1 };

inline constexpr int sign_index(Sign s) { return static_cast<int>(s); }

// ---------------------------------------------------------------------------
// Bath ingredients
// ---------------------------------------------------------------------------

/// Isotropic power-law dispersion in three spatial dimensions,
/// omega(k) = |k|^p with p > 0. The resonant surface omega(k) = omega is the
/// sphere of radius omega^{1/p}.
struct DispersionSpec {
  double exponent = 1.0;

  double omega_of(double r) const { return std::pow(r, exponent); }

  double resonant_radius(double omega) const {
    return std::pow(omega, 1.0 / exponent);
  }

  /// d(omega)/dr at radius r; Jacobian of the delta-function reduction.
  double slope_of(double r) const {
    return exponent * std::pow(r, exponent - 1.0);
  }

  void validate() const {
    if (!(exponent > 0.0))
      throw DomainError("dispersion exponent p must be positive");
  }
};

/// Real radial coupling profile. The amplitude may carry either sign;
/// widths and shell edges must be positive with inner < outer.
struct RadialProfile {
  enum class Kind { gaussian, lorentzian, shell_constant };

  Kind kind = Kind::gaussian;
  double amplitude = 1.0;
  double a = 1.0;  // gaussian/lorentzian: center; shell: inner radius
  double b = 1.0;  // gaussian: width; lorentzian: halfwidth; shell: outer radius

  double operator()(double r) const {
    switch (kind) {
      case Kind::gaussian: {
        const double z = (r - a) / b;
        return amplitude * std::exp(-0.5 * z * z);
      }
      case Kind::lorentzian: {
        const double z = (r - a) / b;
        return amplitude / (1.0 + z * z);
      }
      case Kind::shell_constant:
        return (r >= a && r <= b) ? amplitude : 0.0;
    }
    return 0.0;
  }

  static RadialProfile gaussian(double amplitude, double center, double width) {
    if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
    return RadialProfile{Kind::gaussian, amplitude, center, width};
  }

  static RadialProfile lorentzian(double amplitude, double center,
                                  double halfwidth) {
    if (!(halfwidth > 0.0))
      throw DomainError("lorentzian halfwidth must be positive");
    return RadialProfile{Kind::lorentzian, amplitude, center, halfwidth};
  }

  static RadialProfile shell_constant(double amplitude, double inner,
                                      double outer) {
    if (!(inner >= 0.0 && outer > inner))
      throw DomainError("shell requires 0 <= inner < outer");
    return RadialProfile{Kind::shell_constant, amplitude, inner, outer};
  }

  void append_breakpoints(std::vector<double>& out) const {
    if (kind == Kind::shell_constant) {
      out.push_back(a);
      out.push_back(b);
    }
  }

  bool operator==(const RadialProfile&) const = default;
};

/// Coupling profile tagged with its polarization / transition slot.
/// Polarization and transition indices are 0-based in code (0,1).
struct FormFactor {
  int polarization = 0;
  int transition = 0;
  RadialProfile profile;

  double operator()(double r) const { return profile(r); }
};

/// Photon occupation of the field state as a function of the radial
/// coordinate. N(r) >= 0 everywhere; the fock kind is identically zero.
struct OccupationSpectrum {
  enum class Kind { fock, flat, planck, shifted_window };

  Kind kind = Kind::fock;
  double nbar = 0.0;  // flat / shifted_window level
  double beta = 1.0;  // planck inverse temperature
  double a = 0.0;     // shifted_window inner radius
  double b = 0.0;     // shifted_window outer radius

  double value(double r, const DispersionSpec& disp) const {
    switch (kind) {
      case Kind::fock:
        return 0.0;
      case Kind::flat:
        return nbar;
      case Kind::planck: {
        const double x = beta * disp.omega_of(r);
        const double denom = std::expm1(x);
        return denom > 0.0 ? 1.0 / denom
                           : std::numeric_limits<double>::infinity();
      }
      case Kind::shifted_window:
        return (r >= a && r <= b) ? nbar : 0.0;
    }
    return 0.0;
  }

  static OccupationSpectrum fock() { return OccupationSpectrum{}; }

  static OccupationSpectrum flat(double nbar) {
    if (!(nbar >= 0.0)) throw DomainError("occupation must be non-negative");
    return OccupationSpectrum{Kind::flat, nbar, 0.0, 0.0, 0.0};
  }

  static OccupationSpectrum planck(double beta) {
    if (!(beta > 0.0))
      throw DomainError("planck inverse temperature must be positive");
    return OccupationSpectrum{Kind::planck, 0.0, beta, 0.0, 0.0};
  }

  static OccupationSpectrum shifted_window(double nbar, double inner,
                                           double outer) {
    if (!(nbar >= 0.0)) throw DomainError("occupation must be non-negative");
    if (!(inner >= 0.0 && outer > inner))
      throw DomainError("occupation window requires 0 <= inner < outer");
    return OccupationSpectrum{Kind::shifted_window, nbar, 0.0, inner, outer};
  }

  void append_breakpoints(std::vector<double>& out) const {
    if (kind == Kind::shifted_window) {
      out.push_back(a);
      out.push_back(b);
    }
  }
};

/// Complete bath description: everything the susceptivity integrals need.
struct BathConfig {
  DispersionSpec dispersion;
  // formfactors[i][alpha]: polarization i, transition alpha.
  std::array<std::array<FormFactor, 2>, 2> formfactors;
  OccupationSpectrum occupation;
  double bohr_frequency = 1.0;
  double cutoff = 20.0;  // ultraviolet cutoff radius in k-space
  double quad_tol = 1e-9;

  /// Thermal bath at beta = 1 with unit gaussian couplings; the fully
  /// defaulted configuration used when no document is given.
  static BathConfig defaults() {
    BathConfig cfg;
    cfg.occupation = OccupationSpectrum::planck(1.0);
    cfg.set_equal_formfactors(RadialProfile::gaussian(1.0, 1.0, 1.0));
    return cfg;
  }

  BathConfig() {
    for (int i = 0; i < 2; ++i)
      for (int alpha = 0; alpha < 2; ++alpha)
        formfactors[i][alpha] = FormFactor{i, alpha, RadialProfile{}};
  }

  void set_equal_formfactors(const RadialProfile& profile) {
    for (int i = 0; i < 2; ++i)
      for (int alpha = 0; alpha < 2; ++alpha)
        formfactors[i][alpha] = FormFactor{i, alpha, profile};
  }

  void set_formfactor(int i, int alpha, const RadialProfile& profile) {
    formfactors[i][alpha] = FormFactor{i, alpha, profile};
  }

  /// True when the profiles do not depend on the transition index.
  bool alpha_independent_profiles() const {
    return formfactors[0][0].profile == formfactors[0][1].profile &&
           formfactors[1][0].profile == formfactors[1][1].profile;
  }

  double resonant_radius() const {
    return dispersion.resonant_radius(bohr_frequency);
  }

  void validate() const {
    dispersion.validate();
    if (!(bohr_frequency > 0.0))
      throw DomainError("bohr frequency must be positive");
    if (!(cutoff > resonant_radius()))
      throw DomainError("cutoff must exceed the resonant radius");
    if (!(quad_tol > 0.0))
      throw DomainError("quadrature tolerance must be positive");
  }
};

// ---------------------------------------------------------------------------
// Susceptivity integrals
// ---------------------------------------------------------------------------

/// Resonant (on-shell) part of the susceptivity:
///   pi * ∫ dk ga(k) gb(k) W(k) delta(omega(k) - omega)
/// with W = N for Sign::plus and W = N + 1 for Sign::minus. For the isotropic
/// dispersion the angular integral is a 4*pi*r^2 surface factor and the delta
/// contributes the Jacobian 1/(d omega/dr) at the resonant radius.
inline double resonant_part(const FormFactor& ga, const FormFactor& gb,
                            const OccupationSpectrum& occupation,
                            const DispersionSpec& disp, double omega,
                            Sign sign) {
  if (!(omega > 0.0)) throw DomainError("bohr frequency must be positive");
  if (ga.polarization != gb.polarization)
    throw UsageError("resonant_part requires formfactors of one polarization");
  const double rstar = disp.resonant_radius(omega);
  const double n = occupation.value(rstar, disp);
  const double weight = sign == Sign::plus ? n : n + 1.0;
  const double surface = 4.0 * std::numbers::pi * rstar * rstar;
  return std::numbers::pi * surface * ga(rstar) * gb(rstar) * weight /
         disp.slope_of(rstar);
}

/// Principal-value part of the susceptivity (this is the value entering the
/// imaginary part):
///   -P.P. ∫_{|k|<=cutoff} dk ga(k) gb(k) W(k) / (omega(k) - omega)
/// computed by singularity subtraction on the radial integrand
/// f(r) = 4*pi*r^2 ga gb W / h(r), where h(r) = (omega(r) - omega)/(r - r*)
/// extends continuously across the resonant radius.
inline quad::Result principal_part_detail(const FormFactor& ga,
                                          const FormFactor& gb,
                                          const OccupationSpectrum& occupation,
                                          const DispersionSpec& disp,
                                          double omega, Sign sign,
                                          double cutoff,
                                          double abs_tol = 1e-9) {
  if (!(omega > 0.0)) throw DomainError("bohr frequency must be positive");
  if (ga.polarization != gb.polarization)
    throw UsageError(
        "principal_part requires formfactors of one polarization");
  const double rstar = disp.resonant_radius(omega);
  if (!(cutoff > rstar))
    throw DomainError("cutoff must exceed the resonant radius");

  const double p = disp.exponent;
  auto slope_factor = [&](double r) {
    // (omega(r) - omega) / (r - r*), continuous through r = r*.
    const double d = r - rstar;
    if (std::abs(d) < 1e-12 * rstar) return disp.slope_of(rstar);
    return std::pow(rstar, p) * std::expm1(p * std::log(r / rstar)) / d;
  };
  auto radial_integrand = [&](double r) {
    const double n = occupation.value(r, disp);
    const double weight = sign == Sign::plus ? n : n + 1.0;
    return 4.0 * std::numbers::pi * r * r * ga(r) * gb(r) * weight /
           slope_factor(r);
  };

  std::vector<double> breakpoints;
  ga.profile.append_breakpoints(breakpoints);
  gb.profile.append_breakpoints(breakpoints);
  occupation.append_breakpoints(breakpoints);

  quad::Result pp = quad::principal_value(radial_integrand, rstar, 0.0, cutoff,
                                          breakpoints, abs_tol);
  pp.value = -pp.value;
  return pp;
}

inline double principal_part(const FormFactor& ga, const FormFactor& gb,
                             const OccupationSpectrum& occupation,
                             const DispersionSpec& disp, double omega,
                             Sign sign, double cutoff, double abs_tol = 1e-9) {
  return principal_part_detail(ga, gb, occupation, disp, omega, sign, cutoff,
                               abs_tol)
      .value;
}

// ---------------------------------------------------------------------------
// The assembled susceptivity tensor
// ---------------------------------------------------------------------------

/// All sixteen susceptivity entries of a bath (2 polarizations x 2x2
/// transitions x 2 signs), their polarization sums and the emission-absorption
/// ratio R.
///
/// The real `resonant` and `principal` tensors are the primary data; they are
/// symmetric in (alpha, beta) because the profiles are real. The packaged
/// complex entry for alpha > beta is the conjugate of its transpose, matching
/// the barred entries that appear in the (2,1) slots of the evolution
/// equations, so value(i, a, b, s) == conj(value(i, b, a, s)) always holds.
struct SusceptivitySet {
  double bohr_frequency = 1.0;
  double cutoff = 20.0;
  // Indexing: [polarization][alpha][beta][sign_index]
  double resonant[2][2][2][2] = {};
  double principal[2][2][2][2] = {};
  double quad_error[2][2][2][2] = {};

  Complex value(int i, int alpha, int beta, Sign s) const {
    const Complex v(resonant[i][alpha][beta][sign_index(s)],
                    principal[i][alpha][beta][sign_index(s)]);
    return alpha <= beta ? v : std::conj(v);
  }

  Complex polarization_sum(int alpha, int beta, Sign s) const {
    return value(0, alpha, beta, s) + value(1, alpha, beta, s);
  }

  /// Sum over polarizations of the resonant part (the on-shell rate).
  double re(int alpha, int beta, Sign s) const {
    return resonant[0][alpha][beta][sign_index(s)] +
           resonant[1][alpha][beta][sign_index(s)];
  }

  /// Sum over polarizations of the principal-value part (the level shift).
  double im(int alpha, int beta, Sign s) const {
    return principal[0][alpha][beta][sign_index(s)] +
           principal[1][alpha][beta][sign_index(s)];
  }

  double error_sum(int alpha, int beta, Sign s) const {
    return quad_error[0][alpha][beta][sign_index(s)] +
           quad_error[1][alpha][beta][sign_index(s)];
  }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int s = 0; s < 2; ++s)
            m = std::max(
                {m, std::abs(resonant[i][a][b][s]), std::abs(principal[i][a][b][s])});
    return m;
  }

  /// True when the summed susceptivities do not depend on the transition
  /// indices (the hypothesis of the one-parameter stationary family).
  bool alpha_beta_independent(double rel_tol = 1e-9) const {
    const double scale = std::max(1e-300, max_abs());
    for (int s = 0; s < 2; ++s) {
      const Sign sg = static_cast<Sign>(s);
      const double re00 = re(0, 0, sg);
      const double im00 = im(0, 0, sg);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (std::abs(re(a, b, sg) - re00) > rel_tol * scale) return false;
          if (std::abs(im(a, b, sg) - im00) > rel_tol * scale) return false;
        }
    }
    return true;
  }

  bool ratio_defined() const { return re(0, 0, Sign::minus) > 0.0; }

  /// Emission-absorption ratio R = Re(g|g)+ / Re(g|g)-.
  double ratio() const {
    if (!ratio_defined())
      throw DomainError(
          "emission-absorption ratio undefined: Re(g|g)- is not positive "
          "(formfactor support misses the resonant surface)");
    return re(0, 0, Sign::plus) / re(0, 0, Sign::minus);
  }

  double ratio_error_estimate() const {
    if (!ratio_defined()) return 0.0;
    const double num = re(0, 0, Sign::plus);
    const double den = re(0, 0, Sign::minus);
    const double enum_ = error_sum(0, 0, Sign::plus);
    const double eden = error_sum(0, 0, Sign::minus);
    return enum_ / den + std::abs(num) * eden / (den * den);
  }
};

/// One ordered susceptivity entry. Entries with alpha > beta are the
/// conjugates of their transposes (see SusceptivitySet).
inline Complex susceptivity(int i, int alpha, int beta, Sign sign,
                            const BathConfig& config) {
  config.validate();
  const FormFactor& ga = config.formfactors[i][alpha];
  const FormFactor& gb = config.formfactors[i][beta];
  const double res = resonant_part(ga, gb, config.occupation,
                                   config.dispersion, config.bohr_frequency,
                                   sign);
  const double pp =
      principal_part(ga, gb, config.occupation, config.dispersion,
                     config.bohr_frequency, sign, config.cutoff,
                     config.quad_tol);
  const Complex v(res, pp);
  return alpha <= beta ? v : std::conj(v);
}

inline SusceptivitySet build_susceptivity_set(const BathConfig& config) {
  config.validate();
  SusceptivitySet set;
  set.bohr_frequency = config.bohr_frequency;
  set.cutoff = config.cutoff;
  for (int i = 0; i < 2; ++i) {
    for (int alpha = 0; alpha < 2; ++alpha) {
      for (int beta = alpha; beta < 2; ++beta) {
        const FormFactor& ga = config.formfactors[i][alpha];
        const FormFactor& gb = config.formfactors[i][beta];
        for (int s = 0; s < 2; ++s) {
          const Sign sign = static_cast<Sign>(s);
          const double res =
              resonant_part(ga, gb, config.occupation, config.dispersion,
                            config.bohr_frequency, sign);
          const quad::Result pp = principal_part_detail(
              ga, gb, config.occupation, config.dispersion,
              config.bohr_frequency, sign, config.cutoff, config.quad_tol);
          set.resonant[i][alpha][beta][s] = res;
          set.principal[i][alpha][beta][s] = pp.value;
          set.quad_error[i][alpha][beta][s] = pp.error;
          set.resonant[i][beta][alpha][s] = res;
          set.principal[i][beta][alpha][s] = pp.value;
          set.quad_error[i][beta][alpha][s] = pp.error;
        }
      }
    }
  }
  return set;
}

/// R = Re(g|g)+ / Re(g|g)- in [0, 1); formfactor-independent whenever the
/// occupation depends on the radial coordinate only through the dispersion.
inline double einstein_ratio(const SusceptivitySet& set) { return set.ratio(); }

}  // namespace cpt
