#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cpt/bath.hpp"
#include "cpt/selftest.hpp"
#include "oracles.hpp"

using namespace cpt;

namespace {

FormFactor ff(const RadialProfile& p, int pol = 0, int alpha = 0) {
  return FormFactor{pol, alpha, p};
}

const DispersionSpec linear_dispersion{1.0};

}  // namespace

TEST_CASE("resonant part reduces to the surface formula") {
  const auto g = ff(RadialProfile::gaussian(1.0, 1.0, 1.0));
  const auto flat = OccupationSpectrum::flat(1.0);
  const double value =
      resonant_part(g, g, flat, linear_dispersion, 1.0, Sign::plus);
  const double four_pi_sq = 39.478417604357434;
  CHECK(std::abs(value - four_pi_sq) < 1e-12);

  const double oracle = testing::resonant_oracle(g, g, flat, linear_dispersion,
                                                 1.0, Sign::plus, 20.0);
  CHECK(std::abs(value - oracle) < 1e-6 * value);
}

TEST_CASE("resonant part for a quadratic dispersion matches the oracle") {
  const DispersionSpec quadratic{2.0};
  const auto g = ff(RadialProfile::gaussian(0.8, 1.2, 0.6));
  const auto occ = OccupationSpectrum::flat(0.7);
  const double value = resonant_part(g, g, occ, quadratic, 1.3, Sign::minus);
  const double oracle =
      testing::resonant_oracle(g, g, occ, quadratic, 1.3, Sign::minus, 20.0);
  CHECK(std::abs(value - oracle) < 1e-6 * std::abs(value));
}

TEST_CASE("vacuum occupation annihilates the '+' integrals") {
  const auto g = ff(RadialProfile::lorentzian(1.0, 1.0, 0.4));
  const auto fock = OccupationSpectrum::fock();
  CHECK(resonant_part(g, g, fock, linear_dispersion, 1.0, Sign::plus) == 0.0);
  CHECK(principal_part(g, g, fock, linear_dispersion, 1.0, Sign::plus, 20.0) ==
        0.0);
}

TEST_CASE("occupation missing the resonant surface kills the '+' rate") {
  const auto g = ff(RadialProfile::gaussian(1.0, 1.0, 1.0));
  const auto window = OccupationSpectrum::shifted_window(1.0, 3.0, 4.0);
  CHECK(resonant_part(g, g, window, linear_dispersion, 1.0, Sign::plus) == 0.0);
}

TEST_CASE("principal part agrees with the exclusion-window oracle") {
  const auto g = ff(RadialProfile::gaussian(1.0, 1.0, 0.5));
  const auto flat = OccupationSpectrum::flat(1.0);
  const double value =
      principal_part(g, g, flat, linear_dispersion, 1.0, Sign::plus, 10.0);
  const double oracle = testing::principal_oracle(g, g, flat, linear_dispersion,
                                                  1.0, Sign::plus, 10.0);
  CHECK(std::abs(value - oracle) < 1e-6);
}

TEST_CASE("shell-constant couplings agree with the exclusion-window oracle") {
  const auto g = ff(RadialProfile::shell_constant(0.9, 0.6, 1.4));
  const auto flat = OccupationSpectrum::flat(1.0);
  const double value =
      principal_part(g, g, flat, linear_dispersion, 1.0, Sign::plus, 10.0);
  const double oracle = testing::principal_oracle(g, g, flat, linear_dispersion,
                                                  1.0, Sign::plus, 10.0);
  CHECK(std::abs(value - oracle) < 1e-6);
}

TEST_CASE("domain and usage errors") {
  const auto g = ff(RadialProfile::gaussian(1.0, 1.0, 1.0));
  const auto other_pol = ff(RadialProfile::gaussian(1.0, 1.0, 1.0), 1);
  const auto flat = OccupationSpectrum::flat(1.0);
  CHECK_THROWS_AS(
      resonant_part(g, g, flat, linear_dispersion, -1.0, Sign::plus),
      DomainError);
  CHECK_THROWS_AS(
      resonant_part(g, other_pol, flat, linear_dispersion, 1.0, Sign::plus),
      UsageError);
  CHECK_THROWS_AS(principal_part(g, g, flat, linear_dispersion, 1.0,
                                 Sign::plus, 0.5),
                  DomainError);
  CHECK_THROWS_AS(principal_part(g, other_pol, flat, linear_dispersion, 1.0,
                                 Sign::plus, 20.0),
                  UsageError);
  CHECK_THROWS_AS(RadialProfile::gaussian(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(RadialProfile::shell_constant(1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(OccupationSpectrum::flat(-0.5), DomainError);
}

TEST_CASE("diagonal entries expose the resonant and principal parts") {
  BathConfig bath = BathConfig::defaults();
  const Complex v = susceptivity(0, 0, 0, Sign::minus, bath);
  const double res = resonant_part(bath.formfactors[0][0], bath.formfactors[0][0],
                                   bath.occupation, bath.dispersion,
                                   bath.bohr_frequency, Sign::minus);
  const double pp = principal_part(
      bath.formfactors[0][0], bath.formfactors[0][0], bath.occupation,
      bath.dispersion, bath.bohr_frequency, Sign::minus, bath.cutoff);
  CHECK(v.real() == res);
  CHECK(v.imag() == pp);
}

TEST_CASE("susceptivity tensor is Hermitian in the transition indices") {
  selftest::Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const BathConfig bath = selftest::random_bath(rng, k % 2 == 0);
    for (int i = 0; i < 2; ++i)
      for (int s = 0; s < 2; ++s) {
        const Sign sign = static_cast<Sign>(s);
        const Complex ab = susceptivity(i, 0, 1, sign, bath);
        const Complex ba = susceptivity(i, 1, 0, sign, bath);
        CHECK(ab == std::conj(ba));
      }
  }
}

TEST_CASE("set invariants hold for random baths") {
  selftest::Rng rng(11);
  for (int k = 0; k < 12; ++k) {
    const BathConfig bath = selftest::random_bath(rng, k % 2 == 0);
    const SusceptivitySet set = build_susceptivity_set(bath);
    const double scale = set.max_abs();
    for (int i = 0; i < 2; ++i) {
      for (int a = 0; a < 2; ++a) {
        // emission dominates absorption on the diagonal
        CHECK(set.resonant[i][a][a][sign_index(Sign::plus)] >= 0.0);
        CHECK(set.resonant[i][a][a][sign_index(Sign::minus)] >=
              set.resonant[i][a][a][sign_index(Sign::plus)]);
        for (int b = 0; b < 2; ++b)
          for (int s = 0; s < 2; ++s) {
            const Sign sign = static_cast<Sign>(s);
            if (a != b) {
              // Hermitian pairing across the transition indices
              CHECK(set.value(i, a, b, sign) ==
                    std::conj(set.value(i, b, a, sign)));
            } else {
              // diagonal entries carry the level shift in the imaginary part
              CHECK(set.value(i, a, a, sign) ==
                    Complex(set.resonant[i][a][a][s],
                            set.principal[i][a][a][s]));
            }
            // resonant Cauchy-Schwarz across the transition pair
            const double cross = set.resonant[i][a][b][s];
            const double diag = set.resonant[i][a][a][s] *
                                set.resonant[i][b][b][s];
            CHECK(cross * cross <= diag + 1e-12 * scale * scale);
          }
      }
    }
  }
}

TEST_CASE("fock set: '+' entries vanish, '-' rates are positive") {
  const SusceptivitySet set = build_susceptivity_set(selftest::fock_bath());
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        CHECK(set.value(i, a, b, Sign::plus) == Complex(0.0, 0.0));
        CHECK(set.resonant[i][a][b][sign_index(Sign::minus)] > 0.0);
      }
}

TEST_CASE("identical profiles give transition-independent entries") {
  BathConfig bath;
  bath.occupation = OccupationSpectrum::planck(0.8);
  bath.set_equal_formfactors(RadialProfile::gaussian(1.0, 0.9, 0.7));
  const SusceptivitySet set = build_susceptivity_set(bath);
  CHECK(set.alpha_beta_independent());
  for (int i = 0; i < 2; ++i)
    for (int s = 0; s < 2; ++s) {
      const Sign sign = static_cast<Sign>(s);
      CHECK(set.resonant[i][0][0][s] == set.resonant[i][1][1][s]);
      CHECK(set.resonant[i][0][0][s] == set.resonant[i][0][1][s]);
      CHECK(set.principal[i][0][0][s] == set.principal[i][0][1][s]);
      (void)sign;
    }
}

TEST_CASE("einstein ratio: planck occupation gives the boltzmann factor") {
  BathConfig bath;
  bath.occupation = OccupationSpectrum::planck(1.0);
  bath.set_equal_formfactors(RadialProfile::gaussian(1.0, 1.0, 1.0));
  const SusceptivitySet set = build_susceptivity_set(bath);
  CHECK(std::abs(einstein_ratio(set) - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("einstein ratio: flat occupation at one photon gives one half") {
  BathConfig bath;
  bath.occupation = OccupationSpectrum::flat(1.0);
  bath.set_equal_formfactors(RadialProfile::lorentzian(0.6, 1.1, 0.5));
  const SusceptivitySet set = build_susceptivity_set(bath);
  CHECK(std::abs(einstein_ratio(set) - 0.5) < 1e-15);
}

TEST_CASE("einstein ratio: fock gives zero, missing support is undefined") {
  CHECK(einstein_ratio(build_susceptivity_set(selftest::fock_bath())) == 0.0);

  BathConfig miss;
  miss.occupation = OccupationSpectrum::flat(1.0);
  miss.set_equal_formfactors(RadialProfile::shell_constant(1.0, 2.0, 3.0));
  const SusceptivitySet set = build_susceptivity_set(miss);
  CHECK(!set.ratio_defined());
  CHECK_THROWS_AS(einstein_ratio(set), DomainError);
}

TEST_CASE("einstein ratio does not depend on the profile family") {
  const RadialProfile profiles[2] = {RadialProfile::gaussian(1.3, 1.0, 0.9),
                                     RadialProfile::lorentzian(0.5, 1.2, 0.6)};
  double ratios[2];
  for (int k = 0; k < 2; ++k) {
    BathConfig bath;
    bath.occupation = OccupationSpectrum::planck(0.7);
    bath.set_equal_formfactors(profiles[k]);
    ratios[k] = einstein_ratio(build_susceptivity_set(bath));
  }
  CHECK(std::abs(ratios[0] - ratios[1]) < 2e-9);
}

TEST_CASE("principal part converges as the tolerance tightens") {
  const auto g = ff(RadialProfile::gaussian(1.0, 1.0, 0.5));
  const auto occ = OccupationSpectrum::planck(1.0);
  const auto coarse = principal_part_detail(g, g, occ, linear_dispersion, 1.0,
                                            Sign::minus, 20.0, 1e-9);
  const auto fine = principal_part_detail(g, g, occ, linear_dispersion, 1.0,
                                          Sign::minus, 20.0, 5e-10);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.error + 1e-15);
}

TEST_CASE("cutoff is part of the contract") {
  BathConfig bath = BathConfig::defaults();
  bath.cutoff = 0.5;  // below the resonant radius
  CHECK_THROWS_AS(build_susceptivity_set(bath), DomainError);
}
