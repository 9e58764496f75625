#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "cpt/bath.hpp"
#include "cpt/generator.hpp"
#include "cpt/selftest.hpp"

using namespace cpt;

namespace {

// Population-sector dynamics written out by hand from the three coupled
// equations for (rho11, rho22, rho12) plus trace preservation, in the
// coordinates (rho11, rho22, rho33, Re rho12, Im rho12). An independent
// route against the mechanically assembled generator.
Eigen::Matrix<double, 5, 5> hand_population_block(const SusceptivitySet& set) {
  const double A1 = set.re(0, 0, Sign::minus);
  const double A2 = set.re(1, 1, Sign::minus);
  const double A12 = set.re(0, 1, Sign::minus);
  const double B1 = set.re(0, 0, Sign::plus);
  const double B2 = set.re(1, 1, Sign::plus);
  const double B12 = set.re(0, 1, Sign::plus);
  const double b1 = set.im(0, 0, Sign::plus);
  const double b2 = set.im(1, 1, Sign::plus);
  const double b12 = set.im(0, 1, Sign::plus);

  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  // d rho11 / dt
  m.row(0) << -2.0 * B1, 0.0, 2.0 * A1, -2.0 * B12, 2.0 * b12;
  // d rho22 / dt
  m.row(1) << 0.0, -2.0 * B2, 2.0 * A2, -2.0 * B12, -2.0 * b12;
  // d rho33 / dt = -(d rho11 + d rho22)/dt
  m.row(2) = -(m.row(0) + m.row(1));
  // d Re rho12 / dt
  m.row(3) << -B12, -B12, 2.0 * A12, -(B1 + B2), b2 - b1;
  // d Im rho12 / dt
  m.row(4) << -b12, b12, 0.0, -(b2 - b1), -(B1 + B2);
  return m;
}

// Excited-coherence dynamics by hand: rho13 and rho23 close on themselves
// with complex rates lambda_alpha and a symmetric cross coupling nu.
Eigen::Matrix<double, 4, 4> hand_coherence_block(const SusceptivitySet& set) {
  using C = std::complex<double>;
  const double A1 = set.re(0, 0, Sign::minus);
  const double A2 = set.re(1, 1, Sign::minus);
  const double B1 = set.re(0, 0, Sign::plus);
  const double B2 = set.re(1, 1, Sign::plus);
  const double B12 = set.re(0, 1, Sign::plus);
  const double a1 = set.im(0, 0, Sign::minus);
  const double a2 = set.im(1, 1, Sign::minus);
  const double b1 = set.im(0, 0, Sign::plus);
  const double b2 = set.im(1, 1, Sign::plus);
  const double b12 = set.im(0, 1, Sign::plus);

  const C lambda1(-(A1 + A2 + B1), a1 + a2 + b1);
  const C lambda2(-(A1 + A2 + B2), a1 + a2 + b2);
  const C nu(-B12, b12);

  Eigen::Matrix<double, 4, 4> m;
  // coordinates (Re rho13, Im rho13, Re rho23, Im rho23)
  m.row(0) << lambda1.real(), -lambda1.imag(), nu.real(), -nu.imag();
  m.row(1) << lambda1.imag(), lambda1.real(), nu.imag(), nu.real();
  m.row(2) << nu.real(), -nu.imag(), lambda2.real(), -lambda2.imag();
  m.row(3) << nu.imag(), nu.real(), lambda2.imag(), lambda2.real();
  return m;
}

DensityMatrix3 random_hermitian(selftest::Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector9d x;
  for (int k = 0; k < 9; ++k) x[k] = g(rng);
  return DensityMatrix3::from_coords(x);
}

}  // namespace

TEST_CASE("zero susceptivities freeze the dynamics") {
  SusceptivitySet set;
  const Superoperator L = build_generator(set);
  CHECK(L.norm_inf() == 0.0);
  DensityMatrix3 rho = presets::mixed();
  CHECK(apply(L, rho).m.norm() == 0.0);
}

TEST_CASE("generator preserves the trace") {
  selftest::Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const BathConfig bath = selftest::random_bath(rng, k % 2 == 0);
    const Superoperator L = build_generator(build_susceptivity_set(bath));
    const Eigen::Matrix<double, 1, 9> trace_row =
        L.matrix.row(0) + L.matrix.row(1) + L.matrix.row(2);
    CHECK(trace_row.cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, L.norm_inf()));

    const DensityMatrix3 rho = selftest::random_density(rng);
    const DensityMatrix3 deriv = apply(L, rho);
    CHECK(std::abs(deriv.trace_real()) < 1e-14 * std::max(1.0, L.norm_inf()));
    CHECK(deriv.hermiticity_defect() == 0.0);
  }
}

TEST_CASE("assembled generator matches the hand-written block equations") {
  selftest::Rng rng(17);
  for (int k = 0; k < 12; ++k) {
    const BathConfig bath =
        k % 3 == 0 ? selftest::random_equal_bath(rng, true)
                   : selftest::random_bath(rng, k % 2 == 0);
    const SusceptivitySet set = build_susceptivity_set(bath);
    const Superoperator L = build_generator(set);
    const double scale = std::max(1.0, L.norm_inf());

    const auto pop_gap =
        (L.population_block() - hand_population_block(set)).cwiseAbs().maxCoeff();
    CHECK(pop_gap < 1e-13 * scale);

    const auto coh_gap =
        (L.coherence_block() - hand_coherence_block(set)).cwiseAbs().maxCoeff();
    CHECK(coh_gap < 1e-13 * scale);
  }
}

TEST_CASE("sectors never couple, including transition-dependent couplings") {
  selftest::Rng rng(29);
  for (int k = 0; k < 10; ++k) {
    const BathConfig bath = selftest::random_bath(rng, true);
    const Superoperator L = build_generator(build_susceptivity_set(bath));
    const BlockReport report = decompose_blocks(L);
    CHECK(report.coh_to_pop_leakage < 1e-12);
    CHECK(report.pop_to_coh_leakage < 1e-12);
  }
}

TEST_CASE("matrix application agrees with the direct right-hand side") {
  selftest::Rng rng(31);
  const BathConfig bath = selftest::random_bath(rng, true);
  const SusceptivitySet set = build_susceptivity_set(bath);
  const Superoperator L = build_generator(set);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix3 rho = random_hermitian(rng);
    const Vector9d via_matrix = (L.matrix * rho.coords());
    const Vector9d direct =
        DensityMatrix3::from_matrix(master_rhs(set, rho.m)).coords();
    CHECK((via_matrix - direct).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, L.norm_inf()));
  }
}

TEST_CASE("vacuum bath empties the excited level at rate 4 Re(g|g)-") {
  const SusceptivitySet set = build_susceptivity_set(selftest::fock_bath());
  const Superoperator L = build_generator(set);
  const double rate = 2.0 * (set.re(0, 0, Sign::minus) +
                             set.re(1, 1, Sign::minus));
  CHECK(std::abs(L.matrix(2, 2) + rate) < 1e-12 * rate);
  for (int c = 0; c < 9; ++c) {
    if (c == 2) continue;
    CHECK(std::abs(L.matrix(2, c)) < 1e-14 * rate);
  }
}

TEST_CASE("dark state is stationary for equal couplings") {
  selftest::Rng rng(37);
  for (int k = 0; k < 5; ++k) {
    const BathConfig bath = selftest::random_equal_bath(rng, k % 2 == 0);
    const Superoperator L = build_generator(build_susceptivity_set(bath));
    const DensityMatrix3 dark = presets::non_coupled();
    CHECK(apply(L, dark).m.norm() < 1e-12 * std::max(1.0, L.norm_inf()));
  }
}

TEST_CASE("block report spectra") {
  SUBCASE("frozen generator") {
    const Superoperator L = build_generator(SusceptivitySet{});
    const BlockReport report = decompose_blocks(L);
    CHECK(report.coh_spectral_abscissa == 0.0);
    CHECK(report.pop_spectral_gap == 0.0);
    CHECK(report.min_rate_bound == 0.0);
  }
  SUBCASE("thermal bath decays") {
    selftest::Rng rng(41);
    const BathConfig bath = selftest::random_bath(rng, true);
    const SusceptivitySet set = build_susceptivity_set(bath);
    const Superoperator L = build_generator(set);
    const BlockReport report = decompose_blocks(L);
    CHECK(report.coh_spectral_abscissa < 0.0);
    CHECK(report.pop_spectral_gap > 0.0);
    double min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a)
        for (int s = 0; s < 2; ++s)
          min_rate = std::min(min_rate, set.resonant[i][a][a][s]);
    CHECK(report.min_rate_bound == 0.5 * min_rate);
    // the bound never overstates the actual decay
    CHECK(report.coh_spectral_abscissa <= -report.min_rate_bound + 1e-12);
  }
}
