#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cpt/quadrature.hpp"

using namespace cpt;

TEST_CASE("polynomials and smooth integrands are reproduced") {
  auto poly = [](double x) { return 5.0 * x * x * x * x - 2.0 * x + 1.0; };
  const auto r = quad::integrate(poly, -1.0, 2.0, 1e-12);
  // antiderivative x^5 - x^2 + x
  const double expected = (32.0 - 4.0 + 2.0) - (-1.0 - 1.0 - 1.0);
  CHECK(std::abs(r.value - expected) < 1e-12);

  const auto e = quad::integrate([](double x) { return std::exp(x); }, 0.0,
                                 3.0, 1e-12);
  CHECK(std::abs(e.value - (std::exp(3.0) - 1.0)) < 1e-10);
  CHECK(std::abs(e.value - (std::exp(3.0) - 1.0)) <= e.error + 1e-12);
}

TEST_CASE("oscillatory integrand converges within the estimate") {
  auto f = [](double x) { return std::sin(40.0 * x) / (1.0 + x * x); };
  const auto r = quad::integrate(f, 0.0, 10.0, 1e-10);
  const auto finer = quad::integrate(f, 0.0, 10.0, 1e-12);
  CHECK(std::abs(r.value - finer.value) <= r.error + 1e-12);
}

TEST_CASE("panel budget exhaustion is an error, not an approximation") {
  auto divergent = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(quad::integrate(divergent, 0.0, 1.0, 1e-9, 200),
                  NumericalError);
}

TEST_CASE("segmented integration handles jump discontinuities") {
  auto step = [](double x) { return x < 1.0 ? 1.0 : 3.0; };
  const auto r =
      quad::integrate_segmented(step, 0.0, 2.0, {1.0}, 1e-12);
  CHECK(std::abs(r.value - 4.0) < 1e-12);
}

TEST_CASE("principal value of a constant numerator is the logarithm") {
  const auto r = quad::principal_value([](double) { return 1.0; }, 1.0, 0.0,
                                       10.0, {}, 1e-12);
  CHECK(std::abs(r.value - std::log(9.0)) < 1e-12);
}

TEST_CASE("principal value with removable singularity") {
  // f(r) = r - pole makes the integrand identically 1.
  const auto r = quad::principal_value([](double x) { return x - 2.0; }, 2.0,
                                       0.0, 5.0, {}, 1e-12);
  CHECK(std::abs(r.value - 5.0) < 1e-11);
}

TEST_CASE("even numerator about the pole on a symmetric range cancels") {
  // Integrand f(r)/(r - pole) is odd under reflection through the pole, so
  // the principal value vanishes.
  auto f = [](double r) { return std::exp(-(r - 2.0) * (r - 2.0)); };
  const auto r = quad::principal_value(f, 2.0, 1.0, 3.0, {}, 1e-12);
  CHECK(std::abs(r.value) < 1e-11);
}

TEST_CASE("principal value against a shifted closed form") {
  // P.P. over [0, 4] of r/(r - 1) = 4 + ln(3).
  const auto r = quad::principal_value([](double x) { return x; }, 1.0, 0.0,
                                       4.0, {}, 1e-12);
  CHECK(std::abs(r.value - (4.0 + std::log(3.0))) < 1e-11);
}

TEST_CASE("pole on a breakpoint is rejected") {
  CHECK_THROWS_AS(quad::principal_value([](double) { return 1.0; }, 1.0, 0.0,
                                        2.0, {1.0}, 1e-9),
                  DomainError);
  CHECK_THROWS_AS(quad::principal_value([](double) { return 1.0; }, 3.0, 0.0,
                                        2.0, {}, 1e-9),
                  DomainError);
}

TEST_CASE("halving the tolerance moves the result less than the estimate") {
  auto f = [](double x) { return std::cos(3.0 * x) / (2.0 + x); };
  const auto coarse = quad::principal_value(f, 1.5, 0.0, 8.0, {}, 1e-9);
  const auto fine = quad::principal_value(f, 1.5, 0.0, 8.0, {}, 5e-10);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.error + 1e-15);
}
