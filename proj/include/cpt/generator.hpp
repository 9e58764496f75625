#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "cpt/bath.hpp"
#include "cpt/density_matrix.hpp"
#include "cpt/errors.hpp"

namespace cpt {

/// Real 9x9 matrix representation of the master-equation generator acting on
/// the coordinate vector of a Hermitian 3x3 matrix. The generator is built so
/// that the population sector (coordinates 0..4) and the excited-coherence
/// sector (coordinates 5..8) never couple.
struct Superoperator {
  Matrix9d matrix = Matrix9d::Zero();
  /// Lower bound on the excited-coherence decay rate: half the smallest
  /// per-polarization diagonal resonant rate of the source susceptivities.
  double min_rate_bound = 0.0;

  double norm_inf() const {
    return matrix.cwiseAbs().rowwise().sum().maxCoeff();
  }

  double norm_frobenius() const { return matrix.norm(); }

  double spectral_radius() const {
    if (norm_inf() == 0.0) return 0.0;
    Eigen::EigenSolver<Matrix9d> es(matrix, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }

  Eigen::Matrix<double, 5, 5> population_block() const {
    return matrix.topLeftCorner<5, 5>();
  }

  Eigen::Matrix<double, 4, 4> coherence_block() const {
    return matrix.bottomRightCorner<4, 4>();
  }
};

/// Leakage and spectral summary of the two invariant sectors.
struct BlockReport {
  /// Largest entry feeding population coordinates from coherence ones.
  double coh_to_pop_leakage = 0.0;
  /// Largest entry feeding coherence coordinates from population ones.
  double pop_to_coh_leakage = 0.0;
  /// Largest real part of the excited-coherence block spectrum.
  double coh_spectral_abscissa = 0.0;
  /// Negative of the largest strictly-negative-real-part eigenvalue of the
  /// population block (0 when every eigenvalue is neutral).
  double pop_spectral_gap = 0.0;
  /// Analytic lower bound c on the coherence decay rate (see Superoperator).
  double min_rate_bound = 0.0;
};

namespace detail {

inline Eigen::Matrix3cd unit_matrix(int a, int b) {
  Eigen::Matrix3cd e = Eigen::Matrix3cd::Zero();
  e(a, b) = 1.0;
  return e;
}

inline Eigen::Matrix3cd commutator(const Eigen::Matrix3cd& x,
                                   const Eigen::Matrix3cd& y) {
  return x * y - y * x;
}

inline Eigen::Matrix3cd anticommutator(const Eigen::Matrix3cd& x,
                                       const Eigen::Matrix3cd& y) {
  return x * y + y * x;
}

}  // namespace detail

/// Right-hand side of the master equation for an arbitrary (not necessarily
/// Hermitian) 3x3 matrix, transcribed term by term. Both ground levels couple
/// to the excited level |3>; the cross blocks carry only the '+' level shift,
/// the '+' dissipator, and the '-' feeding term.
inline Eigen::Matrix3cd master_rhs(const SusceptivitySet& set,
                                   const Eigen::Matrix3cd& rho) {
  using detail::anticommutator;
  using detail::commutator;
  using detail::unit_matrix;
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::Matrix3cd e33 = unit_matrix(2, 2);

  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  for (int alpha = 0; alpha < 2; ++alpha) {
    for (int beta = 0; beta < 2; ++beta) {
      const double re_minus = set.re(alpha, beta, Sign::minus);
      const double re_plus = set.re(alpha, beta, Sign::plus);
      const double im_minus = set.im(alpha, beta, Sign::minus);
      const double im_plus = set.im(alpha, beta, Sign::plus);
      const Eigen::Matrix3cd e_ab = unit_matrix(alpha, beta);
      if (alpha == beta) {
        out += iu * im_minus * commutator(rho, e33);
        out -= iu * im_plus * commutator(rho, e_ab);
        out += 2.0 * re_minus *
               (rho(2, 2) * e_ab - 0.5 * anticommutator(rho, e33));
        out += 2.0 * re_plus *
               (rho(alpha, alpha) * e33 - 0.5 * anticommutator(rho, e_ab));
      } else {
        const Eigen::Matrix3cd e_ba = unit_matrix(beta, alpha);
        out -= iu * im_plus * commutator(rho, e_ab);
        out += 2.0 * re_minus * rho(2, 2) * e_ba;
        out += 2.0 * re_plus *
               (rho(beta, alpha) * e33 - 0.5 * anticommutator(rho, e_ab));
      }
    }
  }
  return out;
}

/// Assembles the 9x9 generator column by column from the images of the
/// Hermitian coordinate basis under master_rhs.
inline Superoperator build_generator(const SusceptivitySet& set) {
  using detail::unit_matrix;
  const std::complex<double> iu(0.0, 1.0);

  std::array<Eigen::Matrix3cd, 9> basis;
  basis[0] = unit_matrix(0, 0);
  basis[1] = unit_matrix(1, 1);
  basis[2] = unit_matrix(2, 2);
  basis[3] = unit_matrix(0, 1) + unit_matrix(1, 0);
  basis[4] = iu * (unit_matrix(0, 1) - unit_matrix(1, 0));
  basis[5] = unit_matrix(0, 2) + unit_matrix(2, 0);
  basis[6] = iu * (unit_matrix(0, 2) - unit_matrix(2, 0));
  basis[7] = unit_matrix(1, 2) + unit_matrix(2, 1);
  basis[8] = iu * (unit_matrix(1, 2) - unit_matrix(2, 1));

  Superoperator L;
  for (int k = 0; k < 9; ++k) {
    const Eigen::Matrix3cd image = master_rhs(set, basis[k]);
    L.matrix.col(k) = DensityMatrix3::from_matrix(image).coords();
  }

  double min_rate = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i)
    for (int alpha = 0; alpha < 2; ++alpha)
      for (int s = 0; s < 2; ++s)
        min_rate = std::min(min_rate, set.resonant[i][alpha][alpha][s]);
  L.min_rate_bound = 0.5 * std::max(0.0, min_rate);
  return L;
}

/// Time derivative of the state under the generator; Hermitian and traceless.
inline DensityMatrix3 apply(const Superoperator& L, const DensityMatrix3& rho) {
  const Vector9d dx = L.matrix * rho.coords();
  return DensityMatrix3::from_coords(dx);
}

/// Sector decomposition report: leakage between the invariant sectors and the
/// spectral data of each block.
inline BlockReport decompose_blocks(const Superoperator& L) {
  BlockReport report;
  report.min_rate_bound = L.min_rate_bound;
  report.coh_to_pop_leakage =
      L.matrix.topRightCorner<5, 4>().cwiseAbs().maxCoeff();
  report.pop_to_coh_leakage =
      L.matrix.bottomLeftCorner<4, 5>().cwiseAbs().maxCoeff();

  const double scale = std::max(1.0, L.norm_inf());
  const double zero_tol = 1e-10 * scale;

  Eigen::EigenSolver<Eigen::Matrix<double, 4, 4>> coh(L.coherence_block(),
                                                      false);
  if (coh.info() != Eigen::Success)
    throw NumericalError("eigen decomposition of the coherence block failed");
  report.coh_spectral_abscissa = coh.eigenvalues().real().maxCoeff();

  Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> pop(L.population_block(),
                                                      false);
  if (pop.info() != Eigen::Success)
    throw NumericalError("eigen decomposition of the population block failed");
  double slowest = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 5; ++k) {
    const double re = pop.eigenvalues()[k].real();
    if (re < -zero_tol) slowest = std::max(slowest, re);
  }
  report.pop_spectral_gap = std::isfinite(slowest) ? -slowest : 0.0;
  return report;
}

}  // namespace cpt
