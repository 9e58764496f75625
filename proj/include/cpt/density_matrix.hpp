#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "cpt/errors.hpp"

namespace cpt {

using Vector9d = Eigen::Matrix<double, 9, 1>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

/// 3x3 state of the atom in the fixed basis (|1>, |2>, |3>): two degenerate
/// ground levels and the excited level. Entry (a,b) is <a|rho|b>.
///
/// Real coordinate order used throughout:
///   (rho11, rho22, rho33, Re rho12, Im rho12,
///    Re rho13, Im rho13, Re rho23, Im rho23)
/// The first five coordinates span the population / ground-coherence sector,
/// the last four the excited-coherence sector.
struct DensityMatrix3 {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();

  std::complex<double> operator()(int a, int b) const { return m(a, b); }

  double trace_real() const { return m.trace().real(); }

  double hermiticity_defect() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  }

  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
        0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  Vector9d coords() const {
    Vector9d x;
    x << m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(0, 1).real(),
        m(0, 1).imag(), m(0, 2).real(), m(0, 2).imag(), m(1, 2).real(),
        m(1, 2).imag();
    return x;
  }

  static DensityMatrix3 from_coords(const Vector9d& x) {
    DensityMatrix3 rho;
    rho.m(0, 0) = x[0];
    rho.m(1, 1) = x[1];
    rho.m(2, 2) = x[2];
    rho.m(0, 1) = {x[3], x[4]};
    rho.m(1, 0) = {x[3], -x[4]};
    rho.m(0, 2) = {x[5], x[6]};
    rho.m(2, 0) = {x[5], -x[6]};
    rho.m(1, 2) = {x[7], x[8]};
    rho.m(2, 1) = {x[7], -x[8]};
    return rho;
  }

  static DensityMatrix3 from_matrix(const Eigen::Matrix3cd& m) {
    DensityMatrix3 rho;
    rho.m = m;
    return rho;
  }

  DensityMatrix3 hermitized() const {
    return from_matrix(0.5 * (m + m.adjoint()));
  }
};

namespace presets {

/// Dark state |NC><NC| with |NC> = (|1> - |2>)/sqrt(2); does not absorb.
inline DensityMatrix3 non_coupled() {
  DensityMatrix3 rho;
  rho.m << 0.5, -0.5, 0.0, -0.5, 0.5, 0.0, 0.0, 0.0, 0.0;
  return rho;
}

/// |C><C| with |C> = (|1> + |2>)/sqrt(2).
inline DensityMatrix3 coupled() {
  DensityMatrix3 rho;
  rho.m << 0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0;
  return rho;
}

inline DensityMatrix3 mixed() {
  DensityMatrix3 rho;
  rho.m = Eigen::Matrix3cd::Identity() / 3.0;
  return rho;
}

inline DensityMatrix3 excited() {
  DensityMatrix3 rho;
  rho.m(2, 2) = 1.0;
  return rho;
}

}  // namespace presets

/// The constant of motion rho11 + rho22 - rho12 - rho21, equal to twice the
/// dark-state weight <NC|rho|NC>. Real for Hermitian rho.
inline double conserved_C(const DensityMatrix3& rho) {
  return rho.m(0, 0).real() + rho.m(1, 1).real() - 2.0 * rho.m(0, 1).real();
}

/// Half the ground coherence sum, s = (rho12 + rho21)/2; the family parameter.
inline double ground_coherence_s(const DensityMatrix3& rho) {
  return rho.m(0, 1).real();
}

/// Expectation of the ground-coherence observable |1><2| + |2><1| (equals 2s).
inline double observable_A(const DensityMatrix3& rho) {
  return 2.0 * rho.m(0, 1).real();
}

}  // namespace cpt
