#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <vector>

#include "cpt/errors.hpp"

namespace cpt::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int panels = 0;      // panels evaluated
};

namespace detail {

// 15-point Kronrod nodes on [-1,1] (symmetric; only the non-negative half
// stored) with the embedded 7-point Gauss rule on the odd-index nodes.
inline constexpr double kKronrodNode[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};

inline constexpr double kKronrodWeight[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};

inline constexpr double kGaussWeight[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Panel {
  double lo, hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(const F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double kronrod = kKronrodWeight[7] * f(mid);
  double gauss = kGaussWeight[3] * f(mid);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNode[j];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeight[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeight[j / 2] * pair;
  }
  Panel p;
  p.lo = lo;
  p.hi = hi;
  p.value = kronrod * half;
  p.error = std::abs((kronrod - gauss) * half);
  return p;
}

}  // namespace detail

/// Adaptive Gauss–Kronrod (G7/K15) integration of f over [lo, hi] to an
/// absolute tolerance. Exhausting the panel budget is an error, never a
/// silent approximation.
template <class F>
Result integrate(const F& f, double lo, double hi, double abs_tol = 1e-9,
                 int max_panels = 4000) {
  Result out;
  if (!(hi > lo)) return out;
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::evaluate_panel(f, lo, hi));
  out.panels = 1;
  double total_error = heap.top().error;
  double total_value = heap.top().value;
  while (total_error > abs_tol) {
    if (out.panels >= max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge: estimated error " << total_error
          << " > tolerance " << abs_tol << " after " << out.panels
          << " panels on [" << lo << ", " << hi << "]";
      throw NumericalError(msg.str());
    }
    detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericalError(
          "quadrature stalled on a zero-width panel; integrand is likely "
          "singular inside the integration range");
    }
    detail::Panel left = detail::evaluate_panel(f, worst.lo, mid);
    detail::Panel right = detail::evaluate_panel(f, mid, worst.hi);
    total_error += left.error + right.error - worst.error;
    total_value += left.value + right.value - worst.value;
    heap.push(left);
    heap.push(right);
    ++out.panels;
  }
  out.value = total_value;
  out.error = total_error;
  return out;
}

/// Integrates f over [lo, hi] split at the given interior breakpoints
/// (profile edges and the like), so each segment is smooth.
template <class F>
Result integrate_segmented(const F& f, double lo, double hi,
                           const std::vector<double>& breakpoints,
                           double abs_tol = 1e-9, int max_panels = 4000) {
  std::vector<double> edges;
  edges.push_back(lo);
  for (double b : breakpoints)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Result out;
  const double seg_tol = abs_tol / static_cast<double>(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    Result seg = integrate(f, edges[k], edges[k + 1], seg_tol, max_panels);
    out.value += seg.value;
    out.error += seg.error;
    out.panels += seg.panels;
  }
  return out;
}

/// Cauchy principal value of ∫ f(r)/(r - pole) dr over [lo, hi] with
/// lo < pole < hi, by singularity subtraction:
///
///   P.P.∫ f/(r-pole) = ∫ (f(r) - f(pole))/(r - pole) + f(pole)·ln((hi-pole)/(pole-lo))
///
/// The subtracted integrand is regular when f is continuous at the pole.
template <class F>
Result principal_value(const F& f, double pole, double lo, double hi,
                       const std::vector<double>& breakpoints,
                       double abs_tol = 1e-9, int max_panels = 4000) {
  if (!(pole > lo && pole < hi))
    throw DomainError("principal value pole must lie inside the range");
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (double b : breakpoints) {
    if (std::abs(b - pole) < 1e-12 * scale)
      throw DomainError(
          "integrand is discontinuous at the resonant radius; the principal "
          "value is not defined by singularity subtraction there");
  }
  const double f_pole = f(pole);
  const double near = 1e-8 * scale;
  auto subtracted = [&](double r) {
    const double d = r - pole;
    if (std::abs(d) < near) {
      // Symmetric difference quotient; avoids catastrophic cancellation
      // when a quadrature node lands essentially on the pole.
      const double h = 1e-6 * scale;
      return (f(pole + h) - f(pole - h)) / (2.0 * h);
    }
    return (f(r) - f_pole) / d;
  };
  Result out =
      integrate_segmented(subtracted, lo, hi, breakpoints, abs_tol, max_panels);
  out.value += f_pole * std::log((hi - pole) / (pole - lo));
  return out;
}

}  // namespace cpt::quad
