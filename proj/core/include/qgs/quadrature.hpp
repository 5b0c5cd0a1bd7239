#pragma once

#include <algorithm>
#include <functional>

#include "qgs/types.hpp"

namespace qgs {

/// Tolerances and cutoffs for the semi-infinite transport integrals.
///
/// Integrals are taken in the exponentially damped variable z = beta(eps-mu);
/// the tail beyond z_pad is bounded by exp(-z_pad), which must stay below
/// abs_tol. In the energy variable the cutoff reads beta*eps <= z_max.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double z_pad = 50.0;
  int max_subdivisions = 2000;

  double z_max(double beta, double mu) const { return std::max(z_pad, beta * mu + z_pad); }
  /// Largest energy with non-negligible occupation across a reservoir set.
  double eps_max(double beta, double mu) const { return z_max(beta, mu) / beta; }

  /// Throws EvaluationError if the cutoff cannot meet abs_tol.
  void check() const;
};

/// Result of one adaptive integration.
struct IntegralResult {
  RVector value;
  double error_estimate = 0;
  long evaluations = 0;
  int panels = 0;
};

/// Vector-valued integrand; writes its components into `out` (pre-sized).
using VectorIntegrand = std::function<void(double x, RVector& out)>;

/// Adaptive panel integration of a vector-valued integrand over [lo, hi].
///
/// Each panel is estimated with a fixed 15-point Gauss-Legendre rule; the
/// error of a panel is the difference between its one-panel value and the
/// sum over its two halves, and panels are bisected depth-first (left before
/// right, so the accumulation order is reproducible) until the apportioned
/// tolerance max(abs_tol, rel_tol*|I|) is met. Throws QuadratureError when
/// max_subdivisions is exhausted.
IntegralResult integrate_adaptive(const VectorIntegrand& f, int dimension, double lo,
                                  double hi, const QuadratureConfig& config,
                                  int initial_panels = 8);

/// Scalar convenience wrapper.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& config, int initial_panels = 8);

} // namespace qgs
