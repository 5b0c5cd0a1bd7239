#pragma once

#include <stdexcept>
#include <string>

namespace qgs {

/// A structurally invalid graph or ring description.
class GraphError : public std::runtime_error {
public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

/// A local matrix or closed-form expression cannot be evaluated at the
/// requested point (step discontinuity, singular denominator, bad domain).
class EvaluationError : public std::runtime_error {
public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// The linear system eliminating the internal modes is (near) singular,
/// i.e. the evaluation momentum sits on a scattering pole / bound state.
class PoleError : public std::runtime_error {
public:
  PoleError(const std::string& what, double k, double rcond)
      : std::runtime_error(what), k(k), rcond_estimate(rcond) {}
  double k;
  double rcond_estimate;
};

/// Adaptive quadrature failed to converge within its subdivision budget.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double location)
      : std::runtime_error(what), location(location) {}
  /// Abscissa (k or z) of the panel that exhausted the budget.
  double location;
};

} // namespace qgs
