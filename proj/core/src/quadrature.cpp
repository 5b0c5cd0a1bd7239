#include "qgs/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

// 15-point Gauss-Legendre rule on [-1, 1] (positive half; mirrored below).
constexpr int kHalf = 8;
constexpr double kNode[kHalf] = {
    0.00000000000000000000, 0.20119409399743452230, 0.39415134707756336990,
    0.57097217260853884754, 0.72441773136017004742, 0.84820658341042721620,
    0.93727339240070590431, 0.98799251802048542849,
};
constexpr double kWeight[kHalf] = {
    0.20257824192556127288, 0.19843148532711157646, 0.18616100001556221103,
    0.16626920581699393355, 0.13957067792615431445, 0.10715922046717193501,
    0.070366047488108124709, 0.030753241996117268355,
};

struct Workspace {
  const VectorIntegrand& f;
  int dim;
  RVector fx;       // scratch for one evaluation
  RVector sum;      // running total, accumulated in panel order
  double err = 0;
  long evals = 0;
  int panels = 0;
  int subdivisions = 0;
  int max_subdivisions;
  double min_width;

  RVector gauss(double a, double b) {
    const double mid = 0.5 * (a + b);
    const double halfw = 0.5 * (b - a);
    RVector acc = RVector::Zero(dim);
    for (int i = 0; i < kHalf; ++i) {
      f(mid + halfw * kNode[i], fx);
      acc += kWeight[i] * fx;
      if (i > 0) {
        f(mid - halfw * kNode[i], fx);
        acc += kWeight[i] * fx;
      }
      evals += i > 0 ? 2 : 1;
    }
    return acc * halfw;
  }

  void refine(double a, double b, const RVector& whole, double tol) {
    const double mid = 0.5 * (a + b);
    const RVector left = gauss(a, mid);
    const RVector right = gauss(mid, b);
    const double delta = (whole - left - right).cwiseAbs().maxCoeff();
    if (delta <= tol || (b - a) <= min_width) {
      sum += left;
      sum += right;
      err += delta;
      ++panels;
      return;
    }
    if (++subdivisions > max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge near x=" << mid << " (subdivision budget "
          << max_subdivisions << " exhausted, panel error " << delta << ")";
      throw QuadratureError(msg.str(), mid);
    }
    refine(a, mid, left, 0.5 * tol);
    refine(mid, b, right, 0.5 * tol);
  }
};

} // namespace

void QuadratureConfig::check() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw EvaluationError("quadrature tolerances must be positive");
  }
  if (std::exp(-z_pad) >= abs_tol) {
    std::ostringstream msg;
    msg << "tail cutoff too small: exp(-" << z_pad << ") >= abs_tol " << abs_tol;
    throw EvaluationError(msg.str());
  }
}

IntegralResult integrate_adaptive(const VectorIntegrand& f, int dimension, double lo,
                                  double hi, const QuadratureConfig& config,
                                  int initial_panels) {
  config.check();
  IntegralResult out;
  out.value = RVector::Zero(dimension);
  if (!(hi > lo)) {
    return out;
  }
  Workspace ws{f,
               dimension,
               RVector::Zero(dimension),
               RVector::Zero(dimension),
               0.0,
               0,
               0,
               0,
               config.max_subdivisions,
               (hi - lo) * 1e-13};

  const int n0 = std::max(1, initial_panels);
  std::vector<RVector> first(n0);
  RVector coarse = RVector::Zero(dimension);
  for (int i = 0; i < n0; ++i) {
    const double a = lo + (hi - lo) * i / n0;
    const double b = lo + (hi - lo) * (i + 1) / n0;
    first[i] = ws.gauss(a, b);
    coarse += first[i];
  }
  const double scale = coarse.cwiseAbs().maxCoeff();
  const double tol = std::max(config.abs_tol, config.rel_tol * scale);
  for (int i = 0; i < n0; ++i) {
    const double a = lo + (hi - lo) * i / n0;
    const double b = lo + (hi - lo) * (i + 1) / n0;
    ws.refine(a, b, first[i], tol / n0);
  }
  out.value = ws.sum;
  out.error_estimate = ws.err;
  out.evaluations = ws.evals;
  out.panels = ws.panels;
  return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& config, int initial_panels) {
  const VectorIntegrand wrapped = [&f](double x, RVector& out) { out(0) = f(x); };
  return integrate_adaptive(wrapped, 1, lo, hi, config, initial_panels).value(0);
}

} // namespace qgs
