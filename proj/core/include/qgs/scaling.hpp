#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgs/transport.hpp"

namespace qgs {

struct SweepRow {
  double beta;
  double pn;
};

/// Least-squares fit of ln|P| = -g ln(beta) + intercept.
struct ExponentFit {
  double g = 0;
  double g_stderr = 0;
  double intercept = 0;
  double r2 = 0;
  /// Slope between the last two grid points, the sharpest asymptotic probe.
  double local_slope = 0;
};

/// One noise-vs-temperature sweep at fixed angle, potential and channel.
/// The quoted fit uses the top decade of the grid only; the raw rows keep
/// the full range.
struct SweepResult {
  double theta = 0;
  double mu = 0;
  int n = 0;
  std::string dynamics;
  std::vector<SweepRow> rows;
  ExponentFit fit;
};

/// Power-law coefficient c = lim beta^g P_n, extrapolated by one Richardson
/// step from the last two grid points assuming a 1/beta correction.
struct CoefficientResult {
  double exponent = 0;
  double coefficient = 0;
  /// relative change of beta^g P_n between the last two grid points
  double diagnostic = 0;
};

/// n logarithmically spaced points spanning [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int n);

/// Rows with beta >= max(beta)/10.
std::vector<SweepRow> top_decade(std::span<const SweepRow> rows);

/// Evaluates P_n on a beta grid (strictly increasing, >= 8 points over >= 2
/// decades recommended) and fits the exponent on the top decade. Quadrature
/// failures are rethrown annotated with the offending beta.
SweepResult beta_sweep(const RingSpec& ring, double mu, int n, const Dynamics& dyn,
                       std::span<const double> betas, const QuadratureConfig& quad);

/// Fits g from the given rows. All P_n must be nonzero and of one sign;
/// a sign change makes the log-log fit meaningless and throws.
ExponentFit fit_exponent(std::span<const SweepRow> rows);

/// Extracts the coefficient for a trusted exponent. The rows' own fitted
/// exponent must agree with `exponent` within 0.15, and the Richardson
/// diagnostic must stay below 0.5.
CoefficientResult extract_coefficient(std::span<const SweepRow> rows, double exponent);

struct ProfilePoint {
  double theta = 0;
  double g = 0;
  double g_stderr = 0;
  double r2 = 0;
};

/// g(theta) over a grid of per-edge angles: one beta sweep and top-decade
/// fit per angle, at the ring's own geometry. The flux is set to -theta*N
/// for each point.
std::vector<ProfilePoint> theta_profile(const RingSpec& ring, double mu, int n,
                                        const Dynamics& dyn,
                                        std::span<const double> thetas,
                                        std::span<const double> betas,
                                        const QuadratureConfig& quad);

} // namespace qgs
