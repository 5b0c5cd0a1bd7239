#include "qgs/scaling.hpp"

#include <cmath>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw EvaluationError("geometric grid requires 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    grid[i] = lo * std::exp(step * i);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<SweepRow> top_decade(std::span<const SweepRow> rows) {
  double beta_max = 0.0;
  for (const auto& row : rows) {
    beta_max = std::max(beta_max, row.beta);
  }
  std::vector<SweepRow> out;
  const double cut = beta_max / 10.0 * (1.0 - 1e-9);
  for (const auto& row : rows) {
    if (row.beta >= cut) {
      out.push_back(row);
    }
  }
  return out;
}

ExponentFit fit_exponent(std::span<const SweepRow> rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 3) {
    throw EvaluationError("exponent fit needs at least 3 sweep points");
  }
  const double first_sign = rows[0].pn;
  for (const auto& row : rows) {
    if (row.pn == 0.0 || !std::isfinite(row.pn) || row.pn * first_sign < 0.0) {
      throw EvaluationError(
          "sign change or zero within sweep: log-log fit is meaningless near a crossing");
    }
  }
  std::vector<double> x(n), y(n);
  double xm = 0.0, ym = 0.0;
  for (int i = 0; i < n; ++i) {
    x[i] = std::log(rows[i].beta);
    y[i] = std::log(std::abs(rows[i].pn));
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;
  double ss_res = 0.0, ss_tot = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - ym) * (y[i] - ym);
  }
  ExponentFit fit;
  fit.g = -slope;
  fit.intercept = intercept;
  fit.g_stderr = std::sqrt(ss_res / (n - 2) / sxx);
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.local_slope = -(y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  return fit;
}

SweepResult beta_sweep(const RingSpec& ring, double mu, int n, const Dynamics& dyn,
                       std::span<const double> betas, const QuadratureConfig& quad) {
  SweepResult sweep;
  sweep.theta = ring.theta();
  sweep.mu = mu;
  sweep.n = n;
  sweep.dynamics = dynamics_name(dyn);
  double prev = 0.0;
  for (double beta : betas) {
    if (!(beta > prev)) {
      throw EvaluationError("beta grid must be strictly increasing");
    }
    prev = beta;
    try {
      const Reservoir r{beta, mu, -mu};
      sweep.rows.push_back({beta, ring_noise_pn(ring, n, r, dyn, quad)});
    } catch (const QuadratureError& err) {
      std::ostringstream msg;
      msg << "beta=" << beta << ": " << err.what();
      throw QuadratureError(msg.str(), err.location);
    }
  }
  const auto top = top_decade(sweep.rows);
  sweep.fit = fit_exponent(top);
  return sweep;
}

CoefficientResult extract_coefficient(std::span<const SweepRow> rows, double exponent) {
  const ExponentFit fit = fit_exponent(rows);
  if (std::abs(fit.g - exponent) > 0.15) {
    std::ostringstream msg;
    msg << "fitted exponent " << fit.g << " is more than 0.15 away from requested "
        << exponent;
    throw EvaluationError(msg.str());
  }
  const auto& r1 = rows[rows.size() - 2];
  const auto& r2 = rows[rows.size() - 1];
  const double y1 = std::pow(r1.beta, exponent) * r1.pn;
  const double y2 = std::pow(r2.beta, exponent) * r2.pn;
  CoefficientResult out;
  out.exponent = exponent;
  // One Richardson step assuming a 1/beta correction term.
  out.coefficient = y2 + (y2 - y1) * r1.beta / (r2.beta - r1.beta);
  out.diagnostic = std::abs(y2 - y1) / std::max(std::abs(y2), 1e-300);
  if (out.diagnostic > 0.5) {
    std::ostringstream msg;
    msg << "coefficient not converged: last-two-point change " << out.diagnostic;
    throw EvaluationError(msg.str());
  }
  return out;
}

std::vector<ProfilePoint> theta_profile(const RingSpec& ring, double mu, int n,
                                        const Dynamics& dyn,
                                        std::span<const double> thetas,
                                        std::span<const double> betas,
                                        const QuadratureConfig& quad) {
  std::vector<ProfilePoint> profile;
  profile.reserve(thetas.size());
  for (double theta : thetas) {
    RingSpec at_theta = ring;
    at_theta.flux = -theta * ring.leads;
    const SweepResult sweep = beta_sweep(at_theta, mu, n, dyn, betas, quad);
    profile.push_back({theta, sweep.fit.g, sweep.fit.g_stderr, sweep.fit.r2});
  }
  return profile;
}

} // namespace qgs
