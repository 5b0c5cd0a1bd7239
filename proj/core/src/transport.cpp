#include "qgs/transport.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

using std::numbers::pi;

/// 1 / (1 + e^x) without overflow.
double fermi_of(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// e^z / (1 + e^z)^2 = f(z) (1 - f(z)) without overflow.
double thermal_weight(double z) {
  const double e = std::exp(-std::abs(z));
  const double q = 1.0 + e;
  return e / (q * q);
}

/// log(1 + e^x) without overflow.
double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigma_abs2_checked(const RingSpec& ring, double k, int n) {
  const double s2 = std::norm(sigma_n(ring, k, n));
  if (s2 < -1e-12 || s2 > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "|sigma_" << n << "|^2 = " << s2 << " outside [0,1] at k=" << k;
    throw EvaluationError(msg.str());
  }
  return s2;
}

/// Transmission entering the reduced noise entry P_n. A flux makes
/// |sigma_n| != |sigma_{N-n}| pointwise (time-reversal breaking), while the
/// full noise matrix is symmetric with P_n = P_{N-n}; consistency with it
/// requires the n <-> N-n average here. The small-k coefficients of the two
/// terms coincide, so every low-temperature conclusion is untouched.
double pair_transmission(const RingSpec& ring, double k, int n) {
  const int mirror = (ring.leads - n) % ring.leads;
  if (mirror == n) {
    return sigma_abs2_checked(ring, k, n);
  }
  return 0.5 * (sigma_abs2_checked(ring, k, n) + sigma_abs2_checked(ring, k, mirror));
}

/// Largest energy any reservoir populates beyond the configured tail.
double populated_eps_max(const std::vector<Reservoir>& reservoirs, const Dynamics& dyn,
                         const QuadratureConfig& quad) {
  double eps = 0.0;
  const bool dirac = std::holds_alternative<DiracMassless>(dyn);
  for (const auto& r : reservoirs) {
    eps = std::max(eps, r.mu + quad.z_pad / r.beta);
    eps = std::max(eps, quad.z_pad / r.beta);
    if (dirac) {
      eps = std::max(eps, -r.mu_tilde + quad.z_pad / r.beta);
    }
  }
  return eps;
}

double k_of_eps(const Dynamics& dyn, double eps) {
  if (const auto* s = std::get_if<Schrodinger>(&dyn)) {
    return std::sqrt(2.0 * s->mass * eps);
  }
  return eps;
}

int initial_panels_for(double k_max, double d) {
  // Resolve the kd oscillation of the scattering matrix from the start.
  return std::max(8, static_cast<int>(std::ceil(k_max * d / pi)) + 4);
}

} // namespace

double dispersion(const Dynamics& dyn, double k) {
  if (const auto* s = std::get_if<Schrodinger>(&dyn)) {
    return k * k / (2.0 * s->mass);
  }
  return std::abs(k);
}

std::string dynamics_name(const Dynamics& dyn) {
  return std::holds_alternative<Schrodinger>(dyn) ? "schrodinger" : "dirac";
}

double occupation(double k, const Reservoir& r, const Dynamics& dyn, Species species) {
  if (!(r.beta > 0.0)) {
    throw EvaluationError("reservoir beta must be > 0");
  }
  const double omega = dispersion(dyn, k);
  if (species == Species::antiparticle) {
    if (!std::holds_alternative<DiracMassless>(dyn)) {
      throw EvaluationError("antiparticle occupation undefined for Schrodinger dynamics");
    }
    return fermi_of(r.beta * (omega + r.mu_tilde));
  }
  return fermi_of(r.beta * (omega - r.mu));
}

SMatrixFn graph_evaluator(GraphSpec spec) {
  auto ordering = canonical_ordering(spec);
  return [spec = std::move(spec), ordering = std::move(ordering)](double k) {
    return total_s(spec, ordering, k).s;
  };
}

SMatrixFn ring_evaluator(RingSpec ring) {
  return [ring = std::move(ring)](double k) { return ring_total_s(ring, k).s; };
}

std::vector<double> steady_current(const SMatrixFn& s, int leads,
                                   const std::vector<Reservoir>& reservoirs,
                                   const Dynamics& dyn, const QuadratureConfig& quad) {
  if (static_cast<int>(reservoirs.size()) != leads) {
    throw EvaluationError("reservoir count must equal lead count");
  }
  const bool dirac = std::holds_alternative<DiracMassless>(dyn);
  const double mass = dirac ? 0.0 : std::get<Schrodinger>(dyn).mass;

  const VectorIntegrand integrand = [&](double k, RVector& out) {
    const CMatrix sm = s(k);
    const double weight = dirac ? 1.0 / (2.0 * pi) : k / (mass * 2.0 * pi);
    for (int a = 0; a < leads; ++a) {
      double acc = 0.0;
      for (int b = 0; b < leads; ++b) {
        const double delta = a == b ? 1.0 : 0.0;
        const double coeff = delta - std::norm(sm(a, b));
        double filling = occupation(k, reservoirs[b], dyn);
        if (dirac) {
          filling -= occupation(k, reservoirs[b], dyn, Species::antiparticle);
        }
        acc += coeff * filling;
      }
      out(a) = weight * acc;
    }
  };

  const double k_max = k_of_eps(dyn, populated_eps_max(reservoirs, dyn, quad));
  const auto res = integrate_adaptive(integrand, leads, 0.0, k_max, quad,
                                      initial_panels_for(k_max, 1.0));
  return {res.value.data(), res.value.data() + leads};
}

std::vector<double> current_bound(const std::vector<Reservoir>& reservoirs) {
  const int n = static_cast<int>(reservoirs.size());
  std::vector<double> bound(n, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b == a) {
        continue;
      }
      bound[a] += log1p_exp(reservoirs[a].mu * reservoirs[a].beta) /
                      (2.0 * pi * reservoirs[a].beta) +
                  log1p_exp(reservoirs[b].mu * reservoirs[b].beta) /
                      (2.0 * pi * reservoirs[b].beta);
    }
  }
  return bound;
}

NoiseMatrix noise_matrix(const SMatrixFn& s, int leads,
                         const std::vector<Reservoir>& reservoirs, const Dynamics& dyn,
                         const QuadratureConfig& quad) {
  if (static_cast<int>(reservoirs.size()) != leads) {
    throw EvaluationError("reservoir count must equal lead count");
  }
  const bool dirac = std::holds_alternative<DiracMassless>(dyn);
  const double mass = dirac ? 0.0 : std::get<Schrodinger>(dyn).mass;

  // All N^2 entries are integrated independently; symmetry of the result is
  // a property of the formula, not of the implementation, and is reported.
  const VectorIntegrand integrand = [&](double k, RVector& out) {
    const CMatrix sm = s(k);
    std::vector<double> fp(leads), fa(leads, 0.0);
    for (int a = 0; a < leads; ++a) {
      fp[a] = occupation(k, reservoirs[a], dyn);
      if (dirac) {
        fa[a] = occupation(k, reservoirs[a], dyn, Species::antiparticle);
      }
    }
    const double weight = dirac ? 1.0 / (2.0 * pi) : k / (mass * 2.0 * pi);
    // c_x d_y + c_y d_x (Schrodinger) or F_xy + F_yx (Dirac)
    auto pair_f = [&](int x, int y) {
      double v = fp[x] * (1.0 - fp[y]) + fp[y] * (1.0 - fp[x]);
      if (dirac) {
        v += fa[x] * (1.0 - fa[y]) + fa[y] * (1.0 - fa[x]);
      }
      return v;
    };
    auto self_f = [&](int x) { return 0.5 * pair_f(x, x); };
    for (int a = 0; a < leads; ++a) {
      for (int b = 0; b < leads; ++b) {
        double acc = 0.0;
        if (a == b) {
          acc += self_f(a);
        }
        acc -= std::norm(sm(a, b)) * self_f(b);
        acc -= std::norm(sm(b, a)) * self_f(a);
        Complex quartic(0.0);
        for (int e = 0; e < leads; ++e) {
          for (int g = 0; g < leads; ++g) {
            quartic += sm(a, e) * std::conj(sm(b, e)) * sm(b, g) * std::conj(sm(a, g)) *
                       pair_f(e, g);
          }
        }
        acc += 0.5 * quartic.real();
        out(a * leads + b) = weight * acc;
      }
    }
  };

  const double k_max = k_of_eps(dyn, populated_eps_max(reservoirs, dyn, quad));
  const auto res = integrate_adaptive(integrand, leads * leads, 0.0, k_max, quad,
                                      initial_panels_for(k_max, 1.0));

  NoiseMatrix out;
  out.dynamics = dynamics_name(dyn);
  out.reservoirs = reservoirs;
  out.p = RMatrix(leads, leads);
  for (int a = 0; a < leads; ++a) {
    for (int b = 0; b < leads; ++b) {
      out.p(a, b) = res.value(a * leads + b);
    }
  }
  out.kirchhoff_residual = out.p.rowwise().sum().cwiseAbs().maxCoeff();
  out.symmetry_residual = (out.p - out.p.transpose()).cwiseAbs().maxCoeff();
  return out;
}

double ring_noise_pn(const RingSpec& ring, int n, const Reservoir& r, const Dynamics& dyn,
                     const QuadratureConfig& quad) {
  if (n < 0 || n > ring.leads / 2) {
    throw EvaluationError("ring_noise_pn: n must lie in [0, floor(N/2)]");
  }
  const double delta = n == 0 ? 1.0 : 0.0;
  const double z_lo = std::max(-r.beta * r.mu, -quad.z_pad);
  const double z_hi = quad.z_pad;

  if (const auto* s = std::get_if<Schrodinger>(&dyn); s != nullptr && s->mass != 0.5) {
    return ring_noise_pn_kspace(ring, n, r, dyn, quad);
  }

  const bool dirac = std::holds_alternative<DiracMassless>(dyn);
  const auto integrand = [&](double z) {
    const double eps = z / r.beta + r.mu;
    const double k = dirac ? eps : std::sqrt(std::max(eps, 0.0));
    return thermal_weight(z) * (delta - pair_transmission(ring, k, n));
  };
  // Panel count follows the kd range covered by the z interval.
  const double k_hi =
      dirac ? std::abs(z_hi / r.beta + r.mu) : std::sqrt(std::max(z_hi / r.beta + r.mu, 0.0));
  const double pref = (dirac ? 4.0 : 2.0) / (2.0 * pi * r.beta);
  return pref * integrate_adaptive(integrand, z_lo, z_hi, quad,
                                   initial_panels_for(k_hi, ring.edge_length));
}

double ring_noise_pn_kspace(const RingSpec& ring, int n, const Reservoir& r,
                            const Dynamics& dyn, const QuadratureConfig& quad) {
  const auto* s = std::get_if<Schrodinger>(&dyn);
  if (s == nullptr) {
    throw EvaluationError("k-space reduced noise is defined for Schrodinger dynamics");
  }
  if (n < 0 || n > ring.leads / 2) {
    throw EvaluationError("ring_noise_pn: n must lie in [0, floor(N/2)]");
  }
  const double delta = n == 0 ? 1.0 : 0.0;
  const double mass = s->mass;
  const auto integrand = [&](double k) {
    const double z = r.beta * (k * k / (2.0 * mass) - r.mu);
    return k * thermal_weight(z) * (delta - pair_transmission(ring, k, n));
  };
  const double k_max = std::sqrt(2.0 * mass * quad.eps_max(r.beta, r.mu));
  const double pref = 2.0 / (mass * 2.0 * pi);
  return pref * integrate_adaptive(integrand, 0.0, k_max, quad,
                                   initial_panels_for(k_max, ring.edge_length));
}

} // namespace qgs
