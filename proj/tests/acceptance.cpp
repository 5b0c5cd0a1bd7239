// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Tolerances are fixed here, not tuned at run time.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qgs/assembly.hpp"
#include "qgs/errors.hpp"
#include "qgs/ring.hpp"
#include "qgs/scaling.hpp"
#include "qgs/transport.hpp"
#include "test_util.hpp"

using namespace qgs;
using test::kPi;
using test::max_abs;

namespace {

struct Criterion {
  std::vector<std::string> failures;
  double worst = 0.0;

  void track(double value) { worst = std::max(worst, std::abs(value)); }
  void require(bool ok, const std::string& detail) {
    if (!ok) {
      failures.push_back(detail);
    }
  }
  void require_close(double got, double want, double tol, const std::string& label) {
    track(got - want);
    if (!(std::abs(got - want) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s: got %.6g, want %.6g +- %.2g", label.c_str(),
                    got, want, tol);
      failures.push_back(buf);
    }
  }
};

int g_failed = 0;

void run_criterion(int id, const std::string& name,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  if (c.failures.empty()) {
    std::printf("[%2d] PASS  %s (worst deviation %.2e)\n", id, name.c_str(), c.worst);
  } else {
    ++g_failed;
    std::printf("[%2d] FAIL  %s\n", id, name.c_str());
    for (const auto& f : c.failures) {
      std::printf("      - %s\n", f.c_str());
    }
  }
  std::fflush(stdout);
}

SweepResult sweep_ring(const RingSpec& ring, double mu, int n, const Dynamics& dyn,
                       double beta_lo, double beta_hi) {
  QuadratureConfig quad;
  const auto betas = geometric_grid(beta_lo, beta_hi, 25);
  return beta_sweep(ring, mu, n, dyn, betas, quad);
}

// ------------------------------------------------------------------ criteria

void exactness_cross_check(Criterion& c) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> tdist(0.05, 0.95);
  std::uniform_real_distribution<double> kddist(0.05, 6.0);
  std::uniform_real_distribution<double> fdist(-2.0 * kPi, 2.0 * kPi);
  for (int n : {2, 3, 5, 6}) {
    for (int i = 0; i < 50; ++i) {
      const double d = 0.6 + tdist(rng);
      const RingSpec ring = test::make_ring(n, tdist(rng), d, fdist(rng));
      const double k = kddist(rng) / d;
      const double diff = max_abs(ring_total_s(ring, k).s - total_s(ring_graph(ring), k).s);
      c.track(diff);
      c.require(diff < 1e-10, "closed form vs assembly differ by " + std::to_string(diff));
    }
  }
}

void unitarity_and_transposition(Criterion& c) {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> kdist(0.05, 4.0);
  int tested = 0;
  while (tested < 200) {
    const GraphSpec g = test::random_graph(rng);  // loops and double edges included
    const auto ord = canonical_ordering(g);
    const double k = kdist(rng);
    TotalSMatrix s;
    try {
      s = total_s(g, ord, k);
    } catch (const PoleError&) {
      continue;
    }
    ++tested;
    const double uni = s.unitarity_residual();
    c.track(uni);
    c.require(uni < 1e-10, "unitarity residual " + std::to_string(uni));

    GraphSpec flipped = g;
    for (auto& e : flipped.internal) {
      e.theta = -e.theta;
    }
    const double transposed = max_abs(s.s.transpose() - total_s(flipped, ord, k).s);
    c.track(transposed);
    c.require(transposed < 1e-10,
              "flux transposition residual " + std::to_string(transposed));
  }
}

void kirchhoff_and_structure(Criterion& c) {
  QuadratureConfig quad;
  for (int n : {2, 3, 4}) {
    for (bool dirac : {false, true}) {
      RingSpec ring = test::make_ring(n, 0.55, 1.0, 0.9);
      Dynamics dyn = Schrodinger{0.5};
      if (dirac) {
        ring.local = DiracStep{0.55};
        dyn = DiracMassless{};
      }
      const std::vector<Reservoir> res(n, {20.0, 0.15, -0.15});
      const auto noise = noise_matrix(ring_evaluator(ring), n, res, dyn, quad);
      c.track(noise.kirchhoff_residual);
      c.track(noise.symmetry_residual);
      c.require(noise.kirchhoff_residual < 1e-8, "Kirchhoff row sum exceeds 1e-8");
      c.require(noise.symmetry_residual < 1e-10, "noise matrix asymmetry");
      double circ = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          circ = std::max(circ,
                          std::abs(noise.p(a, b) - noise.p(0, (b - a + n) % n)));
        }
      }
      c.track(circ);
      c.require(circ < 1e-8, "noise matrix not circulant under cyclic symmetry");
      if (n == 2) {
        const double p11 = noise.p(0, 0);
        c.require(std::abs(noise.p(0, 1) + p11) < 1e-8 &&
                      std::abs(noise.p(1, 0) + p11) < 1e-8 &&
                      std::abs(noise.p(1, 1) - p11) < 1e-8,
                  "two-lead noise is not P11 * [[1,-1],[-1,1]]");
      }
    }
  }
}

void johnson_nyquist_recovery(Criterion& c) {
  for (int n : {2, 3}) {
    const RingSpec ring = test::make_ring(n, 0.5, 1.0, 0.0);
    const auto sweep = sweep_ring(ring, 0.0, 0, Schrodinger{0.5}, 1e2, 1e4);
    char label[64];
    std::snprintf(label, sizeof(label), "N=%d exponent", n);
    c.require_close(sweep.fit.g, 1.0, 0.05, label);

    const auto coeff = extract_coefficient(top_decade(sweep.rows), 1.0);
    const double target = 2.0 * (n - 1) / (kPi * n * n);
    std::snprintf(label, sizeof(label), "N=%d coefficient beta*P0", n);
    c.require_close(coeff.coefficient, target, 0.01 * target, label);
  }
}

void flux_deformed_schrodinger(Criterion& c) {
  {
    const RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * kPi / 6.0);  // theta = pi/6
    const auto sweep = sweep_ring(ring, 0.0, 0, Schrodinger{0.5}, 1e3, 1e5);
    c.require_close(sweep.fit.g, 2.0, 0.10, "N=3 theta=pi/6 exponent");
  }
  {
    const double t = 0.5, d = 1.0, theta = kPi / 4.0;
    const RingSpec ring = test::make_ring(2, t, d, -2.0 * theta);
    const auto sweep = sweep_ring(ring, 0.0, 0, Schrodinger{0.5}, 1e3, 1e5);
    c.require_close(sweep.fit.g, 2.0, 0.10, "N=2 theta=pi/4 exponent");

    const auto coeff = extract_coefficient(top_decade(sweep.rows), 2.0);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double target = 4.0 * (1.0 - t) * (1.0 - t) * d * d * ct * ct * std::log(2.0) /
                          (kPi * t * t * st * st * st * st);
    c.require_close(coeff.coefficient, target, 0.02 * target, "N=2 coefficient beta^2*P11");
  }
}

void flux_deformed_dirac(Criterion& c) {
  RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * kPi / 12.0);  // theta = pi/12
  ring.local = DiracStep{0.5};
  const auto sweep = sweep_ring(ring, 0.0, 0, DiracMassless{}, 1e3, 1e5);
  c.require_close(sweep.fit.g, 3.0, 0.10, "N=3 theta=pi/12 exponent");

  QuadratureConfig quad;
  const auto betas = geometric_grid(1e3, 1e5, 25);
  const std::vector<double> thetas{0.0, kPi / 24.0, kPi / 12.0, kPi / 8.0, kPi / 6.0};
  const auto profile = theta_profile(ring, 0.0, 0, DiracMassless{}, thetas, betas, quad);
  c.require_close(profile.front().g, 1.0, 0.05, "profile endpoint g(0)");
  c.require_close(profile[2].g, 3.0, 0.15, "profile plateau g(pi/12)");
  c.require_close(profile.back().g, 3.0, 0.15, "profile plateau g(pi/6)");
}

void appendix_restoration(Criterion& c) {
  RingSpec ring = test::make_ring(3, 0.5, 1.0, 0.0);
  ring.local = EnergyDependentE{0.5, 1.0};
  for (double theta : {0.0, kPi / 6.0, kPi / 3.0}) {
    RingSpec at = ring;
    at.flux = -3.0 * theta;
    const auto sweep = sweep_ring(at, 0.0, 0, Schrodinger{0.5}, 1e2, 1e4);
    char label[64];
    std::snprintf(label, sizeof(label), "energy-dependent exponent at theta=%.4f", theta);
    c.require_close(sweep.fit.g, 1.0, 0.05, label);
  }
}

void finite_mu_regime(Criterion& c) {
  for (double theta : {0.0, kPi / 6.0}) {
    RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * theta);
    auto sweep = sweep_ring(ring, 0.5, 0, Schrodinger{0.5}, 1e2, 1e4);
    char label[64];
    std::snprintf(label, sizeof(label), "Schrodinger mu=0.5 theta=%.3f", theta);
    c.require_close(sweep.fit.g, 1.0, 0.05, label);

    ring.local = DiracStep{0.5};
    sweep = sweep_ring(ring, 0.5, 0, DiracMassless{}, 1e2, 1e4);
    std::snprintf(label, sizeof(label), "Dirac mu=0.5 theta=%.3f", theta);
    c.require_close(sweep.fit.g, 1.0, 0.05, label);
  }
}

void equilibrium_currents(Criterion& c) {
  QuadratureConfig quad;
  for (double t : {0.2, 0.5, 0.8}) {
    for (double theta : {0.0, kPi / 5.0, kPi / 2.0}) {
      RingSpec ring = test::make_ring(3, t, 1.0, -3.0 * theta);
      const std::vector<Reservoir> res(3, {10.0, 0.2, -0.2});
      for (double i :
           steady_current(ring_evaluator(ring), 3, res, Schrodinger{0.5}, quad)) {
        c.track(i);
        c.require(std::abs(i) < 1e-12, "equilibrium Schrodinger current above 1e-12");
      }
      ring.local = DiracStep{t};
      for (double i :
           steady_current(ring_evaluator(ring), 3, res, DiracMassless{}, quad)) {
        c.track(i);
        c.require(std::abs(i) < 1e-12, "equilibrium Dirac current above 1e-12");
      }
    }
  }

  std::mt19937 rng(909);
  std::uniform_real_distribution<double> tdist(0.15, 0.85);
  std::uniform_real_distribution<double> fdist(-3.0, 3.0);
  std::uniform_real_distribution<double> betad(1.0, 40.0);
  std::uniform_real_distribution<double> mud(-0.5, 1.0);
  for (int i = 0; i < 50; ++i) {
    const RingSpec ring = test::make_ring(3, tdist(rng), 1.0, fdist(rng));
    std::vector<Reservoir> res;
    for (int a = 0; a < 3; ++a) {
      res.push_back({betad(rng), mud(rng), 0.0});
    }
    const auto currents =
        steady_current(ring_evaluator(ring), 3, res, Schrodinger{0.5}, quad);
    const auto bounds = current_bound(res);
    for (int a = 0; a < 3; ++a) {
      c.require(std::abs(currents[a]) <= bounds[a] + 1e-12,
                "current exceeds its a-priori bound");
    }
  }
}

void analytic_structure(Criterion& c) {
  std::mt19937 rng(1001);
  std::uniform_real_distribution<double> tdist(0.05, 0.95);
  std::uniform_real_distribution<double> kddist(-6.0, 6.0);
  std::uniform_real_distribution<double> thdist(-kPi, kPi);

  for (int i = 0; i < 500; ++i) {
    const Complex lam = lambda_c(tdist(rng), kddist(rng), thdist(rng));
    c.track(std::abs(lam) - 1.0);
    c.require(std::abs(std::abs(lam) - 1.0) < 1e-11, "|lambda| deviates from 1");
  }

  for (int ik = 1; ik <= 50; ++ik) {
    for (int it = 0; it < 50; ++it) {
      const double kd = 6.0 * ik / 50.0;
      const double th = -kPi + 2.0 * kPi * it / 50.0;
      const auto q = two_lead_quantities(0.5, kd, th);
      c.track(q.rho + q.tau - 1.0);
      c.require(std::abs(q.rho + q.tau - 1.0) < 1e-10, "rho + tau deviates from 1");
      const double tau_m = two_lead_quantities(0.5, kd, -th).tau;
      const double tau_p = two_lead_quantities(0.5, kd, th + kPi).tau;
      c.require(std::abs(tau_m - q.tau) < 1e-10 && std::abs(tau_p - q.tau) < 1e-10,
                "tau theta-symmetries violated");
    }
  }

  c.require_close(lambda_c(0.4, 1e-9, 0.0).real(), 1.0, 1e-6, "limit k->0 at theta=0");
  c.require_close(lambda_c(0.4, 1e-9, 0.5).real(), -1.0, 1e-6,
                  "limit k->0 at theta=0.5");

  for (int i = 0; i < 100; ++i) {
    for (const auto& p : ring_poles_c(tdist(rng), thdist(rng))) {
      c.track(p.residual);
      c.require(p.residual < 1e-12, "pole residual above 1e-12");
    }
  }

  const int n = 4;
  const double d = 1.3;
  const RingSpec ring = test::make_ring(n, 0.61, d, 0.8);
  const double k = 0.9;
  const CMatrix s0 = ring_total_s(ring, k).s;
  RingSpec shifted = ring;
  shifted.flux = ring.flux - 2.0 * kPi;
  const CMatrix s1 = ring_total_s(shifted, k).s;
  const Complex w = std::exp(Complex(0.0, 2.0 * kPi / n));
  for (int b = 0; b < n; ++b) {
    const double diff = std::abs(s1(0, b) - std::pow(w, -b) * s0(0, b));
    c.track(diff);
    c.require(diff < 1e-10, "quasi-periodicity identity violated");
  }
  const double kper = max_abs(ring_total_s(ring, k + 2.0 * kPi / d).s - s0);
  c.track(kper);
  c.require(kper < 1e-10, "k-periodicity violated for the scale-invariant ring");
}

} // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion(1, "exact cross-check: assembled total S vs circulant closed form (1e-10)",
                exactness_cross_check);
  run_criterion(2, "unitarity and flux transposition on 200 random graphs (1e-10)",
                unitarity_and_transposition);
  run_criterion(3, "noise structure: symmetry, circulant, Kirchhoff rows (1e-8)",
                kirchhoff_and_structure);
  run_criterion(4, "Johnson-Nyquist: g = 1.00 +- 0.05, beta*P0 -> 2(N-1)/(pi N^2) +- 1%",
                johnson_nyquist_recovery);
  run_criterion(5, "flux-deformed Schrodinger: g = 2.00 +- 0.10, N=2 coefficient +- 2%",
                flux_deformed_schrodinger);
  run_criterion(6, "flux-deformed Dirac: g = 3.00 +- 0.10, profile endpoints",
                flux_deformed_dirac);
  run_criterion(7, "energy-dependent family: g = 1.00 +- 0.05 for all theta",
                appendix_restoration);
  run_criterion(8, "finite mu: g = 1.00 +- 0.05 for both dynamics", finite_mu_regime);
  run_criterion(9, "equilibrium currents below 1e-12 and bound on 50 random configs",
                equilibrium_currents);
  run_criterion(10, "analytic structure: phases, sum rules, limits, poles, periodicity",
                analytic_structure);

  std::printf("%d of 10 criteria passed\n", 10 - g_failed);
  return g_failed == 0 ? 0 : 1;
}
