#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qgs/errors.hpp"
#include "qgs/scaling.hpp"
#include "test_util.hpp"

using namespace qgs;
using test::kPi;

TEST_CASE("geometric grid spans the endpoints logarithmically") {
  const auto grid = geometric_grid(1e2, 1e4, 9);
  CHECK(grid.front() == doctest::Approx(1e2));
  CHECK(grid.back() == doctest::Approx(1e4));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] / grid[i - 1] ==
          doctest::Approx(grid[1] / grid[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)geometric_grid(10.0, 1.0, 5), EvaluationError);
}

TEST_CASE("exponent fit recovers a synthetic power law exactly") {
  std::vector<SweepRow> rows;
  for (double beta : geometric_grid(10.0, 1e4, 12)) {
    rows.push_back({beta, 3.7 * std::pow(beta, -2.5)});
  }
  const auto fit = fit_exponent(rows);
  CHECK(fit.g == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.g_stderr < 1e-12);
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.local_slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.7).epsilon(1e-10));

  // negative-valued sweeps fit the same law through |P|
  std::vector<SweepRow> neg = rows;
  for (auto& r : neg) {
    r.pn = -r.pn;
  }
  CHECK(fit_exponent(neg).g == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("sign change within a sweep is rejected") {
  std::vector<SweepRow> rows{{10.0, 1.0}, {100.0, -0.1}, {1000.0, 0.01}};
  CHECK_THROWS_AS((void)fit_exponent(rows), EvaluationError);
}

TEST_CASE("top decade filter keeps the asymptotic tail") {
  std::vector<SweepRow> rows;
  for (double beta : geometric_grid(1e2, 1e4, 21)) {
    rows.push_back({beta, 1.0 / beta});
  }
  const auto top = top_decade(rows);
  CHECK(top.size() == 11);
  CHECK(top.front().beta >= 1e3 * (1.0 - 1e-12));
}

TEST_CASE("thermal noise shrinks with cooling and depends on the dynamics") {
  QuadratureConfig quad;
  const RingSpec ring = test::make_ring(3, 0.5, 1.0, 0.0);
  const auto betas = geometric_grid(1e2, 1e4, 9);
  const auto schrod = beta_sweep(ring, 0.0, 0, Schrodinger{0.5}, betas, quad);
  for (std::size_t i = 1; i < schrod.rows.size(); ++i) {
    CHECK(schrod.rows[i].pn < schrod.rows[i - 1].pn);
  }

  RingSpec dring = ring;
  dring.local = DiracStep{0.5};
  const auto dirac = beta_sweep(dring, 0.0, 0, DiracMassless{}, betas, quad);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    CHECK(std::abs(schrod.rows[i].pn - dirac.rows[i].pn) >
          1e-6 * std::abs(schrod.rows[i].pn));
  }
}

TEST_CASE("Johnson-Nyquist recovery at theta = 0 with the closed coefficient") {
  QuadratureConfig quad;
  for (int n_leads : {2, 3}) {
    const RingSpec ring = test::make_ring(n_leads, 0.5, 1.0, 0.0);
    const auto sweep =
        beta_sweep(ring, 0.0, 0, Schrodinger{0.5}, geometric_grid(1e2, 1e4, 13), quad);
    CHECK(std::abs(sweep.fit.g - 1.0) < 0.05);

    const auto coeff = extract_coefficient(top_decade(sweep.rows), 1.0);
    const double target = 2.0 * (n_leads - 1) / (kPi * n_leads * n_leads);
    CHECK(coeff.coefficient == doctest::Approx(target).epsilon(0.01));
  }
}

TEST_CASE("coefficient extraction guards its preconditions") {
  std::vector<SweepRow> rows;
  for (double beta : geometric_grid(1e2, 1e4, 10)) {
    rows.push_back({beta, 2.0 / beta * (1.0 + 5.0 / beta)});
  }
  const auto c = extract_coefficient(rows, 1.0);
  CHECK(c.coefficient == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(c.diagnostic < 0.5);
  CHECK_THROWS_AS((void)extract_coefficient(rows, 2.0), EvaluationError);
}

TEST_CASE("fixed mu*beta scaling reproduces the flux-deformed law") {
  QuadratureConfig quad;
  const RingSpec ring = test::make_ring(2, 0.5, 1.0, -2.0 * kPi / 4.0);  // theta = pi/4
  const double l = 2.0;
  std::vector<SweepRow> rows;
  for (double beta : geometric_grid(1e3, 1e5, 9)) {
    const Reservoir r{beta, l / beta, -l / beta};
    rows.push_back({beta, ring_noise_pn(ring, 0, r, Schrodinger{0.5}, quad)});
  }
  const auto fit = fit_exponent(top_decade(rows));
  CHECK(std::abs(fit.g - 2.0) < 0.1);
}

TEST_CASE("local slope approaches the plateau monotonically") {
  QuadratureConfig quad;
  const RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * kPi / 5.0);  // theta = pi/5
  double previous = 1e9;
  for (double lo : {1e2, 1e3, 1e4}) {
    const auto sweep =
        beta_sweep(ring, 0.0, 0, Schrodinger{0.5}, geometric_grid(lo, 10.0 * lo, 8), quad);
    const double distance = std::abs(sweep.fit.local_slope - 2.0);
    CHECK(distance <= previous + 1e-12);
    previous = distance;
  }
}

TEST_CASE("noise is periodic in the flux with period 2 pi") {
  QuadratureConfig quad;
  const Reservoir r{50.0, 0.1, -0.1};
  for (double flux : {-2.9, -0.7, 0.0, 1.3, 2.2}) {
    const RingSpec a = test::make_ring(3, 0.4, 1.0, flux);
    const RingSpec b = test::make_ring(3, 0.4, 1.0, flux + 2.0 * kPi);
    const double pa = ring_noise_pn(a, 1, r, Schrodinger{0.5}, quad);
    const double pb = ring_noise_pn(b, 1, r, Schrodinger{0.5}, quad);
    CHECK(pa == doctest::Approx(pb).epsilon(1e-8));
  }
}

TEST_CASE("profile is even in theta") {
  QuadratureConfig quad;
  const Reservoir r{30.0, 0.0, 0.0};
  for (double theta : {kPi / 7.0, kPi / 3.0}) {
    const RingSpec plus = test::make_ring(3, 0.5, 1.0, -3.0 * theta);
    const RingSpec minus = test::make_ring(3, 0.5, 1.0, 3.0 * theta);
    CHECK(ring_noise_pn(plus, 0, r, Schrodinger{0.5}, quad) ==
          doctest::Approx(ring_noise_pn(minus, 0, r, Schrodinger{0.5}, quad))
              .epsilon(1e-10));
  }

  const auto betas = geometric_grid(1e2, 1e4, 8);
  const RingSpec base = test::make_ring(3, 0.5, 1.0, 0.0);
  const std::vector<double> thetas{kPi / 7.0};
  const std::vector<double> neg{-kPi / 7.0};
  const auto gp = theta_profile(base, 0.0, 0, Schrodinger{0.5}, thetas, betas, quad);
  const auto gm = theta_profile(base, 0.0, 0, Schrodinger{0.5}, neg, betas, quad);
  CHECK(gp[0].g == doctest::Approx(gm[0].g).epsilon(1e-9));
}

TEST_CASE("dirac profile endpoints: Johnson-Nyquist at zero flux, cubic plateau") {
  QuadratureConfig quad;
  RingSpec ring = test::make_ring(3, 0.5, 1.0, 0.0);
  ring.local = DiracStep{0.5};
  const auto betas = geometric_grid(1e3, 1e5, 10);
  const std::vector<double> thetas{0.0, kPi / 12.0, kPi / 6.0};
  const auto profile =
      theta_profile(ring, 0.0, 0, DiracMassless{}, thetas, betas, quad);
  CHECK(std::abs(profile[0].g - 1.0) < 0.05);
  CHECK(std::abs(profile[1].g - 3.0) < 0.15);
  CHECK(std::abs(profile[2].g - 3.0) < 0.15);
}

TEST_CASE("energy-dependent family: flat profile, quadratic law from the k^2 oracle") {
  QuadratureConfig quad;
  const double t = 0.5, eta = 1.0;
  RingSpec ring = test::make_ring(3, t, 1.0, 0.0);
  ring.local = EnergyDependentE{t, eta};

  const auto betas = geometric_grid(1e2, 1e4, 10);
  std::vector<double> gs;
  for (double theta : {0.0, kPi / 6.0, kPi / 3.0}) {
    RingSpec at = ring;
    at.flux = -3.0 * theta;
    const auto sweep = beta_sweep(at, 0.0, 0, Schrodinger{0.5}, betas, quad);

    // derived oracle: P0 ~ c ln2 / (pi beta^2) with c the k^2 coefficient
    // of 1 - |sigma_0(k)|^2, measured by finite differences
    const double kh = 1e-4;
    const double c =
        (1.0 - std::norm(sigma_n(at, kh, 0))) / (kh * kh);
    const double predicted = c * std::log(2.0) / kPi;
    const auto coeff = extract_coefficient(top_decade(sweep.rows), 2.0);
    CHECK(coeff.coefficient == doctest::Approx(predicted).epsilon(0.02));
    gs.push_back(sweep.fit.g);
  }
  // the flux does not move the exponent
  for (double g : gs) {
    CHECK(std::abs(g - gs.front()) < 0.02);
  }
}

TEST_CASE("dirac cubic coefficient matches the two-part series oracle") {
  QuadratureConfig quad;
  RingSpec ring = test::make_ring(3, 0.5, 1.0, -3.0 * kPi / 12.0);  // theta = pi/12
  ring.local = DiracStep{0.5};
  const auto sweep = beta_sweep(ring, 0.0, 0, DiracMassless{},
                                geometric_grid(1e4, 1e5, 10), quad);
  const auto coeff = extract_coefficient(top_decade(sweep.rows), 3.0);

  // oracle: beta^3 P0 -> (4 / 2 pi) * c * int z^2 e^z/(1+e^z)^2 dz, with c
  // the k^2 coefficient of 1 - |sigma_0(k)|^2 from finite differences and
  // the integral from the alternating series (= pi^2/6)
  const double kh = 1e-4;
  const double c = (1.0 - std::norm(sigma_n(ring, kh, 0))) / (kh * kh);
  const double target = (2.0 / kPi) * c * test::thermal_moment_series(2);
  CHECK(coeff.coefficient == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("quadrature failures in a sweep are annotated with beta") {
  QuadratureConfig quad;
  quad.rel_tol = 1e-15;
  quad.abs_tol = 1e-16;
  quad.max_subdivisions = 0;
  const RingSpec ring = test::make_ring(3, 0.5, 1.0, 0.4);
  const auto betas = geometric_grid(10.0, 1000.0, 8);
  try {
    (void)beta_sweep(ring, 0.0, 0, Schrodinger{0.5}, betas, quad);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::string(e.what()).find("beta=") != std::string::npos);
  }
}
