#include "cli.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "output.hpp"
#include "qgs/errors.hpp"
#include "qgs/scaling.hpp"
#include "qgs/spec_io.hpp"
#include "qgs/version.hpp"

namespace qgs::cli {

namespace {

using nlohmann::json;
using std::numbers::pi;

struct QuadFlags {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rel-tol", rel_tol, "Relative quadrature tolerance")
        ->envname("QGS_REL_TOL");
    cmd->add_option("--abs-tol", abs_tol, "Absolute quadrature tolerance")
        ->envname("QGS_ABS_TOL");
    cmd->add_option("--max-subdivisions", max_subdivisions,
                    "Adaptive subdivision budget");
  }
  QuadratureConfig config() const {
    QuadratureConfig q;
    q.rel_tol = rel_tol;
    q.abs_tol = abs_tol;
    q.max_subdivisions = max_subdivisions;
    return q;
  }
};

struct ReservoirFlags {
  std::string file;
  double beta = 0.0;
  double mu = 0.0;
  std::optional<double> mu_tilde;

  void attach(CLI::App* cmd) {
    cmd->add_option("--reservoirs", file,
                    "JSON array of {beta, mu, mu_tilde?} (one per lead)");
    cmd->add_option("--beta", beta, "Equal-reservoir inverse temperature");
    cmd->add_option("--mu", mu, "Equal-reservoir chemical potential");
    cmd->add_option("--mu-tilde", [this](const std::vector<std::string>& v) {
      mu_tilde = std::stod(v.at(0));
      return true;
    }, "Equal-reservoir antiparticle potential (Dirac; default -mu)");
  }
  std::vector<Reservoir> resolve(int leads, bool dirac, RunArtifacts& artifacts) const {
    if (!file.empty()) {
      artifacts.input(file);
      return load_reservoirs(file);
    }
    if (!(beta > 0.0)) {
      throw EvaluationError("either --reservoirs or --beta/--mu must be given");
    }
    Reservoir r{beta, mu, mu_tilde.value_or(-mu)};
    (void)dirac;
    return std::vector<Reservoir>(leads, r);
  }
};

Dynamics make_dynamics(const std::string& name, double mass) {
  if (name == "schrodinger") {
    if (!(mass > 0.0)) {
      throw EvaluationError("--mass must be > 0");
    }
    return Schrodinger{mass};
  }
  if (name == "dirac") {
    return DiracMassless{};
  }
  throw EvaluationError("--dynamics must be schrodinger or dirac");
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
  }
  return out;
}

SMatrixFn make_evaluator(const LoadedSpec& spec) {
  if (spec.is_ring()) {
    return ring_evaluator(*spec.ring);
  }
  return graph_evaluator(spec.as_graph());
}

double sampled_unitarity_residual(const SMatrixFn& s, int leads, double k_max) {
  double worst = 0.0;
  for (double k : {0.13, 0.29, 0.47, 0.61, 0.83, 0.97}) {
    const CMatrix m = s(k * k_max);
    worst = std::max(worst,
                     (m.adjoint() * m - CMatrix::Identity(leads, leads))
                         .cwiseAbs()
                         .maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------- commands

int cmd_validate(const std::string& file) {
  const LoadedSpec spec = load_spec_file(file);
  std::vector<std::string> violations;
  if (spec.is_ring()) {
    violations = validate_ring(*spec.ring);
    if (violations.empty()) {
      violations = validate_graph(ring_graph(*spec.ring));
    }
  } else {
    violations = validate_graph(*spec.graph);
  }
  json report{{"file", file},
              {"valid", violations.empty()},
              {"violations", violations}};
  std::cout << report.dump(2) << "\n";
  if (!violations.empty()) {
    json err{{"error", {{"type", "validation"}, {"message", "spec is invalid"}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}

int cmd_smatrix(const std::string& file, double k_min, double k_max, int k_points,
                const std::string& out, const QuadFlags& quad) {
  RunArtifacts artifacts("smatrix", out);
  artifacts.input(file);
  artifacts.tolerances(quad.rel_tol, quad.abs_tol);
  artifacts.parameter("k_min", k_min);
  artifacts.parameter("k_max", k_max);
  artifacts.parameter("k_points", k_points);

  const LoadedSpec spec = load_spec_file(file);
  const int leads = spec.leads();
  const SMatrixFn s = make_evaluator(spec);

  CsvWriter csv;
  std::vector<std::string> header{"k"};
  for (int a = 1; a <= leads; ++a) {
    for (int b = 1; b <= leads; ++b) {
      header.push_back("re_S_" + std::to_string(a) + "_" + std::to_string(b));
      header.push_back("im_S_" + std::to_string(a) + "_" + std::to_string(b));
    }
  }
  header.push_back("unitarity_residual");
  csv.row(header);

  double worst = 0.0;
  for (double k : linspace(k_min, k_max, k_points)) {
    const CMatrix m = s(k);
    std::vector<std::string> row{fmt(k)};
    for (int a = 0; a < leads; ++a) {
      for (int b = 0; b < leads; ++b) {
        row.push_back(fmt(m(a, b).real()));
        row.push_back(fmt(m(a, b).imag()));
      }
    }
    const double res =
        (m.adjoint() * m - CMatrix::Identity(leads, leads)).cwiseAbs().maxCoeff();
    worst = std::max(worst, res);
    row.push_back(fmt(res));
    csv.row(row);
  }
  artifacts.residual("unitarity_max", worst);
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

int cmd_ring_eigen(const std::string& file, double kd_min, double kd_max, int kd_points,
                   const std::string& out) {
  RunArtifacts artifacts("ring-eigen", out);
  artifacts.input(file);
  artifacts.parameter("kd_min", kd_min);
  artifacts.parameter("kd_max", kd_max);
  artifacts.parameter("kd_points", kd_points);

  const LoadedSpec spec = load_spec_file(file);
  if (!spec.is_ring()) {
    throw EvaluationError("ring-eigen requires a ring spec file");
  }
  const RingSpec& ring = *spec.ring;
  const auto bad = validate_ring(ring);
  if (!bad.empty()) {
    throw GraphError("invalid ring: " + bad.front());
  }
  const int p = ring.leads / 2;

  CsvWriter csv;
  std::vector<std::string> header{"kd", "theta", "re_lambda", "im_lambda"};
  for (int n = 0; n < p; ++n) {
    header.push_back("abs2_sigma_" + std::to_string(n));
  }
  csv.row(header);
  for (double kd : linspace(kd_min, kd_max, kd_points)) {
    const double k = kd / ring.edge_length;
    const Complex lambda = ring_lambda(ring, k, ring.theta());
    std::vector<std::string> row{fmt(kd), fmt(ring.theta()), fmt(lambda.real()),
                                 fmt(lambda.imag())};
    for (int n = 0; n < p; ++n) {
      row.push_back(fmt(std::norm(sigma_n(ring, k, n))));
    }
    csv.row(row);
  }
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

int cmd_ring_poles(const std::string& file, const std::string& out) {
  RunArtifacts artifacts("ring-poles", out);
  artifacts.input(file);

  const LoadedSpec spec = load_spec_file(file);
  if (!spec.is_ring()) {
    throw EvaluationError("ring-poles requires a ring spec file");
  }
  const auto* fam = std::get_if<ScaleInvariantC>(&spec.ring->local);
  if (fam == nullptr) {
    throw EvaluationError("ring-poles has closed-form roots only for scale_invariant_c");
  }
  const auto poles = ring_poles_c(fam->t, spec.ring->theta());

  CsvWriter csv;
  csv.row({"root", "re_u", "im_u", "at_infinity", "re_kd", "im_kd", "residual"});
  int index = 1;
  for (const auto& p : poles) {
    csv.row({std::to_string(index++), fmt(p.u.real()), fmt(p.u.imag()),
             p.at_infinity ? "1" : "0", fmt(p.kd.real()), fmt(p.kd.imag()),
             fmt(p.residual)});
  }
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

int cmd_current(const std::string& file, const ReservoirFlags& res,
                const std::string& dynamics, double mass, const std::string& out,
                const QuadFlags& quad) {
  RunArtifacts artifacts("current", out);
  artifacts.input(file);
  artifacts.tolerances(quad.rel_tol, quad.abs_tol);
  artifacts.parameter("dynamics", dynamics);

  const LoadedSpec spec = load_spec_file(file);
  const Dynamics dyn = make_dynamics(dynamics, mass);
  const int leads = spec.leads();
  const auto reservoirs = res.resolve(leads, dynamics == "dirac", artifacts);
  const SMatrixFn s = make_evaluator(spec);

  const auto currents = steady_current(s, leads, reservoirs, dyn, quad.config());
  const auto bounds = current_bound(reservoirs);

  CsvWriter csv;
  csv.row({"lead", "current", "current_bound"});
  for (int a = 0; a < leads; ++a) {
    csv.row({std::to_string(a + 1), fmt(currents[a]), fmt(bounds[a])});
  }
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

int cmd_noise(const std::string& file, const ReservoirFlags& res,
              const std::string& dynamics, double mass, const std::string& out,
              const QuadFlags& quad) {
  RunArtifacts artifacts("noise", out);
  artifacts.input(file);
  artifacts.tolerances(quad.rel_tol, quad.abs_tol);
  artifacts.parameter("dynamics", dynamics);

  const LoadedSpec spec = load_spec_file(file);
  const Dynamics dyn = make_dynamics(dynamics, mass);
  const int leads = spec.leads();
  const auto reservoirs = res.resolve(leads, dynamics == "dirac", artifacts);
  const SMatrixFn s = make_evaluator(spec);
  const QuadratureConfig config = quad.config();

  const NoiseMatrix noise = noise_matrix(s, leads, reservoirs, dyn, config);

  CsvWriter csv;
  csv.row({"quantity", "i", "j", "value"});
  for (int a = 0; a < leads; ++a) {
    for (int b = 0; b < leads; ++b) {
      csv.row({"P_ab", std::to_string(a + 1), std::to_string(b + 1),
               fmt(noise.p(a, b))});
    }
  }
  if (spec.is_ring()) {
    double circulant_residual = 0.0;
    for (int a = 0; a < leads; ++a) {
      for (int b = 0; b < leads; ++b) {
        circulant_residual = std::max(
            circulant_residual,
            std::abs(noise.p(a, b) - noise.p(0, (b - a + leads) % leads)));
      }
    }
    artifacts.residual("circulant_max", circulant_residual);
    for (int n = 0; n < leads; ++n) {
      csv.row({"P_n", std::to_string(n), "", fmt(noise.p(0, n))});
    }
  }

  double beta_min = reservoirs.front().beta;
  double eps_max = 0.0;
  for (const auto& r : reservoirs) {
    beta_min = std::min(beta_min, r.beta);
    eps_max = std::max(eps_max, config.eps_max(r.beta, r.mu));
  }
  const double k_max = std::holds_alternative<Schrodinger>(dyn)
                           ? std::sqrt(2.0 * std::get<Schrodinger>(dyn).mass * eps_max)
                           : eps_max;
  artifacts.residual("kirchhoff_max", noise.kirchhoff_residual);
  artifacts.residual("symmetry_max", noise.symmetry_residual);
  artifacts.residual("unitarity_max", sampled_unitarity_residual(s, leads, k_max));
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

struct ScalingFlags {
  int n_leads = 3;
  double t = 0.5;
  std::optional<double> eta;
  double d = 1.0;
  double flux = 0.0;
  double mu = 0.0;
  std::string dynamics = "schrodinger";
  double mass = 0.5;
  double beta_min = 1e2;
  double beta_max = 1e4;
  int beta_points = 25;
  int theta_grid = 0;
  int pn_index = 0;
};

int cmd_scaling(const ScalingFlags& f, const std::string& out, const QuadFlags& quad) {
  RunArtifacts artifacts("scaling", out);
  artifacts.tolerances(quad.rel_tol, quad.abs_tol);
  artifacts.parameter("n_leads", f.n_leads);
  artifacts.parameter("t", f.t);
  artifacts.parameter("d", f.d);
  artifacts.parameter("flux", f.flux);
  artifacts.parameter("mu", f.mu);
  artifacts.parameter("dynamics", f.dynamics);
  artifacts.parameter("beta_min", f.beta_min);
  artifacts.parameter("beta_max", f.beta_max);
  artifacts.parameter("beta_points", f.beta_points);
  artifacts.parameter("pn_index", f.pn_index);
  if (f.eta.has_value()) {
    artifacts.parameter("eta", *f.eta);
  }

  RingSpec ring;
  ring.leads = f.n_leads;
  ring.edge_length = f.d;
  ring.flux = f.flux;
  if (f.eta.has_value()) {
    ring.local = EnergyDependentE{f.t, *f.eta};
  } else if (f.dynamics == "dirac") {
    ring.local = DiracStep{f.t};
  } else {
    ring.local = ScaleInvariantC{f.t};
  }
  const auto bad = validate_ring(ring);
  if (!bad.empty()) {
    throw GraphError("invalid ring: " + bad.front());
  }

  const Dynamics dyn = make_dynamics(f.dynamics, f.mass);
  const QuadratureConfig config = quad.config();
  const auto betas = geometric_grid(f.beta_min, f.beta_max, f.beta_points);

  if (f.theta_grid > 0) {
    if (f.theta_grid < 2) {
      throw EvaluationError("--theta-grid needs at least 2 points");
    }
    const auto thetas = linspace(0.0, pi / f.n_leads, f.theta_grid);
    const auto profile = theta_profile(ring, f.mu, f.pn_index, dyn, thetas, betas, config);
    CsvWriter csv;
    csv.row({"theta", "g", "g_stderr", "r2"});
    json points = json::array();
    for (const auto& p : profile) {
      csv.row({fmt(p.theta), fmt(p.g), fmt(p.g_stderr), fmt(p.r2)});
      points.push_back({{"theta", p.theta},
                        {"g", p.g},
                        {"g_stderr", p.g_stderr},
                        {"r2", p.r2}});
    }
    json summary{{"profile", points}, {"dynamics", f.dynamics}, {"mu", f.mu},
                 {"n", f.pn_index}};
    std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
    std::cout << artifacts.write(".json", summary.dump(2) + "\n").string() << "\n";
    artifacts.finish(kVersion);
    return 0;
  }

  const SweepResult sweep = beta_sweep(ring, f.mu, f.pn_index, dyn, betas, config);
  CsvWriter csv;
  csv.row({"beta", "P_n"});
  for (const auto& row : sweep.rows) {
    csv.row({fmt(row.beta), fmt(row.pn)});
  }

  json summary{{"theta", sweep.theta},
               {"mu", sweep.mu},
               {"n", sweep.n},
               {"dynamics", sweep.dynamics},
               {"exponent", sweep.fit.g},
               {"exponent_stderr", sweep.fit.g_stderr},
               {"intercept", sweep.fit.intercept},
               {"r2", sweep.fit.r2},
               {"local_slope", sweep.fit.local_slope}};
  const double rounded = std::round(sweep.fit.g);
  try {
    const auto top = top_decade(sweep.rows);
    const auto coeff = extract_coefficient(top, rounded);
    summary["coefficient"] = coeff.coefficient;
    summary["coefficient_exponent"] = coeff.exponent;
    summary["coefficient_diagnostic"] = coeff.diagnostic;
  } catch (const EvaluationError& err) {
    summary["coefficient"] = nullptr;
    summary["coefficient_note"] = err.what();
  }
  std::cout << artifacts.write(".csv", csv.str()).string() << "\n";
  std::cout << artifacts.write(".json", summary.dump(2) + "\n").string() << "\n";
  artifacts.finish(kVersion);
  return 0;
}

int report_error(const char* type, const std::string& message, json extra = {}) {
  json err{{"type", type}, {"message", message}};
  for (auto& [k, v] : extra.items()) {
    err[k] = v;
  }
  std::cerr << json{{"error", err}}.dump() << "\n";
  return 1;
}

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Quantum-graph scattering and Landauer-Buttiker transport toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string spec_file, out;
  QuadFlags quad;
  ReservoirFlags reservoirs;
  std::string dynamics = "schrodinger";
  double mass = 0.5;

  auto* validate = app.add_subcommand("validate", "Check a graph or ring spec file");
  validate->add_option("spec", spec_file, "JSON spec file")->required();

  auto* smatrix =
      app.add_subcommand("smatrix", "Total scattering matrix over a momentum grid");
  double k_min = 0.1, k_max = 3.0;
  int k_points = 32;
  smatrix->add_option("spec", spec_file)->required();
  smatrix->add_option("--k-min", k_min);
  smatrix->add_option("--k-max", k_max);
  smatrix->add_option("--k-points", k_points);
  smatrix->add_option("--out", out, "Output file prefix");
  quad.attach(smatrix);

  auto* ring_eigen_cmd =
      app.add_subcommand("ring-eigen", "Fundamental eigenvalue and |sigma_n|^2 of a ring");
  double kd_min = 0.01, kd_max = 6.28;
  int kd_points = 64;
  ring_eigen_cmd->add_option("spec", spec_file)->required();
  ring_eigen_cmd->add_option("--kd-min", kd_min);
  ring_eigen_cmd->add_option("--kd-max", kd_max);
  ring_eigen_cmd->add_option("--kd-points", kd_points);
  ring_eigen_cmd->add_option("--out", out);

  auto* ring_poles_cmd =
      app.add_subcommand("ring-poles", "Closed-form pole roots of a scale-invariant ring");
  ring_poles_cmd->add_option("spec", spec_file)->required();
  ring_poles_cmd->add_option("--out", out);

  auto* current = app.add_subcommand("current", "Steady lead currents");
  current->add_option("spec", spec_file)->required();
  current->add_option("--dynamics", dynamics)
      ->check(CLI::IsMember({"schrodinger", "dirac"}));
  current->add_option("--mass", mass);
  current->add_option("--out", out);
  reservoirs.attach(current);
  quad.attach(current);

  auto* noise = app.add_subcommand("noise", "Zero-frequency noise power matrix");
  noise->add_option("spec", spec_file)->required();
  noise->add_option("--dynamics", dynamics)
      ->check(CLI::IsMember({"schrodinger", "dirac"}));
  noise->add_option("--mass", mass);
  noise->add_option("--out", out);
  reservoirs.attach(noise);
  quad.attach(noise);

  auto* scaling =
      app.add_subcommand("scaling", "Low-temperature noise exponent and coefficient");
  ScalingFlags sf;
  scaling->add_option("--n-leads", sf.n_leads)->check(CLI::Range(2, 64));
  scaling->add_option("--t", sf.t);
  scaling->add_option("--eta", [&sf](const std::vector<std::string>& v) {
    sf.eta = std::stod(v.at(0));
    return true;
  }, "Energy-dependence parameter (selects the energy-dependent family)");
  scaling->add_option("--d", sf.d);
  scaling->add_option("--flux", sf.flux);
  scaling->add_option("--mu", sf.mu);
  scaling->add_option("--dynamics", sf.dynamics)
      ->check(CLI::IsMember({"schrodinger", "dirac"}));
  scaling->add_option("--mass", sf.mass);
  scaling->add_option("--beta-min", sf.beta_min);
  scaling->add_option("--beta-max", sf.beta_max);
  scaling->add_option("--beta-points", sf.beta_points);
  scaling->add_option("--theta-grid", sf.theta_grid,
                      "Emit g(theta) over this many angles in [0, pi/N]");
  scaling->add_option("--pn-index", sf.pn_index);
  scaling->add_option("--out", out);
  quad.attach(scaling);

  std::vector<const char*> argv{"qgs"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto default_out = [&out](const char* name) {
    if (out.empty()) {
      out = name;
    }
  };

  try {
    if (app.got_subcommand(validate)) {
      return cmd_validate(spec_file);
    }
    if (app.got_subcommand(smatrix)) {
      default_out("smatrix");
      return cmd_smatrix(spec_file, k_min, k_max, k_points, out, quad);
    }
    if (app.got_subcommand(ring_eigen_cmd)) {
      default_out("ring_eigen");
      return cmd_ring_eigen(spec_file, kd_min, kd_max, kd_points, out);
    }
    if (app.got_subcommand(ring_poles_cmd)) {
      default_out("ring_poles");
      return cmd_ring_poles(spec_file, out);
    }
    if (app.got_subcommand(current)) {
      default_out("current");
      return cmd_current(spec_file, reservoirs, dynamics, mass, out, quad);
    }
    if (app.got_subcommand(noise)) {
      default_out("noise");
      return cmd_noise(spec_file, reservoirs, dynamics, mass, out, quad);
    }
    if (app.got_subcommand(scaling)) {
      default_out("scaling");
      return cmd_scaling(sf, out, quad);
    }
  } catch (const PoleError& e) {
    return report_error("pole", e.what(),
                        {{"k", e.k}, {"rcond", e.rcond_estimate}});
  } catch (const QuadratureError& e) {
    return report_error("quadrature", e.what(), {{"location", e.location}});
  } catch (const GraphError& e) {
    return report_error("validation", e.what());
  } catch (const EvaluationError& e) {
    return report_error("evaluation", e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return 2;
}

} // namespace qgs::cli
