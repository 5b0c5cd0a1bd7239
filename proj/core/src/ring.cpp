#include "qgs/ring.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

using std::numbers::pi;

constexpr double kGuard = 1e-8;  // removable-singularity window of lambda_c

} // namespace

std::vector<std::string> validate_ring(const RingSpec& ring) {
  std::vector<std::string> report;
  if (ring.leads < 2) {
    report.push_back("ring requires at least 2 leads");
  }
  if (!(ring.edge_length > 0.0)) {
    report.push_back("ring edge length must be > 0");
  }
  for (const auto& msg : local_parameter_violations(ring.local)) {
    report.push_back("ring local family: " + msg);
  }
  if (local_dimension(ring.local) != 3) {
    report.push_back("ring local family must be 3x3");
  }
  if (!parity_symmetric(ring.local, 1e-10)) {
    report.push_back("ring local family must be parity-symmetric (channels 2<->3)");
  }
  return report;
}

GraphSpec ring_graph(const RingSpec& ring) {
  const auto bad = validate_ring(ring);
  if (!bad.empty()) {
    std::string all = "invalid ring:";
    for (const auto& r : bad) {
      all += "\n  " + r;
    }
    throw GraphError(all);
  }
  const int n = ring.leads;
  GraphSpec g;
  g.vertices = n;
  // Clockwise edge a -> a+1 carries the line integral +flux/N, so the angle
  // entering the closed forms is theta = -flux/N.
  const double line_integral = ring.flux / n;
  for (int a = 1; a <= n; ++a) {
    InternalEdge e;
    e.a = a;
    e.b = a % n + 1;
    e.j = (n == 2 && a == 2) ? 2 : 1;  // N=2: a double edge between the two vertices
    e.length = ring.edge_length;
    e.theta = line_integral;
    g.internal.push_back(e);
  }
  for (int a = 1; a <= n; ++a) {
    g.external.push_back({a, 1});
    g.local.emplace(a, ring.local);
  }
  return g;
}

Complex fundamental_lambda(const CMatrix& s, double kd, double theta) {
  const Complex eikd = std::exp(Complex(0.0, kd));
  const Complex e2ikd = eikd * eikd;
  const Complex eith = std::exp(Complex(0.0, theta));
  const Complex det = s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) -
                      s(0, 1) * (s(1, 0) * s(2, 2) - s(1, 2) * s(2, 0)) +
                      s(0, 2) * (s(1, 0) * s(2, 1) - s(1, 1) * s(2, 0));
  const Complex num = e2ikd * det +
                      eikd * ((s(0, 0) * s(1, 2) - s(0, 2) * s(1, 0)) * eith +
                              (s(0, 0) * s(2, 1) - s(2, 0) * s(0, 1)) / eith) -
                      s(0, 0);
  const Complex den = e2ikd * (s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) +
                      eikd * (s(1, 2) * eith + s(2, 1) / eith) - 1.0;
  if (std::abs(den) < 1e-14) {
    std::ostringstream msg;
    msg << "eigenvalue pole at kd=" << kd << ", theta=" << theta;
    throw PoleError(msg.str(), kd, std::abs(den));
  }
  return num / den;
}

Complex lambda_c(double t, double kd, double theta) {
  const double sk = std::sin(kd);
  const double dc = std::cos(theta) - std::cos(kd);
  if (std::abs(sk) < kGuard && std::abs(dc) < kGuard) {
    // 0/0 point: series limit. Near kd = 0 (mod 2 pi) the value is +1,
    // near kd = pi (mod 2 pi) it is -1.
    return std::cos(kd) > 0.0 ? Complex(1.0) : Complex(-1.0);
  }
  const double re = t * dc;
  const double im = (t - 1.0) * sk;
  return -Complex(re, im) / Complex(re, -im);
}

Complex lambda_e(double t, double eta, double k, double d, double theta) {
  if (eta == 0.0) {
    return lambda_c(t, k * d, theta);
  }
  const double kd = k * d;
  const double x = t * k * (std::cos(kd) - std::cos(theta)) + eta * std::sin(kd);
  const double y = (t - 1.0) * k * std::sin(kd);
  if (std::abs(x) < 1e-300 && std::abs(y) < 1e-300) {
    return Complex(-1.0);  // k -> 0 limit for eta != 0, every theta
  }
  return -Complex(x, -y) / Complex(x, y);
}

Complex ring_lambda(const RingSpec& ring, double k, double angle) {
  const double d = ring.edge_length;
  return std::visit(
      [&](const auto& v) -> Complex {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScaleInvariantC>) {
          return lambda_c(v.t, k * d, angle);
        } else if constexpr (std::is_same_v<T, EnergyDependentE>) {
          return lambda_e(v.t, v.eta, k, d, angle);
        } else if constexpr (std::is_same_v<T, DiracStep>) {
          // S(k) = U for k > 0 with U the scale-invariant matrix, so the
          // eigenvalue keeps the scale-invariant closed form.
          return lambda_c(v.t, k * d, angle);
        } else {
          return fundamental_lambda(local_s(ring.local, k), k * d, angle);
        }
      },
      ring.local);
}

EigenStructure ring_eigen(const RingSpec& ring, double k) {
  const int n = ring.leads;
  const double theta = ring.theta();
  EigenStructure es;
  es.w = CMatrix(n, n);
  es.lambda = CVector(n);
  es.omega_diag = CVector(n);
  es.shift = RMatrix::Zero(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      es.w(a, b) = norm * std::exp(Complex(0.0, 2.0 * pi * a * b / n));
    }
    es.lambda(a) = ring_lambda(ring, k, theta + 2.0 * pi * a / n);
    es.omega_diag(a) = std::exp(Complex(0.0, 2.0 * pi * a / n));
    es.shift(a, (a + 1) % n) = 1.0;
  }
  return es;
}

TotalSMatrix ring_total_s(const RingSpec& ring, double k) {
  const EigenStructure es = ring_eigen(ring, k);
  TotalSMatrix out;
  out.k = k;
  out.thetas.assign(ring.leads, ring.flux / ring.leads);
  // W is unitary and symmetric, so W^{-1} = conj(W).
  out.s = es.w.conjugate() * es.lambda.asDiagonal() * es.w;
  return out;
}

Complex sigma_n(const RingSpec& ring, double k, int n) {
  const int leads = ring.leads;
  if (n < 0 || n >= leads) {
    throw EvaluationError("sigma_n index out of range");
  }
  const double theta = ring.theta();
  Complex acc(0.0);
  for (int l = 0; l < leads; ++l) {
    const Complex w = std::exp(Complex(0.0, 2.0 * pi * l * n / leads));
    acc += w * ring_lambda(ring, k, theta + 2.0 * pi * l / leads);
  }
  return acc / static_cast<double>(leads);
}

TwoLeadQuantities two_lead_quantities(double t, double kd, double theta) {
  TwoLeadQuantities q;
  q.lambda = lambda_c(t, kd, theta);
  q.lambda2 = lambda_c(t, kd, theta + pi);
  q.rho = 0.25 * std::norm(q.lambda + q.lambda2);
  q.tau = 0.25 * std::norm(q.lambda - q.lambda2);
  const double c = std::cos(theta) + std::cos(kd);
  const double s = std::sin(kd);
  q.n_theta = t * t * c * c + (1.0 - t) * (1.0 - t) * s * s;
  return q;
}

std::vector<RingPole> ring_poles_c(double t, double theta) {
  if (!(t > 0.0 && t < 1.0)) {
    throw EvaluationError("ring_poles_c requires t in (0,1)");
  }
  const double ct = std::cos(theta);
  const Complex disc = std::sqrt(Complex(1.0 - 2.0 * t + t * t * ct * ct));
  std::vector<RingPole> out;
  for (const Complex u : {t * ct + disc, t * ct - disc}) {
    RingPole p;
    p.u = u;
    p.residual = std::abs(u * u - 2.0 * t * ct * u + (2.0 * t - 1.0));
    if (std::abs(u) < 1e-14) {
      p.at_infinity = true;  // exp(-i kd) = 0 has no finite solution
      p.kd = Complex(0.0);
    } else {
      // exp(-i kd) = u  =>  kd = i Log u, Re(kd) in [-pi, pi).
      p.kd = Complex(0.0, 1.0) * std::log(u);
      if (p.kd.real() >= pi) {  // signed zero in Im(u) can land on +pi
        p.kd -= 2.0 * pi;
      }
    }
    out.push_back(p);
  }
  return out;
}

ExpansionCoefficients expansion_coeffs(const RingSpec& ring) {
  const auto* fam = std::get_if<ScaleInvariantC>(&ring.local);
  if (fam == nullptr) {
    throw EvaluationError("expansion_coeffs requires the scale-invariant family");
  }
  const double t = fam->t;
  const double d = ring.edge_length;
  const int n = ring.leads;
  const double theta = ring.theta();

  auto chi = [t, d](double angle) {
    const double s = std::sin(0.5 * angle);
    if (std::abs(s) < 1e-12) {
      throw EvaluationError("chi(theta) singular at theta = 0 mod 2 pi; use the chi0 branch");
    }
    return (t - 1.0) * d / (t * s * s);
  };

  ExpansionCoefficients out;
  out.chi0 = t * d / (t - 1.0);
  out.chi_theta = chi(theta);

  const int p = n / 2;
  out.a.resize(p);
  out.c.resize(p);
  for (int idx = 0; idx < p; ++idx) {
    Complex a_sum(0.0);
    for (int l = 2; l <= n; ++l) {
      a_sum += std::exp(Complex(0.0, 2.0 * pi * idx * (l - 1) / n)) *
               chi((l - 1) * 2.0 * pi / n);
    }
    out.a[idx] = a_sum - out.chi0;
    Complex c_sum(0.0);
    for (int l = 1; l <= n; ++l) {
      c_sum += std::exp(Complex(0.0, 2.0 * pi * idx * (l - 1) / n)) *
               chi(theta + (l - 1) * 2.0 * pi / n);
    }
    out.c[idx] = c_sum;
  }

  const double h = 1e-5 / d;
  out.dlambda_dk_fd =
      (lambda_c(t, h * d, theta) - lambda_c(t, -h * d, theta)) / (2.0 * h);
  return out;
}

} // namespace qgs
