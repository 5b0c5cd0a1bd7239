#include "qgs/local_scattering.hpp"

#include <cmath>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_constant(const CMatrix& s) {
  const int n = static_cast<int>(s.rows());
  const CMatrix eye = CMatrix::Identity(n, n);
  // A k-independent matrix obeys S(k)S(-k) = 1 only if it is involutive.
  const double inv_res = max_abs(s * s - eye);
  const double uni_res = max_abs(s * s.adjoint() - eye);
  if (inv_res > 1e-10 || uni_res > 1e-10) {
    std::ostringstream msg;
    msg << "constant local matrix violates S*S=1 (" << inv_res << ") or S*S^dagger=1 ("
        << uni_res << ") beyond 1e-10";
    throw EvaluationError(msg.str());
  }
}

} // namespace

CMatrix scale_invariant_c(double t) {
  const double r = std::sqrt(2.0 * t * (1.0 - t));
  CMatrix s(3, 3);
  s << Complex(1.0 - 2.0 * t), Complex(r), Complex(r),
       Complex(r), Complex(t - 1.0), Complex(t),
       Complex(r), Complex(t), Complex(t - 1.0);
  return s;
}

CMatrix energy_dependent_e(double t, double eta, double k) {
  const Complex denom(k, eta);
  const double r = std::sqrt(2.0 * t * (1.0 - t));
  CMatrix s(3, 3);
  s << Complex((1.0 - 2.0 * t) * k, -eta), Complex(r * k), Complex(r * k),
       Complex(r * k), Complex((t - 1.0) * k, -eta), Complex(t * k),
       Complex(r * k), Complex(t * k), Complex((t - 1.0) * k, -eta);
  return s / denom;
}

int local_dimension(const LocalScattering& local) {
  if (const auto* c = std::get_if<ConstantMatrix>(&local)) {
    return static_cast<int>(c->s.rows());
  }
  return 3;
}

CMatrix local_s(const LocalScattering& local, double k) {
  return std::visit(
      [k](const auto& v) -> CMatrix {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantMatrix>) {
          check_constant(v.s);
          return v.s;
        } else if constexpr (std::is_same_v<T, ScaleInvariantC>) {
          return scale_invariant_c(v.t);
        } else if constexpr (std::is_same_v<T, EnergyDependentE>) {
          return energy_dependent_e(v.t, v.eta, k);
        } else {
          if (k == 0.0) {
            throw EvaluationError("step discontinuity at k=0");
          }
          const CMatrix u = scale_invariant_c(v.t);
          return k > 0.0 ? u : CMatrix(u.inverse());
        }
      },
      local);
}

bool parity_symmetric(const LocalScattering& local, double tol) {
  const auto* c = std::get_if<ConstantMatrix>(&local);
  if (c == nullptr) {
    return true;  // the named families commute with the channel swap by construction
  }
  if (c->s.rows() != 3 || c->s.cols() != 3) {
    return false;
  }
  CMatrix p = CMatrix::Zero(3, 3);
  p(0, 0) = 1.0;
  p(1, 2) = 1.0;
  p(2, 1) = 1.0;
  return max_abs(p * c->s * p - c->s) <= tol;
}

std::vector<std::string> local_parameter_violations(const LocalScattering& local) {
  std::vector<std::string> out;
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantMatrix>) {
          if (v.s.rows() != v.s.cols() || v.s.rows() == 0) {
            out.push_back("constant local matrix must be square and nonempty");
          }
        } else if constexpr (std::is_same_v<T, EnergyDependentE>) {
          if (!(v.t > 0.0 && v.t < 1.0)) {
            out.push_back("energy_dependent_e requires t in (0,1)");
          }
          if (!std::isfinite(v.eta)) {
            out.push_back("energy_dependent_e requires finite eta");
          }
        } else {
          if (!(v.t > 0.0 && v.t < 1.0)) {
            out.push_back(std::is_same_v<T, ScaleInvariantC>
                              ? "scale_invariant_c requires t in (0,1)"
                              : "dirac_step requires t in (0,1)");
          }
        }
      },
      local);
  return out;
}

} // namespace qgs
