#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "qgs/quadrature.hpp"
#include "qgs/ring.hpp"
#include "qgs/types.hpp"

namespace qgs {

/// Heat reservoir attached to one lead. mu_tilde is the antiparticle
/// chemical potential and only meaningful for the Dirac dynamics.
struct Reservoir {
  double beta = 1.0;
  double mu = 0.0;
  double mu_tilde = 0.0;
};

/// Quadratic dispersion omega = k^2 / (2m). The reduced (z-variable) noise
/// path assumes m = 1/2, which is also the default, so the k-space and
/// z-space routes describe the same physics out of the box.
struct Schrodinger {
  double mass = 0.5;
};

/// Massless linear dispersion omega = |k| with particles and antiparticles.
struct DiracMassless {};

using Dynamics = std::variant<Schrodinger, DiracMassless>;

double dispersion(const Dynamics& dyn, double k);
std::string dynamics_name(const Dynamics& dyn);

enum class Species { particle, antiparticle };

/// Fermi occupation of mode k in reservoir r, evaluated overflow-safe.
/// Antiparticles exist only for the Dirac dynamics (throws otherwise);
/// their distribution is the particle one with mu -> -mu_tilde.
double occupation(double k, const Reservoir& r, const Dynamics& dyn,
                  Species species = Species::particle);

/// Total scattering matrix as a function of real momentum, the only
/// interface the transport integrals need. Must be unitary on the
/// integration range.
using SMatrixFn = std::function<CMatrix(double k)>;

/// Evaluator backed by the assembled graph / by the ring closed form.
SMatrixFn graph_evaluator(GraphSpec spec);
SMatrixFn ring_evaluator(RingSpec ring);

/// Steady currents flowing into each lead.
std::vector<double> steady_current(const SMatrixFn& s, int leads,
                                   const std::vector<Reservoir>& reservoirs,
                                   const Dynamics& dyn, const QuadratureConfig& quad);

/// Per-lead a-priori bound on |current|, independent of the junction:
/// sum_{b != a} [log(1+e^{mu_a beta_a})/(2 pi beta_a) + (a -> b)].
std::vector<double> current_bound(const std::vector<Reservoir>& reservoirs);

/// Zero-frequency noise power matrix with its structural residuals.
/// Rows sum to zero (current conservation) and the matrix is symmetric;
/// with equal reservoirs on a ring it is circulant with P_n = P_{N-n}.
struct NoiseMatrix {
  RMatrix p;
  double kirchhoff_residual = 0;  ///< max over rows of |sum_b P_ab|
  double symmetry_residual = 0;   ///< max |P - P^T|
  std::string dynamics;
  std::vector<Reservoir> reservoirs;
};

NoiseMatrix noise_matrix(const SMatrixFn& s, int leads,
                         const std::vector<Reservoir>& reservoirs, const Dynamics& dyn,
                         const QuadratureConfig& quad);

/// Independent noise entry P_n of a ring with equal reservoirs.
///
/// Schrodinger: evaluated in k-space for general mass; at m = 1/2 an
/// equivalent z-space form (z = beta(k^2 - mu)) is used. Dirac: z-space with
/// the linear dispersion entering sigma_n's argument without a square root.
/// 0 <= n <= floor(N/2). The integrand asserts |sigma_n|^2 in [0,1] at every
/// node.
double ring_noise_pn(const RingSpec& ring, int n, const Reservoir& r, const Dynamics& dyn,
                     const QuadratureConfig& quad);

/// Force the k-space route regardless of mass (cross-check of the change of
/// variable; agrees with the z-space route to ~1e-8 relative at m = 1/2).
double ring_noise_pn_kspace(const RingSpec& ring, int n, const Reservoir& r,
                            const Dynamics& dyn, const QuadratureConfig& quad);

} // namespace qgs
