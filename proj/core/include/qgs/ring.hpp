#pragma once

#include <optional>
#include <vector>

#include "qgs/assembly.hpp"
#include "qgs/graph.hpp"
#include "qgs/local_scattering.hpp"

namespace qgs {

/// Regular ring: N >= 2 identical degree-3 vertices joined clockwise by
/// edges of common length d, one lead per vertex, pierced by total flux phi.
/// The per-edge angle entering all closed forms is theta = -phi/N; the
/// stored line integral on each clockwise edge is +phi/N. Every observable
/// is periodic in phi with period 2*pi.
struct RingSpec {
  int leads = 0;
  double edge_length = 0;
  double flux = 0;
  LocalScattering local;  ///< shared 3x3 parity-symmetric family

  double theta() const { return -flux / leads; }
};

/// Violations of the ring constraints (leads >= 2, d > 0, 3x3 local family,
/// parity symmetry). Empty means well-formed.
std::vector<std::string> validate_ring(const RingSpec& ring);

/// Expands the ring into an explicit GraphSpec (always validate_graph-clean).
GraphSpec ring_graph(const RingSpec& ring);

/// Fundamental eigenvalue from the entries of a 3x3 local matrix evaluated
/// at k. The numerator/denominator quotient is a pure phase for real kd and
/// unitary input. Throws PoleError when the denominator vanishes.
Complex fundamental_lambda(const CMatrix& s, double kd, double theta);

/// Closed form of the fundamental eigenvalue for the scale-invariant family:
///
///   lambda = -[t(cos theta - cos kd) + i(t-1) sin kd]
///            /[t(cos theta - cos kd) - i(t-1) sin kd]
///
/// The simultaneous zeros of both terms at (kd, theta) = (0, 0) and
/// (pi, pi) (mod 2*pi) are removable along the branches hit by transport;
/// within a 1e-8 guard the limit value +1 (kd near 0) or -1 (kd near pi)
/// is returned.
Complex lambda_c(double t, double kd, double theta);

/// Closed form for the energy-dependent family (eta = 0 falls back to
/// lambda_c). k and the edge length enter separately.
Complex lambda_e(double t, double eta, double k, double d, double theta);

/// Fundamental eigenvalue of the ring's local family at momentum k and
/// shifted angle. Dispatches to the closed forms where they exist.
Complex ring_lambda(const RingSpec& ring, double k, double angle);

/// The ring's scattering matrix is circulant: S = W^{-1} Lambda W with the
/// DFT matrix W, eigenvalues lambda(k, theta + 2 pi (b-1)/N), the cyclic
/// shift D it commutes with, and the diagonal Omega implementing
/// quasi-periodicity Omega S(k,theta) Omega^{-1} = S(k, theta + 2 pi/N),
/// i.e. S(k, theta + 2 pi/N)_{1b} = omega^{-(b-1)} S(k, theta)_{1b}.
struct EigenStructure {
  CMatrix w;
  CVector lambda;
  RMatrix shift;
  CVector omega_diag;
};

EigenStructure ring_eigen(const RingSpec& ring, double k);

/// Closed-form total scattering matrix of the ring; agrees entrywise with
/// assembling the expanded graph.
TotalSMatrix ring_total_s(const RingSpec& ring, double k);

/// Discrete Fourier transform of the eigenvalue sequence,
/// sigma_n = (1/N) sum_l omega^{(l-1)n} lambda(k, theta + (l-1) 2 pi/N).
/// |sigma_n|^2 is the transmission probability between leads n apart;
/// sum_n |sigma_n|^2 = 1.
Complex sigma_n(const RingSpec& ring, double k, int n);

/// Two-lead (N = 2) reduction: the pair of eigenvalues and the reflection /
/// transmission probabilities rho = |l1+l2|^2/4, tau = |l1-l2|^2/4 with
/// rho + tau = 1.
struct TwoLeadQuantities {
  Complex lambda;
  Complex lambda2;
  double rho;
  double tau;
  double n_theta;  ///< t^2 (cos theta + cos kd)^2 + (1-t)^2 sin^2 kd
};

TwoLeadQuantities two_lead_quantities(double t, double kd, double theta);

/// Root of the pole equation u^2 - 2 t cos(theta) u + (2t - 1) = 0 in
/// u = exp(-i k d), mapped back to kd by the principal logarithm
/// (Re kd in [-pi, pi)). u = 0 corresponds to a pole at infinity.
struct RingPole {
  Complex u;
  bool at_infinity = false;
  Complex kd;       ///< meaningful only when !at_infinity
  double residual;  ///< |u^2 - 2 t cos(theta) u + 2t - 1|
};

std::vector<RingPole> ring_poles_c(double t, double theta);

/// Small-k expansion data for the scale-invariant ring.
///
/// chi0 = t d/(t-1) drives the theta = 0 branch (lambda -> +1) and
/// chi(theta) = (t-1) d/(t sin^2(theta/2)) the theta != 0 branch
/// (lambda -> -1). a[n] and c[n] are the finite Fourier sums of chi over the
/// shifted angles, n = 0 .. floor(N/2)-1; a[n] is real, c[n] is real only
/// for n = 0. dlambda_dk_fd is a central-difference d lambda/dk at k = 0 at
/// the ring's own theta, for cross-validation against i*chi.
struct ExpansionCoefficients {
  double chi0;
  double chi_theta;
  std::vector<Complex> a;
  std::vector<Complex> c;
  Complex dlambda_dk_fd;
};

ExpansionCoefficients expansion_coeffs(const RingSpec& ring);

} // namespace qgs
