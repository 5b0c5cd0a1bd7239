#pragma once

#include <variant>

#include "qgs/types.hpp"

namespace qgs {

/// Fixed unitary matrix, one channel per incident direction at the vertex.
/// Hermitian analyticity requires S*S = 1, checked at evaluation time.
struct ConstantMatrix {
  CMatrix s;
};

/// The one-parameter scale-invariant (k-independent) 3x3 family:
///
///   [ 1-2t        sqrt(2t(1-t))  sqrt(2t(1-t)) ]
///   [ sqrt(...)   t-1            t             ]
///   [ sqrt(...)   t              t-1           ]
///
/// Real, symmetric, orthogonal, hence involutive. t in (0,1); the endpoints
/// give fully reflecting / trivially transmitting junctions and are excluded.
struct ScaleInvariantC {
  double t;
};

/// Energy-dependent deformation of the scale-invariant family,
/// S(k) = (k S_C - i eta 1) / (k + i eta). Reduces to ScaleInvariantC at
/// eta = 0; for eta != 0 it is totally reflecting at k = 0.
struct EnergyDependentE {
  double t;
  double eta;
};

/// Step family used for linear dispersion: S(k) = U for k > 0 and U^{-1}
/// for k < 0, with U the scale-invariant matrix. Undefined at k = 0.
struct DiracStep {
  double t;
};

using LocalScattering =
    std::variant<ConstantMatrix, ScaleInvariantC, EnergyDependentE, DiracStep>;

/// Builds the scale-invariant 3x3 matrix for a given t.
CMatrix scale_invariant_c(double t);

/// Builds the energy-dependent 3x3 matrix at momentum k.
CMatrix energy_dependent_e(double t, double eta, double k);

/// Channel count of a local scattering description (3 for the named
/// families, the stored dimension for a constant matrix).
int local_dimension(const LocalScattering& local);

/// Evaluates the local scattering matrix at real momentum k.
///
/// Constant matrices are verified at this point (max-entry norm, 1e-10):
/// S S = 1 and S S^dagger = 1. DiracStep throws at k = 0 where the step
/// is discontinuous.
CMatrix local_s(const LocalScattering& local, double k);

/// True if the description commutes with the swap of channels 2 and 3.
/// The named families do by construction; constants are checked numerically.
bool parity_symmetric(const LocalScattering& local, double tol = 1e-12);

/// Domain violations of the parameters themselves (t outside (0,1),
/// non-square constant matrix, ...). Empty means well-formed.
std::vector<std::string> local_parameter_violations(const LocalScattering& local);

} // namespace qgs
