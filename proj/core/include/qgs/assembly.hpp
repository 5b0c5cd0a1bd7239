#pragma once

#include <vector>

#include "qgs/graph.hpp"
#include "qgs/types.hpp"

namespace qgs {

/// Free propagation of the internal modes along the edges, including the
/// magnetic phase. Couples each directed half-edge to its reverse with
/// exp(-i k d + i theta); everything else is zero. For real k it is unitary
/// and E(k)^dagger = E(-k) = E(k)^{-1}; transposition flips every theta.
struct PropagationMatrix {
  CMatrix e;
  Complex k;
};

/// The four vertex-local scattering blocks relating external/internal
/// channels. Entries are drawn from the local matrices only; the blocks are
/// block-diagonal over vertices.
struct BlockMatrices {
  CMatrix oo;  ///< external <- external
  CMatrix oi;  ///< external <- internal
  CMatrix io;  ///< internal <- external
  CMatrix ii;  ///< internal <- internal
  double k = 0;
};

/// Total scattering matrix over the external channels at fixed momentum,
/// S = oo + oi [E - ii]^{-1} io, with the flux data it was built from.
struct TotalSMatrix {
  CMatrix s;
  double k = 0;
  std::vector<double> thetas;  ///< line integrals of every internal edge

  /// max-entry norm of S^dagger S - 1
  double unitarity_residual() const;
};

/// Builds E(k, theta). Complex momenta are allowed here (pole studies).
PropagationMatrix build_propagation(const GraphSpec& spec, const ModeOrdering& ordering,
                                    Complex k);

/// Evaluates every local matrix at k and scatters it into the four blocks.
BlockMatrices build_blocks(const GraphSpec& spec, const ModeOrdering& ordering, double k);

/// Total scattering matrix of the graph at real momentum k.
/// Throws PoleError when [E - ii] is numerically singular (reciprocal
/// condition estimate below 1e-13).
TotalSMatrix total_s(const GraphSpec& spec, const ModeOrdering& ordering, double k);
TotalSMatrix total_s(const GraphSpec& spec, double k);

/// Internal mode amplitudes B = [E - ii]^{-1} io A for a given vector of
/// incoming external amplitudes A. Back-substitution into the local
/// relations reproduces total_s * A, which makes this an inversion-free
/// correctness oracle for the total matrix.
CVector internal_modes(const GraphSpec& spec, const ModeOrdering& ordering, double k,
                       const CVector& incoming);

} // namespace qgs
