#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qgs/local_scattering.hpp"
#include "qgs/types.hpp"

namespace qgs {

/// Internal edge of a metric graph. Stored once with an orientation a -> b;
/// the same physical edge traversed b -> a has the same length and negated
/// magnetic line integral. Loops (a == b) are allowed.
struct InternalEdge {
  int a = 0;          ///< tail vertex, 1-based
  int b = 0;          ///< head vertex, 1-based
  int j = 1;          ///< multiplicity index within the unordered pair {a,b}
  double length = 0;  ///< d > 0
  double theta = 0;   ///< line integral of the tangential vector potential, a -> b
};

/// Semi-infinite lead attached at vertex a, oriented towards infinity.
struct ExternalEdge {
  int a = 0;
  int j = 1;  ///< multiplicity index among the leads of vertex a
};

/// Finite, noncompact, connected metric graph with per-vertex local
/// scattering. Immutable after construction by convention; all operations
/// take it by const reference and share it freely across threads.
struct GraphSpec {
  int vertices = 0;
  std::vector<InternalEdge> internal;
  std::vector<ExternalEdge> external;
  std::map<int, LocalScattering> local;  ///< vertex id -> scattering at that vertex
};

/// One of the two directed traversals of an internal edge.
struct DirectedEdge {
  int edge = 0;        ///< index into GraphSpec::internal
  bool forward = true; ///< true: stored orientation a -> b
};

/// Canonical layout of the internal and external mode vectors.
///
/// Internal slots are vertex-major by tail vertex, then neighbor ascending,
/// then multiplicity ascending; for loops the forward traversal precedes the
/// reverse one. External slots are ordered by (vertex, j). Both bijections
/// are deterministic functions of the graph.
struct ModeOrdering {
  int d_int = 0;
  int d_ext = 0;
  /// edge index -> {slot of forward half-edge, slot of reverse half-edge}
  std::vector<std::array<int, 2>> internal_slot;
  /// position in GraphSpec::external -> slot
  std::vector<int> external_slot;
  /// inverse maps
  std::vector<DirectedEdge> slot_to_half;
  std::vector<int> slot_to_external;

  int slot(DirectedEdge h) const { return internal_slot[h.edge][h.forward ? 0 : 1]; }
};

/// Total channel count at a vertex; a loop contributes two.
int degree(const GraphSpec& spec, int vertex);

/// Checks every structural invariant and returns one message per violation.
/// An empty report means the graph is valid.
std::vector<std::string> validate_graph(const GraphSpec& spec);

/// Builds the canonical mode ordering. Throws GraphError on an invalid spec.
ModeOrdering canonical_ordering(const GraphSpec& spec);

/// Sum of orientation-signed line integrals along a closed path of directed
/// edges: the magnetic flux through the cycle. Throws GraphError if the path
/// is not closed or references edges outside the graph.
double cycle_flux(const GraphSpec& spec, std::span<const DirectedEdge> cycle);

inline int edge_tail(const GraphSpec& spec, DirectedEdge h) {
  const auto& e = spec.internal[h.edge];
  return h.forward ? e.a : e.b;
}
inline int edge_head(const GraphSpec& spec, DirectedEdge h) {
  const auto& e = spec.internal[h.edge];
  return h.forward ? e.b : e.a;
}
inline double edge_theta(const GraphSpec& spec, DirectedEdge h) {
  const auto& e = spec.internal[h.edge];
  return h.forward ? e.theta : -e.theta;
}

} // namespace qgs
