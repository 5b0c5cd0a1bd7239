#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgs/graph.hpp"
#include "qgs/ring.hpp"
#include "qgs/transport.hpp"

namespace qgs {

/// Either an explicit graph or a ring description loaded from disk.
struct LoadedSpec {
  std::optional<GraphSpec> graph;
  std::optional<RingSpec> ring;

  bool is_ring() const { return ring.has_value(); }
  /// The graph either way (rings are expanded).
  GraphSpec as_graph() const;
  /// Lead count of the loaded system.
  int leads() const;
};

/// Parses a graph spec from JSON. Schema:
///   {"vertices": int,
///    "internal_edges": [{"a","b","j","length","theta"}],
///    "external_edges": [{"a","j"}],
///    "local": {"<vertex>": {"type": "constant", "matrix": [[[re,im],...],...]}
///                       |  {"type": "scale_invariant_c", "t": ...}
///                       |  {"type": "energy_dependent_e", "t": ..., "eta": ...}
///                       |  {"type": "dirac_step", "t": ...}}}
/// Unknown fields are rejected.
GraphSpec graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const GraphSpec& spec);

/// Ring file schema: {"ring": {"leads", "edge_length", "flux", "local"}}.
RingSpec ring_from_json(const nlohmann::json& j);
nlohmann::json ring_to_json(const RingSpec& ring);

/// Loads a spec file, dispatching on the presence of a top-level "ring".
LoadedSpec load_spec_file(const std::filesystem::path& path);

/// Loads a JSON array of {"beta", "mu", "mu_tilde"?} reservoir descriptions.
std::vector<Reservoir> load_reservoirs(const std::filesystem::path& path);
std::vector<Reservoir> reservoirs_from_json(const nlohmann::json& j);

} // namespace qgs
