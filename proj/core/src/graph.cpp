#include "qgs/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

std::pair<int, int> unordered_pair(int a, int b) {
  return {std::min(a, b), std::max(a, b)};
}

bool vertex_ok(const GraphSpec& spec, int v) { return v >= 1 && v <= spec.vertices; }

/// Union-find connectivity over the internal edges.
bool connected(const GraphSpec& spec) {
  if (spec.vertices <= 1) {
    return true;
  }
  std::vector<int> parent(spec.vertices + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : spec.internal) {
    if (vertex_ok(spec, e.a) && vertex_ok(spec, e.b)) {
      parent[find(e.a)] = find(e.b);
    }
  }
  const int root = find(1);
  for (int v = 2; v <= spec.vertices; ++v) {
    if (find(v) != root) {
      return false;
    }
  }
  return true;
}

} // namespace

int degree(const GraphSpec& spec, int vertex) {
  int deg = 0;
  for (const auto& e : spec.external) {
    if (e.a == vertex) {
      ++deg;
    }
  }
  for (const auto& e : spec.internal) {
    if (e.a == vertex) {
      ++deg;
    }
    if (e.b == vertex) {
      ++deg;  // loops count twice
    }
  }
  return deg;
}

std::vector<std::string> validate_graph(const GraphSpec& spec) {
  std::vector<std::string> report;
  auto fail = [&report](const std::string& msg) { report.push_back(msg); };

  if (spec.vertices < 1) {
    fail("vertex count must be >= 1");
    return report;
  }

  std::map<std::pair<int, int>, std::vector<int>> pair_js;
  for (std::size_t i = 0; i < spec.internal.size(); ++i) {
    const auto& e = spec.internal[i];
    std::ostringstream where;
    where << "internal edge #" << i + 1 << " (" << e.a << "," << e.b << "," << e.j << ")";
    if (!vertex_ok(spec, e.a) || !vertex_ok(spec, e.b)) {
      fail(where.str() + ": vertex index out of range");
      continue;
    }
    if (!(e.length > 0.0)) {
      fail(where.str() + ": length must be > 0");
    }
    pair_js[unordered_pair(e.a, e.b)].push_back(e.j);
  }
  for (auto& [pair, js] : pair_js) {
    std::sort(js.begin(), js.end());
    for (std::size_t i = 0; i < js.size(); ++i) {
      if (js[i] != static_cast<int>(i) + 1) {
        std::ostringstream msg;
        msg << "multiplicity indices for pair (" << pair.first << "," << pair.second
            << ") must be 1.." << js.size();
        fail(msg.str());
        break;
      }
    }
  }

  std::map<int, std::vector<int>> ext_js;
  for (std::size_t i = 0; i < spec.external.size(); ++i) {
    const auto& e = spec.external[i];
    if (!vertex_ok(spec, e.a)) {
      std::ostringstream msg;
      msg << "external edge #" << i + 1 << ": vertex index " << e.a << " out of range";
      fail(msg.str());
      continue;
    }
    ext_js[e.a].push_back(e.j);
  }
  for (auto& [v, js] : ext_js) {
    std::sort(js.begin(), js.end());
    for (std::size_t i = 0; i < js.size(); ++i) {
      if (js[i] != static_cast<int>(i) + 1) {
        std::ostringstream msg;
        msg << "lead multiplicity indices at vertex " << v << " must be 1.." << js.size();
        fail(msg.str());
        break;
      }
    }
  }

  if (spec.external.empty()) {
    fail("graph must be noncompact: at least one external edge required");
  }
  if (!connected(spec)) {
    fail("graph not connected");
  }

  for (int v = 1; v <= spec.vertices; ++v) {
    const auto it = spec.local.find(v);
    if (it == spec.local.end()) {
      std::ostringstream msg;
      msg << "no local scattering specified at vertex " << v;
      fail(msg.str());
      continue;
    }
    for (const auto& msg : local_parameter_violations(it->second)) {
      std::ostringstream full;
      full << "vertex " << v << ": " << msg;
      fail(full.str());
    }
    const int deg = degree(spec, v);
    const int dim = local_dimension(it->second);
    if (deg != dim) {
      std::ostringstream msg;
      msg << "local matrix dimension mismatch at vertex " << v << ": degree " << deg
          << ", matrix dimension " << dim;
      fail(msg.str());
    }
  }
  for (const auto& [v, local] : spec.local) {
    if (!vertex_ok(spec, v)) {
      std::ostringstream msg;
      msg << "local scattering given for nonexistent vertex " << v;
      fail(msg.str());
    }
  }
  return report;
}

ModeOrdering canonical_ordering(const GraphSpec& spec) {
  const auto report = validate_graph(spec);
  if (!report.empty()) {
    std::string all = "invalid graph:";
    for (const auto& r : report) {
      all += "\n  " + r;
    }
    throw GraphError(all);
  }

  ModeOrdering ord;

  // (tail, neighbor, j, reverse?) sort key; forward precedes reverse so the
  // two slots of a loop have a fixed order.
  struct Key {
    int tail, neighbor, j, rev;
    DirectedEdge h;
  };
  std::vector<Key> keys;
  keys.reserve(2 * spec.internal.size());
  for (std::size_t i = 0; i < spec.internal.size(); ++i) {
    const auto& e = spec.internal[i];
    keys.push_back({e.a, e.b, e.j, 0, {static_cast<int>(i), true}});
    keys.push_back({e.b, e.a, e.j, 1, {static_cast<int>(i), false}});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    return std::tie(x.tail, x.neighbor, x.j, x.rev) <
           std::tie(y.tail, y.neighbor, y.j, y.rev);
  });

  ord.d_int = static_cast<int>(keys.size());
  ord.internal_slot.assign(spec.internal.size(), {-1, -1});
  ord.slot_to_half.resize(keys.size());
  for (std::size_t slot = 0; slot < keys.size(); ++slot) {
    const DirectedEdge h = keys[slot].h;
    ord.internal_slot[h.edge][h.forward ? 0 : 1] = static_cast<int>(slot);
    ord.slot_to_half[slot] = h;
  }

  std::vector<int> ext(spec.external.size());
  std::iota(ext.begin(), ext.end(), 0);
  std::sort(ext.begin(), ext.end(), [&spec](int x, int y) {
    return std::tie(spec.external[x].a, spec.external[x].j) <
           std::tie(spec.external[y].a, spec.external[y].j);
  });
  ord.d_ext = static_cast<int>(ext.size());
  ord.external_slot.assign(spec.external.size(), -1);
  ord.slot_to_external.resize(ext.size());
  for (std::size_t slot = 0; slot < ext.size(); ++slot) {
    ord.external_slot[ext[slot]] = static_cast<int>(slot);
    ord.slot_to_external[slot] = ext[slot];
  }
  return ord;
}

double cycle_flux(const GraphSpec& spec, std::span<const DirectedEdge> cycle) {
  if (cycle.empty()) {
    throw GraphError("cycle is empty");
  }
  for (const auto& h : cycle) {
    if (h.edge < 0 || h.edge >= static_cast<int>(spec.internal.size())) {
      throw GraphError("edge not in graph");
    }
  }
  double flux = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const auto& h = cycle[i];
    const auto& next = cycle[(i + 1) % cycle.size()];
    if (edge_head(spec, h) != edge_tail(spec, next)) {
      throw GraphError("path not closed");
    }
    flux += edge_theta(spec, h);
  }
  return flux;
}

} // namespace qgs
