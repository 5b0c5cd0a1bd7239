#include "qgs/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qgs/errors.hpp"

namespace qgs {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw GraphError("spec file: " + msg); }

void require_fields(const json& j, const std::string& where,
                    const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
  if (!j.is_object()) {
    bad(where + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!required.contains(key) && !optional.contains(key)) {
      bad(where + ": unknown field \"" + key + "\"");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      bad(where + ": missing field \"" + key + "\"");
    }
  }
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    bad(where + " must be a number");
  }
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    bad(where + " must be an integer");
  }
  return j.get<int>();
}

LocalScattering local_from_json(const json& j, const std::string& where) {
  require_fields(j, where, {"type"}, {"matrix", "t", "eta"});
  const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";
  if (type == "constant") {
    require_fields(j, where, {"type", "matrix"});
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || rows.empty()) {
      bad(where + ": matrix must be a nonempty array of rows");
    }
    const int n = static_cast<int>(rows.size());
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        bad(where + ": matrix must be square");
      }
      for (int c = 0; c < n; ++c) {
        const auto& entry = row[c];
        if (!entry.is_array() || entry.size() != 2) {
          bad(where + ": matrix entries must be [re, im] pairs");
        }
        m(r, c) = Complex(as_number(entry[0], where + " entry"),
                          as_number(entry[1], where + " entry"));
      }
    }
    return ConstantMatrix{std::move(m)};
  }
  if (type == "scale_invariant_c") {
    require_fields(j, where, {"type", "t"});
    return ScaleInvariantC{as_number(j.at("t"), where + ".t")};
  }
  if (type == "energy_dependent_e") {
    require_fields(j, where, {"type", "t", "eta"});
    return EnergyDependentE{as_number(j.at("t"), where + ".t"),
                            as_number(j.at("eta"), where + ".eta")};
  }
  if (type == "dirac_step") {
    require_fields(j, where, {"type", "t"});
    return DiracStep{as_number(j.at("t"), where + ".t")};
  }
  bad(where + ": unknown local scattering type \"" + type + "\"");
}

json local_to_json(const LocalScattering& local) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantMatrix>) {
          json rows = json::array();
          for (int r = 0; r < v.s.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < v.s.cols(); ++c) {
              row.push_back({v.s(r, c).real(), v.s(r, c).imag()});
            }
            rows.push_back(std::move(row));
          }
          return {{"type", "constant"}, {"matrix", std::move(rows)}};
        } else if constexpr (std::is_same_v<T, ScaleInvariantC>) {
          return {{"type", "scale_invariant_c"}, {"t", v.t}};
        } else if constexpr (std::is_same_v<T, EnergyDependentE>) {
          return {{"type", "energy_dependent_e"}, {"t", v.t}, {"eta", v.eta}};
        } else {
          return {{"type", "dirac_step"}, {"t", v.t}};
        }
      },
      local);
}

} // namespace

GraphSpec graph_from_json(const json& j) {
  require_fields(j, "graph", {"vertices", "internal_edges", "external_edges", "local"});
  GraphSpec spec;
  spec.vertices = as_int(j.at("vertices"), "vertices");
  if (!j.at("internal_edges").is_array() || !j.at("external_edges").is_array()) {
    bad("internal_edges and external_edges must be arrays");
  }
  int index = 0;
  for (const auto& e : j.at("internal_edges")) {
    std::ostringstream where;
    where << "internal_edges[" << index++ << "]";
    require_fields(e, where.str(), {"a", "b", "j", "length", "theta"});
    spec.internal.push_back({as_int(e.at("a"), where.str() + ".a"),
                             as_int(e.at("b"), where.str() + ".b"),
                             as_int(e.at("j"), where.str() + ".j"),
                             as_number(e.at("length"), where.str() + ".length"),
                             as_number(e.at("theta"), where.str() + ".theta")});
  }
  index = 0;
  for (const auto& e : j.at("external_edges")) {
    std::ostringstream where;
    where << "external_edges[" << index++ << "]";
    require_fields(e, where.str(), {"a", "j"});
    spec.external.push_back(
        {as_int(e.at("a"), where.str() + ".a"), as_int(e.at("j"), where.str() + ".j")});
  }
  if (!j.at("local").is_object()) {
    bad("local must map vertex ids to scattering descriptions");
  }
  for (const auto& [key, value] : j.at("local").items()) {
    int vertex = 0;
    try {
      vertex = std::stoi(key);
    } catch (const std::exception&) {
      bad("local: vertex key \"" + key + "\" is not an integer");
    }
    spec.local.emplace(vertex, local_from_json(value, "local." + key));
  }
  return spec;
}

json graph_to_json(const GraphSpec& spec) {
  json j;
  j["vertices"] = spec.vertices;
  j["internal_edges"] = json::array();
  for (const auto& e : spec.internal) {
    j["internal_edges"].push_back(
        {{"a", e.a}, {"b", e.b}, {"j", e.j}, {"length", e.length}, {"theta", e.theta}});
  }
  j["external_edges"] = json::array();
  for (const auto& e : spec.external) {
    j["external_edges"].push_back({{"a", e.a}, {"j", e.j}});
  }
  j["local"] = json::object();
  for (const auto& [v, local] : spec.local) {
    j["local"][std::to_string(v)] = local_to_json(local);
  }
  return j;
}

RingSpec ring_from_json(const json& j) {
  require_fields(j, "spec", {"ring"});
  const auto& r = j.at("ring");
  require_fields(r, "ring", {"leads", "edge_length", "flux", "local"});
  RingSpec ring;
  ring.leads = as_int(r.at("leads"), "ring.leads");
  ring.edge_length = as_number(r.at("edge_length"), "ring.edge_length");
  ring.flux = as_number(r.at("flux"), "ring.flux");
  ring.local = local_from_json(r.at("local"), "ring.local");
  return ring;
}

json ring_to_json(const RingSpec& ring) {
  return {{"ring",
           {{"leads", ring.leads},
            {"edge_length", ring.edge_length},
            {"flux", ring.flux},
            {"local", local_to_json(ring.local)}}}};
}

GraphSpec LoadedSpec::as_graph() const {
  if (graph.has_value()) {
    return *graph;
  }
  return ring_graph(*ring);
}

int LoadedSpec::leads() const {
  if (ring.has_value()) {
    return ring->leads;
  }
  return static_cast<int>(graph->external.size());
}

LoadedSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot read spec file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw GraphError("spec file " + path.string() + ": " + err.what());
  }
  LoadedSpec out;
  if (j.is_object() && j.contains("ring")) {
    out.ring = ring_from_json(j);
  } else {
    out.graph = graph_from_json(j);
  }
  return out;
}

std::vector<Reservoir> reservoirs_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw GraphError("reservoirs: expected a nonempty JSON array");
  }
  std::vector<Reservoir> out;
  int index = 0;
  for (const auto& r : j) {
    std::ostringstream where;
    where << "reservoirs[" << index++ << "]";
    require_fields(r, where.str(), {"beta", "mu"}, {"mu_tilde"});
    Reservoir res;
    res.beta = as_number(r.at("beta"), where.str() + ".beta");
    res.mu = as_number(r.at("mu"), where.str() + ".mu");
    res.mu_tilde = r.contains("mu_tilde")
                       ? as_number(r.at("mu_tilde"), where.str() + ".mu_tilde")
                       : 0.0;
    if (!(res.beta > 0.0)) {
      throw GraphError(where.str() + ": beta must be > 0");
    }
    out.push_back(res);
  }
  return out;
}

std::vector<Reservoir> load_reservoirs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GraphError("cannot read reservoir file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw GraphError("reservoir file " + path.string() + ": " + err.what());
  }
  return reservoirs_from_json(j);
}

} // namespace qgs
