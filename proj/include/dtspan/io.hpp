#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dtspan/complex.hpp"
#include "dtspan/error.hpp"
#include "dtspan/flow.hpp"
#include "dtspan/geometry.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/rational.hpp"
#include "dtspan/tree.hpp"

namespace dtspan::io {

/// Keys are kept sorted, which makes every document byte-deterministic.
using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InputParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(Errc::InputParseError, path + ": " + e.what());
  }
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(Errc::InputParseError, e.what());
  }
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::InputParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) fail(Errc::InputParseError, std::string("field '") + key + "' must be an array");
  return v;
}

inline std::string string_value(const Json& j) {
  if (!j.is_string()) fail(Errc::InputParseError, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

/// Accepts "p/q" strings and JSON integers. Floats are rejected.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return parse_rational(j.dump());
  fail(Errc::InputParseError, "expected a rational string or integer, got " + j.dump());
}

inline Json to_json(const Rational& q) { return to_string(q); }

inline std::vector<std::string> labels_of(const GroundSet& g) { return g.labels(); }

// ---- distances ----------------------------------------------------------

/// {"labels": ["a", ...], "matrix": [["0", "1"], ...]}; labels optional.
inline DirectedDistance distance_from_json(const Json& j) {
  const Json& rows = array_field(j, "matrix");
  RationalMatrix m;
  for (const auto& row : rows) {
    if (!row.is_array()) fail(Errc::InputParseError, "matrix rows must be arrays");
    RationalVector r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    m.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto& l : array_field(j, "labels")) labels.push_back(string_value(l));
  } else {
    labels = default_labels(m.size());
  }
  return validate_distance(m, labels);
}

inline Json to_json(const DirectedDistance& d) {
  Json rows = Json::array();
  for (const auto& row : d.entries()) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    rows.push_back(std::move(r));
  }
  return {{"labels", d.ground().labels()}, {"matrix", std::move(rows)}};
}

// ---- points -------------------------------------------------------------

/// {"col": {"a": "1", ...}, "row": {...}} with every label present.
inline ExtPoint point_from_json(const Json& j, const GroundSet& g) {
  ExtPoint p = ExtPoint::zeros(g.size());
  auto read = [&](const char* key, RationalVector& out) {
    const Json& part = field(j, key);
    if (!part.is_object()) fail(Errc::InputParseError, std::string("'") + key + "' must map labels to rationals");
    std::vector<bool> seen(g.size(), false);
    for (auto it = part.begin(); it != part.end(); ++it) {
      const std::size_t s = g.index_of(it.key());
      out[s] = rational_from_json(it.value());
      seen[s] = true;
    }
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!seen[s]) fail(Errc::LengthMismatch, std::string("'") + key + "' lacks " + g.label(s));
    }
  };
  read("col", p.col);
  read("row", p.row);
  return p;
}

inline Json to_json(const ExtPoint& p, const GroundSet& g) {
  Json col = Json::object(), row = Json::object();
  for (std::size_t s = 0; s < g.size(); ++s) {
    col[g.label(s)] = to_string(p.col[s]);
    row[g.label(s)] = to_string(p.row[s]);
  }
  return {{"col", std::move(col)}, {"row", std::move(row)}};
}

// ---- complexes ----------------------------------------------------------

inline Json to_json(const Component& c, const GroundSet& g) {
  Json cols = Json::array(), rows = Json::array();
  for (auto s : c.cols) cols.push_back(g.label(s));
  for (auto t : c.rows) rows.push_back(g.label(t));
  return {{"cols", std::move(cols)}, {"rows", std::move(rows)}};
}

inline Json to_json(const PolyComplex& c, const GroundSet& g) {
  Json verts = Json::array();
  for (const auto& v : c.vertices) verts.push_back(to_json(v, g));
  Json faces = Json::array();
  for (const auto& f : c.faces) {
    Json comps = Json::array();
    for (const auto& comp : f.components) comps.push_back(to_json(comp, g));
    Json edges = Json::array();
    for (const auto& [s, t] : f.graph.edges) edges.push_back({g.label(s), g.label(t)});
    faces.push_back({{"vertices", f.vertices},
                     {"dim", f.dim},
                     {"maximal", f.maximal},
                     {"bounded", f.bounded},
                     {"components", std::move(comps)},
                     {"equality_edges", std::move(edges)}});
  }
  Json inc = Json::array();
  for (const auto& [a, b] : c.incidence) inc.push_back({a, b});
  Json counts = Json::array();
  for (std::size_t d = 0; d <= c.dim(); ++d) counts.push_back(c.count(d));
  return {{"kind", std::string(complex_kind_name(c.kind))},
          {"dim", c.dim()},
          {"f_vector", std::move(counts)},
          {"vertices", std::move(verts)},
          {"faces", std::move(faces)},
          {"incidence", std::move(inc)}};
}

inline Json to_json(const SkeletonGraph& sk, const GroundSet& g) {
  Json verts = Json::array();
  for (const auto& v : sk.vertices) verts.push_back(to_json(v, g));
  Json edges = Json::array();
  for (const auto& e : sk.edges) edges.push_back({{"tail", e.tail}, {"head", e.head}, {"length", to_string(e.length)}});
  return {{"vertices", std::move(verts)}, {"edges", std::move(edges)}};
}

inline std::string point_label(const ExtPoint& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << to_string(p.col[i]);
  os << '|';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << to_string(p.row[i]);
  os << ')';
  return os.str();
}

inline std::string to_dot(const SkeletonGraph& sk, const std::string& name = "skeleton") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (std::size_t v = 0; v < sk.vertices.size(); ++v) {
    os << "  v" << v << " [label=\"" << point_label(sk.vertices[v]) << "\"];\n";
  }
  for (const auto& e : sk.edges) {
    os << "  v" << e.tail << " -> v" << e.head << " [label=\"" << to_string(e.length) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---- realizations -------------------------------------------------------

inline Json to_json(const Realization& r) {
  Json edges = Json::array();
  for (std::size_t e = 0; e < r.tree.edges().size(); ++e) {
    edges.push_back({{"tail", r.tree.edges()[e].tail},
                     {"head", r.tree.edges()[e].head},
                     {"length", to_string(r.lengths[e])}});
  }
  Json subtrees = Json::object();
  for (std::size_t s = 0; s < r.labels.size(); ++s) subtrees[r.labels[s]] = r.subtrees[s];
  return {{"labels", r.labels}, {"vertices", r.tree.vertex_count()}, {"edges", std::move(edges)}, {"subtrees", std::move(subtrees)}};
}

inline Realization realization_from_json(const Json& j) {
  const Json& count = field(j, "vertices");
  if (!count.is_number_unsigned()) fail(Errc::InputParseError, "'vertices' must be a vertex count");
  std::vector<TreeEdge> edges;
  Realization r;
  for (const auto& e : array_field(j, "edges")) {
    const Json& tail = field(e, "tail");
    const Json& head = field(e, "head");
    if (!tail.is_number_unsigned() || !head.is_number_unsigned()) fail(Errc::InputParseError, "edge endpoints are vertex indices");
    edges.push_back({tail.get<std::size_t>(), head.get<std::size_t>()});
    r.lengths.push_back(rational_from_json(field(e, "length")));
  }
  r.tree = OrientedTree(count.get<std::size_t>(), std::move(edges));
  for (const auto& l : array_field(j, "labels")) r.labels.push_back(string_value(l));
  GroundSet g(r.labels);
  const Json& subs = field(j, "subtrees");
  if (!subs.is_object()) fail(Errc::InputParseError, "'subtrees' maps labels to vertex lists");
  r.subtrees.assign(r.labels.size(), {});
  for (auto it = subs.begin(); it != subs.end(); ++it) {
    auto& f = r.subtrees[g.index_of(it.key())];
    if (!it.value().is_array()) fail(Errc::InputParseError, "subtree must be a vertex list");
    for (const auto& v : it.value()) {
      if (!v.is_number_unsigned()) fail(Errc::InputParseError, "subtree entries are vertex indices");
      f.push_back(v.get<std::size_t>());
    }
    std::sort(f.begin(), f.end());
  }
  validate_realization(r);
  return r;
}

/// Vertices are annotated with the labels whose subtree contains them.
inline std::string to_dot(const Realization& r, const std::string& name = "realization") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (std::size_t v = 0; v < r.tree.vertex_count(); ++v) {
    std::string members;
    for (std::size_t s = 0; s < r.labels.size(); ++s) {
      if (std::binary_search(r.subtrees[s].begin(), r.subtrees[s].end(), v)) members += (members.empty() ? "" : ",") + r.labels[s];
    }
    os << "  v" << v << " [label=\"v" << v << (members.empty() ? "" : " {" + members + "}") << "\"";
    if (!members.empty()) os << ", style=filled, fillcolor=lightblue";
    os << "];\n";
  }
  for (std::size_t e = 0; e < r.tree.edges().size(); ++e) {
    os << "  v" << r.tree.edges()[e].tail << " -> v" << r.tree.edges()[e].head << " [label=\"" << to_string(r.lengths[e])
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

inline Json to_json(const std::vector<SplitTerm>& terms, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const auto& t : terms) {
    Json a = Json::array(), b = Json::array();
    for (auto s : t.a) a.push_back(labels[s]);
    for (auto s : t.b) b.push_back(labels[s]);
    out.push_back({{"A", std::move(a)}, {"B", std::move(b)}, {"coefficient", to_string(t.coefficient)}});
  }
  return out;
}

// ---- rank ---------------------------------------------------------------

inline Json to_json(const RankCertificate& cert, const GroundSet& g) {
  Json out = {{"value", cert.value}};
  if (cert.instance) {
    Json rows = Json::array(), cols = Json::array(), m = Json::array();
    for (auto s : cert.instance->rows) rows.push_back(g.label(s));
    for (auto t : cert.instance->cols) cols.push_back(g.label(t));
    for (const auto& [s, t] : cert.matching) m.push_back({g.label(s), g.label(t)});
    out["rows"] = std::move(rows);
    out["cols"] = std::move(cols);
    out["matching"] = std::move(m);
  }
  return out;
}

// ---- geodesics ----------------------------------------------------------

inline Json to_json(const Polyline& pl, const GroundSet& g) {
  Json pts = Json::array();
  for (const auto& p : pl.points) pts.push_back(to_json(p, g));
  Json steps = Json::array();
  for (const auto& s : pl.steps) steps.push_back(to_string(s));
  return {{"points", std::move(pts)}, {"steps", std::move(steps)}, {"total", to_string(pl.total)}};
}

// ---- networks -----------------------------------------------------------

/// {"vertices": [...], "edges": [{"tail": .., "head": .., "cap": k}], "terminals": [...]}
inline Network network_from_json(const Json& j) {
  Network net;
  for (const auto& v : array_field(j, "vertices")) net.vertices.push_back(string_value(v));
  GroundSet g(net.vertices);
  auto vertex = [&](const Json& v) {
    const std::string name = string_value(v);
    if (!g.contains(name)) fail(Errc::UnknownVertex, "unknown vertex " + name);
    return g.index_of(name);
  };
  for (const auto& e : array_field(j, "edges")) {
    const Json& cap = field(e, "cap");
    if (!cap.is_number_integer()) fail(Errc::InputParseError, "capacities are integers");
    net.edges.push_back({vertex(field(e, "tail")), vertex(field(e, "head")), cap.get<long>()});
  }
  for (const auto& t : array_field(j, "terminals")) net.terminals.push_back(vertex(t));
  net.validate();
  return net;
}

inline Json to_json(const Network& net) {
  Json edges = Json::array();
  for (const auto& e : net.edges) edges.push_back({{"tail", net.vertices[e.tail]}, {"head", net.vertices[e.head]}, {"cap", e.cap}});
  return {{"vertices", net.vertices}, {"edges", std::move(edges)}, {"terminals", net.terminal_labels()}};
}

inline Json to_json(const Multiflow& f, const Network& net) {
  Json out = Json::array();
  for (std::size_t i = 0; i < f.paths.size(); ++i) {
    Json verts = Json::array();
    verts.push_back(net.vertices[net.edges[f.paths[i].edges.front()].tail]);
    for (auto e : f.paths[i].edges) verts.push_back(net.vertices[net.edges[e].head]);
    out.push_back({{"vertices", std::move(verts)}, {"edges", f.paths[i].edges}, {"value", to_string(f.values[i])}});
  }
  return out;
}

inline Json to_json(const std::vector<EdgeCycle>& cycles, const Network& net) {
  Json out = Json::array();
  for (const auto& c : cycles) {
    Json verts = Json::array();
    for (auto v : c.vertices(net).points) verts.push_back(net.vertices[v]);
    out.push_back({{"vertices", std::move(verts)}, {"edges", c.edges}, {"multiplicity", c.multiplicity}});
  }
  return out;
}

inline Json to_json(const MinMaxReport& rep, const Network& net, const GroundSet& terminals) {
  Json emb = Json::object();
  for (std::size_t x = 0; x < rep.embedding.size(); ++x) emb[net.vertices[x]] = to_json(rep.embedding[x], terminals);
  Json checks = {{"certified", rep.certified}, {"embedding", rep.embedding_ok}};
  Json out = {{"max", to_string(rep.max_value)},
              {"min", to_string(rep.min_value)},
              {"equal", rep.equal},
              {"ok", rep.ok()},
              {"mode", rep.mode == MinMaxMode::T ? "T" : "Q"},
              {"flow", to_json(rep.flow, net)},
              {"lp_extension", to_json(rep.lp_extension.d)},
              {"extension", to_json(rep.extension.d)},
              {"embedding", std::move(emb)},
              {"embedded_objective", to_string(rep.embedded_objective)}};
  if (rep.mode == MinMaxMode::Q) {
    checks["cycle_identity"] = rep.cycle_identity;
    checks["congruent_embedding"] = rep.congruent_ok;
    out["cycles"] = to_json(rep.cycles, net);
  }
  out["checks"] = std::move(checks);
  return out;
}

inline Json error_json(const Error& e) { return {{"error", std::string(e.name())}, {"message", e.what()}}; }

}  // namespace dtspan::io
