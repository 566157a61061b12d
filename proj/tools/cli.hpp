#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dtspan/dtspan.hpp"

namespace dtspan::cli {

using io::Json;

inline constexpr const char* kFormats = R"(File formats (all rationals are strings "p" or "p/q"):
  distance     {"labels": ["a","b"], "matrix": [["0","1"],["0","0"]]}
  point        {"col": {"a": "0", "b": "1"}, "row": {"a": "1", "b": "0"}}
  network      {"vertices": ["s","x","t"], "terminals": ["s","t"],
                "edges": [{"tail": "s", "head": "x", "cap": 1}]}
  realization  {"labels": ["a","b"], "vertices": 2, "subtrees": {"a": [0], "b": [1]},
                "edges": [{"tail": 0, "head": 1, "length": "1"}]}
Exit status: 0 success, 1 domain error ({"error": name, "message": text}), 2 usage error.
)";

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail(Errc::InputParseError, "cannot write " + path);
  f << text;
}

inline DirectedDistance load_distance(const std::string& path) { return io::distance_from_json(io::read_json_file(path)); }

inline ComplexKind parse_kind(const std::string& s) {
  if (s == "T") return ComplexKind::TightSpan;
  if (s == "Qplus") return ComplexKind::Qplus;
  return ComplexKind::Section;
}

inline PolyComplex build_complex(const DirectedDistance& mu, ComplexKind kind, const ComplexOptions& opt) {
  switch (kind) {
    case ComplexKind::TightSpan: return enumerate_tight_span(mu, opt);
    case ComplexKind::Qplus: return enumerate_qplus(mu, opt);
    case ComplexKind::Section: break;
  }
  return enumerate_section(mu, opt);
}

template <std::size_t K>
Json violation_json(const ConditionCheck<K>& c, const GroundSet& g) {
  Json v = Json::array();
  if (c.violation) {
    for (auto i : *c.violation) v.push_back(g.label(i));
  }
  return v;
}

}  // namespace detail

/// Parses args (without the program name), runs one command and returns the
/// exit status. JSON goes to `out` unless --out names a file.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed tight spans, tropical polytopes and oriented-tree realizations (exact arithmetic)", "dtspan"};
  app.footer(kFormats);
  app.require_subcommand(1);

  std::string out_path, dot_path;
  std::size_t max_n = 5;
  app.add_option("--out", out_path, "write the JSON result to this file");

  std::string dist_path, net_path, point_path, from_path, to_path, realization_path;
  std::string mode = "T", target = "T", space = "T", complex_kind = "T", kind = "singleton";
  std::size_t steps = 4, n = 4;
  std::uint64_t seed = 0;
  bool metric = false;

  auto add_dist = [&](CLI::App* sub) { sub->add_option("distance", dist_path, "distance JSON file")->required(); };
  auto add_cap = [&](CLI::App* sub) { sub->add_option("--max-n", max_n, "ground-set cap for complex enumeration")->capture_default_str(); };
  auto add_dot = [&](CLI::App* sub) { sub->add_option("--dot", dot_path, "also write a DOT graph to this file"); };

  auto* validate = app.add_subcommand("validate", "check that a matrix is a directed distance");
  add_dist(validate);

  auto* check = app.add_subcommand("check", "path / tree / directed tree metric conditions");
  check->require_subcommand(1);
  auto* check_path = check->add_subcommand("path", "quadruple condition, equivalent to dim T <= 1");
  auto* check_tree = check->add_subcommand("tree", "sextuple condition, equivalent to tropical rank <= 2");
  auto* check_dtm = check->add_subcommand("dtm", "directed tree metric (four point + cyclic triples)");
  for (auto* s : {check_path, check_tree, check_dtm}) add_dist(s);

  auto* rank = app.add_subcommand("rank", "tropical rank with a certifying submatrix");
  add_dist(rank);
  auto* dim = app.add_subcommand("dim", "dimension of the tight span with a certifying submatrix");
  add_dist(dim);

  auto* tightspan = app.add_subcommand("tightspan", "enumerate the faces of T");
  auto* qplus = app.add_subcommand("qplus", "enumerate the faces of Q+");
  auto* section = app.add_subcommand("section", "enumerate the canonical section {p in Q+ : min row = 0}");
  for (auto* s : {tightspan, qplus, section}) {
    add_dist(s);
    add_cap(s);
    add_dot(s);
  }

  auto* skeleton = app.add_subcommand("skeleton", "directed 1-skeleton of a complex of dimension <= 1");
  add_dist(skeleton);
  add_cap(skeleton);
  add_dot(skeleton);
  skeleton->add_option("--complex", complex_kind, "T, Qplus or Section")
      ->check(CLI::IsMember({"T", "Qplus", "Section"}))
      ->capture_default_str();

  auto* realize = app.add_subcommand("realize", "oriented-tree realizations");
  realize->require_subcommand(1);
  auto* realize_path_cmd = realize->add_subcommand("path", "directed path realization (dim T <= 1)");
  auto* realize_tree_cmd = realize->add_subcommand("tree", "directed-path subtrees (tropical rank <= 2)");
  auto* realize_dtm_cmd = realize->add_subcommand("dtm", "single-vertex subtrees plus split decomposition");
  for (auto* s : {realize_path_cmd, realize_tree_cmd, realize_dtm_cmd}) {
    add_dist(s);
    add_cap(s);
    add_dot(s);
  }

  auto* evaluate = app.add_subcommand("evaluate", "distance matrix of a realization");
  evaluate->add_option("realization", realization_path, "realization JSON file")->required();

  auto* retract = app.add_subcommand("retract", "retract a point of P into T, Q+ or the canonical section");
  add_dist(retract);
  retract->add_option("--point", point_path, "point JSON file")->required();
  retract->add_option("--to", target, "T, Qplus or Section")->check(CLI::IsMember({"T", "Qplus", "Section"}))->capture_default_str();

  auto* geodesic = app.add_subcommand("geodesic", "retracted segment polyline between two points");
  add_dist(geodesic);
  geodesic->add_option("--from", from_path, "start point JSON file")->required();
  geodesic->add_option("--to", to_path, "end point JSON file")->required();
  geodesic->add_option("--steps", steps, "number of segments")->capture_default_str();
  geodesic->add_option("--space", space, "T or Qplus")->check(CLI::IsMember({"T", "Qplus"}))->capture_default_str();

  auto* flow = app.add_subcommand("flow", "multiflows and the metric extension LP");
  flow->require_subcommand(1);
  auto* flow_max = flow->add_subcommand("max", "maximum multiflow over S-paths");
  auto* flow_dual = flow->add_subcommand("dual", "minimum metric extension");
  auto* flow_verify = flow->add_subcommand("verify", "check the min-max relation and its embedding");
  for (auto* s : {flow_max, flow_dual, flow_verify}) {
    s->add_option("network", net_path, "network JSON file")->required();
    add_dist(s);
  }
  flow_verify->add_option("--mode", mode, "T, or Q for Eulerian networks")->check(CLI::IsMember({"T", "Q"}))->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "cycle decomposition of an Eulerian network");
  decompose->add_option("network", net_path, "network JSON file")->required();

  auto* generate = app.add_subcommand("generate", "seeded random instances");
  generate->require_subcommand(1);
  auto* gen_dist = generate->add_subcommand("distance", "random rational distance");
  gen_dist->add_flag("--metric", metric, "take the shortest-path closure");
  auto* gen_real = generate->add_subcommand("realization", "random oriented-tree realization");
  gen_real->add_option("--kind", kind, "directed_path, path_subtrees or singleton")
      ->check(CLI::IsMember({"directed_path", "path_subtrees", "singleton"}))
      ->capture_default_str();
  for (auto* s : {gen_dist, gen_real}) {
    s->add_option("--n", n, "ground-set size")->check(CLI::Range(std::size_t{1}, std::size_t{26}))->capture_default_str();
    s->add_option("--seed", seed, "random seed")->capture_default_str();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    io::Json usage = {{"error", "UsageError"}, {"message", e.what()}};
    out << usage.dump() << "\n";
    return 2;
  }

  auto emit = [&](const Json& j) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) out << text;
    else detail::write_text(out_path, text);
  };
  auto emit_dot = [&](const std::string& dot) {
    if (!dot_path.empty()) detail::write_text(dot_path, dot);
  };
  const ComplexOptions copt{max_n};

  try {
    if (validate->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      emit({{"valid", true}, {"n", mu.size()}, {"metric", is_metric(mu)}});
    } else if (check_path->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto c = check_path_condition(mu);
      Json j{{"path_condition", c.holds}, {"dim_tight_span", dim_tight_span(mu).value}};
      if (!c.holds) j["violation"] = detail::violation_json(c, mu.ground());
      emit(j);
    } else if (check_tree->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto c = check_tree_condition(mu);
      Json j{{"tree_condition", c.holds}, {"tropical_rank", tropical_rank(mu).value}};
      if (!c.holds) j["violation"] = detail::violation_json(c, mu.ground());
      emit(j);
    } else if (check_dtm->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const bool holds = check_directed_tree_metric(mu);
      emit({{"directed_tree_metric", holds},
            {"four_point", check_four_point(symmetrize(mu)).holds},
            {"cyclic_triples", check_cyclic_triples(mu)},
            {"tropical_rank", tropical_rank(mu).value}});
    } else if (rank->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto cert = tropical_rank(mu);
      emit({{"tropical_rank", cert.value}, {"certificate", io::to_json(cert, mu.ground())}});
    } else if (dim->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto cert = dim_tight_span(mu);
      emit({{"dim_tight_span", cert.value}, {"certificate", io::to_json(cert, mu.ground())}});
    } else if (tightspan->parsed() || qplus->parsed() || section->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto kind_of = tightspan->parsed() ? ComplexKind::TightSpan : qplus->parsed() ? ComplexKind::Qplus : ComplexKind::Section;
      const auto c = detail::build_complex(mu, kind_of, copt);
      if (!dot_path.empty()) emit_dot(io::to_dot(skeleton_graph(c)));
      emit(io::to_json(c, mu.ground()));
    } else if (skeleton->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto g = skeleton_graph(detail::build_complex(mu, detail::parse_kind(complex_kind), copt));
      emit_dot(io::to_dot(g));
      emit(io::to_json(g, mu.ground()));
    } else if (realize_path_cmd->parsed() || realize_tree_cmd->parsed() || realize_dtm_cmd->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      Realization r = realize_path_cmd->parsed() ? realize_path(mu, copt)
                      : realize_tree_cmd->parsed() ? realize_tree(mu, copt)
                                                  : realize_directed_tree_metric(mu, copt);
      Json j = io::to_json(r);
      if (realize_dtm_cmd->parsed()) j["splits"] = io::to_json(split_decomposition(r), r.labels);
      emit_dot(io::to_dot(r));
      emit(j);
    } else if (evaluate->parsed()) {
      emit(io::to_json(evaluate_realization(io::realization_from_json(io::read_json_file(realization_path)))));
    } else if (retract->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto p = io::point_from_json(io::read_json_file(point_path), mu.ground());
      ExtPoint q = retract_to_tight_span(mu, p);
      if (target != "T") q = retract_to_qplus(mu, q);
      if (target == "Section") q = retract_to_section(mu, q);
      emit({{"input_class", std::string(membership_name(classify_membership(mu, p)))},
            {"point", io::to_json(q, mu.ground())},
            {"class", std::string(membership_name(classify_membership(mu, q)))},
            {"moved", to_string(dinf(q, p))}});
    } else if (geodesic->parsed()) {
      const auto mu = detail::load_distance(dist_path);
      const auto p = io::point_from_json(io::read_json_file(from_path), mu.ground());
      const auto q = io::point_from_json(io::read_json_file(to_path), mu.ground());
      const auto pl = geodesic_polyline(mu, p, q, steps, space == "T" ? GeodesicSpace::TightSpan : GeodesicSpace::Qplus);
      Json j = io::to_json(pl, mu.ground());
      j["distance"] = to_string(dinf(p, q));
      emit(j);
    } else if (flow_max->parsed() || flow_dual->parsed() || flow_verify->parsed()) {
      const auto net = io::network_from_json(io::read_json_file(net_path));
      const auto mu = align_to_terminals(net, detail::load_distance(dist_path));
      if (flow_max->parsed()) {
        const auto r = max_multiflow(net, mu);
        emit({{"value", to_string(r.value)}, {"paths", io::to_json(r.flow, net)}});
      } else if (flow_dual->parsed()) {
        const auto r = dual_metric_lp(net, mu);
        emit({{"value", to_string(r.value)}, {"extension", io::to_json(r.extension.d)}});
      } else {
        const auto rep = verify_minmax(net, mu, mode == "T" ? MinMaxMode::T : MinMaxMode::Q);
        emit(io::to_json(rep, net, mu.ground()));
      }
    } else if (decompose->parsed()) {
      const auto net = io::network_from_json(io::read_json_file(net_path));
      const auto cycles = eulerian_decompose(net);
      if (!cycles) fail(Errc::NotEulerian, "capacity-weighted in-degree differs from out-degree somewhere");
      emit({{"eulerian", true}, {"cycles", io::to_json(*cycles, net)}});
    } else if (gen_dist->parsed()) {
      Rng rng(seed);
      emit(io::to_json(metric ? random_metric(n, rng) : random_distance(n, rng)));
    } else if (gen_real->parsed()) {
      const auto k = kind == "directed_path" ? RealizationKind::DirectedPath
                     : kind == "path_subtrees" ? RealizationKind::PathSubtrees
                                               : RealizationKind::Singleton;
      emit(io::to_json(random_realization(k, n, seed)));
    }
  } catch (const Error& e) {
    out << io::error_json(e).dump() << "\n";
    err << e.name() << ": " << e.what() << "\n";
    return e.code() == Errc::UsageError ? 2 : 1;
  }
  return 0;
}

}  // namespace dtspan::cli
