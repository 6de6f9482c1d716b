#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdag/dot.hpp"
#include "mdag/json_io.hpp"
#include "mdag/models.hpp"
#include "mdag/order.hpp"
#include "mdag/parallel.hpp"
#include "mdag/reduction.hpp"
#include "mdag/swig.hpp"

namespace mdag::cli {

namespace detail {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot read '" + path + "'");
  Json j;
  in >> j;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write '" + path + "'");
  out << text;
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump() << "\n"; }

}  // namespace detail

/// Parses and dispatches one invocation. Streams are injected so the whole
/// surface is testable in-process. Exit status: 0 success, 1 domain error
/// (error JSON on the error stream), 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mDAG probing toolkit: enumeration, reduction, splitting, shadows, witnesses"};
  app.require_subcommand(1);
  unsigned long long seed = 0;  // reserved for randomized sweeps; fixed default
  app.add_option("--seed", seed, "seed for randomized sweeps")->capture_default_str();

  std::size_t n = 0;
  bool counts = false, one_do = false;
  std::string in_path, g_path, h_path, out_path, catalog_path, format = "json";
  std::string graph_path, params_path, fc_path, dataset_path;
  std::string subset_csv, do_csv, values_csv, a_csv, b_csv, c_csv;

  auto* enumerate = app.add_subcommand("enumerate", "count or list all mDAGs over n nodes");
  enumerate->add_option("--n", n, "node count")->required();
  enumerate->add_flag("--counts", counts, "print the three cardinalities");
  enumerate->add_option("--catalog", catalog_path, "write the catalog as JSON lines");

  auto* reduce = app.add_subcommand("reduce", "exogenize and prune the latents of a graph");
  reduce->add_option("--in", in_path, "graph JSON file")->required();

  auto* tomdag = app.add_subcommand("to-mdag", "project a graph onto its mDAG");
  tomdag->add_option("--in", in_path, "graph JSON file")->required();

  auto* canonical = app.add_subcommand("canonical", "canonical graph of an mDAG");
  canonical->add_option("--in", in_path, "mDAG JSON file")->required();

  auto* split_cmd = app.add_subcommand("split", "split visible nodes into flat/sharp pairs");
  split_cmd->add_option("--in", in_path, "graph JSON file")->required();
  split_cmd->add_option("--subset", subset_csv, "comma-separated nodes to split (default all)");

  auto* dominates = app.add_subcommand("dominates", "structural dominance of two mDAGs");
  dominates->set_help_flag("--help", "print help");  // frees -h/--h for the second graph
  dominates->add_option("--g", g_path, "mDAG JSON file")->required();
  dominates->add_option("--h", h_path, "mDAG JSON file")->required();

  auto* hasse_cmd = app.add_subcommand("hasse", "cover relation of the n-node catalog");
  hasse_cmd->add_option("--n", n, "node count")->required();
  hasse_cmd->add_option("--out", out_path, "output file")->required();
  hasse_cmd->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  auto* simulate = app.add_subcommand("simulate", "generate every observe-or-do pattern");
  simulate->add_option("--graph", graph_path, "graph JSON file")->required();
  simulate->add_option("--params", params_path, "parameters JSON file")->required();
  simulate->add_flag("--one-do", one_do, "only the all-zeros do value per set");
  simulate->add_option("--out", out_path, "output dataset file")->required();

  auto* shadow = app.add_subcommand("shadow", "one pattern of a full conditional");
  shadow->add_option("--fc", fc_path, "full conditional JSON file")->required();
  shadow->add_option("--do", do_csv, "comma-separated intervened nodes");
  shadow->add_option("--values", values_csv, "comma-separated forced values");

  auto* reconstruct = app.add_subcommand("reconstruct", "full conditional from binary patterns");
  reconstruct->add_option("--dataset", dataset_path, "dataset JSON file")->required();

  auto* witness = app.add_subcommand("witness", "dominance certificate or refuting dataset");
  witness->set_help_flag("--help", "print help");
  witness->add_option("--g", g_path, "mDAG JSON file")->required();
  witness->add_option("--h", h_path, "mDAG JSON file")->required();

  auto* dsep = app.add_subcommand("dsep", "d-separation verdict");
  dsep->add_option("--in", in_path, "graph JSON file")->required();
  dsep->add_option("--a", a_csv, "first node set")->required();
  dsep->add_option("--b", b_csv, "second node set")->required();
  dsep->add_option("--c", c_csv, "conditioning set");

  auto* commute = app.add_subcommand("commute-check", "projection and splitting commute");
  commute->add_option("--in", in_path, "graph JSON file")->required();

  std::vector<const char*> argv;
  argv.push_back("mdag-probe");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (enumerate->parsed()) {
      if (n < 1 || n > 5) throw GraphError("enumeration supports 1 <= n <= 5");
      MdagCatalog cat = enumerate_mdags(n);
      if (!catalog_path.empty()) {
        std::string lines;
        for (std::size_t i = 0; i < cat.size(); ++i) lines += catalog_jsonl_line(cat, i) + "\n";
        detail::write_text_file(catalog_path, lines);
      }
      detail::emit(out, Json{{"directed", cat.directed_count()},
                             {"complexes", cat.complex_count()},
                             {"mdags", cat.size()}});
      return 0;
    }

    if (reduce->parsed()) {
      Json j = detail::read_json_file(in_path);
      if (json_has_input_nodes(j))
        detail::emit(out, to_json(re_reduce(three_pdag_from_json(j)).graph));
      else
        detail::emit(out, to_json(re_reduce(pdag_from_json(j)).graph));
      return 0;
    }

    if (tomdag->parsed()) {
      Json j = detail::read_json_file(in_path);
      if (json_has_input_nodes(j))
        detail::emit(out, to_json(lnodes_to_faces(three_pdag_from_json(j))));
      else
        detail::emit(out, to_json(lnodes_to_faces(pdag_from_json(j))));
      return 0;
    }

    if (canonical->parsed()) {
      detail::emit(out, to_json(canonical_pdag(mdag_from_json(detail::read_json_file(in_path)))));
      return 0;
    }

    if (split_cmd->parsed()) {
      Json j = detail::read_json_file(in_path);
      std::set<NodeId> subset;
      for (const auto& v : detail::split_csv(subset_csv)) subset.insert(v);
      if (json_has_input_nodes(j)) {
        ThreePdag g = three_pdag_from_json(j);
        if (subset.empty()) throw GraphError("--subset is required for a graph with inputs");
        detail::emit(out, to_json(split_subset(g, subset)));
      } else {
        Pdag g = pdag_from_json(j);
        detail::emit(out, to_json(subset.empty() ? split(g) : split_subset(g, subset)));
      }
      return 0;
    }

    if (dominates->parsed()) {
      Mdag g = mdag_from_json(detail::read_json_file(g_path));
      Mdag h = mdag_from_json(detail::read_json_file(h_path));
      detail::emit(out, Json{{"dominates", structurally_dominates(g, h)}});
      return 0;
    }

    if (hasse_cmd->parsed()) {
      if (n < 1 || n > 5) throw GraphError("enumeration supports 1 <= n <= 5");
      MdagCatalog cat = enumerate_mdags(n);
      HasseDiagram h = hasse(cat);
      detail::write_text_file(out_path, format == "dot" ? to_dot(h) : to_json(h).dump() + "\n");
      detail::emit(out, Json{{"elements", h.element_count}, {"covers", h.covers.size()}});
      return 0;
    }

    if (simulate->parsed()) {
      Pdag g = pdag_from_json(detail::read_json_file(graph_path));
      Params par = params_from_json(detail::read_json_file(params_path));
      ProbeDataset ds = generate_all_patterns(g, par, cards_of(par), one_do);
      detail::write_text_file(out_path, to_json(ds).dump() + "\n");
      detail::emit(out, Json{{"patterns", ds.patterns.size()}});
      return 0;
    }

    if (shadow->parsed()) {
      FullConditional fc = full_conditional_from_json(detail::read_json_file(fc_path));
      auto nodes = detail::split_csv(do_csv);
      auto values = detail::split_csv(values_csv);
      if (nodes.size() != values.size())
        throw GraphError("--do and --values must have the same length");
      Pattern p;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        p.do_values[nodes[i]] = std::stoi(values[i]);
      for (const auto& v : fc.vars)
        if (p.do_values.count(v)) p.do_set.push_back(v);
      if (p.do_set.size() != p.do_values.size()) throw GraphError("--do mentions unknown node");
      p.table = do_pattern_shadow(fc, p.do_values);
      detail::emit(out, to_json(p));
      return 0;
    }

    if (reconstruct->parsed()) {
      detail::emit(out,
                   to_json(reconstruct_binary(dataset_from_json(detail::read_json_file(dataset_path)))));
      return 0;
    }

    if (witness->parsed()) {
      Mdag g = mdag_from_json(detail::read_json_file(g_path));
      Mdag h = mdag_from_json(detail::read_json_file(h_path));
      detail::emit(out, to_json(dominance_witness(g, h)));
      return 0;
    }

    if (dsep->parsed()) {
      Json j = detail::read_json_file(in_path);
      DsepQuery q;
      for (const auto& v : detail::split_csv(a_csv)) q.a.insert(v);
      for (const auto& v : detail::split_csv(b_csv)) q.b.insert(v);
      for (const auto& v : detail::split_csv(c_csv)) q.c.insert(v);
      bool sep = json_has_input_nodes(j) ? d_separated(three_pdag_from_json(j), q)
                                         : d_separated(pdag_from_json(j), q);
      Json out_j = to_json(q);
      out_j["separated"] = sep;
      detail::emit(out, out_j);
      return 0;
    }

    if (commute->parsed()) {
      Pdag g = pdag_from_json(detail::read_json_file(in_path));
      detail::emit(out, Json{{"commutes", check_commutation(g)}});
      return 0;
    }
  } catch (const std::exception& e) {
    detail::emit(err, Json{{"error", e.what()}});
    return 1;
  }

  err << "no subcommand\n";
  return 2;
}

}  // namespace mdag::cli
