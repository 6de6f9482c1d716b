#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/models.hpp"
#include "mdag/order.hpp"
#include "mdag/reduction.hpp"
#include "mdag/simplicial.hpp"
#include "mdag/table.hpp"

// Canonical JSON round-trips for every value the CLI reads or writes. All
// objects are emitted with sorted keys (nlohmann's default map backing), so
// identical values serialize byte-identically.

namespace mdag {

using Json = nlohmann::json;

inline Json to_json(const Rational& r) { return r.str(); }
inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<std::int64_t>(j.get<std::int64_t>()));
  return Rational::from_string(j.get<std::string>());
}

namespace detail {

inline Json kinded_nodes_json(const std::vector<std::pair<NodeId, NodeKind>>& nodes) {
  Json arr = Json::array();
  for (const auto& [id, kind] : nodes) arr.push_back({{"id", id}, {"kind", kind_name(kind)}});
  return arr;
}

inline std::vector<std::pair<NodeId, NodeKind>> kinded_nodes_from_json(const Json& arr) {
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (const auto& n : arr) {
    std::string k = n.at("kind").get<std::string>();
    NodeKind kind;
    if (k == "visible")
      kind = NodeKind::Visible;
    else if (k == "latent")
      kind = NodeKind::Latent;
    else if (k == "input")
      kind = NodeKind::Input;
    else
      throw GraphError("unknown node kind '" + k + "'");
    nodes.push_back({n.at("id").get<NodeId>(), kind});
  }
  return nodes;
}

inline Json edges_json(const std::set<Edge>& edges) {
  Json arr = Json::array();
  for (const auto& e : edges) arr.push_back({e.first, e.second});
  return arr;
}

inline std::set<Edge> edges_from_json(const Json& arr) {
  std::set<Edge> edges;
  for (const auto& e : arr) edges.insert({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
  return edges;
}

inline Json faces_json(const std::set<Face>& faces) {
  Json arr = Json::array();
  for (const auto& f : faces) arr.push_back(f);
  return arr;
}

inline std::set<Face> faces_from_json(const Json& arr) {
  std::set<Face> faces;
  for (const auto& f : arr) faces.insert(f.get<Face>());
  return faces;
}

}  // namespace detail

inline Json to_json(const Pdag& g) {
  return {{"nodes", detail::kinded_nodes_json(g.nodes())}, {"edges", detail::edges_json(g.edges())}};
}

inline Json to_json(const ThreePdag& g) {
  return {{"nodes", detail::kinded_nodes_json(g.nodes())}, {"edges", detail::edges_json(g.edges())}};
}

inline Pdag pdag_from_json(const Json& j) {
  return Pdag(detail::kinded_nodes_from_json(j.at("nodes")),
              detail::edges_from_json(j.at("edges")));
}

inline ThreePdag three_pdag_from_json(const Json& j) {
  return ThreePdag(detail::kinded_nodes_from_json(j.at("nodes")),
                   detail::edges_from_json(j.at("edges")));
}

/// True when the graph JSON declares at least one input node.
inline bool json_has_input_nodes(const Json& j) {
  for (const auto& n : j.at("nodes"))
    if (n.is_object() && n.at("kind").get<std::string>() == "input") return true;
  return false;
}

inline Json to_json(const Mdag& m) {
  return {{"nodes", m.nodes()},
          {"edges", detail::edges_json(m.edges())},
          {"facets", detail::faces_json(m.facets())}};
}

inline Mdag mdag_from_json(const Json& j) {
  auto nodes = j.at("nodes").get<std::vector<NodeId>>();
  auto facets = detail::faces_from_json(j.at("facets"));
  return Mdag(nodes, detail::edges_from_json(j.at("edges")), SimplicialComplex(nodes, facets));
}

inline Json to_json(const ThreeMdag& m) {
  return {{"nodes", detail::kinded_nodes_json(m.nodes())},
          {"edges", detail::edges_json(m.edges())},
          {"facets", detail::faces_json(m.facets())}};
}

inline ThreeMdag three_mdag_from_json(const Json& j) {
  auto nodes = detail::kinded_nodes_from_json(j.at("nodes"));
  std::vector<NodeId> ids;
  for (const auto& [id, kind] : nodes) {
    (void)kind;
    ids.push_back(id);
  }
  auto facets = detail::faces_from_json(j.at("facets"));
  return ThreeMdag(nodes, detail::edges_from_json(j.at("edges")),
                   SimplicialComplex(ids, facets));
}

inline Json to_json(const ReductionTrace& t) {
  Json arr = Json::array();
  for (const auto& s : t.steps) {
    Json nodes = Json::array();
    for (const auto& [id, kind] : s.nodes_after)
      nodes.push_back({{"id", id}, {"kind", kind_name(kind)}});
    arr.push_back({{"rule", s.rule},
                   {"target", s.target},
                   {"nodes", nodes},
                   {"edges", detail::edges_json(s.edges_after)}});
  }
  return arr;
}

inline Json to_json(const Mechanism& m) {
  Json dist = Json::array();
  for (const auto& p : m.error_dist) dist.push_back(p.str());
  return {{"parents", m.parents},     {"parent_cards", m.parent_cards},
          {"card", m.card},           {"error_card", m.error_card},
          {"response", m.response},   {"error_dist", dist}};
}

inline Mechanism mechanism_from_json(const Json& j) {
  Mechanism m;
  m.parents = j.at("parents").get<std::vector<NodeId>>();
  m.parent_cards = j.at("parent_cards").get<std::vector<int>>();
  m.card = j.at("card").get<int>();
  m.error_card = j.at("error_card").get<int>();
  m.response = j.at("response").get<std::vector<int>>();
  for (const auto& p : j.at("error_dist")) m.error_dist.push_back(rational_from_json(p));
  return m;
}

inline Json to_json(const Params& par) {
  Json mech = Json::object();
  for (const auto& [id, m] : par.mech) mech[id] = to_json(m);
  return {{"mechanisms", mech}};
}

inline Params params_from_json(const Json& j) {
  Params par;
  for (const auto& [id, m] : j.at("mechanisms").items()) par.mech[id] = mechanism_from_json(m);
  return par;
}

namespace detail {

inline std::string assignment_key(const std::vector<int>& a) {
  std::string key;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(a[i]);
  }
  return key;
}

inline std::vector<int> assignment_from_key(const std::string& key) {
  std::vector<int> a;
  if (key.empty()) return a;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = key.find(',', start);
    a.push_back(std::stoi(key.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return a;
}

}  // namespace detail

/// Tables serialize as objects keyed by the comma-joined assignment in the
/// table's variable order.
inline Json table_values_json(const Table& t) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < t.values.size(); ++i)
    obj[detail::assignment_key(t.assignment(i))] = t.values[i].str();
  return obj;
}

inline Json to_json(const Pattern& p) {
  Json values = Json::object();
  for (const auto& [id, v] : p.do_values) values[id] = v;
  return {{"do", p.do_set}, {"values", values}, {"table", table_values_json(p.table)}};
}

inline Json to_json(const WitnessInfo& w) {
  if (w.kind == "chain")
    return {{"kind", w.kind}, {"cause", w.cause}, {"effect", w.effect}, {"pinned", w.pinned}};
  return {{"kind", w.kind}, {"members", w.members}, {"mix", w.mix.str()}};
}

inline Json to_json(const ProbeDataset& ds) {
  Json cards = Json::object();
  for (const auto& [id, c] : ds.cards) cards[id] = c;
  Json patterns = Json::array();
  for (const auto& p : ds.patterns) patterns.push_back(to_json(p));
  Json j = {{"vars", ds.vars}, {"cards", cards}, {"patterns", patterns}};
  if (ds.witness) j["witness"] = to_json(*ds.witness);
  return j;
}

inline ProbeDataset dataset_from_json(const Json& j) {
  ProbeDataset ds;
  ds.vars = j.at("vars").get<std::vector<NodeId>>();
  for (const auto& [id, c] : j.at("cards").items()) ds.cards[id] = c.get<int>();
  for (const auto& pj : j.at("patterns")) {
    Pattern p;
    p.do_set = pj.at("do").get<std::vector<NodeId>>();
    for (const auto& [id, v] : pj.at("values").items()) p.do_values[id] = v.get<int>();
    std::vector<NodeId> kept;
    std::vector<int> cards;
    for (const auto& v : ds.vars)
      if (!p.do_values.count(v)) {
        kept.push_back(v);
        cards.push_back(ds.cards.at(v));
      }
    p.table = Table(kept, cards);
    for (const auto& [key, val] : pj.at("table").items())
      p.table.at(detail::assignment_from_key(key)) = rational_from_json(val);
    ds.patterns.push_back(std::move(p));
  }
  if (j.contains("witness")) {
    const Json& wj = j.at("witness");
    WitnessInfo w;
    w.kind = wj.at("kind").get<std::string>();
    if (w.kind == "chain") {
      w.cause = wj.at("cause").get<NodeId>();
      w.effect = wj.at("effect").get<NodeId>();
      w.pinned = wj.at("pinned").get<std::vector<NodeId>>();
    } else {
      w.members = wj.at("members").get<std::vector<NodeId>>();
      w.mix = rational_from_json(wj.at("mix"));
    }
    ds.witness = std::move(w);
  }
  return ds;
}

inline Json to_json(const FullConditional& fc) {
  Json values = Json::array();
  for (const auto& v : fc.table.values) values.push_back(v.str());
  return {{"vars", fc.vars},
          {"cards", fc.cards},
          {"layout", "sharps then flats in variable order, first variable most significant"},
          {"values", values}};
}

inline FullConditional full_conditional_from_json(const Json& j) {
  FullConditional fc;
  fc.vars = j.at("vars").get<std::vector<NodeId>>();
  fc.cards = j.at("cards").get<std::vector<int>>();
  std::vector<NodeId> tvars;
  std::vector<int> tcards;
  for (const auto& v : fc.vars) tvars.push_back(SplitNaming::sharp(v));
  for (int c : fc.cards) tcards.push_back(c);
  for (const auto& v : fc.vars) tvars.push_back(SplitNaming::flat(v));
  for (int c : fc.cards) tcards.push_back(c);
  fc.table = Table(tvars, tcards);
  const Json& values = j.at("values");
  if (values.size() != fc.table.values.size())
    throw GraphError("full conditional value array has wrong length");
  for (std::size_t i = 0; i < fc.table.values.size(); ++i)
    fc.table.values[i] = rational_from_json(values[i]);
  return fc;
}

inline Json to_json(const Verdict& v) {
  Json j = {{"status", verdict_name(v.status)}, {"detail", v.detail}};
  if (v.params) j["params"] = to_json(*v.params);
  return j;
}

inline Json to_json(const WitnessResult& r) {
  if (r.certificate) {
    return {{"dominates", true},
            {"certificate",
             {{"edges", detail::edges_json(r.certificate->edges)},
              {"faces", detail::faces_json(r.certificate->faces)}}}};
  }
  return {{"dominates", false},
          {"dataset", to_json(*r.dataset)},
          {"verdict", to_json(*r.verdict_for_g)},
          {"params", to_json(*r.params_for_h)}};
}

inline Json to_json(const HasseDiagram& h) {
  Json covers = Json::array();
  for (const auto& [lo, hi] : h.covers) covers.push_back({lo, hi});
  return {{"elements", h.element_count}, {"covers", covers}};
}

inline Json to_json(const DsepQuery& q) {
  return {{"a", std::vector<NodeId>(q.a.begin(), q.a.end())},
          {"b", std::vector<NodeId>(q.b.begin(), q.b.end())},
          {"c", std::vector<NodeId>(q.c.begin(), q.c.end())}};
}

inline DsepQuery dsep_query_from_json(const Json& j) {
  auto names = [](const Json& arr) {
    std::set<NodeId> out;
    for (const auto& v : arr) out.insert(v.get<NodeId>());
    return out;
  };
  return {names(j.at("a")), names(j.at("b")), names(j.at("c"))};
}

/// One catalog entry per line, stable index first.
inline std::string catalog_jsonl_line(const MdagCatalog& cat, std::size_t idx) {
  Mdag m = cat.entry(idx);
  Json j = {{"index", idx},
            {"nodes", m.nodes()},
            {"edges", detail::edges_json(m.edges())},
            {"facets", detail::faces_json(m.facets())}};
  return j.dump();
}

}  // namespace mdag
