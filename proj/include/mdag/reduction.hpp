#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/simplicial.hpp"

namespace mdag {

struct ReductionStep {
  std::string rule;  // "exogenize" or "remove-redundant"
  NodeId target;
  std::vector<std::pair<NodeId, NodeKind>> nodes_after;
  std::set<Edge> edges_after;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

template <class G>
struct Reduced {
  G graph;
  ReductionTrace trace;
};

/// Makes the latent node u exogenous: every parent of u is wired to every
/// child of u, then all edges into u are dropped. Realizable distributions
/// are unchanged.
template <class G>
G exogenize(const G& g, const NodeId& u) {
  if (!g.has_node(u)) throw GraphError("unknown node '" + u + "'");
  if (g.kind(u) != NodeKind::Latent) throw GraphError("node '" + u + "' is not latent");
  auto pa = g.parents(u);
  if (pa.empty()) throw GraphError("latent '" + u + "' is already exogenous");
  auto ch = g.children(u);
  std::set<Edge> edges = g.edges();
  for (const auto& p : pa) {
    edges.erase({p, u});
    for (const auto& c : ch) edges.insert({p, c});
  }
  return G(g.nodes(), std::move(edges));
}

namespace detail {

template <class G>
Reduced<G> exog_all_traced(const G& g) {
  Reduced<G> out{g, {}};
  for (;;) {
    // first endogenous latent in topological order; the fixed point does not
    // depend on this choice
    const auto& core = out.graph.core();
    auto topo = core.topo_order();
    NodeId pick;
    for (auto i : topo) {
      if (core.nodes()[i].second == NodeKind::Latent && !core.parent_indices(i).empty()) {
        pick = core.name(i);
        break;
      }
    }
    if (pick.empty()) break;
    out.graph = exogenize(out.graph, pick);
    out.trace.steps.push_back({"exogenize", pick, out.graph.nodes(), out.graph.edges()});
  }
  return out;
}

template <class G>
Reduced<G> remove_redundant_traced(const G& g) {
  for (const auto& u : g.latent_nodes())
    if (!g.parents(u).empty())
      throw GraphError("latent '" + u + "' is not exogenous");

  // Latents with at most one child carry no shareable randomness and are
  // dropped outright. Among the rest, u is redundant when a surviving latent
  // covers its children; survivors are chosen larger-children-set first,
  // then lexicographically smaller id.
  std::vector<std::pair<std::set<NodeId>, NodeId>> lat;
  for (const auto& u : g.latent_nodes()) {
    auto ch = g.children(u);
    lat.push_back({std::set<NodeId>(ch.begin(), ch.end()), u});
  }
  std::sort(lat.begin(), lat.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.second < b.second;
  });
  std::vector<std::pair<std::set<NodeId>, NodeId>> kept;
  std::vector<NodeId> removed;
  for (const auto& [ch, u] : lat) {
    bool drop = ch.size() <= 1;
    for (const auto& [kch, kid] : kept) {
      if (drop) break;
      drop = std::includes(kch.begin(), kch.end(), ch.begin(), ch.end());
      (void)kid;
    }
    if (drop)
      removed.push_back(u);
    else
      kept.push_back({ch, u});
  }
  std::sort(removed.begin(), removed.end());

  Reduced<G> out{g, {}};
  for (const auto& u : removed) {
    std::vector<std::pair<NodeId, NodeKind>> nodes;
    for (const auto& nk : out.graph.nodes())
      if (nk.first != u) nodes.push_back(nk);
    std::set<Edge> edges;
    for (const auto& e : out.graph.edges())
      if (e.first != u && e.second != u) edges.insert(e);
    out.graph = G(std::move(nodes), std::move(edges));
    out.trace.steps.push_back({"remove-redundant", u, out.graph.nodes(), out.graph.edges()});
  }
  return out;
}

}  // namespace detail

template <class G>
G exog_all(const G& g) {
  return detail::exog_all_traced(g).graph;
}

template <class G>
G remove_redundant(const G& g) {
  return detail::remove_redundant_traced(g).graph;
}

/// Exogenizes every latent, then removes the redundant ones. The result is a
/// fixed point: applying the map again changes nothing.
template <class G>
Reduced<G> re_reduce(const G& g) {
  auto ex = detail::exog_all_traced(g);
  auto rr = detail::remove_redundant_traced(ex.graph);
  for (auto& s : rr.trace.steps) ex.trace.steps.push_back(std::move(s));
  return {std::move(rr.graph), std::move(ex.trace)};
}

/// Forgets latent identity: the reduced graph's latents become faces. The
/// directed part keeps exactly the visible-to-visible edges.
inline Mdag lnodes_to_faces(const Pdag& g) {
  Pdag r = re_reduce(g).graph;
  std::vector<NodeId> nodes = r.visible_nodes();
  std::set<Edge> edges;
  for (const auto& e : r.edges())
    if (r.kind(e.first) == NodeKind::Visible && r.kind(e.second) == NodeKind::Visible)
      edges.insert(e);
  std::set<Face> gens;
  for (const auto& u : r.latent_nodes()) {
    auto ch = r.children(u);
    gens.insert(Face(ch.begin(), ch.end()));
  }
  return Mdag(nodes, std::move(edges), SimplicialComplex(nodes, gens));
}

inline ThreeMdag lnodes_to_faces(const ThreePdag& g) {
  ThreePdag r = re_reduce(g).graph;
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  std::vector<NodeId> ids;
  for (const auto& nk : r.nodes()) {
    if (nk.second == NodeKind::Latent) continue;
    nodes.push_back(nk);
    ids.push_back(nk.first);
  }
  std::set<Edge> edges;
  for (const auto& e : r.edges())
    if (r.kind(e.first) != NodeKind::Latent && r.kind(e.second) != NodeKind::Latent)
      edges.insert(e);
  std::set<Face> gens;
  for (const auto& u : r.latent_nodes()) {
    auto ch = r.children(u);
    gens.insert(Face(ch.begin(), ch.end()));
  }
  return ThreeMdag(std::move(nodes), std::move(edges), SimplicialComplex(ids, gens));
}

/// One fresh exogenous latent per facet of two or more members, wired to the
/// facet. Singleton facets need no latent. The output is already reduced.
inline Pdag canonical_pdag(const Mdag& m) {
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (const auto& v : m.nodes()) nodes.push_back({v, NodeKind::Visible});
  std::set<Edge> edges = m.edges();
  for (const auto& f : m.facets()) {
    if (f.size() < 2) continue;
    NodeId lat = "λ";
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) lat += "_";
      lat += f[i];
    }
    for (const auto& [id, k] : nodes) {
      (void)k;
      if (id == lat) throw GraphError("latent name '" + lat + "' collides with an existing node");
    }
    nodes.push_back({lat, NodeKind::Latent});
    for (const auto& v : f) edges.insert({lat, v});
  }
  return Pdag(std::move(nodes), std::move(edges));
}

}  // namespace mdag
