#pragma once

#include <set>
#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/reduction.hpp"

namespace mdag {

/// Naming scheme for the two copies a split node leaves behind. The flat copy
/// keeps the node's parents and is childless; the sharp copy keeps the
/// children and becomes an exogenous input.
struct SplitNaming {
  static NodeId flat(const NodeId& v) { return v + "_flat"; }
  static NodeId sharp(const NodeId& v) { return v + "_sharp"; }
};

namespace detail {

template <class G>
ThreePdag split_subset_impl(const G& g, const std::set<NodeId>& a) {
  for (const auto& v : a) {
    if (!g.has_node(v)) throw GraphError("unknown node '" + v + "'");
    if (g.kind(v) != NodeKind::Visible)
      throw GraphError("cannot split non-visible node '" + v + "'");
  }
  std::set<NodeId> taken;
  for (const auto& [id, k] : g.nodes()) {
    (void)k;
    if (!a.count(id)) taken.insert(id);
  }
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (const auto& [id, k] : g.nodes()) {
    if (a.count(id)) {
      for (const NodeId& nn : {SplitNaming::flat(id), SplitNaming::sharp(id)})
        if (taken.count(nn))
          throw GraphError("split name '" + nn + "' collides with an existing node");
      nodes.push_back({SplitNaming::flat(id), NodeKind::Visible});
      nodes.push_back({SplitNaming::sharp(id), NodeKind::Input});
    } else {
      nodes.push_back({id, k});
    }
  }
  std::set<Edge> edges;
  for (const auto& [x, y] : g.edges()) {
    NodeId src = a.count(x) ? SplitNaming::sharp(x) : x;
    NodeId dst = a.count(y) ? SplitNaming::flat(y) : y;
    edges.insert({src, dst});
  }
  return ThreePdag(std::move(nodes), std::move(edges));
}

}  // namespace detail

/// Splits each node of A into a childless flat copy (keeping the parents) and
/// a parentless sharp input (keeping the children). Flat immediately precedes
/// sharp at the original position.
inline ThreePdag split_subset(const Pdag& g, const std::set<NodeId>& a) {
  return detail::split_subset_impl(g, a);
}
inline ThreePdag split_subset(const ThreePdag& g, const std::set<NodeId>& a) {
  return detail::split_subset_impl(g, a);
}

/// Full split: every visible node of g.
inline ThreePdag split(const Pdag& g) {
  auto vis = g.visible_nodes();
  return split_subset(g, std::set<NodeId>(vis.begin(), vis.end()));
}

/// Full split of an mDAG: edges a->b become a_sharp->b_flat, faces move to
/// the flat copies, sharp inputs sit in singleton faces.
inline ThreeMdag split(const Mdag& m) {
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  std::vector<NodeId> ids;
  for (const auto& v : m.nodes()) {
    nodes.push_back({SplitNaming::flat(v), NodeKind::Visible});
    nodes.push_back({SplitNaming::sharp(v), NodeKind::Input});
    ids.push_back(SplitNaming::flat(v));
    ids.push_back(SplitNaming::sharp(v));
  }
  std::set<Edge> edges;
  for (const auto& [x, y] : m.edges()) edges.insert({SplitNaming::sharp(x), SplitNaming::flat(y)});
  std::set<Face> gens;
  for (const auto& f : m.facets()) {
    Face nf;
    for (const auto& v : f) nf.push_back(SplitNaming::flat(v));
    gens.insert(nf);
  }
  return ThreeMdag(std::move(nodes), std::move(edges), SimplicialComplex(ids, gens));
}

/// Re-kinds every input node as visible. Inputs are parentless, so the result
/// is a plain pDAG over the same nodes and edges.
inline Pdag convert_i_to_v(const ThreePdag& s) {
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (const auto& [id, k] : s.nodes())
    nodes.push_back({id, k == NodeKind::Input ? NodeKind::Visible : k});
  return Pdag(std::move(nodes), s.edges());
}

inline Mdag convert_i_to_v(const ThreeMdag& s) {
  std::vector<NodeId> nodes;
  for (const auto& [id, k] : s.nodes()) {
    (void)k;
    nodes.push_back(id);
  }
  std::set<Face> gens(s.facets().begin(), s.facets().end());
  return Mdag(nodes, s.edges(), SimplicialComplex(nodes, gens));
}

/// Splitting first and forgetting latents second agrees with the other order.
inline bool check_commutation(const Pdag& g) {
  ThreeMdag via_split = lnodes_to_faces(split(g));
  ThreeMdag via_faces = split(lnodes_to_faces(g));
  return via_split == via_faces;
}

}  // namespace mdag
