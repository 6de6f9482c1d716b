#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/simplicial.hpp"

namespace mdag {

/// Directed structure over visible nodes plus a simplicial complex recording
/// which sets of nodes may share a latent common cause. The node sequence is
/// the temporal order; every edge runs forward in it.
class Mdag {
 public:
  Mdag(std::vector<NodeId> nodes, std::set<Edge> edges, SimplicialComplex complex)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), complex_(std::move(complex)) {
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!valid_node_id(nodes_[i])) throw GraphError("invalid node id '" + nodes_[i] + "'");
      if (!pos.emplace(nodes_[i], i).second)
        throw GraphError("duplicate node id '" + nodes_[i] + "'");
    }
    for (const auto& e : edges_) {
      if (!pos.count(e.first) || !pos.count(e.second))
        throw GraphError("edge (" + e.first + "," + e.second + ") references unknown node");
      if (pos.at(e.first) >= pos.at(e.second))
        throw GraphError("edge (" + e.first + "," + e.second + ") violates the temporal order");
    }
    if (complex_.ground() != nodes_)
      throw GraphError("complex ground set must equal the node sequence");
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const SimplicialComplex& complex() const { return complex_; }
  const std::set<Face>& facets() const { return complex_.facets(); }
  std::set<Face> faces() const { return complex_.faces(); }
  bool has_edge(const NodeId& a, const NodeId& b) const { return edges_.count({a, b}) != 0; }

  friend bool operator==(const Mdag& a, const Mdag& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.complex_ == b.complex_;
  }
  friend bool operator!=(const Mdag& a, const Mdag& b) { return !(a == b); }

 private:
  std::vector<NodeId> nodes_;
  std::set<Edge> edges_;
  SimplicialComplex complex_;
};

/// Mdag whose node set is partitioned into visible and input nodes. Inputs
/// have no parents and sit only in singleton faces.
class ThreeMdag {
 public:
  ThreeMdag(std::vector<std::pair<NodeId, NodeKind>> nodes, std::set<Edge> edges,
            SimplicialComplex complex)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), complex_(std::move(complex)) {
    std::map<NodeId, std::size_t> pos;
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& [id, kind] = nodes_[i];
      if (!valid_node_id(id)) throw GraphError("invalid node id '" + id + "'");
      if (kind == NodeKind::Latent) throw GraphError("latent node '" + id + "' in a 3-mDAG");
      if (!pos.emplace(id, i).second) throw GraphError("duplicate node id '" + id + "'");
      ids.push_back(id);
    }
    for (const auto& e : edges_) {
      if (!pos.count(e.first) || !pos.count(e.second))
        throw GraphError("edge (" + e.first + "," + e.second + ") references unknown node");
      if (pos.at(e.first) >= pos.at(e.second))
        throw GraphError("edge (" + e.first + "," + e.second + ") violates the temporal order");
      if (nodes_[pos.at(e.second)].second == NodeKind::Input)
        throw GraphError("input node '" + e.second + "' has a parent");
    }
    if (complex_.ground() != ids)
      throw GraphError("complex ground set must equal the node sequence");
    for (const auto& f : complex_.facets()) {
      if (f.size() < 2) continue;
      for (const auto& m : f)
        if (nodes_[pos.at(m)].second == NodeKind::Input)
          throw GraphError("input node '" + m + "' belongs to a non-singleton face");
    }
  }

  const std::vector<std::pair<NodeId, NodeKind>>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  const SimplicialComplex& complex() const { return complex_; }
  const std::set<Face>& facets() const { return complex_.facets(); }
  std::set<Face> faces() const { return complex_.faces(); }

  NodeKind kind(const NodeId& id) const {
    for (const auto& [n, k] : nodes_)
      if (n == id) return k;
    throw GraphError("unknown node '" + id + "'");
  }
  std::vector<NodeId> visible_nodes() const {
    std::vector<NodeId> out;
    for (const auto& [n, k] : nodes_)
      if (k == NodeKind::Visible) out.push_back(n);
    return out;
  }
  std::vector<NodeId> input_nodes() const {
    std::vector<NodeId> out;
    for (const auto& [n, k] : nodes_)
      if (k == NodeKind::Input) out.push_back(n);
    return out;
  }

  friend bool operator==(const ThreeMdag& a, const ThreeMdag& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.complex_ == b.complex_;
  }
  friend bool operator!=(const ThreeMdag& a, const ThreeMdag& b) { return !(a == b); }

 private:
  std::vector<std::pair<NodeId, NodeKind>> nodes_;
  std::set<Edge> edges_;
  SimplicialComplex complex_;
};

}  // namespace mdag
