#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdag {

using NodeId = std::string;
using Edge = std::pair<NodeId, NodeId>;

enum class NodeKind { Visible, Latent, Input };

inline std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Visible: return "visible";
    case NodeKind::Latent: return "latent";
    case NodeKind::Input: return "input";
  }
  return "?";
}

/// Thrown by constructors and operations on domain rule violations.
class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }
};

inline bool valid_node_id(const NodeId& id) {
  if (id.empty()) return false;
  for (unsigned char c : id)
    if (std::isspace(c)) return false;
  return true;
}

namespace detail {

/// Shared directed-graph core used by Pdag and ThreePdag. Nodes carry a kind
/// and a declaration position; the visible subsequence of the declaration is
/// the temporal order.
class DagCore {
 public:
  DagCore() = default;
  DagCore(std::vector<std::pair<NodeId, NodeKind>> nodes, std::set<Edge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].first] = i;
    parents_.resize(nodes_.size());
    children_.resize(nodes_.size());
    for (const auto& e : edges_) {
      parents_[index_.at(e.second)].push_back(index_.at(e.first));
      children_[index_.at(e.first)].push_back(index_.at(e.second));
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    for (auto& c : children_) std::sort(c.begin(), c.end());
  }

  /// Structural checks shared by all graph flavours. Kind-specific rules are
  /// layered on top by the owning type.
  static void check_common(const std::vector<std::pair<NodeId, NodeKind>>& nodes,
                           const std::set<Edge>& edges, ValidationReport& rep) {
    std::set<NodeId> seen;
    for (const auto& [id, kind] : nodes) {
      (void)kind;
      if (!valid_node_id(id)) rep.violations.push_back("invalid node id '" + id + "'");
      if (!seen.insert(id).second) rep.violations.push_back("duplicate node id '" + id + "'");
    }
    for (const auto& e : edges) {
      if (!seen.count(e.first) || !seen.count(e.second)) {
        rep.violations.push_back("edge (" + e.first + "," + e.second + ") references unknown node");
      } else if (e.first == e.second) {
        rep.violations.push_back("self-loop at '" + e.first + "'");
      }
    }
    if (!rep.ok()) return;

    DagCore g(nodes, edges);
    if (g.has_cycle()) {
      rep.violations.push_back("directed cycle present");
      return;
    }
    // Temporal consistency of the declaration order: a visible node may not
    // be an ancestor (even through latent mediaries) of an earlier visible.
    auto order_pos = [&](std::size_t i) { return i; };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].second == NodeKind::Latent) continue;
      auto desc = g.descendants_of(i);
      for (std::size_t j : desc) {
        if (nodes[j].second == NodeKind::Latent) continue;
        if (order_pos(j) < order_pos(i)) {
          rep.violations.push_back("temporal order violated: '" + nodes[j].first +
                                   "' is declared before its ancestor '" + nodes[i].first + "'");
        }
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::pair<NodeId, NodeKind>>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }

  bool has_node(const NodeId& id) const { return index_.count(id) != 0; }
  std::size_t index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw GraphError("unknown node '" + id + "'");
    return it->second;
  }
  NodeKind kind(const NodeId& id) const { return nodes_[index_of(id)].second; }
  bool has_edge(const NodeId& a, const NodeId& b) const { return edges_.count({a, b}) != 0; }

  std::vector<NodeId> nodes_of_kind(NodeKind k) const {
    std::vector<NodeId> out;
    for (const auto& [id, kind] : nodes_)
      if (kind == k) out.push_back(id);
    return out;
  }

  std::vector<NodeId> parents(const NodeId& id) const { return names(parents_[index_of(id)]); }
  std::vector<NodeId> children(const NodeId& id) const { return names(children_[index_of(id)]); }

  std::set<NodeId> ancestors(const NodeId& id) const {
    std::set<std::size_t> acc;
    walk(index_of(id), parents_, acc);
    return name_set(acc);
  }
  std::set<NodeId> descendants(const NodeId& id) const {
    return name_set(descendants_of(index_of(id)));
  }

  /// Indices in a topological order (parents before children). The graph is
  /// acyclic by construction.
  std::vector<std::size_t> topo_order() const {
    std::vector<std::size_t> indeg(nodes_.size(), 0), out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) indeg[i] = parents_[i].size();
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (indeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
      std::size_t v = ready.front();
      ready.erase(ready.begin());
      out.push_back(v);
      for (std::size_t c : children_[v])
        if (--indeg[c] == 0) ready.push_back(c);
    }
    return out;
  }

  const std::vector<std::size_t>& parent_indices(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& child_indices(std::size_t i) const { return children_[i]; }
  const NodeId& name(std::size_t i) const { return nodes_[i].first; }

  std::set<std::size_t> descendants_of(std::size_t i) const {
    std::set<std::size_t> acc;
    walk(i, children_, acc);
    return acc;
  }

  friend bool operator==(const DagCore& a, const DagCore& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  bool has_cycle() const {
    return topo_order().size() != nodes_.size();
  }
  void walk(std::size_t start, const std::vector<std::vector<std::size_t>>& adj,
            std::set<std::size_t>& acc) const {
    std::vector<std::size_t> stack(adj[start].begin(), adj[start].end());
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (!acc.insert(v).second) continue;
      stack.insert(stack.end(), adj[v].begin(), adj[v].end());
    }
  }
  std::vector<NodeId> names(const std::vector<std::size_t>& idx) const {
    std::vector<NodeId> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(nodes_[i].first);
    return out;
  }
  std::set<NodeId> name_set(const std::set<std::size_t>& idx) const {
    std::set<NodeId> out;
    for (auto i : idx) out.insert(nodes_[i].first);
    return out;
  }

  std::vector<std::pair<NodeId, NodeKind>> nodes_;
  std::set<Edge> edges_;
  std::map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

}  // namespace detail

/// DAG over visible and latent nodes. The declaration order of the visible
/// nodes is the temporal order; every visible-to-visible ancestry (direct or
/// through latent mediaries) must run forward in that order.
class Pdag {
 public:
  Pdag(std::vector<std::pair<NodeId, NodeKind>> nodes, std::set<Edge> edges)
      : core_(std::move(nodes), std::move(edges)) {
    auto rep = validate(core_.nodes(), core_.edges());
    if (!rep.ok()) throw GraphError("invalid pDAG: " + rep.to_string());
  }

  static ValidationReport validate(const std::vector<std::pair<NodeId, NodeKind>>& nodes,
                                   const std::set<Edge>& edges) {
    ValidationReport rep;
    for (const auto& [id, kind] : nodes)
      if (kind == NodeKind::Input)
        rep.violations.push_back("input node '" + id + "' not allowed in a pDAG");
    detail::DagCore::check_common(nodes, edges, rep);
    return rep;
  }

  const std::vector<std::pair<NodeId, NodeKind>>& nodes() const { return core_.nodes(); }
  const std::set<Edge>& edges() const { return core_.edges(); }
  /// Visible nodes in temporal order.
  std::vector<NodeId> visible_nodes() const { return core_.nodes_of_kind(NodeKind::Visible); }
  std::vector<NodeId> latent_nodes() const { return core_.nodes_of_kind(NodeKind::Latent); }

  bool has_node(const NodeId& id) const { return core_.has_node(id); }
  bool has_edge(const NodeId& a, const NodeId& b) const { return core_.has_edge(a, b); }
  NodeKind kind(const NodeId& id) const { return core_.kind(id); }
  std::vector<NodeId> parents(const NodeId& id) const { return core_.parents(id); }
  std::vector<NodeId> children(const NodeId& id) const { return core_.children(id); }
  std::set<NodeId> ancestors(const NodeId& id) const { return core_.ancestors(id); }
  std::set<NodeId> descendants(const NodeId& id) const { return core_.descendants(id); }

  const detail::DagCore& core() const { return core_; }

  friend bool operator==(const Pdag& a, const Pdag& b) { return a.core_ == b.core_; }
  friend bool operator!=(const Pdag& a, const Pdag& b) { return !(a == b); }

 private:
  detail::DagCore core_;
};

/// pDAG extended with exogenous input nodes: inputs have no parents and may
/// only point at non-input nodes.
class ThreePdag {
 public:
  ThreePdag(std::vector<std::pair<NodeId, NodeKind>> nodes, std::set<Edge> edges)
      : core_(std::move(nodes), std::move(edges)) {
    auto rep = validate(core_.nodes(), core_.edges());
    if (!rep.ok()) throw GraphError("invalid 3-pDAG: " + rep.to_string());
  }

  static ValidationReport validate(const std::vector<std::pair<NodeId, NodeKind>>& nodes,
                                   const std::set<Edge>& edges) {
    ValidationReport rep;
    std::map<NodeId, NodeKind> kinds;
    for (const auto& [id, kind] : nodes) kinds[id] = kind;
    for (const auto& e : edges) {
      auto it = kinds.find(e.second);
      if (it != kinds.end() && it->second == NodeKind::Input)
        rep.violations.push_back("input node '" + e.second + "' has a parent");
    }
    detail::DagCore::check_common(nodes, edges, rep);
    return rep;
  }

  const std::vector<std::pair<NodeId, NodeKind>>& nodes() const { return core_.nodes(); }
  const std::set<Edge>& edges() const { return core_.edges(); }
  std::vector<NodeId> visible_nodes() const { return core_.nodes_of_kind(NodeKind::Visible); }
  std::vector<NodeId> latent_nodes() const { return core_.nodes_of_kind(NodeKind::Latent); }
  std::vector<NodeId> input_nodes() const { return core_.nodes_of_kind(NodeKind::Input); }

  bool has_node(const NodeId& id) const { return core_.has_node(id); }
  bool has_edge(const NodeId& a, const NodeId& b) const { return core_.has_edge(a, b); }
  NodeKind kind(const NodeId& id) const { return core_.kind(id); }
  std::vector<NodeId> parents(const NodeId& id) const { return core_.parents(id); }
  std::vector<NodeId> children(const NodeId& id) const { return core_.children(id); }
  std::set<NodeId> ancestors(const NodeId& id) const { return core_.ancestors(id); }
  std::set<NodeId> descendants(const NodeId& id) const { return core_.descendants(id); }

  const detail::DagCore& core() const { return core_; }

  friend bool operator==(const ThreePdag& a, const ThreePdag& b) { return a.core_ == b.core_; }
  friend bool operator!=(const ThreePdag& a, const ThreePdag& b) { return !(a == b); }

 private:
  detail::DagCore core_;
};

/// True iff `order` (a permutation of the visible nodes) is compatible with
/// every visible-to-visible ancestry of g, including ancestries that run
/// through latent mediaries.
template <class Graph>
bool is_temporally_consistent(const Graph& g, const std::vector<NodeId>& order) {
  auto vis = g.visible_nodes();
  if (order.size() != vis.size()) throw GraphError("order must list every visible node once");
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!g.has_node(order[i]) || g.kind(order[i]) == NodeKind::Latent)
      throw GraphError("order contains non-visible node '" + order[i] + "'");
    if (!pos.emplace(order[i], i).second)
      throw GraphError("order repeats node '" + order[i] + "'");
  }
  for (const auto& v : vis) {
    for (const auto& d : g.descendants(v)) {
      if (g.kind(d) == NodeKind::Latent) continue;
      if (pos.at(d) < pos.at(v)) return false;
    }
  }
  return true;
}

}  // namespace mdag
