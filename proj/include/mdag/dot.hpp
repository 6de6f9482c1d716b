#pragma once

#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/order.hpp"

namespace mdag {

struct DotStyle {
  std::string visible = "shape=circle";
  std::string latent = "shape=circle, style=filled, fillcolor=gray80";
  std::string input = "shape=square";
  std::string junction = "shape=point, color=red, width=0.08";
  std::string junction_edge = "dir=none, color=red";
};

namespace detail {

inline std::string dot_quote(const NodeId& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <class Nodes, class KindOf>
std::string graph_dot(const Nodes& nodes, const std::set<Edge>& edges,
                      const std::set<Face>& facets, const KindOf& kind_of,
                      const DotStyle& style) {
  std::string out = "digraph {\n";
  for (const auto& n : nodes) out += "  " + dot_quote(n) + " [" + kind_of(n) + "];\n";
  for (const auto& e : edges)
    out += "  " + dot_quote(e.first) + " -> " + dot_quote(e.second) + ";\n";
  std::size_t j = 0;
  for (const auto& f : facets) {
    if (f.size() < 2) continue;
    std::string jn = "\"f" + std::to_string(j++) + "\"";
    out += "  " + jn + " [" + style.junction + "];\n";
    for (const auto& v : f)
      out += "  " + jn + " -> " + dot_quote(v) + " [" + style.junction_edge + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace detail

inline std::string to_dot(const Mdag& m, const DotStyle& style = {}) {
  return detail::graph_dot(m.nodes(), m.edges(), m.facets(),
                           [&](const NodeId&) { return style.visible; }, style);
}

inline std::string to_dot(const ThreeMdag& m, const DotStyle& style = {}) {
  std::vector<NodeId> ids;
  for (const auto& [id, kind] : m.nodes()) {
    (void)kind;
    ids.push_back(id);
  }
  return detail::graph_dot(ids, m.edges(), m.facets(),
                           [&](const NodeId& n) {
                             return m.kind(n) == NodeKind::Input ? style.input : style.visible;
                           },
                           style);
}

inline std::string to_dot(const Pdag& g, const DotStyle& style = {}) {
  std::vector<NodeId> ids;
  for (const auto& [id, kind] : g.nodes()) {
    (void)kind;
    ids.push_back(id);
  }
  return detail::graph_dot(ids, g.edges(), {},
                           [&](const NodeId& n) {
                             return g.kind(n) == NodeKind::Latent ? style.latent : style.visible;
                           },
                           style);
}

inline std::string to_dot(const ThreePdag& g, const DotStyle& style = {}) {
  std::vector<NodeId> ids;
  for (const auto& [id, kind] : g.nodes()) {
    (void)kind;
    ids.push_back(id);
  }
  return detail::graph_dot(ids, g.edges(), {},
                           [&](const NodeId& n) {
                             switch (g.kind(n)) {
                               case NodeKind::Latent: return style.latent;
                               case NodeKind::Input: return style.input;
                               default: return style.visible;
                             }
                           },
                           style);
}

/// Catalog indices as nodes, cover pairs as edges (lower -> upper).
inline std::string to_dot(const HasseDiagram& h, const DotStyle& = {}) {
  std::string out = "digraph {\n";
  for (std::size_t i = 0; i < h.element_count; ++i)
    out += "  \"" + std::to_string(i) + "\";\n";
  for (const auto& [lo, hi] : h.covers)
    out += "  \"" + std::to_string(lo) + "\" -> \"" + std::to_string(hi) + "\";\n";
  out += "}\n";
  return out;
}

}  // namespace mdag
