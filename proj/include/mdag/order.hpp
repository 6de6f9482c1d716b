#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/simplicial.hpp"

namespace mdag {

inline std::vector<NodeId> canonical_node_names(std::size_t n) {
  static const char* pool = "abcdef";
  if (n > 6) throw GraphError("enumeration limited to 6 nodes");
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, pool[i]));
  return out;
}

/// All order-consistent edge sets over n canonically named nodes, as bitmasks
/// over the forward pairs (i,j), i < j, in lexicographic slot order. The list
/// is ordered by mask value.
inline std::vector<std::uint32_t> enumerate_directed_masks(std::size_t n) {
  std::size_t pairs = n * (n - 1) / 2;
  std::vector<std::uint32_t> out;
  out.reserve(std::size_t{1} << pairs);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << pairs); ++m) out.push_back(m);
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> forward_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

inline std::set<Edge> edges_from_mask(const std::vector<NodeId>& nodes, std::uint32_t mask) {
  auto pairs = forward_pairs(nodes.size());
  std::set<Edge> out;
  for (std::size_t s = 0; s < pairs.size(); ++s)
    if (mask & (std::uint32_t{1} << s)) out.insert({nodes[pairs[s].first], nodes[pairs[s].second]});
  return out;
}

inline std::vector<std::set<Edge>> enumerate_directed(std::size_t n) {
  auto nodes = canonical_node_names(n);
  std::vector<std::set<Edge>> out;
  for (auto m : enumerate_directed_masks(n)) out.push_back(edges_from_mask(nodes, m));
  return out;
}

/// All simplicial complexes over n nodes that contain every singleton, as
/// face bitmasks (bit s-1 <=> subset s is a face). Built by deciding the
/// subsets of size >= 2 in (size, numeric) order, excluding first; a subset
/// may join only when all its one-smaller subsets are already faces.
inline std::vector<std::uint64_t> enumerate_complex_masks(std::size_t n) {
  if (n == 0 || n > 6) throw GraphError("complex enumeration supports 1..6 nodes");
  std::vector<std::uint32_t> subsets;  // size >= 2, by (popcount, value)
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s)
    if (__builtin_popcount(s) >= 2) subsets.push_back(s);
  std::sort(subsets.begin(), subsets.end(), [](std::uint32_t a, std::uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  std::uint64_t singletons = 0;
  for (std::size_t i = 0; i < n; ++i) singletons |= std::uint64_t{1} << ((std::uint32_t{1} << i) - 1);

  std::vector<std::uint64_t> out;
  std::vector<std::pair<std::size_t, std::uint64_t>> stack{{0, singletons}};
  // depth-first, exclude branch pushed last so it is explored first
  while (!stack.empty()) {
    auto [i, mask] = stack.back();
    stack.pop_back();
    if (i == subsets.size()) {
      out.push_back(mask);
      continue;
    }
    std::uint32_t s = subsets[i];
    bool closed = true;
    for (std::uint32_t rem = s; rem && closed; rem &= rem - 1) {
      std::uint32_t sub = s & ~(rem & (~rem + 1));  // drop lowest set bit of rem
      closed = (mask >> (sub - 1)) & 1;
    }
    if (closed) stack.push_back({i + 1, mask | (std::uint64_t{1} << (s - 1))});
    stack.push_back({i + 1, mask});
  }
  return out;
}

inline std::vector<SimplicialComplex> enumerate_complexes(std::size_t n) {
  auto nodes = canonical_node_names(n);
  std::vector<SimplicialComplex> out;
  for (auto m : enumerate_complex_masks(n)) out.push_back(SimplicialComplex::from_face_mask(nodes, m));
  return out;
}

/// Full catalog over n nodes: the Cartesian product of complexes (islands)
/// and directed structures. Entry index = complex_index * directed_count +
/// directed_index, so each island is one contiguous block.
struct MdagCatalog {
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> directed;   // edge masks
  std::vector<std::uint64_t> complexes;  // face masks

  std::size_t size() const { return directed.size() * complexes.size(); }
  std::size_t directed_count() const { return directed.size(); }
  std::size_t complex_count() const { return complexes.size(); }

  std::size_t complex_of(std::size_t idx) const { return idx / directed.size(); }
  std::size_t directed_of(std::size_t idx) const { return idx % directed.size(); }

  std::uint32_t edge_mask(std::size_t idx) const { return directed[directed_of(idx)]; }
  std::uint64_t face_mask(std::size_t idx) const { return complexes[complex_of(idx)]; }

  Mdag entry(std::size_t idx) const {
    if (idx >= size()) throw std::out_of_range("catalog index out of range");
    return Mdag(nodes, edges_from_mask(nodes, edge_mask(idx)),
                SimplicialComplex::from_face_mask(nodes, face_mask(idx)));
  }

  /// [begin, end) of the island sharing the given entry's complex.
  std::pair<std::size_t, std::size_t> island_range(std::size_t idx) const {
    std::size_t c = complex_of(idx);
    return {c * directed.size(), (c + 1) * directed.size()};
  }
};

inline MdagCatalog enumerate_mdags(std::size_t n) {
  MdagCatalog cat;
  cat.nodes = canonical_node_names(n);
  cat.directed = enumerate_directed_masks(n);
  cat.complexes = enumerate_complex_masks(n);
  return cat;
}

/// Product-order test: does g have every edge and every face of h? Requires
/// the same node sequence.
inline bool structurally_dominates(const Mdag& g, const Mdag& h) {
  if (g.nodes() != h.nodes()) throw GraphError("dominance requires the same node sequence");
  for (const auto& e : h.edges())
    if (!g.edges().count(e)) return false;
  std::uint64_t gm = g.complex().face_mask(), hm = h.complex().face_mask();
  return (gm & hm) == hm;
}

inline bool structurally_dominates(const ThreeMdag& g, const ThreeMdag& h) {
  if (g.nodes() != h.nodes()) throw GraphError("dominance requires the same node sequence");
  for (const auto& e : h.edges())
    if (!g.edges().count(e)) return false;
  auto gf = g.faces(), hf = h.faces();
  return std::includes(gf.begin(), gf.end(), hf.begin(), hf.end());
}

struct HasseDiagram {
  std::size_t element_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> covers;  // (lower, upper)
};

/// Cover relation of the dominance order over the catalog. Product structure:
/// drop one edge inside an island, or drop one maximal face at a fixed
/// directed structure.
inline HasseDiagram hasse(const MdagCatalog& cat) {
  HasseDiagram out;
  out.element_count = cat.size();
  std::size_t d_count = cat.directed.size();

  std::map<std::uint64_t, std::size_t> complex_index;
  for (std::size_t c = 0; c < cat.complexes.size(); ++c) complex_index[cat.complexes[c]] = c;

  // edge-drop covers inside each island
  for (std::size_t c = 0; c < cat.complexes.size(); ++c) {
    for (std::size_t d = 0; d < d_count; ++d) {
      std::uint32_t mask = cat.directed[d];
      for (std::uint32_t rem = mask; rem; rem &= rem - 1) {
        std::uint32_t lower_mask = mask & ~(rem & (~rem + 1));
        // directed masks are enumerated by value, so mask value == index
        out.covers.push_back({c * d_count + lower_mask, c * d_count + d});
      }
    }
  }

  // face-drop covers across islands at fixed directed structure. A face may
  // be dropped exactly when no face strictly contains it.
  std::size_t n = cat.nodes.size();
  for (std::size_t c = 0; c < cat.complexes.size(); ++c) {
    std::uint64_t fm = cat.complexes[c];
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
      if (__builtin_popcount(s) < 2) continue;
      if (!((fm >> (s - 1)) & 1)) continue;
      bool maximal = true;
      for (std::uint32_t t = 1; t < (std::uint32_t{1} << n) && maximal; ++t)
        if (t != s && (t & s) == s && ((fm >> (t - 1)) & 1)) maximal = false;
      if (!maximal) continue;
      std::uint64_t lower = fm & ~(std::uint64_t{1} << (s - 1));
      std::size_t lc = complex_index.at(lower);
      for (std::size_t d = 0; d < d_count; ++d)
        out.covers.push_back({lc * d_count + d, c * d_count + d});
    }
  }
  std::sort(out.covers.begin(), out.covers.end());
  return out;
}

}  // namespace mdag
