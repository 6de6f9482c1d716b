#pragma once

// Shared test fixtures: independent oracles (forward simulation, truncated
// factorization, path-enumeration d-separation, brute-force transitive
// reduction, antichain counting) and seeded random generators. The oracles
// deliberately avoid the library's own computation paths: simulation works on
// the unsplit graph, d-separation enumerates simple paths, and counting works
// over explicit subset families.

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "mdag/dsep.hpp"
#include "mdag/graph.hpp"
#include "mdag/models.hpp"
#include "mdag/table.hpp"

namespace mdag::testing {

/// P(value | parent_vals) by direct summation of the error distribution.
inline Rational mech_prob(const Mechanism& m, const std::vector<int>& parent_vals, int value) {
  std::size_t row = 0;
  for (std::size_t i = 0; i < parent_vals.size(); ++i)
    row = row * static_cast<std::size_t>(m.parent_cards[i]) + static_cast<std::size_t>(parent_vals[i]);
  Rational p(0);
  for (int e = 0; e < m.error_card; ++e)
    if (m.respond(row, e) == value) p += m.error_dist[e];
  return p;
}

/// Joint distribution over the visible nodes by enumerating every assignment
/// of all nodes of the *unsplit* graph and multiplying mechanism
/// probabilities; latents are summed out. Nodes in `clamped` contribute no
/// factor and are pinned to the given value (truncated factorization). With
/// `clamped` empty this is plain forward simulation.
inline Table simulate_joint(const Pdag& g, const Params& par, const CardinalityVector& cards,
                            const std::map<NodeId, int>& clamped = {}) {
  std::vector<NodeId> all;
  for (const auto& [id, kind] : g.nodes()) all.push_back(id);

  std::vector<NodeId> kept;
  std::vector<int> kept_cards;
  for (const auto& v : g.visible_nodes()) {
    if (clamped.count(v)) continue;
    kept.push_back(v);
    kept_cards.push_back(cards.at(v));
  }
  Table out(kept, kept_cards);

  std::map<NodeId, int> a;
  for (const auto& v : all) a[v] = clamped.count(v) ? clamped.at(v) : 0;
  auto advance = [&]() {
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
      if (clamped.count(*it)) continue;
      if (++a[*it] < cards.at(*it)) return true;
      a[*it] = 0;
    }
    return false;
  };

  std::vector<int> cell(kept.size());
  do {
    Rational w(1);
    for (const auto& v : all) {
      if (clamped.count(v)) continue;
      const Mechanism& m = par.mech.at(v);
      std::vector<int> pv;
      for (const auto& p : m.parents) pv.push_back(a.at(p));
      w *= mech_prob(m, pv, a.at(v));
      if (w.is_zero()) break;
    }
    if (!w.is_zero()) {
      for (std::size_t i = 0; i < kept.size(); ++i) cell[i] = a.at(kept[i]);
      out.at(cell) += w;
    }
  } while (advance());
  return out;
}

/// d-separation by exhaustive enumeration of simple undirected paths with the
/// textbook blocking rules. Exponential; for small graphs only.
template <class G>
bool brute_dsep(const G& g, const DsepQuery& q) {
  const auto& core = g.core();
  std::size_t n = core.size();
  std::vector<std::size_t> cs;
  for (const auto& v : q.c) cs.push_back(core.index_of(v));

  auto in_c = [&](std::size_t i) {
    for (auto j : cs)
      if (i == j) return true;
    return false;
  };
  auto desc_in_c = [&](std::size_t i) {
    if (in_c(i)) return true;
    for (auto d : core.descendants_of(i))
      if (in_c(d)) return true;
    return false;
  };

  // path state: sequence of node indices; directions recovered via has_edge
  std::vector<std::size_t> path;
  std::vector<char> used(n, 0);
  auto edge = [&](std::size_t x, std::size_t y) {
    return core.edges().count({core.name(x), core.name(y)}) != 0;
  };

  bool open_found = false;
  auto path_open = [&]() {
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      std::size_t prev = path[k - 1], me = path[k], next = path[k + 1];
      bool collider = edge(prev, me) && edge(next, me);
      if (collider) {
        if (!desc_in_c(me)) return false;
      } else {
        if (in_c(me)) return false;
      }
    }
    return true;
  };

  std::set<std::size_t> targets;
  for (const auto& v : q.b) targets.insert(core.index_of(v));

  std::function<void(std::size_t)> dfs = [&](std::size_t at) {
    if (open_found) return;
    if (targets.count(at) && path.size() >= 2) {
      if (path_open()) open_found = true;
      return;  // extending past a target only revisits subpaths
    }
    for (std::size_t next = 0; next < n; ++next) {
      if (used[next] || (!edge(at, next) && !edge(next, at))) continue;
      used[next] = 1;
      path.push_back(next);
      dfs(next);
      path.pop_back();
      used[next] = 0;
    }
  };

  for (const auto& v : q.a) {
    std::size_t s = core.index_of(v);
    used.assign(n, 0);
    used[s] = 1;
    path = {s};
    dfs(s);
    if (open_found) return false;
  }
  return true;
}

/// Transitive reduction of a finite preorder given as a leq matrix
/// (leq[x][y] means x below-or-equal y); returns the cover pairs (x, y).
inline std::vector<std::pair<std::size_t, std::size_t>> brute_covers(
    const std::vector<std::vector<bool>>& leq) {
  std::size_t n = leq.size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y || !leq[x][y]) continue;
      bool direct = true;
      for (std::size_t m = 0; m < n && direct; ++m)
        if (m != x && m != y && leq[x][m] && leq[m][y]) direct = false;
      if (direct) out.push_back({x, y});
    }
  return out;
}

/// Number of downward-closed families (with all singletons) over n labeled
/// vertices = number of antichains over the subsets of size >= 2.
inline std::size_t antichain_complex_count(std::size_t n) {
  std::vector<std::uint32_t> subs;
  for (std::uint32_t s = 0; s < (1u << n); ++s)
    if (std::popcount(s) >= 2) subs.push_back(s);
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << subs.size()); ++mask) {
    bool anti = true;
    for (std::size_t i = 0; i < subs.size() && anti; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < subs.size() && anti; ++j) {
        if (!(mask >> j & 1)) continue;
        std::uint32_t a = subs[i], b = subs[j];
        if ((a & b) == a || (a & b) == b) anti = false;
      }
    }
    if (anti) ++count;
  }
  return count;
}

/// Random pDAG whose declaration order is topological: latents interleaved at
/// random positions, every forward pair an edge with probability 1/2. Always
/// constructible.
inline Pdag random_pdag(std::mt19937_64& rng, std::size_t max_nodes = 6) {
  std::size_t n = 1 + rng() % max_nodes;
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  std::size_t nv = 0, nl = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 3 == 0)
      nodes.push_back({"u" + std::to_string(nl++), NodeKind::Latent});
    else
      nodes.push_back({"v" + std::to_string(nv++), NodeKind::Visible});
  }
  if (nv == 0) nodes[0] = {"v0", NodeKind::Visible};
  std::set<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 2) edges.insert({nodes[i].first, nodes[j].first});
  return Pdag(std::move(nodes), std::move(edges));
}

/// Random parameters for every node of g at the given cardinalities.
inline Params random_params(std::mt19937_64& rng, const Pdag& g, const CardinalityVector& cards) {
  Params par;
  for (const auto& [id, kind] : g.nodes()) {
    Mechanism m;
    m.parents = g.parents(id);
    for (const auto& p : m.parents) m.parent_cards.push_back(cards.at(p));
    m.card = cards.at(id);
    m.error_card = 1 + static_cast<int>(rng() % 3);
    m.response.resize(m.rows() * static_cast<std::size_t>(m.error_card));
    for (auto& r : m.response) r = static_cast<int>(rng() % static_cast<unsigned>(m.card));
    long total = 0;
    std::vector<long> w(static_cast<std::size_t>(m.error_card));
    for (auto& x : w) {
      x = 1 + static_cast<long>(rng() % 4);
      total += x;
    }
    for (auto x : w) m.error_dist.push_back(Rational(x, total));
    par.mech[id] = std::move(m);
  }
  return par;
}

inline CardinalityVector random_cards(std::mt19937_64& rng, const Pdag& g,
                                      const std::vector<int>& choices) {
  CardinalityVector cards;
  for (const auto& [id, kind] : g.nodes())
    cards[id] = choices[rng() % choices.size()];
  return cards;
}

inline CardinalityVector all_binary(const Pdag& g) {
  CardinalityVector cards;
  for (const auto& [id, kind] : g.nodes()) cards[id] = 2;
  return cards;
}

/// Every pDAG on the given visible/latent node counts, up to the (semantically
/// irrelevant) declaration positions of latents: latents are listed last and
/// may send or receive edges in any direction; visible-visible edges are
/// forward-only. Calls f on each graph.
template <class F>
void for_each_pdag(std::size_t nv, std::size_t nl, F&& f) {
  std::vector<std::pair<NodeId, NodeKind>> nodes;
  for (std::size_t i = 0; i < nv; ++i)
    nodes.push_back({"v" + std::to_string(i), NodeKind::Visible});
  for (std::size_t i = 0; i < nl; ++i)
    nodes.push_back({"u" + std::to_string(i), NodeKind::Latent});
  std::size_t n = nv + nl;

  // candidate slots: visible->visible forward, any pair touching a latent
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool vis_i = i < nv, vis_j = j < nv;
      if (vis_i && vis_j) {
        if (i < j) slots.push_back({i, j});
      } else {
        slots.push_back({i, j});
      }
    }

  for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
    // cheap pre-filter: acyclic and no latent-mediated order violation
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) adj[slots[s].first] |= 1u << slots[s].second;
    std::vector<std::uint32_t> reach = adj;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (reach[i] >> k & 1) reach[i] |= reach[k];
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (reach[i] >> i & 1) ok = false;  // cycle
      if (i >= nv) continue;
      for (std::size_t j = 0; j < i && ok; ++j)  // earlier visible reachable
        if (j < nv && (reach[i] >> j & 1)) ok = false;
    }
    if (!ok) continue;

    std::set<Edge> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1)
        edges.insert({nodes[slots[s].first].first, nodes[slots[s].second].first});
    f(Pdag(nodes, std::move(edges)));
  }
}

}  // namespace mdag::testing
