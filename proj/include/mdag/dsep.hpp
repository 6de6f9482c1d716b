#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/table.hpp"

namespace mdag {

struct DsepQuery {
  std::set<NodeId> a;
  std::set<NodeId> b;
  std::set<NodeId> c;
};

namespace detail {

template <class G>
void check_query(const G& g, const DsepQuery& q) {
  if (q.a.empty() || q.b.empty()) throw GraphError("query sets A and B must be nonempty");
  auto check = [&](const std::set<NodeId>& s) {
    for (const auto& v : s)
      if (!g.has_node(v)) throw GraphError("query references unknown node '" + v + "'");
  };
  check(q.a);
  check(q.b);
  check(q.c);
  for (const auto& v : q.a)
    if (q.b.count(v) || q.c.count(v)) throw GraphError("query sets must be disjoint");
  for (const auto& v : q.b)
    if (q.c.count(v)) throw GraphError("query sets must be disjoint");
}

}  // namespace detail

/// Path-blocking separation over the whole graph, latents included. Uses the
/// standard active-trail reachability: a trail may pass a non-collider only
/// when it is unconditioned, and a collider only when it or one of its
/// descendants is conditioned.
template <class G>
bool d_separated(const G& g, const DsepQuery& q) {
  detail::check_query(g, q);
  const auto& core = g.core();
  std::size_t n = core.size();

  std::vector<char> in_c(n, 0);
  for (const auto& v : q.c) in_c[core.index_of(v)] = 1;
  // C together with its ancestors: the collider-opening set
  std::vector<char> anc_c(n, 0);
  {
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i)
      if (in_c[i]) {
        anc_c[i] = 1;
        stack.push_back(i);
      }
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto p : core.parent_indices(v))
        if (!anc_c[p]) {
          anc_c[p] = 1;
          stack.push_back(p);
        }
    }
  }

  // state: (node, arrived-travelling-downward?)
  std::vector<char> seen_up(n, 0), seen_down(n, 0);
  std::deque<std::pair<std::size_t, bool>> work;
  for (const auto& v : q.a) work.push_back({core.index_of(v), false});
  std::vector<char> reached(n, 0);
  while (!work.empty()) {
    auto [v, down] = work.front();
    work.pop_front();
    auto& seen = down ? seen_down : seen_up;
    if (seen[v]) continue;
    seen[v] = 1;
    if (!in_c[v]) reached[v] = 1;
    if (!down) {
      // arrived from a child (or a start node): pass through unless conditioned
      if (!in_c[v]) {
        for (auto p : core.parent_indices(v)) work.push_back({p, false});
        for (auto c : core.child_indices(v)) work.push_back({c, true});
      }
    } else {
      // arrived from a parent: chain onward if unconditioned, bounce back up
      // if this collider position is opened by C
      if (!in_c[v])
        for (auto c : core.child_indices(v)) work.push_back({c, true});
      if (anc_c[v])
        for (auto p : core.parent_indices(v)) work.push_back({p, false});
    }
  }
  for (const auto& v : q.b)
    if (reached[core.index_of(v)]) return false;
  return true;
}

/// Exact conditional-independence test A ⊥ B | C on a joint table: checks
/// P(a,b,c) * P(c) == P(a,c) * P(b,c) cell by cell. Zero-probability
/// C-assignments hold vacuously.
inline bool ci_holds(const Table& dist, const std::set<NodeId>& a, const std::set<NodeId>& b,
                     const std::set<NodeId>& c) {
  if (a.empty() || b.empty()) throw std::invalid_argument("A and B must be nonempty");
  for (const auto& v : a)
    if (b.count(v) || c.count(v)) throw std::invalid_argument("sets must be disjoint");
  for (const auto& v : b)
    if (c.count(v)) throw std::invalid_argument("sets must be disjoint");

  std::set<NodeId> abc;
  abc.insert(a.begin(), a.end());
  abc.insert(b.begin(), b.end());
  abc.insert(c.begin(), c.end());
  std::set<NodeId> ac(a.begin(), a.end());
  ac.insert(c.begin(), c.end());
  std::set<NodeId> bc(b.begin(), b.end());
  bc.insert(c.begin(), c.end());

  Table p_abc = dist.marginal(abc);
  Table p_ac = dist.marginal(ac);
  Table p_bc = dist.marginal(bc);
  Table p_c = c.empty() ? Table({}, {}) : dist.marginal(c);
  if (c.empty()) p_c.values = {dist.total()};

  std::vector<std::size_t> ac_pos, bc_pos, c_pos;
  for (const auto& v : p_ac.vars) ac_pos.push_back(p_abc.var_pos(v));
  for (const auto& v : p_bc.vars) bc_pos.push_back(p_abc.var_pos(v));
  for (const auto& v : p_c.vars) c_pos.push_back(p_abc.var_pos(v));

  std::vector<int> sub;
  for (std::size_t idx = 0; idx < p_abc.values.size(); ++idx) {
    auto full = p_abc.assignment(idx);
    auto pick = [&](const std::vector<std::size_t>& pos) {
      sub.clear();
      for (auto i : pos) sub.push_back(full[i]);
      return sub;
    };
    Rational lhs = p_abc.values[idx] * p_c.at(pick(c_pos));
    Rational rhs = p_ac.at(pick(ac_pos)) * p_bc.at(pick(bc_pos));
    if (lhs != rhs) return false;
  }
  return true;
}

/// For two latent-free graphs over the same temporal order that differ in at
/// least one edge, returns a query separating in exactly one of them: take
/// the first differing edge a_i -> a_j and condition on everything before
/// a_j except a_i.
inline DsepQuery latent_free_witness(const Pdag& g, const Pdag& h) {
  if (!g.latent_nodes().empty() || !h.latent_nodes().empty())
    throw GraphError("latent_free_witness requires latent-free graphs");
  if (g.nodes() != h.nodes()) throw GraphError("graphs must share the node sequence");
  if (g.edges() == h.edges()) throw GraphError("graphs have identical edge sets");

  auto vis = g.visible_nodes();
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < vis.size(); ++i) pos[vis[i]] = i;

  std::vector<std::pair<std::size_t, std::size_t>> diff;
  auto collect = [&](const std::set<Edge>& lhs, const std::set<Edge>& rhs) {
    for (const auto& e : lhs)
      if (!rhs.count(e)) diff.push_back({pos.at(e.first), pos.at(e.second)});
  };
  collect(g.edges(), h.edges());
  collect(h.edges(), g.edges());
  std::sort(diff.begin(), diff.end());

  auto [i, j] = diff.front();
  DsepQuery q;
  q.a = {vis[i]};
  q.b = {vis[j]};
  for (std::size_t k = 0; k < j; ++k)
    if (k != i) q.c.insert(vis[k]);
  if (d_separated(g, q) == d_separated(h, q))
    throw std::logic_error("witness query failed to separate the graphs");
  return q;
}

}  // namespace mdag
