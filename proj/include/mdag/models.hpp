#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdag/dsep.hpp"
#include "mdag/graph.hpp"
#include "mdag/mdag.hpp"
#include "mdag/order.hpp"
#include "mdag/rational.hpp"
#include "mdag/reduction.hpp"
#include "mdag/swig.hpp"
#include "mdag/table.hpp"

namespace mdag {

/// State-space size per node; states are {0, ..., card-1}.
using CardinalityVector = std::map<NodeId, int>;

/// Mechanism of one node: a response table f mapping (parent assignment,
/// error value) -> state, plus an exact error distribution. Response rows are
/// indexed mixed-radix over the parent values (parents in graph declaration
/// order, first parent most significant), then the error value.
struct Mechanism {
  std::vector<NodeId> parents;
  std::vector<int> parent_cards;
  int card = 2;
  int error_card = 1;
  std::vector<int> response;       // size = prod(parent_cards) * error_card
  std::vector<Rational> error_dist;

  std::size_t rows() const {
    std::size_t r = 1;
    for (int c : parent_cards) r *= static_cast<std::size_t>(c);
    return r;
  }
  int respond(std::size_t row, int error) const {
    return response[row * static_cast<std::size_t>(error_card) + static_cast<std::size_t>(error)];
  }
};

struct Params {
  std::map<NodeId, Mechanism> mech;
};

/// The cardinality of every node that owns a mechanism.
inline CardinalityVector cards_of(const Params& par) {
  CardinalityVector cards;
  for (const auto& [id, m] : par.mech) cards[id] = m.card;
  return cards;
}

/// X = error, error uniform over the node's own state space.
inline Mechanism uniform_mechanism(std::vector<NodeId> parents, std::vector<int> parent_cards,
                                   int card) {
  Mechanism m;
  m.parents = std::move(parents);
  m.parent_cards = std::move(parent_cards);
  m.card = card;
  m.error_card = card;
  m.response.resize(m.rows() * static_cast<std::size_t>(card));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (int e = 0; e < card; ++e) m.response[r * card + e] = e;
  m.error_dist.assign(card, Rational(1, card));
  return m;
}

/// X = value regardless of parents and error.
inline Mechanism constant_mechanism(std::vector<NodeId> parents, std::vector<int> parent_cards,
                                    int card, int value) {
  Mechanism m;
  m.parents = std::move(parents);
  m.parent_cards = std::move(parent_cards);
  m.card = card;
  m.error_card = 1;
  m.response.assign(m.rows(), value);
  m.error_dist = {Rational(1)};
  return m;
}

/// X = value of the parent at `which` (cardinalities must agree).
inline Mechanism copy_mechanism(std::vector<NodeId> parents, std::vector<int> parent_cards,
                                int card, std::size_t which) {
  Mechanism m;
  m.parents = std::move(parents);
  m.parent_cards = std::move(parent_cards);
  m.card = card;
  m.error_card = 1;
  m.response.resize(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t rest = r;
    int val = 0;
    for (std::size_t i = m.parent_cards.size(); i-- > 0;) {
      int digit = static_cast<int>(rest % static_cast<std::size_t>(m.parent_cards[i]));
      rest /= static_cast<std::size_t>(m.parent_cards[i]);
      if (i == which) val = digit;
    }
    m.response[r] = val;
  }
  m.error_dist = {Rational(1)};
  return m;
}

/// X = error with an explicit distribution over the node's state space.
inline Mechanism noise_mechanism(std::vector<NodeId> parents, std::vector<int> parent_cards,
                                 std::vector<Rational> dist) {
  Mechanism m;
  m.parents = std::move(parents);
  m.parent_cards = std::move(parent_cards);
  m.card = static_cast<int>(dist.size());
  m.error_card = m.card;
  m.response.resize(m.rows() * static_cast<std::size_t>(m.card));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (int e = 0; e < m.card; ++e) m.response[r * m.card + e] = e;
  m.error_dist = std::move(dist);
  return m;
}

template <class G>
void validate_params(const G& g, const Params& par, const CardinalityVector& cards) {
  for (const auto& [id, kind] : g.nodes()) {
    auto it = cards.find(id);
    if (it == cards.end()) throw GraphError("no cardinality for node '" + id + "'");
    if (it->second < 1) throw GraphError("cardinality of '" + id + "' must be >= 1");
    if (kind == NodeKind::Input) continue;
    auto mit = par.mech.find(id);
    if (mit == par.mech.end()) throw GraphError("no mechanism for node '" + id + "'");
    const Mechanism& m = mit->second;
    if (m.parents != g.parents(id))
      throw GraphError("mechanism parents of '" + id + "' do not match the graph");
    if (m.parent_cards.size() != m.parents.size())
      throw GraphError("mechanism parent cardinalities of '" + id + "' have wrong arity");
    for (std::size_t i = 0; i < m.parents.size(); ++i)
      if (m.parent_cards[i] != cards.at(m.parents[i]))
        throw GraphError("mechanism parent cardinality mismatch at '" + id + "'");
    if (m.card != it->second)
      throw GraphError("mechanism cardinality of '" + id + "' does not match");
    if (m.error_card < 1) throw GraphError("error cardinality of '" + id + "' must be >= 1");
    if (m.response.size() != m.rows() * static_cast<std::size_t>(m.error_card))
      throw GraphError("response table of '" + id + "' is not total");
    for (int v : m.response)
      if (v < 0 || v >= m.card) throw GraphError("response value of '" + id + "' out of range");
    if (m.error_dist.size() != static_cast<std::size_t>(m.error_card))
      throw GraphError("error distribution of '" + id + "' has wrong size");
    Rational s(0);
    for (const auto& p : m.error_dist) {
      if (p < Rational(0)) throw GraphError("negative error probability at '" + id + "'");
      s += p;
    }
    if (!s.is_one()) throw GraphError("error distribution of '" + id + "' does not sum to 1");
  }
}

namespace detail {

/// P(X = x | parent assignment), rows indexed like Mechanism rows.
struct Cpt {
  std::vector<std::size_t> parent_pos;  // positions into the evaluation context
  std::vector<int> parent_cards;
  int card = 1;
  std::vector<Rational> p;  // row * card + x

  std::size_t row_of(const std::vector<int>& ctx) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < parent_pos.size(); ++i)
      r = r * static_cast<std::size_t>(parent_cards[i]) +
          static_cast<std::size_t>(ctx[parent_pos[i]]);
    return r;
  }
};

inline Cpt cpt_of(const Mechanism& m, std::vector<std::size_t> parent_pos) {
  Cpt c;
  c.parent_pos = std::move(parent_pos);
  c.parent_cards = m.parent_cards;
  c.card = m.card;
  c.p.assign(m.rows() * static_cast<std::size_t>(m.card), Rational(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (int e = 0; e < m.error_card; ++e)
      c.p[r * m.card + m.respond(r, e)] += m.error_dist[e];
  return c;
}

inline void next_assignment(std::vector<int>& a, const std::vector<int>& cards, bool& done) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (++a[i] < cards[i]) return;
    a[i] = 0;
  }
  done = true;
}

}  // namespace detail

/// The conditional P(flats | sharps) of the fully split graph: the joint law
/// of every node's natural value given every node's intervention value. Tensor
/// variables are the sharp copies (in temporal order) followed by the flat
/// copies; first variable most significant.
struct FullConditional {
  std::vector<NodeId> vars;  // visible nodes, temporal order
  std::vector<int> cards;
  Table table;

  const Rational& at(const std::vector<int>& sharp_vals, const std::vector<int>& flat_vals) const {
    std::vector<int> a(sharp_vals);
    a.insert(a.end(), flat_vals.begin(), flat_vals.end());
    return table.at(a);
  }

  friend bool operator==(const FullConditional& a, const FullConditional& b) {
    return a.vars == b.vars && a.cards == b.cards && a.table == b.table;
  }
  friend bool operator!=(const FullConditional& a, const FullConditional& b) { return !(a == b); }
};

/// Exact P(flats | sharps) by marginalizing the latents of split(g). Given the
/// sharps and the latent values, the flats are conditionally independent (each
/// flat is childless), so the slice is a latent-mixture of product measures.
inline FullConditional full_conditional(const Pdag& g, const Params& par,
                                        const CardinalityVector& cards) {
  validate_params(g, par, cards);

  auto vis = g.visible_nodes();
  auto lats = g.latent_nodes();
  const std::size_t nv = vis.size(), nl = lats.size();

  // Evaluation context: visible sharp values first, then latent values.
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < nv; ++i) pos[vis[i]] = i;
  for (std::size_t i = 0; i < nl; ++i) pos[lats[i]] = nv + i;

  auto cpt_for = [&](const NodeId& v) {
    const Mechanism& m = par.mech.at(v);
    std::vector<std::size_t> ppos;
    for (const auto& p : m.parents) ppos.push_back(pos.at(p));
    return detail::cpt_of(m, ppos);
  };

  std::vector<detail::Cpt> vis_cpt, lat_cpt;
  for (const auto& v : vis) vis_cpt.push_back(cpt_for(v));
  // Latents may feed each other; evaluate them in topological order.
  std::vector<NodeId> lat_topo;
  for (std::size_t i : g.core().topo_order())
    if (g.nodes()[i].second == NodeKind::Latent) lat_topo.push_back(g.nodes()[i].first);
  std::vector<std::size_t> lat_slot;  // context slot per topo-ordered latent
  for (const auto& l : lat_topo) {
    lat_cpt.push_back(cpt_for(l));
    lat_slot.push_back(pos.at(l));
  }

  std::vector<int> vcards, lcards;
  for (const auto& v : vis) vcards.push_back(cards.at(v));
  for (const auto& l : lat_topo) lcards.push_back(cards.at(l));

  FullConditional fc;
  fc.vars = vis;
  fc.cards = vcards;
  std::vector<NodeId> tvars;
  std::vector<int> tcards;
  for (const auto& v : vis) tvars.push_back(SplitNaming::sharp(v));
  for (int c : vcards) tcards.push_back(c);
  for (const auto& v : vis) tvars.push_back(SplitNaming::flat(v));
  for (int c : vcards) tcards.push_back(c);
  fc.table = Table(tvars, tcards);

  std::size_t flat_block = 1;
  for (int c : vcards) flat_block *= static_cast<std::size_t>(c);

  std::vector<int> ctx(nv + nl, 0);
  std::vector<int> sharp(nv, 0);
  bool sharp_done = false;
  std::size_t sharp_idx = 0;
  std::vector<Rational> slice(flat_block);
  std::vector<int> flat(nv, 0);
  while (true) {
    for (std::size_t i = 0; i < nv; ++i) ctx[i] = sharp[i];
    std::fill(slice.begin(), slice.end(), Rational(0));

    std::vector<int> lat(nl, 0);
    bool lat_done = false;
    do {
      // Latent values are enumerated; weight = product of their CPT entries
      // with earlier latents already in context (topological order).
      Rational w(1);
      for (std::size_t i = 0; i < nl; ++i) {
        ctx[lat_slot[i]] = lat[i];
        const auto& c = lat_cpt[i];
        w *= c.p[c.row_of(ctx) * c.card + lat[i]];
      }
      if (!w.is_zero()) {
        std::fill(flat.begin(), flat.end(), 0);
        std::size_t fi = 0;
        bool flat_done = nv == 0;
        if (nv == 0) {
          slice[0] += w;
        } else {
          while (!flat_done) {
            Rational cell = w;
            for (std::size_t i = 0; i < nv; ++i) {
              const auto& c = vis_cpt[i];
              cell *= c.p[c.row_of(ctx) * c.card + flat[i]];
              if (cell.is_zero()) break;
            }
            slice[fi] += cell;
            ++fi;
            detail::next_assignment(flat, vcards, flat_done);
          }
        }
      }
      if (nl == 0) break;
      detail::next_assignment(lat, lcards, lat_done);
    } while (!lat_done);

    Rational sum(0);
    for (std::size_t i = 0; i < flat_block; ++i) {
      fc.table.values[sharp_idx * flat_block + i] = slice[i];
      sum += slice[i];
    }
    if (!sum.is_one()) throw std::logic_error("full conditional slice does not sum to 1");

    if (nv == 0) break;
    detail::next_assignment(sharp, vcards, sharp_done);
    if (sharp_done) break;
    ++sharp_idx;
  }
  return fc;
}

/// Diagonal of the full conditional: P(x) = P(flats = x | sharps = x), the
/// passively observed joint distribution.
inline Table observational_shadow(const FullConditional& fc) {
  Table out(fc.vars, fc.cards);
  std::vector<int> x(fc.vars.size(), 0);
  bool done = fc.vars.empty();
  std::size_t i = 0;
  if (fc.vars.empty()) {
    out.values[0] = fc.at({}, {});
  } else {
    while (!done) {
      out.values[i++] = fc.at(x, x);
      detail::next_assignment(x, fc.cards, done);
    }
  }
  if (!out.total().is_one()) throw std::logic_error("observational shadow does not sum to 1");
  return out;
}

/// The do(A = values) pattern: sharps on A pinned, sharps elsewhere equal to
/// the kept flat values, flats on A marginalized out. Returns the joint table
/// over the kept variables.
inline Table do_pattern_shadow(const FullConditional& fc, const std::map<NodeId, int>& do_values) {
  const std::size_t n = fc.vars.size();
  std::vector<bool> in_a(n, false);
  std::size_t seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = do_values.find(fc.vars[i]);
    if (it == do_values.end()) continue;
    if (it->second < 0 || it->second >= fc.cards[i])
      throw std::out_of_range("do-value for '" + fc.vars[i] + "' out of range");
    in_a[i] = true;
    ++seen;
  }
  if (seen != do_values.size()) throw GraphError("do-set mentions unknown variable");

  std::vector<NodeId> kept;
  std::vector<int> kept_cards, acards;
  std::vector<std::size_t> kept_pos, apos;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_a[i]) {
      apos.push_back(i);
      acards.push_back(fc.cards[i]);
    } else {
      kept.push_back(fc.vars[i]);
      kept_cards.push_back(fc.cards[i]);
      kept_pos.push_back(i);
    }
  }

  Table out(kept, kept_cards);
  std::vector<int> sharp(n, 0), flat(n, 0), z(kept.size(), 0), alpha(apos.size(), 0);
  for (std::size_t i = 0; i < apos.size(); ++i) sharp[apos[i]] = do_values.at(fc.vars[apos[i]]);

  bool zdone = kept.empty();
  std::size_t zi = 0;
  while (true) {
    for (std::size_t i = 0; i < kept_pos.size(); ++i) {
      sharp[kept_pos[i]] = z[i];
      flat[kept_pos[i]] = z[i];
    }
    Rational cell(0);
    std::fill(alpha.begin(), alpha.end(), 0);
    bool adone = false;
    do {
      for (std::size_t i = 0; i < apos.size(); ++i) flat[apos[i]] = alpha[i];
      cell += fc.at(sharp, flat);
      if (apos.empty()) break;
      detail::next_assignment(alpha, acards, adone);
    } while (!adone);
    out.values[zi++] = cell;
    if (kept.empty()) break;
    detail::next_assignment(z, kept_cards, zdone);
    if (zdone) break;
  }
  if (!out.total().is_one()) throw std::logic_error("do-pattern shadow does not sum to 1");
  return out;
}

/// One record of an A-pattern probe: the intervened set (temporal order), the
/// forced values, and the observed joint over the remaining variables.
struct Pattern {
  std::vector<NodeId> do_set;
  std::map<NodeId, int> do_values;
  Table table;
};

/// Structured description of how a witness dataset was built; every claim it
/// makes is re-verified by certify_infeasible before being relied on.
struct WitnessInfo {
  std::string kind;             // "chain" | "copy"
  NodeId cause, effect;         // chain: the exercised edge
  std::vector<NodeId> pinned;   // chain: mediaries held at 0
  std::vector<NodeId> members;  // copy: the correlated set S
  Rational mix;                 // copy: the mixture weight p
};

struct ProbeDataset {
  std::vector<NodeId> vars;  // visible nodes, temporal order
  CardinalityVector cards;
  std::vector<Pattern> patterns;
  std::optional<WitnessInfo> witness;

  const Pattern* find(const std::map<NodeId, int>& do_values) const {
    for (const auto& p : patterns)
      if (p.do_values == do_values) return &p;
    return nullptr;
  }
};

/// Every (A, values) pattern of the Observe-or-Do scheme; with one_do, only
/// the all-zeros value per intervened set.
inline ProbeDataset generate_all_patterns(const Pdag& g, const Params& par,
                                          const CardinalityVector& cards, bool one_do = false) {
  FullConditional fc = full_conditional(g, par, cards);
  ProbeDataset ds;
  ds.vars = fc.vars;
  for (std::size_t i = 0; i < fc.vars.size(); ++i) ds.cards[fc.vars[i]] = fc.cards[i];

  const std::size_t n = fc.vars.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<NodeId> a;
    std::vector<int> acards;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) {
        a.push_back(fc.vars[i]);
        acards.push_back(fc.cards[i]);
      }
    std::vector<int> vals(a.size(), 0);
    bool done = false;
    do {
      Pattern p;
      p.do_set = a;
      for (std::size_t i = 0; i < a.size(); ++i) p.do_values[a[i]] = vals[i];
      p.table = do_pattern_shadow(fc, p.do_values);
      ds.patterns.push_back(std::move(p));
      if (one_do || a.empty()) break;
      detail::next_assignment(vals, acards, done);
    } while (!done);
  }
  return ds;
}

/// Rebuild the full conditional of a binary model from its complete pattern
/// family. For a target (sharps = x, flats = y), split the variables into the
/// set D that agrees with x and its complement F; inclusion–exclusion over
/// which of F also agree turns "agree exactly on D" into an alternating sum of
/// pattern entries, each directly observable.
inline FullConditional reconstruct_binary(const ProbeDataset& ds) {
  const std::size_t n = ds.vars.size();
  for (const auto& v : ds.vars) {
    auto it = ds.cards.find(v);
    if (it == ds.cards.end() || it->second != 2)
      throw GraphError("reconstruction requires binary cardinalities");
  }

  FullConditional fc;
  fc.vars = ds.vars;
  fc.cards.assign(n, 2);
  std::vector<NodeId> tvars;
  std::vector<int> tcards(2 * n, 2);
  for (const auto& v : ds.vars) tvars.push_back(SplitNaming::sharp(v));
  for (const auto& v : ds.vars) tvars.push_back(SplitNaming::flat(v));
  fc.table = Table(tvars, tcards);

  // Q(K) at a fixed sharp vector: the pattern that intervenes on V \ K and
  // keeps K, read at the sharp values of K.
  auto agree_prob = [&](const std::vector<int>& x, std::size_t keep_mask) -> Rational {
    std::map<NodeId, int> dv;
    std::vector<int> at;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep_mask & (std::size_t{1} << i))
        at.push_back(x[i]);
      else
        dv[ds.vars[i]] = x[i];
    }
    const Pattern* p = ds.find(dv);
    if (!p) throw GraphError("dataset is missing a required pattern");
    return p->table.at(at);
  };

  std::vector<int> x(n, 0), y(n, 0);
  bool xdone = n == 0;
  std::size_t xi = 0;
  const std::size_t block = std::size_t{1} << n;
  while (true) {
    std::size_t yi = 0;
    std::fill(y.begin(), y.end(), 0);
    bool ydone = n == 0;
    Rational slice_sum(0);
    while (true) {
      std::size_t agree = 0, flip = 0;
      for (std::size_t i = 0; i < n; ++i)
        (y[i] == x[i] ? agree : flip) |= std::size_t{1} << i;

      Rational v(0);
      // Subsets T of the flip set, sign (-1)^|T|.
      std::size_t t = 0;
      while (true) {
        Rational q = agree_prob(x, agree | t);
        if (std::popcount(t) % 2 == 0)
          v += q;
        else
          v -= q;
        if (t == flip) break;
        t = (t - flip) & flip;  // next subset of flip after t
      }
      fc.table.values[xi * block + yi] = v;
      slice_sum += v;
      ++yi;
      if (n == 0) break;
      detail::next_assignment(y, fc.cards, ydone);
      if (ydone) break;
    }
    if (!slice_sum.is_one())
      throw std::logic_error("reconstructed slice does not sum to 1");
    ++xi;
    if (n == 0) break;
    detail::next_assignment(x, fc.cards, xdone);
    if (xdone) break;
  }
  return fc;
}

enum class VerdictStatus {
  FeasibleWithParams,
  InfeasibleDconnection,
  InfeasibleCommonAncestor,
  Undecided,
};

inline std::string verdict_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::FeasibleWithParams: return "feasible-with-params";
    case VerdictStatus::InfeasibleDconnection: return "infeasible-dconnection";
    case VerdictStatus::InfeasibleCommonAncestor: return "infeasible-common-ancestor";
    case VerdictStatus::Undecided: return "undecided";
  }
  return "undecided";
}

struct Verdict {
  VerdictStatus status = VerdictStatus::Undecided;
  std::optional<Params> params;  // feasible verdicts carry regenerating params
  std::string detail;
};

namespace detail {

inline std::size_t pos_in(const std::vector<NodeId>& seq, const NodeId& v) {
  auto it = std::find(seq.begin(), seq.end(), v);
  if (it == seq.end()) throw GraphError("unknown node '" + v + "'");
  return static_cast<std::size_t>(it - seq.begin());
}

/// Directed path of length >= 1 from `from` to `to` whose interior avoids
/// `blocked`.
template <class G>
bool reachable_avoiding(const G& g, const NodeId& from, const NodeId& to,
                        const std::set<NodeId>& blocked) {
  std::vector<NodeId> stack{from};
  std::set<NodeId> seen;
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    for (const auto& c : g.children(cur)) {
      if (c == to) return true;
      if (!blocked.count(c) && seen.insert(c).second) stack.push_back(c);
    }
  }
  return false;
}

inline bool is_point_mass_at_zero(const Table& t) {
  if (t.values.empty()) return false;
  if (!t.values[0].is_one()) return false;
  for (std::size_t i = 1; i < t.values.size(); ++i)
    if (!t.values[i].is_zero()) return false;
  return true;
}

}  // namespace detail

/// Witness dataset for a directed edge a->b of m: b copies a, the nodes in
/// `pinned` are held at the constant 0 in every pattern, everything else is an
/// independent fair coin, and no confounder is active. The observational
/// b-marginal is uniform while the do(a=0) one is a point mass, and the pinned
/// set seals off every indirect route by which a model lacking the edge could
/// move b. Parameters live on the canonical pDAG of m.
inline std::pair<Params, ProbeDataset> chain_construction(const Mdag& m, const NodeId& a,
                                                          const NodeId& b,
                                                          std::set<NodeId> pinned = {}) {
  if (!m.has_edge(a, b)) throw GraphError("edge (" + a + "," + b + ") absent");
  if (pinned.count(a) || pinned.count(b))
    throw GraphError("pinned set must not contain the exercised edge's endpoints");
  for (const auto& v : pinned) detail::pos_in(m.nodes(), v);

  Pdag g = canonical_pdag(m);
  CardinalityVector cards;
  for (const auto& v : m.nodes()) cards[v] = 2;
  for (const auto& l : g.latent_nodes()) cards[l] = 1;

  Params par;
  for (const auto& l : g.latent_nodes())
    par.mech[l] = constant_mechanism(g.parents(l), {}, 1, 0);
  for (const auto& v : m.nodes()) {
    auto ps = g.parents(v);
    std::vector<int> pc;
    for (const auto& p : ps) pc.push_back(cards.at(p));
    if (v == b)
      par.mech[v] = copy_mechanism(ps, pc, 2, detail::pos_in(ps, a));
    else if (pinned.count(v))
      par.mech[v] = constant_mechanism(ps, pc, 2, 0);
    else
      par.mech[v] = uniform_mechanism(ps, pc, 2);
  }

  FullConditional fc = full_conditional(g, par, cards);
  ProbeDataset ds;
  ds.vars = fc.vars;
  for (const auto& v : fc.vars) ds.cards[v] = 2;

  Pattern observe;
  observe.table = do_pattern_shadow(fc, {});
  ds.patterns.push_back(std::move(observe));
  Pattern doa;
  doa.do_set = {a};
  doa.do_values = {{a, 0}};
  doa.table = do_pattern_shadow(fc, doa.do_values);
  ds.patterns.push_back(std::move(doa));

  WitnessInfo w;
  w.kind = "chain";
  w.cause = a;
  w.effect = b;
  w.pinned.assign(pinned.begin(), pinned.end());
  std::sort(w.pinned.begin(), w.pinned.end(), [&](const NodeId& x, const NodeId& y) {
    return detail::pos_in(m.nodes(), x) < detail::pos_in(m.nodes(), y);
  });
  ds.witness = std::move(w);
  return {std::move(par), std::move(ds)};
}

/// Witness dataset for a face S of m: every member of S copies one shared
/// latent that is 0 with probability p, every other visible is an independent
/// fair coin. Observationally the S-members are perfectly correlated; under
/// do(rest = 0) the joint of any kept T ⊆ S stays the two-point mixture.
/// Parameters live on the canonical pDAG of m.
inline std::pair<Params, ProbeDataset> copy_construction(const Mdag& m, const Face& s,
                                                         const Rational& p) {
  auto fs = m.faces();
  Face key = s;
  std::sort(key.begin(), key.end(), [&](const NodeId& x, const NodeId& y) {
    return detail::pos_in(m.nodes(), x) < detail::pos_in(m.nodes(), y);
  });
  if (!fs.count(key)) throw GraphError("S is not a face of the mDAG");
  if (p < Rational(0) || p > Rational(1)) throw GraphError("mixture weight out of [0,1]");

  // The shared latent of the first facet covering S (singleton faces that are
  // themselves facets have none; the lone member then mixes on its own).
  std::optional<NodeId> shared;
  for (const auto& f : m.facets()) {
    if (f.size() < 2) continue;
    if (std::includes(f.begin(), f.end(), key.begin(), key.end(),
                      [&](const NodeId& x, const NodeId& y) {
                        return detail::pos_in(m.nodes(), x) < detail::pos_in(m.nodes(), y);
                      })) {
      NodeId lat = "λ";
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) lat += "_";
        lat += f[i];
      }
      shared = lat;
      break;
    }
  }

  Pdag g = canonical_pdag(m);
  CardinalityVector cards;
  for (const auto& v : m.nodes()) cards[v] = 2;
  for (const auto& l : g.latent_nodes()) cards[l] = (shared && l == *shared) ? 2 : 1;

  std::set<NodeId> in_s(key.begin(), key.end());
  Params par;
  for (const auto& l : g.latent_nodes()) {
    if (shared && l == *shared)
      par.mech[l] = noise_mechanism(g.parents(l), {}, {p, Rational(1) - p});
    else
      par.mech[l] = constant_mechanism(g.parents(l), {}, 1, 0);
  }
  for (const auto& v : m.nodes()) {
    auto ps = g.parents(v);
    std::vector<int> pc;
    for (const auto& q : ps) pc.push_back(cards.at(q));
    if (in_s.count(v) && shared)
      par.mech[v] = copy_mechanism(ps, pc, 2, detail::pos_in(ps, *shared));
    else if (in_s.count(v))
      par.mech[v] = noise_mechanism(ps, pc, {p, Rational(1) - p});
    else
      par.mech[v] = uniform_mechanism(ps, pc, 2);
  }

  FullConditional fc = full_conditional(g, par, cards);
  ProbeDataset ds;
  ds.vars = fc.vars;
  for (const auto& v : fc.vars) ds.cards[v] = 2;

  Pattern observe;
  observe.table = do_pattern_shadow(fc, {});
  ds.patterns.push_back(std::move(observe));

  // One pattern per kept subset T of S: intervene on everything else at 0.
  const std::size_t k = key.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::set<NodeId> kept;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) kept.insert(key[i]);
    Pattern pat;
    for (const auto& v : fc.vars)
      if (!kept.count(v)) {
        pat.do_set.push_back(v);
        pat.do_values[v] = 0;
      }
    if (pat.do_values.empty()) continue;  // S = all vars, T = S: same as observe
    pat.table = do_pattern_shadow(fc, pat.do_values);
    ds.patterns.push_back(std::move(pat));
  }

  WitnessInfo w;
  w.kind = "copy";
  w.members = key;
  w.mix = p;
  ds.witness = std::move(w);
  return {std::move(par), std::move(ds)};
}

/// Try the two structural refutations of a witness dataset against g. Every
/// claim the dataset's witness block makes is re-checked here, so a verdict is
/// sound on its own:
///  - chain: the pinned set must be constant 0 in both patterns and cover every
///    directed route from cause to effect in g; then the observational and
///    do(cause=0) effect-marginals may not differ, yet they do.
///  - copy: the members' joint at sharps = 0, rebuilt from the do-patterns by
///    inclusion–exclusion, must be a non-degenerate two-point mixture; then g
///    must offer a common latent ancestor for the members' flats, yet it does
///    not (perfect correlation needs a common cause).
inline Verdict certify_infeasible(const Pdag& g, const ProbeDataset& ds) {
  if (ds.vars != g.visible_nodes())
    throw GraphError("dataset variables do not match the graph's visibles");
  if (!ds.witness) throw GraphError("dataset carries no witness structure");
  const WitnessInfo& w = *ds.witness;

  auto undecided = [](std::string why) {
    Verdict v;
    v.status = VerdictStatus::Undecided;
    v.detail = std::move(why);
    return v;
  };

  if (w.kind == "chain") {
    const NodeId &a = w.cause, &b = w.effect;
    if (a == b || !std::count(ds.vars.begin(), ds.vars.end(), a) ||
        !std::count(ds.vars.begin(), ds.vars.end(), b))
      throw GraphError("malformed chain witness endpoints");
    std::set<NodeId> pinned(w.pinned.begin(), w.pinned.end());
    if (pinned.count(a) || pinned.count(b)) throw GraphError("pinned set overlaps endpoints");
    for (const auto& v : pinned)
      if (!std::count(ds.vars.begin(), ds.vars.end(), v))
        throw GraphError("pinned node '" + v + "' is not a dataset variable");

    const Pattern* obs = ds.find({});
    const Pattern* doa = ds.find({{a, 0}});
    if (!obs || !doa) throw GraphError("chain witness needs the observe and do(cause=0) patterns");

    if (!pinned.empty()) {
      if (!detail::is_point_mass_at_zero(obs->table.marginal(pinned)))
        return undecided("pinned set is not constant 0 observationally");
      if (!detail::is_point_mass_at_zero(doa->table.marginal(pinned)))
        return undecided("pinned set is not constant 0 under do(cause=0)");
    }
    if (obs->table.marginal({b}) == doa->table.marginal({b}))
      return undecided("effect marginal does not react to the intervention");

    if (g.has_edge(a, b))
      return undecided("graph has the exercised edge");
    if (detail::reachable_avoiding(g, a, b, pinned))
      return undecided("a directed route from cause to effect survives the pinned set");

    // The same fact in split form: with every other intervention value given,
    // the cause's sharp cannot reach the effect's flat.
    ThreePdag sg = split(g);
    DsepQuery q;
    q.a = {SplitNaming::sharp(a)};
    q.b = {SplitNaming::flat(b)};
    for (const auto& v : ds.vars)
      if (v != a) q.c.insert(SplitNaming::sharp(v));
    if (!d_separated(sg, q))
      return undecided("cause remains d-connected to effect in the split graph");

    Verdict v;
    v.status = VerdictStatus::InfeasibleDconnection;
    v.detail = "do(" + a + "=0) moves the marginal of '" + b +
               "' although every directed route is absent or pinned";
    return v;
  }

  if (w.kind == "copy") {
    const auto& s = w.members;
    if (s.size() < 2) return undecided("correlated set too small to constrain");
    for (const auto& v : s)
      if (!std::count(ds.vars.begin(), ds.vars.end(), v))
        throw GraphError("member '" + v + "' is not a dataset variable");
    for (const auto& v : ds.vars)
      if (ds.cards.at(v) != 2) throw GraphError("copy witness requires binary cardinalities");
    if (!(Rational(0) < w.mix && w.mix < Rational(1)))
      return undecided("mixture weight is degenerate");

    // Q(K) = P(flats of K all 0 | sharps all 0), straight from the pattern
    // that keeps exactly K.
    auto agree_zero = [&](std::size_t keep_mask) -> Rational {
      std::map<NodeId, int> dv;
      std::vector<int> zeros;
      for (std::size_t i = 0; i < ds.vars.size(); ++i) {
        bool kept = false;
        for (std::size_t j = 0; j < s.size(); ++j)
          if ((keep_mask & (std::size_t{1} << j)) && s[j] == ds.vars[i]) kept = true;
        if (kept)
          zeros.push_back(0);
        else
          dv[ds.vars[i]] = 0;
      }
      if (dv.empty()) {
        const Pattern* p = ds.find({});
        if (!p) throw GraphError("dataset is missing the observe pattern");
        std::vector<int> all0(ds.vars.size(), 0);
        return p->table.at(all0);
      }
      const Pattern* p = ds.find(dv);
      if (!p) throw GraphError("dataset is missing a required pattern");
      return p->table.at(zeros);
    };

    // Rebuild the members' joint at sharps = 0 and compare with the two-point
    // mixture p·[0...0] + (1-p)·[1...1].
    const std::size_t k = s.size();
    for (std::size_t y = 0; y < (std::size_t{1} << k); ++y) {
      std::size_t agree = ~y & ((std::size_t{1} << k) - 1);  // bits where value is 0
      std::size_t flip = y;
      Rational joint(0);
      std::size_t t = 0;
      while (true) {
        Rational q = agree_zero(agree | t);
        if (std::popcount(t) % 2 == 0)
          joint += q;
        else
          joint -= q;
        if (t == flip) break;
        t = (t - flip) & flip;
      }
      Rational expect(0);
      if (y == 0) expect = w.mix;
      if (y == (std::size_t{1} << k) - 1) expect = Rational(1) - w.mix;
      if (joint != expect) return undecided("members are not the asserted two-point mixture");
    }

    ThreePdag sg = split(g);
    std::set<NodeId> lats;
    for (const auto& l : g.latent_nodes()) lats.insert(l);
    std::set<NodeId> common = lats;
    for (const auto& v : s) {
      auto anc = sg.ancestors(SplitNaming::flat(v));
      std::set<NodeId> next;
      for (const auto& l : common)
        if (anc.count(l)) next.insert(l);
      common = std::move(next);
      if (common.empty()) break;
    }
    if (!common.empty())
      return undecided("members share a latent ancestor '" + *common.begin() + "'");

    Verdict v;
    v.status = VerdictStatus::InfeasibleCommonAncestor;
    std::string names;
    for (const auto& x : s) names += (names.empty() ? "" : ",") + x;
    v.detail = "{" + names + "} is perfectly correlated but shares no latent ancestor";
    return v;
  }

  throw GraphError("unknown witness kind '" + w.kind + "'");
}

/// Outcome of comparing two mDAGs: either the inclusion certificate showing g
/// structurally dominates h, or a dataset realizable by h together with the
/// structural refutation of g and the parameters that regenerate the data.
struct DominanceCertificate {
  std::set<Edge> edges;  // h's edges, all present in g
  std::set<Face> faces;  // h's faces, all present in g
};

struct WitnessResult {
  std::optional<DominanceCertificate> certificate;
  std::optional<ProbeDataset> dataset;
  std::optional<Verdict> verdict_for_g;
  std::optional<Params> params_for_h;

  bool dominates() const { return certificate.has_value(); }
};

/// Visible nodes strictly between a and b on directed routes of m.
inline std::set<NodeId> mediaries(const Mdag& m, const NodeId& a, const NodeId& b) {
  auto reach = [&](const NodeId& from, bool forward) {
    std::map<NodeId, std::set<NodeId>> adj;
    for (const auto& e : m.edges())
      adj[forward ? e.first : e.second].insert(forward ? e.second : e.first);
    std::set<NodeId> seen;
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
      NodeId cur = stack.back();
      stack.pop_back();
      for (const auto& n : adj[cur])
        if (seen.insert(n).second) stack.push_back(n);
    }
    return seen;
  };
  auto down = reach(a, true), up = reach(b, false);
  std::set<NodeId> out;
  for (const auto& v : down)
    if (up.count(v) && v != a && v != b) out.insert(v);
  return out;
}

/// g fails to dominate h exactly when h can realize a dataset that g
/// structurally cannot. A missing directed edge is exercised by a chain
/// witness (pinning g's mediaries), a missing face by a copy witness with
/// p = 1/2; only do-value 0 is ever used.
inline WitnessResult dominance_witness(const Mdag& g, const Mdag& h) {
  if (g.nodes() != h.nodes()) throw GraphError("mDAGs disagree on nodes or order");

  WitnessResult res;
  if (structurally_dominates(g, h)) {
    DominanceCertificate cert;
    cert.edges = h.edges();
    cert.faces = h.faces();
    res.certificate = std::move(cert);
    return res;
  }

  std::optional<std::pair<NodeId, NodeId>> missing_edge;
  const auto& order = g.nodes();
  for (std::size_t i = 0; i < order.size() && !missing_edge; ++i)
    for (std::size_t j = i + 1; j < order.size() && !missing_edge; ++j)
      if (h.has_edge(order[i], order[j]) && !g.has_edge(order[i], order[j]))
        missing_edge = {order[i], order[j]};

  Params par;
  ProbeDataset ds;
  if (missing_edge) {
    auto [a, b] = *missing_edge;
    std::tie(par, ds) = chain_construction(h, a, b, mediaries(g, a, b));
  } else {
    auto gf = g.faces(), hf = h.faces();
    std::optional<Face> missing;
    for (const auto& f : hf) {
      if (gf.count(f)) continue;
      if (!missing || f.size() > missing->size() || (f.size() == missing->size() && f < *missing))
        missing = f;
    }
    if (!missing) throw std::logic_error("non-dominating pair with no missing edge or face");
    std::tie(par, ds) = copy_construction(h, *missing, Rational(1, 2));
  }

  res.verdict_for_g = certify_infeasible(canonical_pdag(g), ds);
  res.dataset = std::move(ds);
  res.params_for_h = std::move(par);
  return res;
}

}  // namespace mdag
