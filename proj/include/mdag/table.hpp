#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdag/graph.hpp"
#include "mdag/rational.hpp"

namespace mdag {

/// Dense table of exact rationals over named discrete variables. Mixed-radix
/// indexing, first variable most significant.
struct Table {
  std::vector<NodeId> vars;
  std::vector<int> cards;
  std::vector<Rational> values;

  Table() = default;
  Table(std::vector<NodeId> v, std::vector<int> c) : vars(std::move(v)), cards(std::move(c)) {
    if (vars.size() != cards.size()) throw std::invalid_argument("vars/cards size mismatch");
    for (int k : cards)
      if (k < 1) throw std::invalid_argument("cardinality must be >= 1");
    values.assign(cell_count(), Rational(0));
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int k : cards) n *= static_cast<std::size_t>(k);
    return n;
  }

  std::size_t index(const std::vector<int>& a) const {
    if (a.size() != vars.size()) throw std::invalid_argument("assignment arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0 || a[i] >= cards[i]) throw std::out_of_range("value out of range");
      idx = idx * static_cast<std::size_t>(cards[i]) + static_cast<std::size_t>(a[i]);
    }
    return idx;
  }

  std::vector<int> assignment(std::size_t idx) const {
    std::vector<int> a(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
      a[i] = static_cast<int>(idx % static_cast<std::size_t>(cards[i]));
      idx /= static_cast<std::size_t>(cards[i]);
    }
    return a;
  }

  Rational& at(const std::vector<int>& a) { return values[index(a)]; }
  const Rational& at(const std::vector<int>& a) const { return values[index(a)]; }

  std::size_t var_pos(const NodeId& v) const {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) throw std::invalid_argument("unknown variable '" + v + "'");
    return static_cast<std::size_t>(it - vars.begin());
  }

  Rational total() const {
    Rational s(0);
    for (const auto& x : values) s += x;
    return s;
  }

  /// Marginal over `keep`, in this table's variable order.
  Table marginal(const std::set<NodeId>& keep) const {
    std::vector<NodeId> mv;
    std::vector<int> mc;
    std::vector<std::size_t> mpos;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (keep.count(vars[i])) {
        mv.push_back(vars[i]);
        mc.push_back(cards[i]);
        mpos.push_back(i);
      }
    }
    if (mv.size() != keep.size()) throw std::invalid_argument("marginal over unknown variable");
    Table out(mv, mc);
    std::vector<int> sub(mv.size());
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      if (values[idx].is_zero()) continue;
      auto a = assignment(idx);
      for (std::size_t i = 0; i < mpos.size(); ++i) sub[i] = a[mpos[i]];
      out.at(sub) += values[idx];
    }
    return out;
  }

  friend bool operator==(const Table& a, const Table& b) {
    return a.vars == b.vars && a.cards == b.cards && a.values == b.values;
  }
  friend bool operator!=(const Table& a, const Table& b) { return !(a == b); }
};

}  // namespace mdag
