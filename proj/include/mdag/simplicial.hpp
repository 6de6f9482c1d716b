#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mdag/graph.hpp"

namespace mdag {

using Face = std::vector<NodeId>;  // members sorted by ground position

/// Downward-closed family of nonempty subsets of a ground set, containing
/// every singleton. Only the inclusion-maximal faces (facets) are stored;
/// the full face family is expanded on demand. The empty set is never a face.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Builds the complex whose facets are the maximal elements of `generators`
  /// plus a singleton facet for every ground element not covered by any
  /// generator. Generator members must belong to the ground set.
  SimplicialComplex(std::vector<NodeId> ground, const std::set<Face>& generators)
      : ground_(std::move(ground)) {
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (!valid_node_id(ground_[i])) throw GraphError("invalid node id '" + ground_[i] + "'");
      if (!pos.emplace(ground_[i], i).second)
        throw GraphError("duplicate ground element '" + ground_[i] + "'");
    }
    std::set<std::set<NodeId>> gens;
    for (const auto& f : generators) {
      if (f.empty()) throw GraphError("empty set cannot be a face");
      std::set<NodeId> s(f.begin(), f.end());
      for (const auto& m : s)
        if (!pos.count(m)) throw GraphError("face member '" + m + "' not in ground set");
      gens.insert(std::move(s));
    }
    std::set<NodeId> covered;
    for (const auto& s : gens) {
      bool maximal = true;
      for (const auto& t : gens) {
        if (&s != &t && s != t && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
          maximal = false;
          break;
        }
      }
      if (maximal) {
        facets_.insert(sort_by_pos(s, pos));
        covered.insert(s.begin(), s.end());
      } else {
        covered.insert(s.begin(), s.end());
      }
    }
    for (const auto& g : ground_)
      if (!covered.count(g)) facets_.insert({g});
  }

  const std::vector<NodeId>& ground() const { return ground_; }
  const std::set<Face>& facets() const { return facets_; }

  /// All faces: nonempty subsets of the stored facets (downward closure).
  std::set<Face> faces() const {
    std::map<NodeId, std::size_t> pos = positions();
    std::set<Face> out;
    for (const auto& f : facets_) {
      std::size_t k = f.size();
      for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
        std::set<NodeId> s;
        for (std::size_t i = 0; i < k; ++i)
          if (sub & (std::uint64_t{1} << i)) s.insert(f[i]);
        out.insert(sort_by_pos(s, pos));
      }
    }
    return out;
  }

  bool contains_face(const std::set<NodeId>& s) const {
    if (s.empty()) return false;
    for (const auto& f : facets_) {
      std::set<NodeId> fs(f.begin(), f.end());
      if (std::includes(fs.begin(), fs.end(), s.begin(), s.end())) return true;
    }
    return false;
  }

  /// Bitmask over the 2^n - 1 nonempty subsets of the ground set (bit s-1 is
  /// set iff subset s, read as a bitmask over ground positions, is a face).
  /// Requires a ground set of at most 6 elements.
  std::uint64_t face_mask() const {
    if (ground_.size() > 6) throw GraphError("face_mask limited to 6 ground elements");
    std::map<NodeId, std::size_t> pos = positions();
    std::uint64_t mask = 0;
    for (const auto& f : facets_) {
      std::uint64_t fm = 0;
      for (const auto& m : f) fm |= std::uint64_t{1} << pos.at(m);
      // every nonempty submask of fm is a face
      for (std::uint64_t sub = fm; sub; sub = (sub - 1) & fm) mask |= std::uint64_t{1} << (sub - 1);
    }
    return mask;
  }

  static SimplicialComplex from_face_mask(std::vector<NodeId> ground, std::uint64_t mask) {
    std::set<Face> gens;
    std::size_t n = ground.size();
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
      if (!(mask & (std::uint64_t{1} << (s - 1)))) continue;
      Face f;
      for (std::size_t i = 0; i < n; ++i)
        if (s & (std::uint64_t{1} << i)) f.push_back(ground[i]);
      gens.insert(f);
    }
    return SimplicialComplex(std::move(ground), gens);
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.ground_ == b.ground_ && a.facets_ == b.facets_;
  }
  friend bool operator!=(const SimplicialComplex& a, const SimplicialComplex& b) {
    return !(a == b);
  }

 private:
  std::map<NodeId, std::size_t> positions() const {
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < ground_.size(); ++i) pos[ground_[i]] = i;
    return pos;
  }
  static Face sort_by_pos(const std::set<NodeId>& s, const std::map<NodeId, std::size_t>& pos) {
    Face f(s.begin(), s.end());
    std::sort(f.begin(), f.end(),
              [&](const NodeId& a, const NodeId& b) { return pos.at(a) < pos.at(b); });
    return f;
  }

  std::vector<NodeId> ground_;
  std::set<Face> facets_;
};

/// Downward closure of a generator family as a plain face set, without
/// constructing the complex.
inline std::set<Face> closure(const std::vector<NodeId>& ground, const std::set<Face>& generators) {
  return SimplicialComplex(ground, generators).faces();
}

}  // namespace mdag
