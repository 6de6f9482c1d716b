#include <catch2/catch_amalgamated.hpp>

#include "mdag/dsep.hpp"
#include "mdag/swig.hpp"

#include "support.hpp"

using namespace mdag;
using mdag::testing::brute_dsep;
using mdag::testing::random_cards;
using mdag::testing::random_params;
using mdag::testing::random_pdag;
using mdag::testing::simulate_joint;

namespace {
std::pair<NodeId, NodeKind> vis(const char* id) { return {id, NodeKind::Visible}; }
std::pair<NodeId, NodeKind> lat(const char* id) { return {id, NodeKind::Latent}; }
}  // namespace

TEST_CASE("a conditioned chain is blocked") {
  Pdag g({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"b", "c"}});
  CHECK(d_separated(g, {{"a"}, {"c"}, {"b"}}));
  CHECK_FALSE(d_separated(g, {{"a"}, {"c"}, {}}));
}

TEST_CASE("a conditioned collider opens") {
  Pdag g({vis("a"), vis("b"), vis("c")}, {{"a", "c"}, {"b", "c"}});
  CHECK(d_separated(g, {{"a"}, {"b"}, {}}));
  CHECK_FALSE(d_separated(g, {{"a"}, {"b"}, {"c"}}));
}

TEST_CASE("a conditioned collider descendant opens") {
  Pdag g({vis("a"), vis("b"), vis("c"), vis("d")}, {{"a", "c"}, {"b", "c"}, {"c", "d"}});
  CHECK_FALSE(d_separated(g, {{"a"}, {"b"}, {"d"}}));
}

TEST_CASE("fork versus chain under the same conditioning") {
  Pdag fork({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"a", "c"}});
  CHECK(d_separated(fork, {{"b"}, {"c"}, {"a"}}));
  Pdag chain({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"b", "c"}});
  CHECK_FALSE(d_separated(chain, {{"b"}, {"c"}, {"a"}}));
}

TEST_CASE("latents carry paths") {
  Pdag g({vis("a"), vis("b"), lat("u")}, {{"u", "a"}, {"u", "b"}});
  CHECK_FALSE(d_separated(g, {{"a"}, {"b"}, {}}));
  CHECK(d_separated(g, {{"a"}, {"b"}, {"u"}}));
}

TEST_CASE("split graphs answer sharp-to-flat queries") {
  Pdag g({vis("a"), vis("b")}, {{"a", "b"}});
  ThreePdag s = split(g);
  CHECK_FALSE(d_separated(s, {{"a_sharp"}, {"b_flat"}, {}}));
  CHECK(d_separated(s, {{"a_flat"}, {"b_flat"}, {"a_sharp"}}));
  CHECK(d_separated(s, {{"b_sharp"}, {"a_flat"}, {}}));
}

TEST_CASE("queries are validated") {
  Pdag g({vis("a"), vis("b")}, {});
  CHECK_THROWS_AS(d_separated(g, {{"a"}, {"a"}, {}}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {{"a"}, {"b"}, {"a"}}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {{}, {"b"}, {}}), GraphError);
  CHECK_THROWS_AS(d_separated(g, {{"zzz"}, {"b"}, {}}), GraphError);
}

TEST_CASE("separation agrees with exhaustive path enumeration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    Pdag g = random_pdag(rng, 6);
    auto all = g.nodes();
    if (all.size() < 3) continue;
    for (int q = 0; q < 6; ++q) {
      // random disjoint singleton-or-pair sets over all nodes
      std::vector<NodeId> pool;
      for (const auto& [id, kind] : all) pool.push_back(id);
      std::shuffle(pool.begin(), pool.end(), rng);
      DsepQuery query;
      query.a = {pool[0]};
      query.b = {pool[1]};
      for (std::size_t k = 2; k < pool.size(); ++k)
        if (rng() % 2) query.c.insert(pool[k]);
      REQUIRE(d_separated(g, query) == brute_dsep(g, query));
    }
  }
}

TEST_CASE("independence holds on product distributions") {
  Table t({"a", "b"}, {2, 2});
  t.at({0, 0}) = Rational(1, 4);
  t.at({0, 1}) = Rational(1, 4);
  t.at({1, 0}) = Rational(1, 4);
  t.at({1, 1}) = Rational(1, 4);
  CHECK(ci_holds(t, {"a"}, {"b"}, {}));
}

TEST_CASE("independence fails on a perfectly correlated pair") {
  Table t({"a", "b"}, {2, 2});
  t.at({0, 0}) = Rational(1, 2);
  t.at({1, 1}) = Rational(1, 2);
  CHECK_FALSE(ci_holds(t, {"a"}, {"b"}, {}));
}

TEST_CASE("independence checks validate their sets") {
  Table t({"a", "b"}, {2, 2});
  t.at({0, 0}) = Rational(1);
  CHECK_THROWS_AS(ci_holds(t, {"a"}, {"b"}, {"b"}), std::invalid_argument);
  CHECK_THROWS_AS(ci_holds(t, {"a"}, {"a"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(ci_holds(t, {}, {"b"}, {}), std::invalid_argument);
}

TEST_CASE("zero-probability conditioning slices hold vacuously") {
  // c never takes value 1, so the c=1 slice constrains nothing
  Table t({"a", "b", "c"}, {2, 2, 2});
  t.at({0, 0, 0}) = Rational(1, 2);
  t.at({1, 1, 0}) = Rational(1, 2);
  CHECK_FALSE(ci_holds(t, {"a"}, {"b"}, {"c"}));  // the c=0 slice still correlates
  Table u({"a", "b", "c"}, {2, 2, 2});
  u.at({0, 0, 0}) = Rational(1, 4);
  u.at({0, 1, 0}) = Rational(1, 4);
  u.at({1, 0, 0}) = Rational(1, 4);
  u.at({1, 1, 0}) = Rational(1, 4);
  CHECK(ci_holds(u, {"a"}, {"b"}, {"c"}));
}

TEST_CASE("graph separation implies distributional independence") {
  std::mt19937_64 rng(43);
  int done = 0;
  while (done < 40) {
    Pdag g = random_pdag(rng, 5);
    auto visible = g.visible_nodes();
    if (visible.size() < 3) continue;
    ++done;
    CardinalityVector cards = random_cards(rng, g, {2, 3});
    Params par = random_params(rng, g, cards);
    Table joint = simulate_joint(g, par, cards);

    for (std::size_t i = 0; i < visible.size(); ++i)
      for (std::size_t j = 0; j < visible.size(); ++j) {
        if (i == j) continue;
        std::set<NodeId> rest;
        for (std::size_t k = 0; k < visible.size(); ++k)
          if (k != i && k != j && rng() % 2) rest.insert(visible[k]);
        DsepQuery q{{visible[i]}, {visible[j]}, rest};
        if (d_separated(g, q))
          REQUIRE(ci_holds(joint, q.a, q.b, q.c));
      }
  }
}

TEST_CASE("latent-free witness separates a fork from a chain") {
  Pdag fork({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"a", "c"}});
  Pdag chain({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"b", "c"}});
  DsepQuery q = latent_free_witness(fork, chain);
  CHECK(d_separated(fork, q) != d_separated(chain, q));
}

TEST_CASE("adjacent-edge difference gives an empty conditioning set") {
  Pdag g({vis("a"), vis("b")}, {{"a", "b"}});
  Pdag h({vis("a"), vis("b")}, {});
  DsepQuery q = latent_free_witness(g, h);
  CHECK(q.a == std::set<NodeId>{"a"});
  CHECK(q.b == std::set<NodeId>{"b"});
  CHECK(q.c.empty());
  CHECK_FALSE(d_separated(g, q));
  CHECK(d_separated(h, q));
}

TEST_CASE("every distinct latent-free three-node pair is separated") {
  auto structures = enumerate_directed(3);
  std::vector<Pdag> graphs;
  for (const auto& edges : structures)
    graphs.push_back(
        Pdag({vis("a"), vis("b"), vis("c")}, edges));
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      if (i == j) continue;
      DsepQuery q = latent_free_witness(graphs[i], graphs[j]);
      REQUIRE(d_separated(graphs[i], q) != d_separated(graphs[j], q));
    }
}

TEST_CASE("latent-free witness validates its inputs") {
  Pdag g({vis("a"), vis("b")}, {{"a", "b"}});
  CHECK_THROWS_AS(latent_free_witness(g, g), GraphError);
  Pdag with_latent({vis("a"), vis("b"), lat("u")}, {{"u", "a"}, {"u", "b"}});
  CHECK_THROWS_AS(latent_free_witness(g, with_latent), GraphError);
}
