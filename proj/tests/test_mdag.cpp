#include <catch2/catch_amalgamated.hpp>

#include "mdag/reduction.hpp"
#include "mdag/swig.hpp"

#include "support.hpp"

using namespace mdag;

namespace {
std::pair<NodeId, NodeKind> vis(const char* id) { return {id, NodeKind::Visible}; }
std::pair<NodeId, NodeKind> lat(const char* id) { return {id, NodeKind::Latent}; }
}  // namespace

TEST_CASE("latent children become facets") {
  Pdag g({vis("a"), vis("b"), lat("u")}, {{"a", "b"}, {"u", "a"}, {"u", "b"}});
  Mdag m = lnodes_to_faces(g);
  CHECK(m.nodes() == std::vector<NodeId>{"a", "b"});
  CHECK(m.edges() == std::set<Edge>{{"a", "b"}});
  CHECK(m.facets() == std::set<Face>{{"a", "b"}});
}

TEST_CASE("latent-free graphs map to confounder-free mdags") {
  Pdag g({vis("a"), vis("b"), vis("c")}, {{"a", "b"}, {"b", "c"}});
  Mdag m = lnodes_to_faces(g);
  CHECK(m.edges() == g.edges());
  CHECK(m.facets() == std::set<Face>{{"a"}, {"b"}, {"c"}});
}

TEST_CASE("dominated latents leave no separate facet") {
  Pdag g({vis("a"), vis("b"), vis("c"), lat("u1"), lat("u2")},
         {{"u1", "a"}, {"u1", "b"}, {"u2", "a"}, {"u2", "b"}, {"u2", "c"}});
  Mdag m = lnodes_to_faces(g);
  CHECK(m.facets() == std::set<Face>{{"a", "b", "c"}});
}

TEST_CASE("reduction happens before projection") {
  // endogenous latent u: exogenization hands u's children to its parent a
  Pdag g({vis("a"), vis("b"), lat("u")}, {{"a", "u"}, {"u", "b"}});
  Mdag m = lnodes_to_faces(g);
  CHECK(m.edges() == std::set<Edge>{{"a", "b"}});
  CHECK(m.facets() == std::set<Face>{{"a"}, {"b"}});
}

TEST_CASE("canonical graph of a full-triple complex has one latent") {
  Mdag m({"0", "1", "2"}, {}, SimplicialComplex({"0", "1", "2"}, {{"0", "1", "2"}}));
  Pdag g = canonical_pdag(m);
  CHECK(g.latent_nodes() == std::vector<NodeId>{"λ0_1_2"});
  CHECK(g.children("λ0_1_2") == std::vector<NodeId>{"0", "1", "2"});
  CHECK(g.edges().size() == 3);
}

TEST_CASE("canonical graph of a confounder-free mdag is latent-free") {
  Mdag m({"a", "b"}, {{"a", "b"}}, SimplicialComplex({"a", "b"}, {}));
  Pdag g = canonical_pdag(m);
  CHECK(g.latent_nodes().empty());
  CHECK(g.edges() == std::set<Edge>{{"a", "b"}});
}

TEST_CASE("canonical graph carries one latent per non-singleton facet") {
  Mdag m({"0", "1", "2"}, {},
         SimplicialComplex({"0", "1", "2"}, {{"0", "1"}, {"0", "2"}, {"1", "2"}}));
  Pdag g = canonical_pdag(m);
  CHECK(g.latent_nodes().size() == 3);
  for (const auto& u : g.latent_nodes()) {
    CHECK(g.parents(u).empty());
    CHECK(g.children(u).size() == 2);
  }
}

TEST_CASE("projection retracts the canonical section") {
  // lnodes_to_faces(canonical_pdag(m)) == m on assorted mdags
  std::vector<Mdag> cases;
  cases.push_back(Mdag({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}},
                       SimplicialComplex({"a", "b", "c"}, {{"b", "c"}})));
  cases.push_back(Mdag({"a", "b"}, {}, SimplicialComplex({"a", "b"}, {})));
  cases.push_back(Mdag({"a", "b", "c"}, {{"a", "c"}},
                       SimplicialComplex({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}})));
  for (const auto& m : cases) {
    Mdag back = lnodes_to_faces(canonical_pdag(m));
    CHECK(back.nodes() == m.nodes());
    CHECK(back.edges() == m.edges());
    CHECK(back.facets() == m.facets());
  }
}

TEST_CASE("projection retracts the canonical section across a catalog") {
  MdagCatalog cat = enumerate_mdags(3);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    Mdag m = cat.entry(i);
    Mdag back = lnodes_to_faces(canonical_pdag(m));
    REQUIRE(back.edges() == m.edges());
    REQUIRE(back.facets() == m.facets());
  }
}

TEST_CASE("canonical graph then re-reduction is stable") {
  // canonical_pdag output is already fully reduced
  mdag::testing::for_each_pdag(2, 2, [](const Pdag& g) {
    Pdag canon = canonical_pdag(lnodes_to_faces(g));
    REQUIRE(re_reduce(canon).graph == canon);
  });
}

TEST_CASE("three-mdag keeps input nodes in singleton faces") {
  ThreeMdag m({{"a_sharp", NodeKind::Input}, {"b", NodeKind::Visible}}, {{"a_sharp", "b"}},
              SimplicialComplex({"a_sharp", "b"}, {}));
  CHECK(m.visible_nodes() == std::vector<NodeId>{"b"});
  CHECK_THROWS_AS(ThreeMdag({{"a_sharp", NodeKind::Input}, {"b", NodeKind::Visible}}, {},
                            SimplicialComplex({"a_sharp", "b"}, {{"a_sharp", "b"}})),
                  GraphError);
}
