#include <catch2/catch_amalgamated.hpp>

#include "mdag/json_io.hpp"
#include "mdag/reduction.hpp"
#include "mdag/swig.hpp"

#include "support.hpp"

using namespace mdag;

namespace {
std::pair<NodeId, NodeKind> vis(const char* id) { return {id, NodeKind::Visible}; }
std::pair<NodeId, NodeKind> lat(const char* id) { return {id, NodeKind::Latent}; }
}  // namespace

TEST_CASE("rationals serialize as num/den strings") {
  CHECK(to_json(Rational(1, 2)) == Json("1/2"));
  CHECK(to_json(Rational(3)) == Json("3/1"));
  CHECK(rational_from_json(Json("2/6")) == Rational(1, 3));
  CHECK(rational_from_json(Json(5)) == Rational(5));
}

TEST_CASE("graph json round trip") {
  Pdag g({vis("a"), vis("b"), lat("u")}, {{"u", "a"}, {"u", "b"}, {"a", "b"}});
  Json j = to_json(g);
  CHECK(j.at("nodes")[0].at("id") == "a");
  CHECK(j.at("nodes")[2].at("kind") == "latent");
  CHECK_FALSE(json_has_input_nodes(j));
  CHECK(to_json(pdag_from_json(j)) == j);

  ThreePdag s = split(g);
  Json js = to_json(s);
  CHECK(json_has_input_nodes(js));
  CHECK(to_json(three_pdag_from_json(js)) == js);
}

TEST_CASE("graph json rejects malformed input") {
  CHECK_THROWS(pdag_from_json(Json::parse(R"({"nodes": [], "edges": [["a","b"]]})")));
  CHECK_THROWS(pdag_from_json(Json::parse(R"({"nodes": [{"id":"a","kind":"nope"}], "edges": []})")));
  // an input node in a plain graph file is a kind error
  CHECK_THROWS(pdag_from_json(Json::parse(
      R"({"nodes": [{"id":"a","kind":"input"}], "edges": []})")));
}

TEST_CASE("mdag json round trip") {
  Mdag m({"a", "b", "c"}, {{"a", "b"}},
         SimplicialComplex({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}));
  Json j = to_json(m);
  CHECK(j.at("nodes") == Json::array({"a", "b", "c"}));
  CHECK(to_json(mdag_from_json(j)) == j);

  ThreeMdag s = split(m);
  Json js = to_json(s);
  CHECK(to_json(three_mdag_from_json(js)) == js);
}

TEST_CASE("params json round trip") {
  std::mt19937_64 rng(3);
  Pdag g = mdag::testing::random_pdag(rng, 4);
  CardinalityVector cards = mdag::testing::random_cards(rng, g, {2, 3});
  Params par = mdag::testing::random_params(rng, g, cards);
  Json j = to_json(par);
  Params back = params_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(cards_of(back) == cards_of(par));
  validate_params(g, back, cards);
}

TEST_CASE("dataset json round trip keeps temporal order and witness") {
  Mdag m({"a", "b", "c"}, {{"a", "b"}}, SimplicialComplex({"a", "b", "c"}, {{"a", "b", "c"}}));
  auto [par, ds] = copy_construction(m, {"a", "b", "c"}, Rational(2, 5));
  Json j = to_json(ds);
  ProbeDataset back = dataset_from_json(j);
  CHECK(back.vars == ds.vars);
  CHECK(back.cards == ds.cards);
  CHECK(back.patterns.size() == ds.patterns.size());
  REQUIRE(back.witness.has_value());
  CHECK(back.witness->kind == "copy");
  CHECK(back.witness->mix == Rational(2, 5));
  CHECK(to_json(back) == j);
}

TEST_CASE("full conditional json round trip") {
  std::mt19937_64 rng(5);
  Pdag g = mdag::testing::random_pdag(rng, 4);
  CardinalityVector cards = mdag::testing::random_cards(rng, g, {2, 3});
  Params par = mdag::testing::random_params(rng, g, cards);
  FullConditional fc = full_conditional(g, par, cards);
  Json j = to_json(fc);
  CHECK(j.at("layout").get<std::string>().find("sharps then flats") != std::string::npos);
  FullConditional back = full_conditional_from_json(j);
  CHECK(back.vars == fc.vars);
  CHECK(back.table == fc.table);

  Json broken = j;
  broken["values"].erase(0);
  CHECK_THROWS(full_conditional_from_json(broken));
}

TEST_CASE("witness result json distinguishes the two outcomes") {
  Mdag top({"a", "b"}, {{"a", "b"}}, SimplicialComplex({"a", "b"}, {{"a", "b"}}));
  Mdag bot({"a", "b"}, {}, SimplicialComplex({"a", "b"}, {}));

  Json cert = to_json(dominance_witness(top, bot));
  CHECK(cert.at("dominates") == true);
  CHECK(cert.contains("certificate"));

  Json wit = to_json(dominance_witness(bot, top));
  CHECK(wit.at("dominates") == false);
  CHECK(wit.contains("dataset"));
  CHECK(wit.contains("verdict"));
  CHECK(wit.contains("params"));
  CHECK(wit.at("verdict").at("status") == "infeasible-dconnection");
}

TEST_CASE("reduction trace serializes each step") {
  Pdag g({vis("a"), vis("b"), lat("u1"), lat("u2")},
         {{"a", "u1"}, {"u1", "b"}, {"u2", "b"}});
  auto red = re_reduce(g);
  Json j = to_json(red.trace);
  REQUIRE(j.is_array());
  REQUIRE_FALSE(j.empty());
  CHECK(j[0].contains("rule"));
  CHECK(j[0].contains("target"));
  CHECK(j[0].contains("nodes"));
  CHECK(j[0].contains("edges"));
}

TEST_CASE("dsep query json round trip") {
  DsepQuery q{{"a"}, {"b"}, {"c", "d"}};
  Json j = to_json(q);
  DsepQuery back = dsep_query_from_json(j);
  CHECK(back.a == q.a);
  CHECK(back.b == q.b);
  CHECK(back.c == q.c);
}

TEST_CASE("hasse json lists elements and covers") {
  MdagCatalog cat = enumerate_mdags(2);
  Json j = to_json(hasse(cat));
  CHECK(j.at("elements") == 4);
  CHECK(j.at("covers").size() == 4);
}

TEST_CASE("catalog lines are self-describing and stable") {
  MdagCatalog cat = enumerate_mdags(2);
  std::string line0 = catalog_jsonl_line(cat, 0);
  Json j = Json::parse(line0);
  CHECK(j.at("index") == 0);
  CHECK(j.contains("nodes"));
  CHECK(j.contains("edges"));
  CHECK(j.contains("facets"));
  CHECK(catalog_jsonl_line(cat, 0) == line0);

  Mdag m = mdag_from_json(j);
  CHECK(m.edges() == cat.entry(0).edges());
  CHECK(m.facets() == cat.entry(0).facets());
}

TEST_CASE("serialization is byte-deterministic") {
  Mdag m({"a", "b", "c"}, {{"a", "c"}}, SimplicialComplex({"a", "b", "c"}, {{"a", "b"}}));
  CHECK(to_json(m).dump() == to_json(m).dump());
  auto [par, ds] = copy_construction(m, {"a", "b"}, Rational(1, 2));
  CHECK(to_json(ds).dump() == to_json(ds).dump());
}
