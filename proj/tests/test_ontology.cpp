#include <doctest.h>

#include "support.hpp"
#include "kgs/ontology.hpp"

using namespace kgs;
using namespace kgs::testing;

namespace {

KnowledgeGraph engines() { return parse_triples_file(std::string(FIXTURE_DIR) + "/engines.nt").graph; }

TermId dbo(const KnowledgeGraph& g, const std::string& n) { return id(g, "http://dbpedia.org/ontology/" + n); }
TermId dbr(const KnowledgeGraph& g, const std::string& n) { return id(g, "http://dbpedia.org/resource/" + n); }

}  // namespace

TEST_CASE("engine hierarchy depths and similarity") {
  auto g = engines();
  auto h = ConceptHierarchy::build(g);
  TermId engine = dbo(g, "Engine"), autom = dbo(g, "AutomobileEngine"), rocket = dbo(g, "RocketEngine");
  CHECK(h.depth(engine) == 1);
  CHECK(h.depth(autom) == 2);
  CHECK(h.depth(rocket) == 2);
  CHECK(h.descendants(engine) == std::vector<TermId>{autom, rocket});
  CHECK(h.descendants(autom).empty());
  CHECK(h.lca(autom, rocket) == h.component(engine));
  CHECK(wu_palmer(h, engine, autom) == doctest::Approx(2.0 / 3.0));
  CHECK(wu_palmer(h, autom, rocket) == doctest::Approx(0.5));
  CHECK_FALSE(h.contains(dbr(g, "BMW_M43")));
  CHECK_THROWS_AS(h.component(dbr(g, "BMW_M43")), UnknownConcept);
}

TEST_CASE("engine query derivatives") {
  auto g = engines();
  auto h = ConceptHierarchy::build(g);
  KeywordQuery w;
  w.vertex_keywords = {dbo(g, "Engine"), dbr(g, "BMW_M43")};
  w.label_keywords = {label(g, "http://dbpedia.org/ontology/successor"),
                      label(g, "http://dbpedia.org/ontology/predecessor")};
  auto ds = derivatives(w, h);
  REQUIRE(ds.items.size() == 3);
  CHECK_FALSE(ds.truncated);
  CHECK(ds.items[0].similarity == 1.0);
  CHECK(ds.items[0].refined_positions.empty());
  CHECK(ds.items[1].keywords.vertex_keywords[0] == dbo(g, "AutomobileEngine"));
  CHECK(ds.items[2].keywords.vertex_keywords[0] == dbo(g, "RocketEngine"));
  CHECK(ds.items[1].similarity == doctest::Approx(11.0 / 15.0));
  CHECK(same_similarity(ds.items[1].similarity, ds.items[2].similarity));
  for (const Derivative& d : ds.items) CHECK(same_similarity(keyword_set_similarity(w, d, h), d.similarity));
}

TEST_CASE("cycles collapse into one component") {
  std::vector<TermId> cs{0, 1, 2, 3};
  auto h = ConceptHierarchy::build(cs, {{0, 1}, {1, 0}, {1, 2}, {3, 2}});
  CHECK(h.component(0) == h.component(1));
  CHECK(h.component_count() == 3);
  CHECK(h.members(h.component(0)) == std::vector<TermId>{0, 1});
  CHECK(h.depth(2) == 1);
  CHECK(h.depth(0) == 2);
  CHECK(wu_palmer(h, 0, 1) == 1.0);
  CHECK(h.descendants(0).empty());
  CHECK(h.descendants(2) == std::vector<TermId>{0, 1, 3});
  CHECK(h.parents(h.component(2)) == std::vector<std::uint32_t>{h.pseudo_root()});
}

TEST_CASE("depth is the longest path from the root") {
  std::vector<TermId> cs{10, 11, 12, 13};
  auto h = ConceptHierarchy::build(cs, {{10, 11}, {11, 12}, {10, 12}, {13, 12}});
  CHECK(h.depth(12) == 1);
  CHECK(h.depth(11) == 2);
  CHECK(h.depth(10) == 3);
  CHECK(h.depth(13) == 2);
  CHECK(h.lca(10, 13) == h.component(12));
  CHECK(wu_palmer(h, 10, 13) == doctest::Approx(2.0 / 5.0));
  CHECK_THROWS_AS(ConceptHierarchy::build(cs, {{10, 99}}), UnknownConcept);
}

TEST_CASE("disjoint roots meet at the pseudo-root") {
  std::vector<TermId> cs{0, 1};
  auto h = ConceptHierarchy::build(cs, {});
  CHECK(h.lca(0, 1) == h.pseudo_root());
  CHECK(wu_palmer(h, 0, 1) == 0.0);
}

TEST_CASE("rebuilding from parts keeps every answer") {
  std::vector<TermId> cs{0, 1, 2, 3, 4};
  auto h = ConceptHierarchy::build(cs, {{0, 1}, {1, 0}, {1, 2}, {3, 2}, {4, 3}});
  std::vector<std::vector<std::uint32_t>> parents;
  for (std::uint32_t c = 0; c < h.component_count(); ++c) parents.push_back(h.parents(c));
  auto r = ConceptHierarchy::from_parts(h.concepts(), h.component_of(), parents);
  for (TermId a : cs) {
    CHECK(r.depth(a) == h.depth(a));
    CHECK(r.descendants(a) == h.descendants(a));
    for (TermId b : cs) CHECK(r.lca(a, b) == h.lca(a, b));
  }
  std::vector<std::vector<std::uint32_t>> cyclic{{1}, {0}};
  CHECK_THROWS(ConceptHierarchy::from_parts({0, 1}, {0, 1}, cyclic));
}

TEST_CASE("combined similarity hand values") {
  std::vector<double> none;
  CHECK(combined_similarity(3, none) == 1.0);
  std::vector<double> one{0.5};
  CHECK(combined_similarity(2, one) == doctest::Approx(1.5 / 3.0));
  std::vector<double> two{1.0, 0.0};
  CHECK(combined_similarity(2, two) == doctest::Approx(0.25));
  std::vector<double> three{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(combined_similarity(2, three), std::invalid_argument);
}

TEST_CASE("invalid derivatives are rejected") {
  std::vector<TermId> cs{0, 1, 2};
  auto h = ConceptHierarchy::build(cs, {{1, 0}});
  KeywordQuery w;
  w.vertex_keywords = {0, 7};
  Derivative up;
  up.keywords.vertex_keywords = {1, 7};
  up.refined_positions = {0};
  CHECK(keyword_set_similarity(w, up, h) == doctest::Approx((1.0 + 2.0 / 3.0) / 3.0));
  Derivative sideways = up;
  sideways.keywords.vertex_keywords = {2, 7};
  CHECK_THROWS_AS(keyword_set_similarity(w, sideways, h), std::invalid_argument);
  Derivative entity = up;
  entity.keywords.vertex_keywords = {0, 8};
  entity.refined_positions = {1};
  CHECK_THROWS_AS(keyword_set_similarity(w, entity, h), std::invalid_argument);
  Derivative wrong_pos = up;
  wrong_pos.refined_positions = {};
  CHECK_THROWS_AS(keyword_set_similarity(w, wrong_pos, h), std::invalid_argument);
}

TEST_CASE("derivatives are ordered best first and capped") {
  // 0 <- 1 <- 2 and 3 <- 4.
  std::vector<TermId> cs{0, 1, 2, 3, 4};
  auto h = ConceptHierarchy::build(cs, {{1, 0}, {2, 1}, {4, 3}});
  KeywordQuery w;
  w.vertex_keywords = {0, 3};
  auto ds = derivatives(w, h);
  CHECK(ds.items.size() == 6);
  for (std::size_t i = 1; i < ds.items.size(); ++i) {
    CHECK(std::llround(ds.items[i - 1].similarity * 1e12) >= std::llround(ds.items[i].similarity * 1e12));
  }
  CHECK(ds.items[0].keywords.vertex_keywords == w.vertex_keywords);
  for (const Derivative& d : ds.items) CHECK(same_similarity(keyword_set_similarity(w, d, h), d.similarity));
  auto capped = derivatives(w, h, 4);
  CHECK(capped.truncated);
  CHECK(capped.items.size() == 4);
}
