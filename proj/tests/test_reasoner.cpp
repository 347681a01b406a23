#include <doctest.h>

#include "support.hpp"
#include "kgs/index_file.hpp"
#include "kgs/reasoner.hpp"

using namespace kgs;
using namespace kgs::testing;

namespace {

struct Engines {
  IndexBundle idx = build_index(parse_triples_file(std::string(FIXTURE_DIR) + "/engines.nt").graph, BuildParams{});
  TermId term(const std::string& iri) const { return *idx.graph.terms().find("<" + iri + ">"); }
  LabelId pred(const std::string& iri) const { return *idx.graph.labels().find("<" + iri + ">"); }

  KeywordQuery fig1() const {
    KeywordQuery w;
    w.vertex_keywords = {term("http://dbpedia.org/ontology/Engine"), term("http://dbpedia.org/resource/BMW_M43")};
    w.label_keywords = {pred("http://dbpedia.org/ontology/successor"),
                        pred("http://dbpedia.org/ontology/predecessor")};
    return w;
  }
};

}  // namespace

TEST_CASE("fig 1: refinement reaches the automobile engine") {
  Engines e;
  auto r = answer_query(e.idx.context(), e.idx.hierarchy, e.fig1());
  CHECK(r.status == QueryStatus::RefinedFound);
  CHECK(r.attempts == 2);
  CHECK(r.derivative.keywords.vertex_keywords[0] == e.term("http://dbpedia.org/ontology/AutomobileEngine"));
  CHECK(r.derivative.similarity == doctest::Approx(11.0 / 15.0));
  REQUIRE(r.peers.size() == 1);
  CHECK(r.peers[0].keywords.vertex_keywords[0] == e.term("http://dbpedia.org/ontology/RocketEngine"));

  REQUIRE(r.mcs);
  CHECK(r.mcs->complete());
  const auto& vs = r.mcs->graph.vertices;
  CHECK(std::binary_search(vs.begin(), vs.end(), e.term("http://dbpedia.org/resource/BMW_M10")));
  CHECK(std::binary_search(vs.begin(), vs.end(), e.term("http://dbpedia.org/resource/BMW_M40")));

  REQUIRE(r.answers.rows.size() == 1);
  const auto& row = r.answers.rows[0];
  CHECK(std::find(row.begin(), row.end(), e.term("http://dbpedia.org/resource/BMW_M10")) != row.end());

  REQUIRE(r.pattern);
  CHECK(r.pattern->branch_count() == 2);
  std::string text = serialize_sparql(*r.pattern, e.idx.graph);
  CHECK(text.find("<http://dbpedia.org/ontology/AutomobileEngine>") != std::string::npos);
  CHECK(text.find("<http://dbpedia.org/ontology/RocketEngine>") != std::string::npos);
  CHECK(text.find("UNION") != std::string::npos);
}

TEST_CASE("fig 1 without reasoning is empty") {
  Engines e;
  ReasonerOptions opt;
  opt.reasoning = false;
  auto r = answer_query(e.idx.context(), e.idx.hierarchy, e.fig1(), opt);
  CHECK(r.status == QueryStatus::Empty);
  CHECK(r.attempts == 1);
  CHECK_FALSE(r.mcs);
  CHECK(r.answers.rows.empty());
}

TEST_CASE("a satisfiable query is answered as given") {
  Engines e;
  KeywordQuery w;
  w.vertex_keywords = {e.term("http://dbpedia.org/resource/BMW_M10"), e.term("http://dbpedia.org/resource/BMW_M43")};
  auto r = answer_query(e.idx.context(), e.idx.hierarchy, w);
  CHECK(r.status == QueryStatus::Found);
  CHECK(r.attempts == 1);
  REQUIRE(r.mcs);
  CHECK(r.mcs->graph.edges.size() == 2);
  REQUIRE(r.answers.rows.size() == 1);
  CHECK(r.answers.rows[0] == std::vector<TermId>{e.term("http://dbpedia.org/resource/BMW_M40")});
}

TEST_CASE("a single keyword is its own answer") {
  Engines e;
  KeywordQuery w;
  w.vertex_keywords = {e.term("http://dbpedia.org/resource/RS-25")};
  auto r = answer_query(e.idx.context(), e.idx.hierarchy, w);
  CHECK(r.status == QueryStatus::Found);
  REQUIRE(r.mcs);
  CHECK(r.mcs->graph.vertices == w.vertex_keywords);
  CHECK(r.mcs->graph.edges.empty());
}

TEST_CASE("labels absent from the reachable graph leave the query empty") {
  Engines e;
  KeywordQuery w;
  w.vertex_keywords = {e.term("http://dbpedia.org/resource/BMW_M43")};
  w.label_keywords = {e.pred("http://dbpedia.org/ontology/manufacturer")};
  auto r = answer_query(e.idx.context(), e.idx.hierarchy, w);
  CHECK(r.status == QueryStatus::Empty);
}
