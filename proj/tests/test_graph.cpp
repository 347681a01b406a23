#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace kgs;
using namespace kgs::testing;

TEST_CASE("parser accepts IRIs, blank nodes and typed or tagged literals") {
  auto r = parse_triples_file(std::string(FIXTURE_DIR) + "/small.nt");
  CHECK(r.lines == 8);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].line == 8);
  const KnowledgeGraph& g = r.graph;
  CHECK(g.edge_count() == 6);
  CHECK(g.terms().find("_:c").has_value());
  auto lit = g.terms().find("\"42\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  REQUIRE(lit);
  CHECK(g.terms().is_literal(*lit));
  CHECK(g.terms().find("\"A \\\"quoted\\\" name\"@en").has_value());
  CHECK(g.edge_count(AssertionKind::Role) == 2);
  CHECK(g.edge_count(AssertionKind::Attribute) == 2);
  CHECK(g.edge_count(AssertionKind::Type) == 1);
  CHECK(g.edge_count(AssertionKind::TboxSubsumption) == 1);
}

TEST_CASE("strict mode throws with the line number") {
  ParseOptions opt;
  opt.strict = true;
  std::string text = "<a> <p> <b> .\n<a> <p> .\n";
  try {
    parse_triples(text, opt);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("malformed lines are skipped") {
  auto r = parse_triples(std::string_view("<a> <p> <b>\n\"x\" <p> <b> .\n<a> \"p\" <b> .\n<a> <p> <b> . extra\n"
                                          "<a <p> <b> .\n# comment\n\n<a> <p> <c> . # trailing comment\n"));
  CHECK(r.diagnostics.size() == 5);
  CHECK(r.graph.edge_count() == 1);
}

TEST_CASE("classification follows the configured predicates") {
  PredicateConfig pc;
  CHECK(classify(kRdfType, false, pc) == AssertionKind::Type);
  CHECK(classify(kRdfsSubClassOf, false, pc) == AssertionKind::TboxSubsumption);
  CHECK(classify("<p>", true, pc) == AssertionKind::Attribute);
  CHECK(classify("<p>", false, pc) == AssertionKind::Role);
  pc.type_predicate = "<isa>";
  CHECK(classify("<isa>", false, pc) == AssertionKind::Type);
  CHECK(classify(kRdfType, false, pc) == AssertionKind::Role);

  ParseOptions opt;
  opt.predicates.type_predicate = "<isa>";
  auto g = parse_triples(std::string_view("<x> <isa> <C> .\n<x> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <D> .\n"),
                         opt)
               .graph;
  CHECK(g.edge_count(AssertionKind::Type) == 1);
  CHECK(g.is_concept(id(g, "C")));
  CHECK_FALSE(g.is_concept(id(g, "D")));
}

TEST_CASE("views, adjacency order and lookups") {
  auto g = graph_of({{"a", "p", "b"},
                     {"a", "q", "b"},
                     {"c", "p", "a"},
                     {"a", "type", "C"},
                     {"a", "name", "\"x\""},
                     {"C", "subClassOf", "D"},
                     {"a", "p", "b"}});
  TermId a = id(g, "a"), b = id(g, "b"), c = id(g, "c"), C = id(g, "C"), D = id(g, "D");
  CHECK(g.edge_count() == 6);  // duplicate dropped
  CHECK(g.degree(a, View::Role) == 3);
  CHECK(g.degree(a, View::Type) == 1);
  CHECK(g.degree(a, View::Attribute) == 1);
  CHECK(g.degree(a, View::ABox) == 5);
  CHECK(g.degree(C, View::TBox) == 1);
  CHECK(g.degree(C, View::ABox) == 1);
  CHECK_FALSE(g.in_view(D, View::ABox));
  CHECK(g.is_concept(C));
  CHECK(g.is_concept(D));
  CHECK_FALSE(g.is_concept(a));

  auto inc = g.incident(a, View::ABox);
  CHECK(std::is_sorted(inc.begin(), inc.end(), [](const Neighbor& x, const Neighbor& y) {
    return std::tie(x.vertex, x.label, x.direction) < std::tie(y.vertex, y.label, y.direction);
  }));
  auto ns = g.neighbors(a, View::All);
  CHECK(ns.size() == 5);
  CHECK(std::is_sorted(ns.begin(), ns.end()));

  auto s = g.edge_between(a, b);
  REQUIRE(s);
  CHECK(s->label == label(g, "p"));
  CHECK(s->forward);
  auto back = g.edge_between(a, c);
  REQUIRE(back);
  CHECK_FALSE(back->forward);
  CHECK_FALSE(g.edge_between(b, c));
  CHECK_FALSE(g.edge_between(C, D, View::ABox));
  CHECK(g.edge_between(C, D, View::TBox));

  CHECK(g.edges_with_label(label(g, "p")).size() == 2);
  CHECK(g.edge_label_set(a, View::ABox).size() == 4);
  CHECK_THROWS(g.incident(a, View::All));
  REQUIRE(g.type_label());
  CHECK(*g.type_label() == label(g, "type"));
}

TEST_CASE("fingerprint is stable and sensitive") {
  auto g1 = graph_of({{"a", "p", "b"}, {"b", "p", "c"}});
  auto g2 = graph_of({{"a", "p", "b"}, {"b", "p", "c"}});
  auto g3 = graph_of({{"a", "p", "b"}, {"b", "q", "c"}});
  CHECK(g1.fingerprint() == g2.fingerprint());
  CHECK(g1.fingerprint() != g3.fingerprint());
}

TEST_CASE("path helpers") {
  auto g = graph_of({{"a", "p", "b"}, {"c", "p", "b"}, {"c", "p", "d"}});
  Path p = path_of(g, {"a", "b", "c", "d"});
  CHECK(valid_path(g, p));
  Path r = p.reversed();
  CHECK(valid_path(g, r));
  CHECK(r.front() == id(g, "d"));
  Path loop = path_of(g, {"a", "b", "c", "b", "c", "d"}).loop_erased();
  CHECK(loop == p);
  Path head = path_of(g, {"a", "b"});
  CHECK_THROWS(head.append(path_of(g, {"c", "d"})));
  head.append(path_of(g, {"b", "c"}));
  CHECK(head.length() == 2);
}
