#include <doctest.h>

#include "figures.hpp"
#include "kgs/mcs.hpp"

using namespace kgs;
using namespace kgs::testing;

TEST_CASE("fig 5: the dangling label is reached through t2") {
  auto f = fig5();
  std::vector<LabelId> w_el{label(f.g, "l0")};
  CHECK(covered_labels(f.tree, w_el).empty());
  Mcs m = build_mcs(f.tree, w_el, f.g);
  CHECK(m.complete());
  CHECK(m.covered_labels == w_el);
  CHECK(m.graph.edges.size() == 5);
  CHECK(m.graph.vertices.size() == 6);
  std::set<Edge> edges(m.graph.edges.begin(), m.graph.edges.end());
  CHECK(edges.count({id(f.g, "t2"), label(f.g, "r"), id(f.g, "v7")}));
  CHECK(edges.count({id(f.g, "v7"), label(f.g, "l0"), id(f.g, "v16")}));
  CHECK_FALSE(std::binary_search(m.graph.vertices.begin(), m.graph.vertices.end(), id(f.g, "v5")));
  CHECK(m.graph.size() == 11);
  CHECK(m.backbone.edges == f.tree.edges);
}

TEST_CASE("labels already on the tree need no search") {
  auto f = fig5();
  std::vector<LabelId> w_el{label(f.g, "r")};
  Mcs m = build_mcs(f.tree, w_el, f.g);
  CHECK(m.complete());
  CHECK(m.graph == to_subgraph(f.tree));
}

TEST_CASE("unreachable labels stay residual") {
  auto g = graph_of({{"a", "p", "b"}, {"c", "l", "d"}});
  SteinerTree t;
  t.vertices = {id(g, "a")};
  t.covered_keywords = t.vertices;
  std::vector<LabelId> w_el{label(g, "l")};
  Mcs m = build_mcs(t, w_el, g);
  CHECK_FALSE(m.complete());
  CHECK(m.residual_labels == w_el);
  CHECK(m.graph.vertices == t.vertices);
}

TEST_CASE("each label is attached by the nearest edge with a BFS path") {
  auto g = graph_of({{"a", "p", "b"}, {"b", "p", "c"}, {"c", "l", "d"}, {"a", "q", "e"}, {"e", "p", "f"},
                     {"f", "p", "g"}, {"g", "l", "h"}, {"c", "m", "a2"}});
  SteinerTree t;
  t.vertices = {id(g, "a")};
  std::vector<LabelId> w_el{label(g, "l"), label(g, "m")};
  Mcs m = build_mcs(t, w_el, g);
  CHECK(m.complete());
  std::set<TermId> vs(m.graph.vertices.begin(), m.graph.vertices.end());
  for (const char* v : {"a", "b", "c", "d", "a2"}) CHECK(vs.count(id(g, v)));
  CHECK_FALSE(vs.count(id(g, "h")));
  CHECK(m.graph.edges.size() + 1 == m.graph.vertices.size());
  CHECK_FALSE(has_cycle(m.graph.edges));
}

TEST_CASE("edge list and dot output") {
  auto f = fig5();
  Subgraph s = to_subgraph(f.tree);
  std::string el = to_edge_list(s, f.g);
  CHECK(el.find("<t2> <r> <v6>\n") != std::string::npos);
  CHECK(std::count(el.begin(), el.end(), '\n') == 3);
  Subgraph lone{{id(f.g, "v9")}, {}};
  CHECK(to_edge_list(lone, f.g) == "<v9>\n");
  std::vector<TermId> hl{id(f.g, "t0")};
  std::string dot = to_dot(s, f.g, hl);
  CHECK(dot.rfind("digraph mcs {", 0) == 0);
  CHECK(dot.find("style=bold") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '>') >= 3);
}
