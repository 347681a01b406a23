#pragma once
// Hand-encoded worked examples: small graphs whose sketches are fixed by
// hand so the intermediate states can be compared exactly.

#include "kgs/pll.hpp"
#include "kgs/sketch.hpp"
#include "support.hpp"

namespace kgs::testing {

inline void hand_sketch(SketchIndex& idx, const KnowledgeGraph& g, const std::vector<std::string>& walk) {
  Path p = path_of(g, walk);
  idx.add_entry(p.front(), SketchEntry{p.back(), 0, View::Role, p});
}

// Fig. 3 (a): sketches route v0..v3 through v2 and v4 although v1 is a
// shortcut.
struct Fig3 {
  KnowledgeGraph g;
  SketchIndex sketches;
  PllIndex pll;
};

inline Fig3 fig3a() {
  Fig3 f;
  f.g = graph_of({{"v0", "r", "v1"}, {"v0", "r", "v2"}, {"v1", "r", "v3"}, {"v2", "r", "v4"}, {"v4", "r", "v3"}});
  f.sketches = SketchIndex(SketchParams{3, 1, 1}, f.g.vertex_count());
  hand_sketch(f.sketches, f.g, {"v0", "v2"});
  hand_sketch(f.sketches, f.g, {"v3", "v4", "v2"});
  f.pll = build_pll(f.g, 3);
  return f;
}

// Fig. 3 (b): v1 and v5 have disjoint sketches although v6 joins them.
inline Fig3 fig3b() {
  Fig3 f;
  f.g = graph_of({{"v1", "r", "v6"}, {"v6", "r", "v5"}, {"v1", "r", "v2"}, {"v5", "r", "v4"}});
  f.sketches = SketchIndex(SketchParams{3, 1, 1}, f.g.vertex_count());
  hand_sketch(f.sketches, f.g, {"v1", "v2"});
  hand_sketch(f.sketches, f.g, {"v5", "v4"});
  f.pll = build_pll(f.g, 3);
  return f;
}

// Fig. 4: three keywords whose sketches meet only after patch-up. Leaves
// pad the degrees so that v14, v10, v6 take PLL ranks 0, 1, 2. The hand
// sketches are one hop deep and the PLL uses the same radius.
struct Fig4 {
  KnowledgeGraph g;
  SketchIndex sketches;
  PllIndex pll;
};

inline Fig4 fig4() {
  std::vector<Triple> t{{"t0", "r", "v14"}, {"v14", "r", "t1"}, {"t0", "r", "v6"}, {"v6", "r", "t2"},
                        {"t1", "r", "v10"}, {"v10", "r", "t2"}, {"t1", "r", "v6"}, {"t0", "r", "v3"},
                        {"t1", "r", "v5"},  {"t2", "r", "v8"}};
  pad(t, "v14", 5);
  pad(t, "v10", 4);
  pad(t, "v6", 2);
  Fig4 f;
  f.g = graph_of(t);
  f.sketches = SketchIndex(SketchParams{1, 1, 1}, f.g.vertex_count());
  hand_sketch(f.sketches, f.g, {"t0", "v6"});
  hand_sketch(f.sketches, f.g, {"t0", "v3"});
  hand_sketch(f.sketches, f.g, {"t1", "v14"});
  hand_sketch(f.sketches, f.g, {"t1", "v5"});
  hand_sketch(f.sketches, f.g, {"t2", "v6"});
  hand_sketch(f.sketches, f.g, {"t2", "v8"});
  f.pll = build_pll(f.g, 1);
  return f;
}

// Fig. 6: sketch graphs after patch-up, t0 has the smallest degree.
struct Fig6 {
  KnowledgeGraph g;
  std::vector<TermId> keywords;
  std::vector<SketchGraph> graphs;
};

inline Fig6 fig6() {
  // Keywords first so that t0 < t1 < t2.
  std::vector<Triple> t{{"t0", "r", "v3"}, {"t1", "r", "v14"}, {"t2", "r", "v6"},
                        {"t0", "r", "v4"}, {"t0", "r", "v6"},   {"t0", "r", "v7"},
                        {"t0", "r", "v14"}, {"t1", "r", "v6"},  {"t2", "r", "v7"}};
  pad(t, "t2", 4);
  pad(t, "t1", 5);
  Fig6 f;
  f.g = graph_of(t);
  for (const char* k : {"t0", "t1", "t2"}) f.keywords.push_back(id(f.g, k));
  auto sk = [&](std::string root, std::vector<std::vector<std::string>> walks) {
    SketchGraph s(id(f.g, root));
    for (const auto& w : walks) s.add_path(path_of(f.g, w));
    return s;
  };
  f.graphs.push_back(sk("t0", {{"t0", "v3"}, {"t0", "v4"}, {"t0", "v6", "t2"}, {"t0", "v7"}, {"t0", "v14", "t1"}}));
  f.graphs.push_back(sk("t1", {{"t1", "v14", "t0"}, {"t1", "v6", "t2"}}));
  f.graphs.push_back(sk("t2", {{"t2", "v6", "t0"}, {"t2", "v7"}, {"t2", "v6", "t1"}}));
  return f;
}

// Fig. 5: the tree of Fig. 6 plus a label l0 one hop away from t2. t2 is
// listed first so it leads the seed rotation.
struct Fig5 {
  KnowledgeGraph g;
  SteinerTree tree;
};

inline Fig5 fig5() {
  Fig5 f;
  f.g = graph_of({{"t2", "r", "v6"}, {"t2", "r", "v7"}, {"t0", "r", "v6"}, {"t1", "r", "v6"}, {"t0", "r", "v3"},
                  {"v7", "l0", "v16"}, {"t1", "r", "v5"}, {"v5", "r", "v9"}});
  SteinerTree& t = f.tree;
  for (const char* v : {"t0", "t1", "t2", "v6"}) t.vertices.push_back(id(f.g, v));
  std::sort(t.vertices.begin(), t.vertices.end());
  for (auto [a, b] : {std::pair{"t2", "v6"}, {"t0", "v6"}, {"t1", "v6"}}) {
    t.edges.push_back({id(f.g, a), label(f.g, "r"), id(f.g, b)});
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.covered_keywords = {id(f.g, "t0"), id(f.g, "t1"), id(f.g, "t2")};
  std::sort(t.covered_keywords.begin(), t.covered_keywords.end());
  return f;
}

}  // namespace kgs::testing
