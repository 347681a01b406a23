#include <doctest.h>

#include <map>
#include <set>

#include "support.hpp"
#include "kgs/sketch.hpp"

using namespace kgs;
using namespace kgs::testing;

TEST_CASE("default rounds is ceil log2 |V|") {
  CHECK(default_rounds(0) == 1);
  CHECK(default_rounds(1) == 1);
  CHECK(default_rounds(2) == 1);
  CHECK(default_rounds(3) == 2);
  CHECK(default_rounds(1024) == 10);
  CHECK(default_rounds(1025) == 11);
}

TEST_CASE("informativeness is smoothed and zero for isolated vertices") {
  auto g = graph_of({{"a", "p", "b"}, {"a", "q", "c"}, {"a", "p", "d"}, {"C", "subClassOf", "D"}});
  CHECK(informativeness(g, id(g, "a")) == doctest::Approx(std::log2(3.0) * std::log2(4.0)));
  CHECK(informativeness(g, id(g, "b")) == doctest::Approx(1.0));
  CHECK(informativeness(g, id(g, "C")) == 0.0);
}

TEST_CASE("A-Res keys order zero weights last") {
  CHECK(ares_key(0.5, 0.0) < ares_key(0.5, 1.0));
  CHECK(ares_key(0.9, 0.0) < ares_key(0.01, 0.1));
  CHECK(ares_key(0.5, 1.0) < ares_key(0.5, 4.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double u = open_unit(rng);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("A-Res selection frequency follows the weights") {
  std::vector<TermId> c{0, 1};
  std::vector<double> w{1.0, 3.0};
  std::mt19937_64 rng(11);
  int second = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) second += select_landmark(c, w, rng) == 1;
  CHECK(static_cast<double>(second) / draws == doctest::Approx(0.75).epsilon(0.03));
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(select_landmark(c, bad, rng), std::invalid_argument);
}

TEST_CASE("parameters are validated") {
  auto g = graph_of({{"a", "p", "b"}});
  CHECK_THROWS_AS(build_sketches(g, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(build_sketches(g, 2, 0, 1), ParameterError);
}

TEST_CASE("each round partitions every view") {
  auto g = random_graph(120, 3.0, 4, 5);
  const int r = 2, k = 3;
  auto idx = build_sketches(g, r, k, 9);
  for (int round = 0; round < k; ++round) {
    std::map<TermId, int> hits;
    for (TermId v = 0; v < g.vertex_count(); ++v) {
      for (const SketchEntry& e : idx.sketch(v).entries) {
        if (e.view != View::Role || e.round != round) continue;
        ++hits[v];
        CHECK(e.path.front() == v);
        CHECK(e.path.back() == e.landmark);
        CHECK(e.path.length() <= static_cast<std::size_t>(r));
        CHECK(valid_path(g, e.path));
      }
    }
    for (TermId v = 0; v < g.vertex_count(); ++v) {
      if (g.in_view(v, View::Role)) CHECK(hits[v] == 1);
      else CHECK(hits.count(v) == 0);
    }
    const auto& lms = idx.landmarks(View::Role, round);
    CHECK(std::set<TermId>(lms.begin(), lms.end()).size() == lms.size());
  }
}

TEST_CASE("the first landmark of a round reaches its ball by shortest paths") {
  auto g = random_graph(80, 2.5, 2, 21);
  auto idx = build_sketches(g, 3, 2, 4);
  for (TermId v = 0; v < g.vertex_count(); ++v) {
    for (const SketchEntry& e : idx.sketch(v).entries) {
      auto d = bfs_distances(g, e.landmark, View::Role);
      CHECK(e.path.length() >= d[v]);
      if (e.landmark == idx.landmarks(View::Role, e.round).front()) CHECK(e.path.length() == d[v]);
    }
  }
}

TEST_CASE("builds are deterministic and seed dependent") {
  auto g = random_graph(150, 3.0, 3, 8);
  auto a = build_sketches(g, 3, 2, 1);
  auto b = build_sketches(g, 3, 2, 1);
  auto c = build_sketches(g, 3, 2, 2);
  bool differs = false;
  for (TermId v = 0; v < g.vertex_count(); ++v) {
    const auto& ea = a.sketch(v).entries;
    const auto& eb = b.sketch(v).entries;
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
      CHECK(ea[i].landmark == eb[i].landmark);
      CHECK(ea[i].path == eb[i].path);
    }
    const auto& ec = c.sketch(v).entries;
    for (std::size_t i = 0; i < std::min(ea.size(), ec.size()); ++i) differs |= ea[i].landmark != ec[i].landmark;
  }
  CHECK(differs);
}

TEST_CASE("views are sketched separately") {
  auto g = graph_of({{"a", "p", "b"}, {"a", "type", "C"}, {"b", "name", "\"n\""}});
  auto idx = build_sketches(g, 2, 1, 1);
  std::set<View> views;
  for (const SketchEntry& e : idx.sketch(id(g, "a")).entries) views.insert(e.view);
  CHECK(views == std::set<View>{View::Role, View::Type});
  for (const SketchEntry& e : idx.sketch(id(g, "C")).entries) CHECK(e.view == View::Type);
}

TEST_CASE("distance estimates never undercut the true distance") {
  auto g = random_graph(200, 3.0, 3, 17);
  auto idx = build_sketches(g, 3, default_rounds(g.vertex_count()), 1);
  std::mt19937_64 rng(2);
  int found = 0;
  for (int i = 0; i < 500; ++i) {
    TermId u = static_cast<TermId>(rng() % g.vertex_count());
    TermId v = static_cast<TermId>(rng() % g.vertex_count());
    auto est = estimate_distance(idx, u, v);
    auto d = bfs_distances(g, u);
    if (!est) continue;
    ++found;
    REQUIRE(d[v] != kUnreachable);
    CHECK(est->distance >= d[v]);
    CHECK(est->path.length() == est->distance);
    CHECK(est->path.front() == u);
    CHECK(est->path.back() == v);
    CHECK(valid_path(g, est->path));
  }
  CHECK(found > 0);
}

TEST_CASE("hand sketches reject paths that do not start at the root") {
  auto g = graph_of({{"a", "p", "b"}});
  SketchIndex idx(SketchParams{}, g.vertex_count());
  Path p = path_of(g, {"a", "b"});
  CHECK_THROWS(idx.add_entry(id(g, "b"), SketchEntry{id(g, "b"), 0, View::Role, p}));
  idx.add_entry(id(g, "a"), SketchEntry{id(g, "b"), 0, View::Role, p});
  CHECK(idx.entry_count() == 1);
}
