#pragma once
// Shared helpers for the unit tests and the acceptance gate.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/oracle.hpp"
#include "kgs/search.hpp"

namespace kgs::testing {

struct Triple {
  std::string s, p, o;
};

inline std::string wrap(const std::string& t) {
  if (t.empty() || t[0] == '<' || t[0] == '"' || t.rfind("_:", 0) == 0) return t;
  return "<" + t + ">";
}

// Predicates additionally accept the shorthands `type` and `subClassOf`.
inline std::string wrap_predicate(const std::string& p) {
  if (p == "type") return std::string(kRdfType);
  if (p == "subClassOf") return std::string(kRdfsSubClassOf);
  return wrap(p);
}

// Terms get ids in first-seen order, so the listing order fixes tie-breaks.
inline KnowledgeGraph graph_of(const std::vector<Triple>& triples) {
  std::ostringstream os;
  for (const Triple& t : triples) os << wrap(t.s) << ' ' << wrap_predicate(t.p) << ' ' << wrap(t.o) << " .\n";
  ParseOptions opt;
  opt.strict = true;
  return parse_triples(os.str(), opt).graph;
}

inline TermId id(const KnowledgeGraph& g, const std::string& name) {
  auto v = g.terms().find(wrap(name));
  if (!v) throw std::out_of_range("no term " + name);
  return *v;
}

inline LabelId label(const KnowledgeGraph& g, const std::string& name) {
  auto v = g.labels().find(wrap_predicate(name));
  if (!v) throw std::out_of_range("no label " + name);
  return *v;
}

// Adds `count` degree-one neighbors to `v`, named v_padN.
inline void pad(std::vector<Triple>& t, const std::string& v, int count) {
  for (int i = 0; i < count; ++i) t.push_back({v, "pad", v + "_pad" + std::to_string(i)});
}

// Path over named vertices; each step takes the smallest edge in the ABox.
inline Path path_of(const KnowledgeGraph& g, const std::vector<std::string>& names) {
  Path p = Path::single(id(g, names.at(0)));
  for (std::size_t i = 1; i < names.size(); ++i) {
    TermId a = id(g, names[i - 1]), b = id(g, names[i]);
    auto s = g.edge_between(a, b, View::ABox);
    if (!s) throw std::invalid_argument("no edge " + names[i - 1] + " - " + names[i]);
    p.push(*s, b);
  }
  return p;
}

// Vertices <v0>.. <v{n-1}> with ids 0..n-1, undirected simple random edges
// over `labels` predicates. `connected` first lays a random spanning tree.
inline KnowledgeGraph random_graph(std::size_t n, double mean_degree, std::size_t labels, std::uint64_t seed,
                                   bool connected = false) {
  std::mt19937_64 rng(seed);
  Dictionary terms, preds;
  for (std::size_t i = 0; i < n; ++i) terms.intern("<v" + std::to_string(i) + ">");
  for (std::size_t i = 0; i < labels; ++i) preds.intern("<p" + std::to_string(i) + ">");
  std::set<std::pair<TermId, TermId>> seen;
  std::vector<Assertion> as;
  auto add = [&](TermId a, TermId b) {
    if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second) return false;
    LabelId l = static_cast<LabelId>(rng() % labels);
    as.push_back({a, l, b, AssertionKind::Role});
    return true;
  };
  if (connected) {
    for (std::size_t i = 1; i < n; ++i) add(static_cast<TermId>(i), static_cast<TermId>(rng() % i));
  }
  const std::size_t target = static_cast<std::size_t>(mean_degree * static_cast<double>(n) / 2.0);
  std::size_t guard = 0;
  while (as.size() < target && n > 1 && guard++ < target * 20) {
    add(static_cast<TermId>(rng() % n), static_cast<TermId>(rng() % n));
  }
  return KnowledgeGraph::build(std::move(terms), std::move(preds), std::move(as), PredicateConfig{});
}

// Smallest Steiner tree size (edges) by enumerating vertex subsets; for
// graphs of at most ~16 vertices. nullopt when disconnected.
inline std::optional<std::size_t> brute_force_steiner(const KnowledgeGraph& g, std::span<const TermId> terminals) {
  const std::size_t n = g.vertex_count();
  std::uint32_t need = 0;
  for (TermId t : terminals) need |= 1u << t;
  std::optional<std::size_t> best;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if ((s & need) != need || s == 0) continue;
    std::size_t size = static_cast<std::size_t>(__builtin_popcount(s));
    if (best && size - 1 >= *best) continue;
    TermId start = static_cast<TermId>(__builtin_ctz(s));
    std::uint32_t reached = 1u << start;
    std::vector<TermId> stack{start};
    while (!stack.empty()) {
      TermId u = stack.back();
      stack.pop_back();
      for (const Neighbor& r : g.incident(u, View::ABox)) {
        std::uint32_t bit = 1u << r.vertex;
        if ((s & bit) && !(reached & bit)) {
          reached |= bit;
          stack.push_back(r.vertex);
        }
      }
    }
    if (reached == s) best = size - 1;
  }
  return best;
}

// Independent cycle detector: DFS over the tree edges as an undirected graph.
inline bool has_cycle(const std::vector<Edge>& edges) {
  std::map<TermId, std::vector<std::pair<TermId, std::size_t>>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].subject].push_back({edges[i].object, i});
    adj[edges[i].object].push_back({edges[i].subject, i});
  }
  std::set<TermId> seen;
  for (const auto& [root, _] : adj) {
    if (seen.count(root)) continue;
    std::vector<std::pair<TermId, std::size_t>> stack{{root, SIZE_MAX}};
    seen.insert(root);
    while (!stack.empty()) {
      auto [u, via] = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[u]) {
        if (e == via) continue;
        if (seen.count(w)) return true;
        seen.insert(w);
        stack.push_back({w, e});
      }
    }
  }
  return false;
}

// True when each step of the path is an ABox edge with the recorded label
// and direction.
inline bool valid_path(const KnowledgeGraph& g, const Path& p) {
  if (p.empty() || p.vertices.size() != p.steps.size() + 1) return false;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    Edge e = p.edge(i);
    bool hit = false;
    for (const Neighbor& r : g.incident(e.subject, View::ABox)) {
      if (r.vertex == e.object && r.label == e.label && r.direction == Direction::Out) hit = true;
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace kgs::testing
