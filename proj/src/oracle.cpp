#include "kgs/oracle.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>

#include "kgs/union_find.hpp"

namespace kgs {

std::vector<std::uint32_t> bfs_distances(const KnowledgeGraph& g, TermId source, View view) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  if (source >= g.vertex_count()) return dist;
  std::vector<TermId> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    TermId u = queue[head];
    for (const Neighbor& rec : g.neighbors(u, view)) {
      if (dist[rec.vertex] != kUnreachable) continue;
      dist[rec.vertex] = dist[u] + 1;
      queue.push_back(rec.vertex);
    }
  }
  return dist;
}

std::optional<SteinerTree> exact_steiner_tree(const KnowledgeGraph& g, std::span<const TermId> terminals,
                                              const OracleLimits& limits) {
  std::vector<TermId> terms(terminals.begin(), terminals.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.empty()) return SteinerTree{};
  for (TermId t : terms) {
    if (t >= g.vertex_count()) throw std::out_of_range("terminal out of range");
  }
  if (terms.size() > limits.max_terminals) throw OracleUnavailable("too many terminals for the exact oracle");

  // Component of the first terminal, with local indices.
  std::vector<TermId> vertex{terms[0]};
  std::unordered_map<TermId, std::uint32_t> local{{terms[0], 0}};
  for (std::size_t head = 0; head < vertex.size(); ++head) {
    for (const Neighbor& rec : g.incident(vertex[head], View::ABox)) {
      if (local.try_emplace(rec.vertex, static_cast<std::uint32_t>(vertex.size())).second) vertex.push_back(rec.vertex);
    }
  }
  for (TermId t : terms) {
    if (!local.count(t)) return std::nullopt;
  }
  if (terms.size() == 1) return SteinerTree{{terms[0]}, {}, {terms[0]}};
  if (vertex.size() > limits.max_component) throw OracleUnavailable("component too large for the exact oracle");

  const std::size_t n = vertex.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Neighbor& rec : g.incident(vertex[i], View::ABox)) adj[i].push_back(local.at(rec.vertex));
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
  }

  const std::size_t k = terms.size();
  const std::uint32_t full = (1u << k) - 1;
  constexpr std::uint32_t kInf = UINT32_MAX / 2;
  struct Back {
    std::uint8_t kind = 0;  // 0 base, 1 merge of submask `arg`, 2 edge from vertex `arg`
    std::uint32_t arg = 0;
  };
  std::vector<std::vector<std::uint32_t>> dp(full + 1, std::vector<std::uint32_t>(n, kInf));
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(n));
  for (std::size_t i = 0; i < k; ++i) dp[1u << i][local.at(terms[i])] = 0;

  using Item = std::pair<std::uint32_t, std::uint32_t>;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    auto& cur = dp[mask];
    for (std::uint32_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      const std::uint32_t rest = mask ^ sub;
      if (sub > rest) continue;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint32_t c = dp[sub][v] + dp[rest][v];
        if (c < cur[v]) {
          cur[v] = c;
          back[mask][v] = {1, sub};
        }
      }
    }
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (cur[v] < kInf) pq.push({cur[v], v});
    }
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != cur[u]) continue;
      for (std::uint32_t w : adj[u]) {
        if (d + 1 < cur[w]) {
          cur[w] = d + 1;
          back[mask][w] = {2, u};
          pq.push({d + 1, w});
        }
      }
    }
  }

  const std::uint32_t root = local.at(terms[0]);
  std::set<Edge> edges;
  std::set<TermId> vertices;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{full, root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    vertices.insert(vertex[v]);
    const Back& b = back[mask][v];
    if (b.kind == 1) {
      stack.push_back({b.arg, v});
      stack.push_back({mask ^ b.arg, v});
    } else if (b.kind == 2) {
      TermId a = vertex[b.arg], c = vertex[v];
      Step s = *g.edge_between(a, c, View::ABox);
      edges.insert(s.forward ? Edge{a, s.label, c} : Edge{c, s.label, a});
      stack.push_back({mask, b.arg});
    }
  }
  if (edges.size() != dp[full][root]) throw std::logic_error("exact oracle reconstruction mismatch");
  SteinerTree t;
  t.vertices.assign(vertices.begin(), vertices.end());
  t.edges.assign(edges.begin(), edges.end());
  t.covered_keywords = terms;
  return t;
}

std::string check_tree(const SteinerTree& tree, std::span<const TermId> terminals, const KnowledgeGraph& g) {
  std::unordered_map<TermId, std::size_t> slot;
  for (TermId v : tree.vertices) {
    if (!slot.try_emplace(v, slot.size()).second) return "duplicate vertex " + std::to_string(v);
  }
  for (TermId t : terminals) {
    if (!slot.count(t)) return "terminal " + std::to_string(t) + " missing";
  }
  if (tree.vertices.empty()) return terminals.empty() ? "" : "empty tree";
  UnionFind uf(slot.size());
  for (const Edge& e : tree.edges) {
    if (!slot.count(e.subject) || !slot.count(e.object)) return "edge endpoint outside the vertex set";
    bool present = false;
    if (e.subject < g.vertex_count()) {
      for (const Neighbor& rec : g.incident(e.subject, View::ABox)) {
        if (rec.vertex == e.object && rec.label == e.label && rec.direction == Direction::Out) present = true;
      }
    }
    if (!present) return "edge not in the graph";
    if (!uf.unite(slot.at(e.subject), slot.at(e.object))) return "cycle";
  }
  if (tree.edges.size() + 1 != tree.vertices.size()) return "disconnected";
  return "";
}

double approximation_error(std::size_t size, std::size_t min_size) {
  if (min_size == 0) throw std::invalid_argument("approximation error undefined for an empty optimum");
  return (static_cast<double>(size) - static_cast<double>(min_size)) / static_cast<double>(min_size);
}

double result_coverage(std::size_t found, std::size_t best) {
  if (found > best) throw std::invalid_argument("result coverage: found exceeds the best count");
  const std::size_t cap = 10;
  if (best == 0) return 0.0;
  return static_cast<double>(std::min(found, cap)) / static_cast<double>(std::min(best, cap));
}

}  // namespace kgs
