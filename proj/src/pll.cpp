#include "kgs/pll.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kgs/sketch.hpp"

namespace kgs {

PllIndex::PllIndex(int radius, std::vector<TermId> order, std::vector<std::vector<PllLabelEntry>> labels)
    : radius_(radius), order_(std::move(order)) {
  offsets_.assign(labels.size() + 1, 0);
  for (std::size_t v = 0; v < labels.size(); ++v) offsets_[v + 1] = offsets_[v] + labels[v].size();
  entries_.reserve(offsets_.back());
  for (auto& l : labels) {
    if (!std::is_sorted(l.begin(), l.end(), [](const auto& a, const auto& b) { return a.hub_rank < b.hub_rank; })) {
      throw IntegrityError("PLL labels must be sorted by hub rank");
    }
    entries_.insert(entries_.end(), l.begin(), l.end());
  }
}

std::span<const PllLabelEntry> PllIndex::labels(TermId v) const {
  if (v >= vertex_count()) return {};
  return std::span<const PllLabelEntry>(entries_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]);
}

const PllLabelEntry* PllIndex::find(TermId v, std::uint32_t hub_rank) const {
  auto l = labels(v);
  auto it = std::lower_bound(l.begin(), l.end(), hub_rank,
                             [](const PllLabelEntry& e, std::uint32_t r) { return e.hub_rank < r; });
  if (it == l.end() || it->hub_rank != hub_rank) return nullptr;
  return &*it;
}

PllIndex build_pll(const KnowledgeGraph& g, int radius, PllOrdering) {
  if (radius < 1) throw ParameterError("PLL radius must be >= 1");
  const std::size_t n = g.vertex_count();
  std::vector<TermId> order(n);
  std::iota(order.begin(), order.end(), TermId{0});
  std::stable_sort(order.begin(), order.end(), [&](TermId a, TermId b) {
    return g.degree(a, View::ABox) > g.degree(b, View::ABox);
  });

  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<PllLabelEntry>> labels(n);
  std::vector<std::uint32_t> hub_distance(n, kInf);  // indexed by rank
  std::vector<std::uint32_t> dist(n, kInf);
  std::vector<TermId> pred(n, kNoTerm);
  std::vector<TermId> queue;
  queue.reserve(n);

  for (std::uint32_t rank = 0; rank < n; ++rank) {
    const TermId source = order[rank];
    for (const PllLabelEntry& e : labels[source]) hub_distance[e.hub_rank] = e.distance;

    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    pred[source] = source;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const TermId v = queue[head];
      const std::uint32_t d = dist[v];
      bool pruned = false;
      for (const PllLabelEntry& e : labels[v]) {
        if (hub_distance[e.hub_rank] != kInf && hub_distance[e.hub_rank] + e.distance <= d) {
          pruned = true;
          break;
        }
      }
      if (pruned) continue;
      labels[v].push_back({rank, d, pred[v]});
      if (d >= static_cast<std::uint32_t>(radius)) continue;
      for (const Neighbor& rec : g.incident(v, View::ABox)) {
        if (dist[rec.vertex] != kInf) continue;
        dist[rec.vertex] = d + 1;
        pred[rec.vertex] = v;
        queue.push_back(rec.vertex);
      }
    }

    for (TermId v : queue) {
      dist[v] = kInf;
      pred[v] = kNoTerm;
    }
    for (const PllLabelEntry& e : labels[source]) hub_distance[e.hub_rank] = kInf;
  }
  return PllIndex(radius, std::move(order), std::move(labels));
}

std::optional<HubMatch> best_hub(const PllIndex& index, TermId u, TermId v) {
  auto a = index.labels(u);
  auto b = index.labels(v);
  std::optional<HubMatch> best;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].hub_rank < b[j].hub_rank) {
      ++i;
    } else if (b[j].hub_rank < a[i].hub_rank) {
      ++j;
    } else {
      std::uint32_t d = a[i].distance + b[j].distance;
      if (!best || d < best->distance) best = HubMatch{d, a[i].hub_rank};
      ++i;
      ++j;
    }
  }
  return best;
}

std::optional<std::uint32_t> pll_distance(const PllIndex& index, TermId u, TermId v) {
  if (u == v && u < index.vertex_count()) return 0;
  auto m = best_hub(index, u, v);
  if (!m) return std::nullopt;
  return m->distance;
}

namespace {

Path walk_to_hub(const PllIndex& index, const KnowledgeGraph& g, TermId from, std::uint32_t rank) {
  const TermId hub = index.hub(rank);
  Path path = Path::single(from);
  const PllLabelEntry* e = index.find(from, rank);
  if (!e) throw IntegrityError("PLL label missing on walk start");
  TermId cur = from;
  while (cur != hub) {
    if (e->distance == 0) throw IntegrityError("PLL walk reached distance 0 away from its hub");
    TermId next = e->predecessor;
    const PllLabelEntry* ne = index.find(next, rank);
    if (!ne || ne->distance + 1 != e->distance) throw IntegrityError("PLL predecessor chain is inconsistent");
    auto step = g.edge_between(cur, next, View::ABox);
    if (!step) throw IntegrityError("PLL predecessor is not adjacent in the graph");
    path.push(*step, next);
    cur = next;
    e = ne;
  }
  return path;
}

}  // namespace

std::optional<Path> retrieve_shortest_path(const PllIndex& index, const KnowledgeGraph& g, TermId u, TermId v) {
  if (u == v) {
    if (u >= index.vertex_count()) return std::nullopt;
    return Path::single(u);
  }
  auto m = best_hub(index, u, v);
  if (!m) return std::nullopt;
  Path path = walk_to_hub(index, g, u, m->hub_rank);
  path.append(walk_to_hub(index, g, v, m->hub_rank).reversed());
  if (path.length() != m->distance) throw IntegrityError("PLL path length disagrees with label distance");
  return path;
}

}  // namespace kgs
