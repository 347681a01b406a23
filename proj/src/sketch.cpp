#include "kgs/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kgs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t round_seed(std::uint64_t seed, View view, int round) {
  return splitmix64(splitmix64(seed) ^ (static_cast<std::uint64_t>(view) << 32) ^ static_cast<std::uint64_t>(round));
}

}  // namespace

SketchIndex::SketchIndex(SketchParams params, std::size_t vertex_count) : params_(params), sketches_(vertex_count) {
  for (std::size_t v = 0; v < vertex_count; ++v) sketches_[v].root = static_cast<TermId>(v);
  for (auto& per_view : landmarks_) per_view.resize(static_cast<std::size_t>(std::max(params.rounds, 0)));
}

int SketchIndex::view_slot(View view) {
  switch (view) {
    case View::Role: return 0;
    case View::Type: return 1;
    case View::Attribute: return 2;
    default: break;
  }
  throw std::invalid_argument("sketches exist only for the role, type and attribute views");
}

void SketchIndex::add_entry(TermId root, SketchEntry entry) {
  if (root >= sketches_.size()) throw std::out_of_range("SketchIndex::add_entry: unknown vertex");
  if (entry.path.empty() || entry.path.front() != root || entry.path.back() != entry.landmark) {
    throw std::invalid_argument("SketchIndex::add_entry: path must run from root to landmark");
  }
  sketches_[root].entries.push_back(std::move(entry));
}

const std::vector<TermId>& SketchIndex::landmarks(View view, int round) const {
  return landmarks_[view_slot(view)].at(static_cast<std::size_t>(round));
}

void SketchIndex::record_landmark(View view, int round, TermId landmark) {
  auto& per_view = landmarks_[view_slot(view)];
  if (static_cast<std::size_t>(round) >= per_view.size()) per_view.resize(static_cast<std::size_t>(round) + 1);
  per_view[static_cast<std::size_t>(round)].push_back(landmark);
}

std::size_t SketchIndex::entry_count() const {
  std::size_t total = 0;
  for (const Sketch& s : sketches_) total += s.entries.size();
  return total;
}

int default_rounds(std::size_t vertex_count) {
  int k = 0;
  while ((std::size_t{1} << k) < vertex_count && k < 63) ++k;
  return std::max(k, 1);
}

double informativeness(const KnowledgeGraph& g, TermId v) {
  const double labels = static_cast<double>(g.edge_label_set(v, View::ABox).size());
  const double deg = static_cast<double>(g.degree(v, View::ABox));
  return std::log2(1.0 + labels) * std::log2(1.0 + deg);
}

double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

AresKey ares_key(double u, double weight) {
  if (weight > 0.0) return {true, std::log(u) / weight};
  return {false, u};
}

TermId select_landmark(std::span<const TermId> candidates, std::span<const double> weights, std::mt19937_64& rng) {
  if (candidates.empty()) throw std::invalid_argument("select_landmark: no candidates");
  if (weights.size() != candidates.size()) throw std::invalid_argument("select_landmark: weight count mismatch");
  TermId best = candidates[0];
  AresKey best_key{};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    AresKey key = ares_key(open_unit(rng), weights[i]);
    if (i == 0 || best_key < key) {
      best_key = key;
      best = candidates[i];
    }
  }
  return best;
}

SketchIndex build_sketches(const KnowledgeGraph& g, int radius, int rounds, std::uint64_t seed) {
  if (radius < 1) throw ParameterError("sketch radius must be >= 1");
  if (rounds < 1) throw ParameterError("sketch rounds must be >= 1");
  const std::size_t n = g.vertex_count();
  SketchIndex index(SketchParams{radius, rounds, seed}, n);

  std::vector<double> weight(n);
  for (std::size_t v = 0; v < n; ++v) weight[v] = informativeness(g, static_cast<TermId>(v));

  std::vector<std::uint32_t> seen(n, 0);  // epoch of the last round that visited v
  std::vector<TermId> parent(n, kNoTerm);
  std::vector<Step> to_parent(n);
  std::vector<std::uint32_t> depth(n, 0);
  std::uint32_t epoch = 0;

  for (View view : kAboxViews) {
    std::vector<TermId> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (g.in_view(static_cast<TermId>(v), view)) members.push_back(static_cast<TermId>(v));
    }
    std::vector<std::uint8_t> used(n, 0);

    for (int round = 0; round < rounds; ++round) {
      ++epoch;
      std::mt19937_64 rng(round_seed(seed, view, round));
      std::vector<std::pair<AresKey, TermId>> keyed;
      keyed.reserve(members.size());
      for (TermId v : members) keyed.emplace_back(ares_key(open_unit(rng), weight[v]), v);
      std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return b.first < a.first;
        return a.second < b.second;
      });

      std::size_t remaining = members.size();
      std::size_t next = 0;
      std::size_t fallback = 0;
      std::vector<TermId> queue;
      while (remaining > 0) {
        while (next < keyed.size() && (seen[keyed[next].second] == epoch || used[keyed[next].second])) ++next;
        TermId landmark;
        if (next < keyed.size()) {
          landmark = keyed[next].second;
        } else {
          // Every unvisited vertex already served as a landmark.
          while (seen[keyed[fallback].second] == epoch) ++fallback;
          landmark = keyed[fallback].second;
        }

        queue.clear();
        queue.push_back(landmark);
        seen[landmark] = epoch;
        parent[landmark] = kNoTerm;
        depth[landmark] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          TermId u = queue[head];
          if (depth[u] >= static_cast<std::uint32_t>(radius)) continue;
          for (const Neighbor& rec : g.incident(u, view)) {
            TermId w = rec.vertex;
            if (seen[w] == epoch) continue;
            seen[w] = epoch;
            parent[w] = u;
            Step s = rec.step();
            to_parent[w] = {s.label, !s.forward};
            depth[w] = depth[u] + 1;
            queue.push_back(w);
          }
        }

        for (TermId w : queue) {
          SketchEntry entry{landmark, static_cast<std::uint16_t>(round), view, Path::single(w)};
          for (TermId x = w; x != landmark; x = parent[x]) entry.path.push(to_parent[x], parent[x]);
          index.add_entry(w, std::move(entry));
        }
        used[landmark] = 1;
        index.record_landmark(view, round, landmark);
        remaining -= queue.size();
      }
    }
  }
  return index;
}

namespace {

struct Reach {
  std::size_t distance;
  std::size_t entry;  // npos: the root itself
  std::size_t position;
};

std::map<TermId, Reach> reach_of(const Sketch& s) {
  std::map<TermId, Reach> reach;
  reach[s.root] = {0, std::string::npos, 0};
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const Path& p = s.entries[e].path;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      auto [it, inserted] = reach.try_emplace(p.vertices[i], Reach{i, e, i});
      if (!inserted && i < it->second.distance) it->second = {i, e, i};
    }
  }
  return reach;
}

Path prefix(const Sketch& s, const Reach& r) {
  if (r.entry == std::string::npos) return Path::single(s.root);
  const Path& p = s.entries[r.entry].path;
  Path out;
  out.vertices.assign(p.vertices.begin(), p.vertices.begin() + static_cast<std::ptrdiff_t>(r.position) + 1);
  out.steps.assign(p.steps.begin(), p.steps.begin() + static_cast<std::ptrdiff_t>(r.position));
  return out;
}

}  // namespace

std::optional<DistanceEstimate> estimate_distance(const SketchIndex& index, TermId u, TermId v) {
  if (u >= index.vertex_count() || v >= index.vertex_count()) return std::nullopt;
  if (u == v) return DistanceEstimate{0, Path::single(u)};
  const Sketch& su = index.sketch(u);
  const Sketch& sv = index.sketch(v);
  auto ru = reach_of(su);
  auto rv = reach_of(sv);

  std::optional<TermId> best;
  std::size_t best_distance = 0;
  for (const auto& [c, a] : ru) {
    auto it = rv.find(c);
    if (it == rv.end()) continue;
    std::size_t d = a.distance + it->second.distance;
    if (!best || d < best_distance) {
      best = c;
      best_distance = d;
    }
  }
  if (!best) return std::nullopt;
  Path path = prefix(su, ru.at(*best));
  path.append(prefix(sv, rv.at(*best)).reversed());
  return DistanceEstimate{best_distance, std::move(path)};
}

}  // namespace kgs
