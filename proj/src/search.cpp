#include "kgs/search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kgs {

SketchGraph::SketchGraph(TermId root) : root_(root) { adj_[root]; }

std::vector<TermId> SketchGraph::add_path(const Path& path) {
  std::vector<TermId> added;
  for (TermId v : path.vertices) {
    if (adj_.try_emplace(v).second) added.push_back(v);
  }
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    TermId a = path.vertices[i];
    TermId b = path.vertices[i + 1];
    Step s = path.steps[i];
    auto link = [&](TermId from, SketchLink l) {
      auto& ls = adj_[from];
      auto it = std::lower_bound(ls.begin(), ls.end(), l);
      if (it == ls.end() || *it != l) ls.insert(it, l);
    };
    link(a, {b, s});
    link(b, {a, {s.label, !s.forward}});
  }
  return added;
}

std::vector<TermId> SketchGraph::vertices() const {
  std::vector<TermId> out;
  out.reserve(adj_.size());
  for (const auto& [v, _] : adj_) out.push_back(v);
  return out;
}

const std::vector<SketchLink>& SketchGraph::links(TermId v) const {
  static const std::vector<SketchLink> none;
  auto it = adj_.find(v);
  return it == adj_.end() ? none : it->second;
}

std::vector<Edge> SketchGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [v, ls] : adj_) {
    for (const SketchLink& l : ls) {
      if (l.step.forward) out.push_back({v, l.step.label, l.neighbor});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SketchGraph sketch_graph(const SketchIndex& index, TermId keyword) {
  SketchGraph g(keyword);
  for (const SketchEntry& e : index.sketch(keyword).entries) g.add_path(e.path);
  return g;
}

OccurrenceMap OccurrenceMap::count(std::span<const SketchGraph> graphs) {
  OccurrenceMap m;
  for (const SketchGraph& g : graphs) {
    for (TermId v : g.vertices()) m.increment(v);
  }
  return m;
}

std::uint32_t OccurrenceMap::get(TermId v) const {
  auto it = counts_.find(v);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<TermId> OccurrenceMap::max_vertices(std::span<const TermId> keywords, std::size_t cap) const {
  std::uint32_t best = 0;
  std::vector<TermId> out;
  for (const auto& [v, c] : counts_) {
    if (c == 0 || std::find(keywords.begin(), keywords.end(), v) != keywords.end()) continue;
    if (c > best) {
      best = c;
      out.clear();
    }
    if (c == best) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  if (out.size() > cap) out.resize(cap);
  return out;
}

PatchupState PatchupState::from_sketches(const SketchIndex& index, std::span<const TermId> keywords) {
  std::vector<SketchGraph> graphs;
  for (TermId t : keywords) graphs.push_back(sketch_graph(index, t));
  return from_graphs({keywords.begin(), keywords.end()}, std::move(graphs));
}

PatchupState PatchupState::from_graphs(std::vector<TermId> keywords, std::vector<SketchGraph> graphs) {
  if (keywords.size() != graphs.size()) throw std::invalid_argument("one sketch graph per keyword");
  PatchupState s{std::move(keywords), std::move(graphs), {}};
  s.occurrence = OccurrenceMap::count(s.graphs);
  return s;
}

void PatchupState::insert(std::size_t keyword_index, const Path& path) {
  for (TermId v : graphs.at(keyword_index).add_path(path)) occurrence.increment(v);
}

KkReport kk_patchup(PatchupState& state, const PllIndex& pll, const KnowledgeGraph& g) {
  KkReport report;
  const auto& w = state.keywords;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      auto path = retrieve_shortest_path(pll, g, w[i], w[j]);
      if (!path) continue;
      state.insert(i, *path);
      state.insert(j, *path);
      report.insertions.push_back({i, *path});
      report.insertions.push_back({j, *path});
    }
  }
  return report;
}

CkReport ck_patchup(PatchupState& state, const PllIndex& pll, const KnowledgeGraph& g, std::size_t vmo_cap) {
  CkReport report;
  const std::uint32_t target = static_cast<std::uint32_t>(state.keywords.size());
  std::vector<TermId> vmo = state.occurrence.max_vertices(state.keywords, vmo_cap);
  std::map<TermId, std::uint32_t> previous;  // occ before the last iteration; zero initially
  report.central_vertices.push_back(vmo);

  auto done = [&] {
    if (vmo.empty()) return true;
    bool changed = false;
    for (TermId v : vmo) {
      std::uint32_t c = state.occurrence.get(v);
      if (c == target) return true;
      auto it = previous.find(v);
      if (c != (it == previous.end() ? 0u : it->second)) changed = true;
    }
    return !changed;
  };

  const std::size_t limit = std::max<std::size_t>(pll.vertex_count(), 1);
  while (!done() && report.iterations < limit) {
    previous = state.occurrence.snapshot();
    for (TermId v : vmo) {
      for (std::size_t i = 0; i < state.keywords.size(); ++i) {
        auto path = retrieve_shortest_path(pll, g, state.keywords[i], v);
        if (!path) continue;
        state.insert(i, *path);
        report.insertions.push_back({i, std::move(*path)});
      }
    }
    ++report.iterations;
    vmo = state.occurrence.max_vertices(state.keywords, vmo_cap);
    report.central_vertices.push_back(vmo);
  }
  return report;
}

SearchState::SearchState(TermId keyword, SketchGraph graph, std::size_t degree)
    : keyword_(keyword), degree_(degree), graph_(std::move(graph)) {
  if (!graph_.contains(keyword_)) graph_.add_path(Path::single(keyword_));
  sketch_tree_[keyword_] = {keyword_, {}, 0};
  sketch_levels_.push_back({keyword_});
  for (std::size_t lvl = 0; lvl < sketch_levels_.size(); ++lvl) {
    std::vector<TermId> next;
    for (TermId u : sketch_levels_[lvl]) {
      for (const SketchLink& l : graph_.links(u)) {
        if (sketch_tree_.count(l.neighbor)) continue;
        sketch_tree_[l.neighbor] = {u, {l.step.label, !l.step.forward}, static_cast<std::uint32_t>(lvl + 1)};
        next.push_back(l.neighbor);
      }
    }
    if (next.empty()) break;
    sketch_levels_.push_back(std::move(next));
  }
  search_tree_[keyword_] = sketch_tree_[keyword_];
  visited_order_.push_back(keyword_);
  frontier_.push_back(keyword_);
}

std::optional<std::uint32_t> SearchState::sketch_distance(TermId v) const {
  auto it = sketch_tree_.find(v);
  if (it == sketch_tree_.end()) return std::nullopt;
  return it->second.level;
}

Path SearchState::walk(const std::unordered_map<TermId, TreeNode>& tree, TermId root, TermId v) {
  Path up = Path::single(v);
  for (TermId x = v; x != root;) {
    const TreeNode& n = tree.at(x);
    up.push(n.step, n.parent);
    x = n.parent;
  }
  return up.reversed();
}

Path SearchState::sketch_path(TermId v) const { return walk(sketch_tree_, keyword_, v); }

Path SearchState::visited_path(TermId v) const { return walk(search_tree_, keyword_, v); }

std::vector<TermId> SearchState::expand(const KnowledgeGraph& g, bool graph_fallback) {
  if (exhausted_) return {};
  const std::size_t next_level = level_ + 1;
  if (!graph_mode_ && next_level < sketch_levels_.size()) {
    const auto& lvl = sketch_levels_[next_level];
    for (TermId v : lvl) search_tree_[v] = sketch_tree_.at(v);
    visited_order_.insert(visited_order_.end(), lvl.begin(), lvl.end());
    frontier_ = lvl;
    level_ = next_level;
    return lvl;
  }
  if (!graph_fallback) {
    exhausted_ = true;
    return {};
  }
  // The sketch graph is used up: keep growing through the ABox, starting from
  // everything visited so far on the first switch.
  std::vector<TermId> sources = graph_mode_ ? frontier_ : visited_order_;
  graph_mode_ = true;
  std::vector<TermId> found;
  for (TermId u : sources) {
    for (const Neighbor& rec : g.incident(u, View::ABox)) {
      if (search_tree_.count(rec.vertex)) continue;
      Step s = rec.step();
      search_tree_[rec.vertex] = {u, {s.label, !s.forward}, static_cast<std::uint32_t>(next_level)};
      found.push_back(rec.vertex);
    }
  }
  if (found.empty()) {
    exhausted_ = true;
    return {};
  }
  visited_order_.insert(visited_order_.end(), found.begin(), found.end());
  frontier_ = found;
  level_ = next_level;
  return found;
}

bool PathMap::offer(TermId a, TermId b, Path path) {
  KeywordPair key = make_pair_key(a, b);
  if (path.empty() || path.front() == path.back()) return false;
  if (path.front() != key.first) path = path.reversed();
  if (path.front() != key.first || path.back() != key.second) {
    throw std::invalid_argument("PathMap: path endpoints do not match the keyword pair");
  }
  auto& slot = entries_[key];
  if (!slot.empty() && path.length() > slot.front().length()) return false;
  if (!slot.empty() && path.length() < slot.front().length()) slot.clear();
  if (std::find(slot.begin(), slot.end(), path) != slot.end()) return false;
  slot.push_back(std::move(path));
  return true;
}

std::size_t TreeBuilder::slot(TermId v) {
  auto [it, inserted] = slot_.try_emplace(v, sets_.size());
  if (inserted) sets_.add();
  return it->second;
}

bool TreeBuilder::connected(TermId a, TermId b) {
  if (a == b) return true;
  auto ia = slot_.find(a);
  auto ib = slot_.find(b);
  if (ia == slot_.end() || ib == slot_.end()) return false;
  return sets_.same(ia->second, ib->second);
}

bool TreeBuilder::commit(const Path& path) {
  if (path.empty()) return false;
  if (path.length() > 0 && connected(path.front(), path.back())) return false;
  slot(path.front());
  for (std::size_t i = 0; i < path.length(); ++i) {
    std::size_t a = slot(path.vertices[i]);
    std::size_t b = slot(path.vertices[i + 1]);
    if (sets_.unite(a, b)) edges_.insert(path.edge(i));
  }
  return true;
}

SteinerTree TreeBuilder::finish(std::span<const TermId> keywords, std::span<const LabelId> protected_labels) const {
  std::set<Edge> edges = edges_;
  std::set<TermId> vertices;
  for (const auto& [v, _] : slot_) vertices.insert(v);
  auto is_keyword = [&](TermId v) { return std::find(keywords.begin(), keywords.end(), v) != keywords.end(); };
  auto is_protected = [&](LabelId l) {
    return std::find(protected_labels.begin(), protected_labels.end(), l) != protected_labels.end();
  };

  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::map<TermId, std::vector<Edge>> incident;
    for (const Edge& e : edges) {
      incident[e.subject].push_back(e);
      incident[e.object].push_back(e);
    }
    for (auto it = vertices.begin(); it != vertices.end();) {
      TermId v = *it;
      auto inc = incident.find(v);
      std::size_t deg = inc == incident.end() ? 0 : inc->second.size();
      bool drop = !is_keyword(v) && (deg == 0 || (deg == 1 && !is_protected(inc->second[0].label)));
      if (drop) {
        if (deg == 1) edges.erase(inc->second[0]);
        it = vertices.erase(it);
        pruned = true;
      } else {
        ++it;
      }
    }
  }

  SteinerTree t;
  t.vertices.assign(vertices.begin(), vertices.end());
  t.edges.assign(edges.begin(), edges.end());
  for (TermId k : keywords) {
    if (vertices.count(k)) t.covered_keywords.push_back(k);
  }
  std::sort(t.covered_keywords.begin(), t.covered_keywords.end());
  t.covered_keywords.erase(std::unique(t.covered_keywords.begin(), t.covered_keywords.end()),
                           t.covered_keywords.end());
  return t;
}

PathScore score_path(const Path& path, const OccurrenceMap& occ, const std::set<LabelId>& dangling) {
  PathScore s;
  for (TermId v : path.vertices) s.occurrence += occ.get(v);
  std::set<LabelId> seen;
  for (const Step& st : path.steps) {
    if (dangling.count(st.label) && seen.insert(st.label).second) ++s.covered;
  }
  return s;
}

std::size_t select_path(std::span<const Path> candidates, const OccurrenceMap& occ,
                        const std::set<LabelId>& dangling) {
  if (candidates.empty()) throw std::invalid_argument("select_path: no candidates");
  std::size_t best = 0;
  PathScore bs = score_path(candidates[0], occ, dangling);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    PathScore s = score_path(candidates[i], occ, dangling);
    bool better = s.occurrence != bs.occurrence ? s.occurrence > bs.occurrence
                  : s.covered != bs.covered     ? s.covered > bs.covered
                                                : candidates[i].vertices < candidates[best].vertices;
    if (better) {
      best = i;
      bs = s;
    }
  }
  return best;
}

std::vector<SelectionRecord> path_selection(TreeBuilder& tree, const PathMap& mp, const OccurrenceMap& occ,
                                            std::set<LabelId>& dangling, bool scoring) {
  std::vector<SelectionRecord> out;
  for (const auto& [pair, paths] : mp.entries()) {
    SelectionRecord rec;
    rec.pair = pair;
    rec.candidates = paths;
    for (const Path& p : paths) rec.scores.push_back(score_path(p, occ, dangling));
    rec.chosen = scoring ? select_path(paths, occ, dangling) : 0;
    const Path& p = paths[rec.chosen];
    rec.committed = tree.commit(p);
    if (rec.committed) {
      for (const Step& s : p.steps) dangling.erase(s.label);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

constexpr std::size_t kUnknown = std::numeric_limits<std::size_t>::max();

void trace_turn(std::ostream& os, const TurnRecord& r) {
  os << "turn keyword=" << r.keyword << " level=" << r.level << " frontier=" << r.frontier.size() << '\n';
  for (const SelectionRecord& s : r.selections) {
    os << "  pair " << s.pair.first << '-' << s.pair.second << " len=" << s.candidates.front().length();
    for (std::size_t i = 0; i < s.candidates.size(); ++i) {
      os << (i == s.chosen ? " *(" : " (");
      for (std::size_t j = 0; j < s.candidates[i].vertices.size(); ++j) {
        os << (j ? "," : "") << s.candidates[i].vertices[j];
      }
      os << ")occ=" << s.scores[i].occurrence;
    }
    os << (s.committed ? " committed" : " rejected") << '\n';
  }
}

}  // namespace

StResult build_st(const KnowledgeGraph& g, std::vector<SearchState>& states, const OccurrenceMap& occ,
                  std::span<const LabelId> label_keywords, const SearchOptions& options) {
  StResult result;
  std::vector<TermId> keywords;
  for (const SearchState& s : states) keywords.push_back(s.keyword());
  if (states.empty()) return result;

  TreeBuilder tree;
  for (TermId t : keywords) tree.commit(Path::single(t));
  std::set<LabelId> dangling(label_keywords.begin(), label_keywords.end());

  auto all_joined = [&] {
    for (TermId t : keywords) {
      if (!tree.connected(keywords[0], t)) return false;
    }
    return true;
  };
  auto finish = [&] {
    result.tree = tree.finish(keywords, label_keywords);
    return result;
  };
  if (all_joined()) return finish();

  const std::size_t n = states.size();
  // Shortest candidate length seen so far per ordered state pair.
  std::vector<std::vector<std::size_t>> best_len(n, std::vector<std::size_t>(n, kUnknown));

  auto degree_less = [&](std::size_t a, std::size_t b) {
    if (states[a].degree() != states[b].degree()) return states[a].degree() < states[b].degree();
    return states[a].keyword() < states[b].keyword();
  };
  auto average = [&](std::size_t i) {
    std::size_t sum = 0, cnt = 0;
    for (std::size_t h = 0; h < n; ++h) {
      if (h == i || best_len[i][h] == kUnknown) continue;
      sum += best_len[i][h];
      ++cnt;
    }
    return cnt == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(sum) / static_cast<double>(cnt);
  };

  std::vector<std::size_t> initial(n);
  for (std::size_t i = 0; i < n; ++i) initial[i] = i;
  std::sort(initial.begin(), initial.end(), degree_less);
  std::size_t first_pass = 0;

  PathMap mp;
  while (true) {
    std::size_t i = n;
    if (first_pass < n) {
      while (first_pass < n && states[initial[first_pass]].exhausted()) ++first_pass;
      if (first_pass < n) i = initial[first_pass++];
    }
    if (i == n) {
      for (std::size_t c = 0; c < n; ++c) {
        if (states[c].exhausted()) continue;
        if (i == n) {
          i = c;
          continue;
        }
        double ac = average(c), ai = average(i);
        if (ac < ai || (ac == ai && degree_less(c, i))) i = c;
      }
    }
    if (i == n) return result;  // every frontier ran dry

    SearchState& st = states[i];
    std::vector<TermId> level = st.expand(g, options.graph_fallback);
    ++result.turns;
    if (level.empty()) continue;

    mp.clear();
    for (TermId v : level) {
      Path to_v;
      bool have_path = false;
      for (std::size_t h = 0; h < n; ++h) {
        if (h == i) continue;
        const SearchState& other = states[h];
        if (tree.connected(st.keyword(), other.keyword())) continue;
        auto offer = [&](Path p) {
          p = p.loop_erased();
          std::size_t len = p.length();
          if (mp.offer(st.keyword(), other.keyword(), std::move(p))) {
            best_len[i][h] = std::min(best_len[i][h], len);
            best_len[h][i] = std::min(best_len[h][i], len);
          }
        };
        if (!have_path) {
          to_v = st.visited_path(v);
          have_path = true;
        }
        if (other.in_sketch(v)) {
          Path p = to_v;
          p.append(other.sketch_path(v).reversed());
          offer(std::move(p));
        }
        for (const Neighbor& rec : g.incident(v, View::ABox)) {
          if (!other.visited(rec.vertex)) continue;
          Path p = to_v;
          p.push(rec.step(), rec.vertex);
          p.append(other.visited_path(rec.vertex).reversed());
          offer(std::move(p));
        }
      }
    }

    TurnRecord record{st.keyword(), st.level(), level, {}};
    if (!mp.empty()) record.selections = path_selection(tree, mp, occ, dangling, options.path_selection);
    if (options.trace) trace_turn(*options.trace, record);
    if (options.record_turns) result.records.push_back(std::move(record));
    if (all_joined()) return finish();
  }
}

}  // namespace kgs
