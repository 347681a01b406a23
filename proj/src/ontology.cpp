#include "kgs/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kgs {

namespace {

// Iterative Tarjan over dense vertices 0..n-1.
std::vector<std::uint32_t> strongly_connected(std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj,
                                              std::uint32_t& count) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t next = 0;
  count = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (index[s] != kUnset) continue;
    call.push_back({s, 0});
    index[s] = low[s] = next++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        std::uint32_t w = adj[v][i++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace

ConceptHierarchy ConceptHierarchy::build(const KnowledgeGraph& g) {
  std::vector<TermId> concepts;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.is_concept(static_cast<TermId>(v))) concepts.push_back(static_cast<TermId>(v));
  }
  std::vector<std::pair<TermId, TermId>> subs;
  for (const Assertion& a : g.assertions()) {
    if (a.kind == AssertionKind::TboxSubsumption) subs.emplace_back(a.subject, a.object);
  }
  return build(std::move(concepts), subs);
}

ConceptHierarchy ConceptHierarchy::build(std::vector<TermId> concepts,
                                         const std::vector<std::pair<TermId, TermId>>& subsumptions) {
  std::sort(concepts.begin(), concepts.end());
  concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
  auto local = [&](TermId c) {
    auto it = std::lower_bound(concepts.begin(), concepts.end(), c);
    if (it == concepts.end() || *it != c) throw UnknownConcept("subsumption mentions an unknown concept");
    return static_cast<std::uint32_t>(it - concepts.begin());
  };
  const std::size_t n = concepts.size();
  std::vector<std::vector<std::uint32_t>> up(n);
  for (auto [sub, sup] : subsumptions) up[local(sub)].push_back(local(sup));
  for (auto& u : up) {
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }

  std::uint32_t count = 0;
  std::vector<std::uint32_t> raw = strongly_connected(n, up, count);
  // Renumber components by their smallest member; concepts are ascending, so
  // first sight is the smallest.
  std::vector<std::uint32_t> renumber(count, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (renumber[raw[i]] == UINT32_MAX) renumber[raw[i]] = next++;
  }
  std::vector<std::uint32_t> comp(n);
  for (std::size_t i = 0; i < n; ++i) comp[i] = renumber[raw[i]];

  std::vector<std::vector<std::uint32_t>> parents(count);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t j : up[i]) {
      if (comp[i] != comp[j]) parents[comp[i]].push_back(comp[j]);
    }
  }
  for (auto& p : parents) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.empty()) p.push_back(count);
  }
  return from_parts(std::move(concepts), std::move(comp), std::move(parents));
}

ConceptHierarchy ConceptHierarchy::from_parts(std::vector<TermId> concepts, std::vector<std::uint32_t> component_of,
                                              std::vector<std::vector<std::uint32_t>> parents) {
  if (concepts.size() != component_of.size()) throw std::invalid_argument("hierarchy: misaligned component table");
  if (!std::is_sorted(concepts.begin(), concepts.end())) throw std::invalid_argument("hierarchy: concepts unsorted");
  ConceptHierarchy h;
  h.concepts_ = std::move(concepts);
  h.component_of_ = std::move(component_of);
  h.parents_ = std::move(parents);
  h.finalize();
  return h;
}

void ConceptHierarchy::finalize() {
  const std::uint32_t count = static_cast<std::uint32_t>(parents_.size());
  members_.assign(count, {});
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    if (component_of_[i] >= count) throw std::invalid_argument("hierarchy: component out of range");
    members_[component_of_[i]].push_back(concepts_[i]);
  }
  children_.assign(count + 1, {});
  std::vector<std::uint32_t> pending(count, 0);
  for (std::uint32_t c = 0; c < count; ++c) {
    for (std::uint32_t p : parents_[c]) {
      if (p > count || p == c) throw std::invalid_argument("hierarchy: bad parent link");
      children_[p].push_back(c);
    }
    pending[c] = static_cast<std::uint32_t>(parents_[c].size());
  }
  depth_.assign(count + 1, 0);
  std::vector<std::uint32_t> queue{count};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t p = queue[head];
    for (std::uint32_t c : children_[p]) {
      depth_[c] = std::max(depth_[c], depth_[p] + 1);
      if (--pending[c] == 0) queue.push_back(c);
    }
  }
  if (queue.size() != count + 1) throw std::invalid_argument("hierarchy: condensation is not acyclic");
}

bool ConceptHierarchy::contains(TermId c) const { return std::binary_search(concepts_.begin(), concepts_.end(), c); }

std::uint32_t ConceptHierarchy::component(TermId c) const {
  auto it = std::lower_bound(concepts_.begin(), concepts_.end(), c);
  if (it == concepts_.end() || *it != c) throw UnknownConcept("not a concept: " + std::to_string(c));
  return component_of_[static_cast<std::size_t>(it - concepts_.begin())];
}

std::uint32_t ConceptHierarchy::component_depth(std::uint32_t comp) const { return depth_.at(comp); }

std::vector<std::uint32_t> ConceptHierarchy::ancestors(std::uint32_t comp) const {
  std::set<std::uint32_t> seen{comp};
  std::vector<std::uint32_t> queue{comp};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t c = queue[head];
    if (c == pseudo_root()) continue;
    for (std::uint32_t p : parents_[c]) {
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<TermId> ConceptHierarchy::descendants(TermId c) const {
  std::uint32_t start = component(c);
  std::vector<std::uint8_t> seen(children_.size(), 0);
  seen[start] = 1;
  std::vector<std::uint32_t> queue{start};
  std::vector<TermId> out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::uint32_t ch : children_[queue[head]]) {
      if (seen[ch]) continue;
      seen[ch] = 1;
      queue.push_back(ch);
      out.insert(out.end(), members_[ch].begin(), members_[ch].end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t ConceptHierarchy::lca(TermId a, TermId b) const {
  auto aa = ancestors(component(a));
  auto ab = ancestors(component(b));
  std::vector<std::uint32_t> common;
  std::set_intersection(aa.begin(), aa.end(), ab.begin(), ab.end(), std::back_inserter(common));
  std::uint32_t best = pseudo_root();
  for (std::uint32_t c : common) {
    if (depth_[c] > depth_[best] || (depth_[c] == depth_[best] && c < best)) best = c;
  }
  return best;
}

double wu_palmer(const ConceptHierarchy& h, TermId a, TermId b) {
  if (h.component(a) == h.component(b)) return 1.0;
  double da = h.depth(a), db = h.depth(b);
  return 2.0 * h.component_depth(h.lca(a, b)) / (da + db);
}

double combined_similarity(std::size_t n, std::span<const double> wps) {
  const std::size_t k = wps.size();
  if (k > n) throw std::invalid_argument("more refined positions than keywords");
  double sum = static_cast<double>(n - k);
  for (double w : wps) sum += w;
  return sum / static_cast<double>(n + k);
}

double keyword_set_similarity(const KeywordQuery& w, const Derivative& d, const ConceptHierarchy& h) {
  const KeywordQuery& x = d.keywords;
  if (x.vertex_keywords.size() != w.vertex_keywords.size() || x.label_keywords != w.label_keywords) {
    throw std::invalid_argument("not a derivative: keyword shape differs");
  }
  std::vector<double> wps;
  std::vector<std::size_t> refined;
  for (std::size_t i = 0; i < w.vertex_keywords.size(); ++i) {
    TermId a = w.vertex_keywords[i], b = x.vertex_keywords[i];
    if (a == b) continue;
    if (!h.contains(a) || !h.contains(b)) throw std::invalid_argument("not a derivative: replaced a non-concept");
    auto desc = h.descendants(a);
    if (!std::binary_search(desc.begin(), desc.end(), b)) {
      throw std::invalid_argument("not a derivative: replacement is not a strict descendant");
    }
    refined.push_back(i);
    wps.push_back(wu_palmer(h, a, b));
  }
  if (refined != d.refined_positions) throw std::invalid_argument("not a derivative: refined positions disagree");
  return combined_similarity(w.size(), wps);
}

bool same_similarity(double a, double b) { return std::llround(a * 1e12) == std::llround(b * 1e12); }

DerivativeSet derivatives(const KeywordQuery& w, const ConceptHierarchy& h, std::size_t cap) {
  DerivativeSet out;
  const std::size_t m = w.vertex_keywords.size();
  struct Choice {
    TermId term;
    double wp;
  };
  std::vector<std::vector<Choice>> options(m);
  for (std::size_t i = 0; i < m; ++i) {
    TermId t = w.vertex_keywords[i];
    options[i].push_back({t, 1.0});
    if (!h.contains(t)) continue;
    std::vector<Choice> refined;
    for (TermId d : h.descendants(t)) refined.push_back({d, wu_palmer(h, t, d)});
    std::stable_sort(refined.begin(), refined.end(), [](const Choice& a, const Choice& b) { return a.wp > b.wp; });
    options[i].insert(options[i].end(), refined.begin(), refined.end());
  }

  std::vector<std::size_t> pick(m, 0);
  while (true) {
    if (out.items.size() == cap) {
      out.truncated = true;
      break;
    }
    Derivative d;
    d.keywords.label_keywords = w.label_keywords;
    std::vector<double> wps;
    for (std::size_t i = 0; i < m; ++i) {
      d.keywords.vertex_keywords.push_back(options[i][pick[i]].term);
      if (pick[i] != 0) {
        d.refined_positions.push_back(i);
        wps.push_back(options[i][pick[i]].wp);
      }
    }
    d.similarity = combined_similarity(w.size(), wps);
    out.items.push_back(std::move(d));

    bool advanced = false;
    for (std::size_t j = m; j-- > 0;) {
      if (++pick[j] < options[j].size()) {
        advanced = true;
        break;
      }
      pick[j] = 0;
    }
    if (!advanced) break;
  }

  std::stable_sort(out.items.begin(), out.items.end(), [](const Derivative& a, const Derivative& b) {
    auto ra = std::llround(a.similarity * 1e12), rb = std::llround(b.similarity * 1e12);
    if (ra != rb) return ra > rb;
    if (a.refined_positions.size() != b.refined_positions.size()) {
      return a.refined_positions.size() < b.refined_positions.size();
    }
    return a.keywords.vertex_keywords < b.keywords.vertex_keywords;
  });
  return out;
}

}  // namespace kgs
