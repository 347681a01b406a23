#include "kgs/mcs.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace kgs {

std::vector<LabelId> covered_labels(const SteinerTree& tree, std::span<const LabelId> label_keywords) {
  std::set<LabelId> out;
  for (const Edge& e : tree.edges) {
    if (std::find(label_keywords.begin(), label_keywords.end(), e.label) != label_keywords.end()) out.insert(e.label);
  }
  return {out.begin(), out.end()};
}

Subgraph to_subgraph(const SteinerTree& tree) { return Subgraph{tree.vertices, tree.edges}; }

Mcs build_mcs(const SteinerTree& tree, std::span<const LabelId> label_keywords, const KnowledgeGraph& g) {
  Mcs m;
  m.backbone = tree;
  m.covered_labels = covered_labels(tree, label_keywords);
  std::set<TermId> vertices(tree.vertices.begin(), tree.vertices.end());
  std::set<Edge> edges(tree.edges.begin(), tree.edges.end());
  std::set<LabelId> dangling(label_keywords.begin(), label_keywords.end());
  for (LabelId l : m.covered_labels) dangling.erase(l);
  std::set<LabelId> found;

  struct Visit {
    TermId parent;
    Edge via;
  };
  std::unordered_map<TermId, Visit> seen;
  std::vector<TermId> queue(tree.vertices.begin(), tree.vertices.end());
  for (TermId v : queue) seen[v] = {kNoTerm, {}};

  auto attach = [&](TermId v) {
    for (TermId x = v; seen.at(x).parent != kNoTerm; x = seen.at(x).parent) {
      edges.insert(seen.at(x).via);
      vertices.insert(seen.at(x).parent);
    }
    vertices.insert(v);
  };

  for (std::size_t head = 0; head < queue.size() && !dangling.empty(); ++head) {
    TermId v = queue[head];
    for (const Neighbor& rec : g.incident(v, View::ABox)) {
      Edge e = rec.direction == Direction::Out ? Edge{v, rec.label, rec.vertex} : Edge{rec.vertex, rec.label, v};
      if (dangling.count(rec.label)) {
        dangling.erase(rec.label);
        found.insert(rec.label);
        attach(v);
        edges.insert(e);
        vertices.insert(rec.vertex);
      }
      if (!seen.count(rec.vertex)) {
        seen[rec.vertex] = {v, e};
        queue.push_back(rec.vertex);
      }
    }
  }

  std::set<LabelId> covered(m.covered_labels.begin(), m.covered_labels.end());
  covered.insert(found.begin(), found.end());
  m.covered_labels.assign(covered.begin(), covered.end());
  m.residual_labels.assign(dangling.begin(), dangling.end());
  m.graph.vertices.assign(vertices.begin(), vertices.end());
  m.graph.edges.assign(edges.begin(), edges.end());
  return m;
}

std::string to_edge_list(const Subgraph& s, const KnowledgeGraph& g) {
  std::ostringstream os;
  std::set<TermId> touched;
  for (const Edge& e : s.edges) {
    os << g.terms().key(e.subject) << ' ' << g.labels().key(e.label) << ' ' << g.terms().key(e.object) << '\n';
    touched.insert(e.subject);
    touched.insert(e.object);
  }
  for (TermId v : s.vertices) {
    if (!touched.count(v)) os << g.terms().key(v) << '\n';
  }
  return os.str();
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Subgraph& s, const KnowledgeGraph& g, std::span<const TermId> highlight) {
  std::ostringstream os;
  os << "digraph mcs {\n";
  for (TermId v : s.vertices) {
    os << "  n" << v << " [label=\"" << dot_escape(display_term(g, v)) << '"';
    if (std::find(highlight.begin(), highlight.end(), v) != highlight.end()) os << ", style=bold";
    os << "];\n";
  }
  for (const Edge& e : s.edges) {
    os << "  n" << e.subject << " -> n" << e.object << " [label=\"" << dot_escape(display_label(g, e.label))
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace kgs
