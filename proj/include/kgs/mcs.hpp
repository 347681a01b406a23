#pragma once

#include <string>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/search.hpp"

namespace kgs {

// A connected piece of the ABox; size counts vertices plus edges.
struct Subgraph {
  std::vector<TermId> vertices;  // ascending
  std::vector<Edge> edges;       // ascending

  std::size_t size() const { return vertices.size() + edges.size(); }
  bool empty() const { return vertices.empty(); }
  bool operator==(const Subgraph&) const = default;
};

struct Mcs {
  Subgraph graph;
  SteinerTree backbone;
  std::vector<LabelId> covered_labels;   // ascending, only query labels
  std::vector<LabelId> residual_labels;  // query labels nothing could cover

  bool complete() const { return residual_labels.empty(); }
};

// Query labels carried by tree edges, ascending.
std::vector<LabelId> covered_labels(const SteinerTree& tree, std::span<const LabelId> label_keywords);

// Multi-source BFS from the tree vertices; the first edge found for each
// uncovered label is attached through its seed's BFS path.
Mcs build_mcs(const SteinerTree& tree, std::span<const LabelId> label_keywords, const KnowledgeGraph& g);

Subgraph to_subgraph(const SteinerTree& tree);

// "subject label object" per line in edge order, keys as stored; isolated
// vertices get a line of their own.
std::string to_edge_list(const Subgraph& s, const KnowledgeGraph& g);
std::string to_dot(const Subgraph& s, const KnowledgeGraph& g, std::span<const TermId> highlight = {});

}  // namespace kgs
