#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/pll.hpp"
#include "kgs/sketch.hpp"
#include "kgs/union_find.hpp"

namespace kgs {

struct SketchLink {
  TermId neighbor = kNoTerm;
  Step step;  // from the owning vertex to `neighbor`

  auto operator<=>(const SketchLink&) const = default;
};

// G_sk(t): the keyword's sketch as an undirected labeled graph, grown by
// patch-up insertions.
class SketchGraph {
 public:
  SketchGraph() = default;
  explicit SketchGraph(TermId root);

  TermId root() const { return root_; }

  // Adds every vertex and edge of the walk; returns the vertices that were new.
  std::vector<TermId> add_path(const Path& path);

  bool contains(TermId v) const { return adj_.count(v) != 0; }
  std::size_t vertex_count() const { return adj_.size(); }
  std::vector<TermId> vertices() const;
  const std::vector<SketchLink>& links(TermId v) const;
  std::vector<Edge> edges() const;

 private:
  TermId root_ = kNoTerm;
  std::map<TermId, std::vector<SketchLink>> adj_;
};

SketchGraph sketch_graph(const SketchIndex& index, TermId keyword);

// occ(v): number of keyword sketch graphs containing v.
class OccurrenceMap {
 public:
  static OccurrenceMap count(std::span<const SketchGraph> graphs);

  std::uint32_t get(TermId v) const;
  void increment(TermId v) { ++counts_[v]; }

  // Non-keyword vertices at the maximum occurrence, ascending, at most `cap`.
  std::vector<TermId> max_vertices(std::span<const TermId> keywords, std::size_t cap) const;

  std::map<TermId, std::uint32_t> snapshot() const { return {counts_.begin(), counts_.end()}; }
  bool operator==(const OccurrenceMap& other) const { return counts_ == other.counts_; }

 private:
  std::unordered_map<TermId, std::uint32_t> counts_;
};

// Keyword sketch graphs plus their occurrence map, as mutated by patch-up.
struct PatchupState {
  std::vector<TermId> keywords;
  std::vector<SketchGraph> graphs;
  OccurrenceMap occurrence;

  static PatchupState from_sketches(const SketchIndex& index, std::span<const TermId> keywords);
  static PatchupState from_graphs(std::vector<TermId> keywords, std::vector<SketchGraph> graphs);

  void insert(std::size_t keyword_index, const Path& path);
};

struct PatchInsertion {
  std::size_t keyword_index = 0;
  Path path;
};

struct KkReport {
  std::vector<PatchInsertion> insertions;
};

// Keyword-keyword patch-up: PLL shortest paths between every keyword pair
// are inserted into both sketch graphs.
KkReport kk_patchup(PatchupState& state, const PllIndex& pll, const KnowledgeGraph& g);

struct CkReport {
  std::size_t iterations = 0;
  // Max-occurrence vertex set before the first iteration and after each one.
  std::vector<std::vector<TermId>> central_vertices;
  std::vector<PatchInsertion> insertions;
};

// Central vertex-keyword patch-up, iterated until some max-occurrence vertex
// occurs in every sketch graph or no max-occurrence vertex changed.
CkReport ck_patchup(PatchupState& state, const PllIndex& pll, const KnowledgeGraph& g, std::size_t vmo_cap = 32);

// Per-keyword BFS over its sketch graph. Once the sketch graph is used up
// the frontier may continue through the ABox.
class SearchState {
 public:
  SearchState(TermId keyword, SketchGraph graph, std::size_t degree);

  TermId keyword() const { return keyword_; }
  std::size_t degree() const { return degree_; }
  const SketchGraph& graph() const { return graph_; }

  bool in_sketch(TermId v) const { return sketch_tree_.count(v) != 0; }
  std::optional<std::uint32_t> sketch_distance(TermId v) const;
  Path sketch_path(TermId v) const;  // keyword -> v inside the sketch graph

  bool visited(TermId v) const { return search_tree_.count(v) != 0; }
  Path visited_path(TermId v) const;  // keyword -> v along the search tree
  const std::vector<TermId>& visited_order() const { return visited_order_; }

  std::size_t level() const { return level_; }
  bool exhausted() const { return exhausted_; }
  bool in_graph_mode() const { return graph_mode_; }

  // Visits the next level and returns it; empty once exhausted.
  std::vector<TermId> expand(const KnowledgeGraph& g, bool graph_fallback);

 private:
  struct TreeNode {
    TermId parent = kNoTerm;
    Step step;  // from the vertex to its parent
    std::uint32_t level = 0;
  };
  static Path walk(const std::unordered_map<TermId, TreeNode>& tree, TermId root, TermId v);

  TermId keyword_ = kNoTerm;
  std::size_t degree_ = 0;
  SketchGraph graph_;
  std::unordered_map<TermId, TreeNode> sketch_tree_;
  std::vector<std::vector<TermId>> sketch_levels_;
  std::unordered_map<TermId, TreeNode> search_tree_;
  std::vector<TermId> visited_order_;
  std::vector<TermId> frontier_;
  std::size_t level_ = 0;
  bool graph_mode_ = false;
  bool exhausted_ = false;
};

using KeywordPair = std::pair<TermId, TermId>;

inline KeywordPair make_pair_key(TermId a, TermId b) { return a < b ? KeywordPair{a, b} : KeywordPair{b, a}; }

// Candidate paths per keyword pair; only the shortest ones survive. Paths
// are stored oriented from the smaller keyword id.
class PathMap {
 public:
  bool offer(TermId a, TermId b, Path path);
  const std::map<KeywordPair, std::vector<Path>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }

 private:
  std::map<KeywordPair, std::vector<Path>> entries_;
};

struct SteinerTree {
  std::vector<TermId> vertices;  // ascending
  std::vector<Edge> edges;       // ascending, stored direction
  std::vector<TermId> covered_keywords;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return vertices.empty(); }
};

// Forest under construction; union-find rejects cycle-closing edges.
class TreeBuilder {
 public:
  // Adds the path edge by edge. A path whose endpoints are already joined is
  // cyclic and rejected whole (returns false).
  bool commit(const Path& path);
  bool connected(TermId a, TermId b);
  bool contains(TermId v) const { return slot_.count(v) != 0; }
  std::size_t edge_count() const { return edges_.size(); }

  // Repeatedly drops leaves that are neither keywords nor attached by an
  // edge carrying a protected label.
  SteinerTree finish(std::span<const TermId> keywords, std::span<const LabelId> protected_labels) const;

 private:
  std::size_t slot(TermId v);

  std::unordered_map<TermId, std::size_t> slot_;
  UnionFind sets_;
  std::set<Edge> edges_;
};

struct PathScore {
  std::size_t occurrence = 0;  // sum of occ over the path's vertices
  std::size_t covered = 0;     // dangling labels the path carries
};

PathScore score_path(const Path& path, const OccurrenceMap& occ, const std::set<LabelId>& dangling);

// Highest occurrence, then more dangling labels covered, then the smallest
// vertex sequence.
std::size_t select_path(std::span<const Path> candidates, const OccurrenceMap& occ,
                        const std::set<LabelId>& dangling);

struct SelectionRecord {
  KeywordPair pair;
  std::vector<Path> candidates;
  std::vector<PathScore> scores;
  std::size_t chosen = 0;
  bool committed = false;
};

// Commits one path per pair of the map. With `scoring` off the first
// discovered candidate is taken.
std::vector<SelectionRecord> path_selection(TreeBuilder& tree, const PathMap& mp, const OccurrenceMap& occ,
                                            std::set<LabelId>& dangling, bool scoring = true);

struct SearchOptions {
  bool patchup = true;
  bool path_selection = true;
  bool graph_fallback = true;
  std::size_t vmo_cap = 32;
  bool record_turns = false;
  std::ostream* trace = nullptr;
};

struct TurnRecord {
  TermId keyword = kNoTerm;
  std::size_t level = 0;
  std::vector<TermId> frontier;
  std::vector<SelectionRecord> selections;
};

struct StResult {
  std::optional<SteinerTree> tree;
  std::size_t turns = 0;
  std::vector<TurnRecord> records;  // filled when record_turns is set
};

// Level-wise round-robin search over the keyword states. Returns no tree
// when every frontier runs dry before the keywords are joined.
StResult build_st(const KnowledgeGraph& g, std::vector<SearchState>& states, const OccurrenceMap& occ,
                  std::span<const LabelId> label_keywords, const SearchOptions& options = {});

}  // namespace kgs
