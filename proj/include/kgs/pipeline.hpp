#pragma once

#include <optional>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/mcs.hpp"
#include "kgs/pll.hpp"
#include "kgs/search.hpp"
#include "kgs/sketch.hpp"

namespace kgs {

struct SearchContext {
  const KnowledgeGraph& graph;
  const SketchIndex& sketches;
  const PllIndex& pll;
};

struct StRun {
  std::optional<SteinerTree> tree;
  std::size_t ck_iterations = 0;
  std::size_t turns = 0;
  std::vector<TurnRecord> records;
};

// Sketch graphs, patch-up, then the round-robin search. Duplicate vertex
// keywords are collapsed.
StRun compute_st(const SearchContext& ctx, std::span<const TermId> vertex_keywords,
                 std::span<const LabelId> label_keywords, const SearchOptions& options = {});

struct McsRun {
  StRun st;
  std::optional<Mcs> mcs;

  // A tree exists and every label keyword is covered.
  bool found() const { return mcs && !mcs->graph.empty() && mcs->complete(); }
};

McsRun compute_mcs(const SearchContext& ctx, const KeywordQuery& query, const SearchOptions& options = {});

}  // namespace kgs
