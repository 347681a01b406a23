#include "kgs/pipeline.hpp"

#include <algorithm>
#include <set>

namespace kgs {

StRun compute_st(const SearchContext& ctx, std::span<const TermId> vertex_keywords,
                 std::span<const LabelId> label_keywords, const SearchOptions& options) {
  StRun run;
  std::vector<TermId> keywords;
  std::set<TermId> seen;
  for (TermId t : vertex_keywords) {
    if (t >= ctx.graph.vertex_count()) throw std::out_of_range("keyword vertex out of range");
    if (seen.insert(t).second) keywords.push_back(t);
  }
  if (keywords.empty()) return run;

  PatchupState state = PatchupState::from_sketches(ctx.sketches, keywords);
  if (options.patchup) {
    kk_patchup(state, ctx.pll, ctx.graph);
    run.ck_iterations = ck_patchup(state, ctx.pll, ctx.graph, options.vmo_cap).iterations;
  }
  std::vector<SearchState> states;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    states.emplace_back(keywords[i], std::move(state.graphs[i]), ctx.graph.degree(keywords[i], View::ABox));
  }
  StResult r = build_st(ctx.graph, states, state.occurrence, label_keywords, options);
  run.tree = std::move(r.tree);
  run.turns = r.turns;
  run.records = std::move(r.records);
  return run;
}

McsRun compute_mcs(const SearchContext& ctx, const KeywordQuery& query, const SearchOptions& options) {
  McsRun run;
  run.st = compute_st(ctx, query.vertex_keywords, query.label_keywords, options);
  if (run.st.tree) run.mcs = build_mcs(*run.st.tree, query.label_keywords, ctx.graph);
  return run;
}

}  // namespace kgs
