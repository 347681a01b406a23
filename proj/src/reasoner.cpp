#include "kgs/reasoner.hpp"

namespace kgs {

QueryResult answer_query(const SearchContext& ctx, const ConceptHierarchy& hierarchy, const KeywordQuery& w,
                         const ReasonerOptions& options) {
  QueryResult result;
  DerivativeSet queue;
  if (options.reasoning) {
    queue = derivatives(w, hierarchy, options.derivative_cap);
  } else {
    queue.items.push_back(Derivative{w, {}, 1.0});
  }
  result.derivatives_truncated = queue.truncated;
  result.derivative = queue.items.front();

  for (std::size_t i = 0; i < queue.items.size(); ++i) {
    const Derivative& d = queue.items[i];
    ++result.attempts;
    McsRun run = compute_mcs(ctx, d.keywords, options.search);
    if (!run.found()) continue;

    result.status = i == 0 ? QueryStatus::Found : QueryStatus::RefinedFound;
    result.derivative = d;
    result.mcs = std::move(run.mcs);
    GraphPattern pattern = generate_pattern(result.mcs->graph, d.keywords.vertex_keywords);
    for (std::size_t j = i + 1; j < queue.items.size(); ++j) {
      if (!same_similarity(queue.items[j].similarity, d.similarity)) break;
      result.peers.push_back(queue.items[j]);
    }
    if (!result.peers.empty() && ctx.graph.type_label()) {
      pattern = rewrite_with_union(pattern, d, result.peers, *ctx.graph.type_label());
    }
    result.answers = evaluate_pattern(pattern, ctx.graph, options.row_limit);
    result.pattern = std::move(pattern);
    return result;
  }
  return result;
}

}  // namespace kgs
