#pragma once

#include <optional>
#include <vector>

#include "kgs/ontology.hpp"
#include "kgs/pattern.hpp"
#include "kgs/pipeline.hpp"

namespace kgs {

enum class QueryStatus { Found, RefinedFound, Empty };

struct ReasonerOptions {
  bool reasoning = true;
  std::size_t derivative_cap = 10000;
  std::size_t row_limit = 10000;
  SearchOptions search;
};

struct QueryResult {
  QueryStatus status = QueryStatus::Empty;
  Derivative derivative;  // the keyword set that produced the answer
  std::size_t attempts = 0;
  std::optional<Mcs> mcs;
  std::optional<GraphPattern> pattern;
  AnswerSet answers;
  std::vector<Derivative> peers;  // equal-similarity derivatives folded in by UNION
  bool derivatives_truncated = false;
};

// Tries w, then its derivatives best first, and stops at the first one
// with a complete MCS.
QueryResult answer_query(const SearchContext& ctx, const ConceptHierarchy& hierarchy, const KeywordQuery& w,
                         const ReasonerOptions& options = {});

}  // namespace kgs
