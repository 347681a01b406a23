#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/mcs.hpp"
#include "kgs/ontology.hpp"

namespace kgs {

// Either variable ?v<id> or the constant term <id>.
struct PatternTerm {
  bool variable = false;
  std::uint32_t id = 0;

  static PatternTerm var(std::uint32_t i) { return {true, i}; }
  static PatternTerm constant(TermId t) { return {false, t}; }
  auto operator<=>(const PatternTerm&) const = default;
};

struct TriplePattern {
  PatternTerm subject;
  LabelId predicate = 0;
  PatternTerm object;

  auto operator<=>(const TriplePattern&) const = default;
};

struct GraphPattern {
  std::vector<TriplePattern> triples;
  std::vector<std::vector<TriplePattern>> union_branches;  // alternatives to `triples`
  std::vector<TermId> constants;                           // keyword vertices, ascending
  std::uint32_t variable_count = 0;
  std::vector<TermId> witness;  // binding of each variable in the source subgraph

  std::size_t branch_count() const { return 1 + union_branches.size(); }
  const std::vector<TriplePattern>& branch(std::size_t i) const { return i == 0 ? triples : union_branches.at(i - 1); }
};

// Keyword vertices become constants, every other vertex a variable numbered
// by first appearance in edge order.
GraphPattern generate_pattern(const Subgraph& mcs, std::span<const TermId> vertex_keywords);

// One extra branch per peer, substituting the peer's concepts for the
// winner's in type triples.
GraphPattern rewrite_with_union(const GraphPattern& pattern, const Derivative& winner,
                                std::span<const Derivative> peers, LabelId type_label);

struct AnswerSet {
  std::vector<std::vector<TermId>> rows;  // sorted, distinct
  std::vector<Subgraph> instances;        // aligned with rows
  bool truncated = false;
};

// Backtracking join over ABox edges with set semantics.
AnswerSet evaluate_pattern(const GraphPattern& pattern, const KnowledgeGraph& g, std::size_t row_limit = 10000);

// Does the row satisfy every triple of the branch?
bool satisfies(const std::vector<TriplePattern>& branch, std::span<const TermId> row, const KnowledgeGraph& g);

std::string serialize_sparql(const GraphPattern& pattern, const KnowledgeGraph& g);

// Reads back what serialize_sparql writes (triples, branches and variable
// count; constants and witness are not carried by the text).
GraphPattern parse_sparql(std::string_view text, const KnowledgeGraph& g);

}  // namespace kgs
