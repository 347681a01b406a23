#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgs/types.hpp"

namespace kgs {

inline constexpr std::string_view kRdfType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
inline constexpr std::string_view kRdfsSubClassOf = "<http://www.w3.org/2000/01/rdf-schema#subClassOf>";

struct PredicateConfig {
  std::string type_predicate{kRdfType};
  std::string subclass_predicate{kRdfsSubClassOf};
};

struct ParseOptions {
  PredicateConfig predicates;
  bool strict = false;
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bidirectional map between term keys and dense ids. Keys are the raw
// N-Triples tokens (`<iri>`, `"literal"`, `_:blank`).
class Dictionary {
 public:
  TermId intern(std::string_view key, bool literal = false);
  std::optional<TermId> find(std::string_view key) const;
  const std::string& key(TermId id) const { return keys_.at(id); }
  bool is_literal(TermId id) const { return literal_.at(id) != 0; }
  std::size_t size() const { return keys_.size(); }

 private:
  std::vector<std::string> keys_;
  std::vector<std::uint8_t> literal_;
  std::unordered_map<std::string, TermId> index_;
};

struct Assertion {
  TermId subject = kNoTerm;
  LabelId predicate = 0;
  TermId object = kNoTerm;
  AssertionKind kind = AssertionKind::Role;

  Edge edge() const { return {subject, predicate, object}; }
  auto operator<=>(const Assertion&) const = default;
};

struct Neighbor {
  LabelId label = 0;
  TermId vertex = kNoTerm;
  Direction direction = Direction::Out;

  // Step walking from the owning vertex to `vertex`.
  Step step() const { return {label, direction == Direction::Out}; }
  auto operator<=>(const Neighbor&) const = default;
};

struct KeywordQuery {
  std::vector<TermId> vertex_keywords;
  std::vector<LabelId> label_keywords;

  std::size_t size() const { return vertex_keywords.size() + label_keywords.size(); }
};

// Edge-labeled knowledge graph, immutable once built. Vertices are all
// dictionary terms; traversal views hold CSR adjacency sorted by
// (neighbor, label, direction).
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Assertions are deduplicated; kinds must already be classified.
  static KnowledgeGraph build(Dictionary terms, Dictionary labels, std::vector<Assertion> assertions,
                              PredicateConfig predicates);

  const Dictionary& terms() const { return terms_; }
  const Dictionary& labels() const { return labels_; }
  const PredicateConfig& predicates() const { return predicates_; }

  std::size_t vertex_count() const { return terms_.size(); }
  std::size_t edge_count() const { return assertions_.size(); }
  std::size_t edge_count(AssertionKind kind) const { return kind_counts_[static_cast<int>(kind)]; }

  // Sorted by (subject, predicate, object).
  std::span<const Assertion> assertions() const { return assertions_; }

  // Incident records of v in a single-kind view, or ABox/TBox. View::All is
  // not stored; use neighbors().
  std::span<const Neighbor> incident(TermId v, View view) const;

  // All incident edges of v in the view, sorted by label then neighbor.
  std::vector<Neighbor> neighbors(TermId v, View view) const;

  std::size_t degree(TermId v, View view = View::ABox) const;
  bool in_view(TermId v, View view) const { return degree(v, view) > 0; }

  // Distinct labels on incident edges, ascending.
  std::vector<LabelId> edge_label_set(TermId v, View view = View::All) const;

  // Smallest (label, direction) edge joining u and v in the view.
  std::optional<Step> edge_between(TermId u, TermId v, View view = View::ABox) const;

  // ABox edges carrying the label, sorted.
  std::span<const Edge> edges_with_label(LabelId label) const;

  std::optional<LabelId> type_label() const { return type_label_; }
  std::optional<LabelId> subclass_label() const { return subclass_label_; }

  // Objects of type assertions and members of TBox subsumptions.
  bool is_concept(TermId v) const { return v < concept_flags_.size() && concept_flags_[v] != 0; }

  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<Neighbor> records;
    std::span<const Neighbor> at(TermId v) const;
  };
  static int csr_slot(View view);

  Dictionary terms_;
  Dictionary labels_;
  PredicateConfig predicates_;
  std::vector<Assertion> assertions_;
  std::array<std::size_t, 4> kind_counts_{};
  // Role, Type, Attribute, ABox, TBox.
  std::array<Csr, 5> adjacency_;
  std::vector<std::size_t> label_offsets_;
  std::vector<Edge> label_edges_;
  std::optional<LabelId> type_label_;
  std::optional<LabelId> subclass_label_;
  std::vector<std::uint8_t> concept_flags_;
  std::uint64_t fingerprint_ = 0;
};

struct ParseResult {
  KnowledgeGraph graph;
  std::vector<ParseDiagnostic> diagnostics;
  std::size_t lines = 0;
};

// Parses the N-Triples subset: one `<s> <p> <o|"lit"> .` per line, `#`
// comments. Malformed lines are skipped with a diagnostic, or throw in strict
// mode.
ParseResult parse_triples(std::istream& in, const ParseOptions& options = {});
ParseResult parse_triples(std::string_view text, const ParseOptions& options = {});
ParseResult parse_triples_file(const std::string& path, const ParseOptions& options = {});

AssertionKind classify(std::string_view predicate, bool object_is_literal, const PredicateConfig& predicates);

// "v" -> "<v>" style helpers for displaying keys.
std::string display_term(const KnowledgeGraph& g, TermId v);
std::string display_label(const KnowledgeGraph& g, LabelId l);

}  // namespace kgs
