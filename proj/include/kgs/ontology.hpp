#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kgs/graph.hpp"

namespace kgs {

class UnknownConcept : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Subsumption DAG after collapsing cycles. Components are numbered by their
// smallest member; the pseudo-root sits above every top component and has
// id component_count().
class ConceptHierarchy {
 public:
  ConceptHierarchy() = default;

  static ConceptHierarchy build(const KnowledgeGraph& g);
  // `subsumptions` holds (sub, super) pairs over `concepts`.
  static ConceptHierarchy build(std::vector<TermId> concepts, const std::vector<std::pair<TermId, TermId>>& subsumptions);

  bool contains(TermId c) const;
  const std::vector<TermId>& concepts() const { return concepts_; }
  std::uint32_t component_count() const { return static_cast<std::uint32_t>(members_.size()); }
  std::uint32_t pseudo_root() const { return component_count(); }

  std::uint32_t component(TermId c) const;
  const std::vector<TermId>& members(std::uint32_t comp) const { return members_.at(comp); }
  // Direct super-components; tops point at the pseudo-root.
  const std::vector<std::uint32_t>& parents(std::uint32_t comp) const { return parents_.at(comp); }

  std::uint32_t component_depth(std::uint32_t comp) const;
  std::uint32_t depth(TermId c) const { return component_depth(component(c)); }

  // Concepts in strictly lower components, ascending.
  std::vector<TermId> descendants(TermId c) const;

  // Deepest common ancestor (inclusive), smallest id on ties.
  std::uint32_t lca(TermId a, TermId b) const;

  // Raw arrays, for persistence.
  const std::vector<std::uint32_t>& component_of() const { return component_of_; }
  static ConceptHierarchy from_parts(std::vector<TermId> concepts, std::vector<std::uint32_t> component_of,
                                     std::vector<std::vector<std::uint32_t>> parents);

 private:
  void finalize();
  std::vector<std::uint32_t> ancestors(std::uint32_t comp) const;

  std::vector<TermId> concepts_;              // ascending
  std::vector<std::uint32_t> component_of_;   // aligned with concepts_
  std::vector<std::vector<TermId>> members_;
  std::vector<std::vector<std::uint32_t>> parents_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<std::uint32_t> depth_;  // size component_count() + 1
};

// 2 dep(lca) / (dep(a) + dep(b)); 1 inside one component.
double wu_palmer(const ConceptHierarchy& h, TermId a, TermId b);

// ((n - k) + sum wp) / (n + k) with k = wps.size().
double combined_similarity(std::size_t n, std::span<const double> wps);

struct Derivative {
  KeywordQuery keywords;
  std::vector<std::size_t> refined_positions;  // into vertex_keywords
  double similarity = 1.0;
};

// Recomputes the similarity of `d` against `w`; throws std::invalid_argument
// when `d` is not a derivative of `w`.
double keyword_set_similarity(const KeywordQuery& w, const Derivative& d, const ConceptHierarchy& h);

// Similarities compared at 1e-12 resolution.
bool same_similarity(double a, double b);

struct DerivativeSet {
  std::vector<Derivative> items;  // w first, similarity non-increasing
  bool truncated = false;
};

// w plus every replacement of concept keywords by strict descendants, best
// first. Enumeration stops after `cap` entries.
DerivativeSet derivatives(const KeywordQuery& w, const ConceptHierarchy& h, std::size_t cap = 10000);

}  // namespace kgs
