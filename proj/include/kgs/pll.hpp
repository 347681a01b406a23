#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kgs/graph.hpp"

namespace kgs {

// Hub is stored by rank in the construction order; order()[rank] is the
// hub's TermId. Label lists are sorted by rank.
struct PllLabelEntry {
  std::uint32_t hub_rank = 0;
  std::uint32_t distance = 0;
  TermId predecessor = kNoTerm;  // next vertex toward the hub

  auto operator<=>(const PllLabelEntry&) const = default;
};

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PllOrdering { Degree };

// r-restricted pruned landmark labeling over the undirected ABox.
class PllIndex {
 public:
  PllIndex() = default;
  PllIndex(int radius, std::vector<TermId> order, std::vector<std::vector<PllLabelEntry>> labels);

  int radius() const { return radius_; }
  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  const std::vector<TermId>& order() const { return order_; }
  TermId hub(std::uint32_t rank) const { return order_.at(rank); }

  std::span<const PllLabelEntry> labels(TermId v) const;
  const PllLabelEntry* find(TermId v, std::uint32_t hub_rank) const;
  std::size_t label_count() const { return entries_.size(); }

 private:
  int radius_ = 0;
  std::vector<TermId> order_;
  std::vector<std::size_t> offsets_;
  std::vector<PllLabelEntry> entries_;
};

PllIndex build_pll(const KnowledgeGraph& g, int radius, PllOrdering ordering = PllOrdering::Degree);

struct HubMatch {
  std::uint32_t distance = 0;
  std::uint32_t hub_rank = 0;
};

// Best common hub: minimum total distance, lowest rank on ties.
std::optional<HubMatch> best_hub(const PllIndex& index, TermId u, TermId v);

std::optional<std::uint32_t> pll_distance(const PllIndex& index, TermId u, TermId v);

// Follows predecessor links from both endpoints to the best hub. Throws
// IntegrityError when the labels do not describe a walk in the graph.
std::optional<Path> retrieve_shortest_path(const PllIndex& index, const KnowledgeGraph& g, TermId u, TermId v);

}  // namespace kgs
