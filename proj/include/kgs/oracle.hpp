#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgs/graph.hpp"
#include "kgs/search.hpp"

namespace kgs {

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

// Unit-weight distances over the undirected view; kUnreachable elsewhere.
std::vector<std::uint32_t> bfs_distances(const KnowledgeGraph& g, TermId source, View view = View::ABox);

class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::size_t max_terminals = 8;
  std::size_t max_component = 500;
};

// Minimum-edge Steiner tree by Dreyfus-Wagner over the terminals' ABox
// component; nullopt when the terminals are disconnected.
std::optional<SteinerTree> exact_steiner_tree(const KnowledgeGraph& g, std::span<const TermId> terminals,
                                              const OracleLimits& limits = {});

// Empty when the tree is connected, acyclic, spans the terminals and uses
// only ABox edges; otherwise a description of the first problem.
std::string check_tree(const SteinerTree& tree, std::span<const TermId> terminals, const KnowledgeGraph& g);

// (size - min) / min; min must be positive.
double approximation_error(std::size_t size, std::size_t min_size);

// min(found, 10) / min(best, 10); zero when nobody found anything.
double result_coverage(std::size_t found, std::size_t best);

}  // namespace kgs
