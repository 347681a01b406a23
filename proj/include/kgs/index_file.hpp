#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kgs/graph.hpp"
#include "kgs/ontology.hpp"
#include "kgs/pipeline.hpp"
#include "kgs/pll.hpp"
#include "kgs/sketch.hpp"

namespace kgs {

inline constexpr std::uint32_t kIndexVersion = 1;

class IndexFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IndexBundle {
  KnowledgeGraph graph;
  SketchIndex sketches;
  PllIndex pll;
  ConceptHierarchy hierarchy;

  SearchContext context() const { return {graph, sketches, pll}; }
};

struct BuildParams {
  int radius = 3;
  int rounds = 0;  // 0: ceil(log2 |V|)
  std::uint64_t seed = 1;
};

IndexBundle build_index(KnowledgeGraph graph, const BuildParams& params);

// "RCKG", version, graph fingerprint, then tagged sections each carrying
// its length and CRC-32.
std::string encode_index(const IndexBundle& bundle);
IndexBundle decode_index(std::string_view bytes);

void save_index(const IndexBundle& bundle, const std::string& path);
IndexBundle load_index(const std::string& path);

}  // namespace kgs
