#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kgs/graph.hpp"

namespace kgs {

// One landmark of a vertex sketch: the path runs from the sketch root to the
// landmark (length 0 when the root is its own landmark).
struct SketchEntry {
  TermId landmark = kNoTerm;
  std::uint16_t round = 0;
  View view = View::Role;
  Path path;
};

struct Sketch {
  TermId root = kNoTerm;
  std::vector<SketchEntry> entries;
};

struct SketchParams {
  int radius = 3;
  int rounds = 1;
  std::uint64_t seed = 1;
};

class SketchIndex {
 public:
  SketchIndex() = default;
  SketchIndex(SketchParams params, std::size_t vertex_count);

  const SketchParams& params() const { return params_; }
  std::size_t vertex_count() const { return sketches_.size(); }

  const Sketch& sketch(TermId v) const { return sketches_.at(v); }
  void add_entry(TermId root, SketchEntry entry);

  // Landmarks of one construction round, in selection order.
  const std::vector<TermId>& landmarks(View view, int round) const;
  void record_landmark(View view, int round, TermId landmark);

  std::size_t entry_count() const;

 private:
  static int view_slot(View view);

  SketchParams params_;
  std::vector<Sketch> sketches_;
  std::array<std::vector<std::vector<TermId>>, 3> landmarks_;
};

// ceil(log2 |V|), at least 1.
int default_rounds(std::size_t vertex_count);

// log2(1 + |EL(v)|) * log2(1 + deg(v)) over the ABox.
double informativeness(const KnowledgeGraph& g, TermId v);

// Uniform draw in the open interval (0, 1) from 53 random bits.
double open_unit(std::mt19937_64& rng);

// Weighted reservoir (A-Res) key: larger wins. Zero-weight vertices rank
// below every positive-weight vertex.
struct AresKey {
  bool positive = false;
  double value = 0.0;

  auto operator<=>(const AresKey&) const = default;
};
AresKey ares_key(double u, double weight);

// A-Res argmax of u^(1/w) over the candidates; `weights` is aligned with
// `candidates`.
TermId select_landmark(std::span<const TermId> candidates, std::span<const double> weights, std::mt19937_64& rng);

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runs `rounds` rounds of radius-bounded landmark BFS on each ABox view.
SketchIndex build_sketches(const KnowledgeGraph& g, int radius, int rounds, std::uint64_t seed);

struct DistanceEstimate {
  std::size_t distance = 0;
  Path path;
};

// Shortest route through any vertex shared by the two sketches.
std::optional<DistanceEstimate> estimate_distance(const SketchIndex& index, TermId u, TermId v);

}  // namespace kgs
