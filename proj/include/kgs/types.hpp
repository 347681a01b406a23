#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace kgs {

// Dense ids, contiguous from 0 in first-seen order.
using TermId = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr TermId kNoTerm = std::numeric_limits<TermId>::max();

enum class AssertionKind : std::uint8_t { Role = 0, Type = 1, Attribute = 2, TboxSubsumption = 3 };

// Role/Type/Attribute are the three ABox subgraphs; ABox is their union.
enum class View : std::uint8_t { Role = 0, Type = 1, Attribute = 2, ABox = 3, TBox = 4, All = 5 };

inline constexpr View kAboxViews[] = {View::Role, View::Type, View::Attribute};

enum class Direction : std::uint8_t { Out = 0, In = 1 };

std::string_view to_string(AssertionKind kind);
std::string_view to_string(View view);

struct Edge {
  TermId subject = kNoTerm;
  LabelId label = 0;
  TermId object = kNoTerm;

  auto operator<=>(const Edge&) const = default;
};

// One hop of a walk. `forward` is true when the stored triple points in the
// walking direction.
struct Step {
  LabelId label = 0;
  bool forward = true;

  auto operator<=>(const Step&) const = default;
};

// A walk through the graph: vertices.size() == steps.size() + 1 unless empty.
struct Path {
  std::vector<TermId> vertices;
  std::vector<Step> steps;

  static Path single(TermId v) { return Path{{v}, {}}; }

  bool empty() const { return vertices.empty(); }
  std::size_t length() const { return steps.size(); }
  TermId front() const { return vertices.front(); }
  TermId back() const { return vertices.back(); }

  Edge edge(std::size_t i) const {
    const Step& s = steps[i];
    return s.forward ? Edge{vertices[i], s.label, vertices[i + 1]}
                     : Edge{vertices[i + 1], s.label, vertices[i]};
  }

  void push(Step step, TermId next) {
    steps.push_back(step);
    vertices.push_back(next);
  }

  Path reversed() const;

  // Appends `tail`, which must start where this path ends.
  void append(const Path& tail);

  // Cuts out every cycle so each vertex appears at most once.
  Path loop_erased() const;

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path& other) const {
    if (auto c = vertices <=> other.vertices; c != 0) return c;
    return steps <=> other.steps;
  }
};

}  // namespace kgs
