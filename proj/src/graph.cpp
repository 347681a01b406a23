#include "kgs/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kgs {

std::string_view to_string(AssertionKind kind) {
  switch (kind) {
    case AssertionKind::Role: return "role";
    case AssertionKind::Type: return "type";
    case AssertionKind::Attribute: return "attribute";
    case AssertionKind::TboxSubsumption: return "tbox";
  }
  return "?";
}

std::string_view to_string(View view) {
  switch (view) {
    case View::Role: return "role";
    case View::Type: return "type";
    case View::Attribute: return "attribute";
    case View::ABox: return "abox";
    case View::TBox: return "tbox";
    case View::All: return "all";
  }
  return "?";
}

Path Path::reversed() const {
  Path out;
  out.vertices.assign(vertices.rbegin(), vertices.rend());
  out.steps.reserve(steps.size());
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out.steps.push_back({it->label, !it->forward});
  return out;
}

void Path::append(const Path& tail) {
  if (tail.empty()) return;
  if (empty()) {
    *this = tail;
    return;
  }
  if (back() != tail.front()) throw std::invalid_argument("Path::append: endpoints do not meet");
  vertices.insert(vertices.end(), tail.vertices.begin() + 1, tail.vertices.end());
  steps.insert(steps.end(), tail.steps.begin(), tail.steps.end());
}

Path Path::loop_erased() const {
  Path out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    auto hit = std::find(out.vertices.begin(), out.vertices.end(), vertices[i]);
    if (hit != out.vertices.end()) {
      auto keep = static_cast<std::size_t>(hit - out.vertices.begin());
      out.vertices.resize(keep + 1);
      out.steps.resize(keep);
      continue;
    }
    if (i > 0) out.steps.push_back(steps[i - 1]);
    out.vertices.push_back(vertices[i]);
  }
  return out;
}

// ----------------------------------------------------------------------------

TermId Dictionary::intern(std::string_view key, bool literal) {
  std::string k(key);
  if (auto it = index_.find(k); it != index_.end()) return it->second;
  auto id = static_cast<TermId>(keys_.size());
  keys_.push_back(k);
  literal_.push_back(literal ? 1 : 0);
  index_.emplace(std::move(k), id);
  return id;
}

std::optional<TermId> Dictionary::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ----------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

bool neighbor_order(const Neighbor& a, const Neighbor& b) {
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  if (a.label != b.label) return a.label < b.label;
  return a.direction < b.direction;
}

}  // namespace

std::span<const Neighbor> KnowledgeGraph::Csr::at(TermId v) const {
  if (v + 1 >= offsets.size()) return {};
  return std::span<const Neighbor>(records.data() + offsets[v], offsets[v + 1] - offsets[v]);
}

int KnowledgeGraph::csr_slot(View view) {
  switch (view) {
    case View::Role: return 0;
    case View::Type: return 1;
    case View::Attribute: return 2;
    case View::ABox: return 3;
    case View::TBox: return 4;
    case View::All: break;
  }
  throw std::invalid_argument("View::All has no adjacency slot");
}

KnowledgeGraph KnowledgeGraph::build(Dictionary terms, Dictionary labels, std::vector<Assertion> assertions,
                                     PredicateConfig predicates) {
  KnowledgeGraph g;
  g.terms_ = std::move(terms);
  g.labels_ = std::move(labels);
  g.predicates_ = std::move(predicates);

  std::sort(assertions.begin(), assertions.end());
  assertions.erase(std::unique(assertions.begin(), assertions.end(),
                               [](const Assertion& a, const Assertion& b) { return a.edge() == b.edge(); }),
                   assertions.end());
  g.assertions_ = std::move(assertions);

  const std::size_t n = g.terms_.size();
  g.type_label_ = g.labels_.find(g.predicates_.type_predicate);
  g.subclass_label_ = g.labels_.find(g.predicates_.subclass_predicate);
  g.concept_flags_.assign(n, 0);

  std::array<std::vector<std::size_t>, 5> counts;
  for (auto& c : counts) c.assign(n + 1, 0);
  auto slots_of = [](AssertionKind kind, int out[2]) {
    if (kind == AssertionKind::TboxSubsumption) {
      out[0] = 4;
      return 1;
    }
    out[0] = static_cast<int>(kind);
    out[1] = 3;
    return 2;
  };

  for (const Assertion& a : g.assertions_) {
    g.kind_counts_[static_cast<int>(a.kind)]++;
    int slots[2];
    int m = slots_of(a.kind, slots);
    for (int i = 0; i < m; ++i) {
      counts[slots[i]][a.subject + 1]++;
      counts[slots[i]][a.object + 1]++;
    }
    if (a.kind == AssertionKind::Type) g.concept_flags_[a.object] = 1;
    if (a.kind == AssertionKind::TboxSubsumption) {
      g.concept_flags_[a.subject] = 1;
      g.concept_flags_[a.object] = 1;
    }
  }

  for (int s = 0; s < 5; ++s) {
    Csr& csr = g.adjacency_[s];
    csr.offsets = counts[s];
    for (std::size_t i = 1; i <= n; ++i) csr.offsets[i] += csr.offsets[i - 1];
    csr.records.resize(csr.offsets[n]);
  }
  std::array<std::vector<std::size_t>, 5> cursor;
  for (int s = 0; s < 5; ++s) cursor[s].assign(g.adjacency_[s].offsets.begin(), g.adjacency_[s].offsets.end() - 1);

  for (const Assertion& a : g.assertions_) {
    int slots[2];
    int m = slots_of(a.kind, slots);
    for (int i = 0; i < m; ++i) {
      int s = slots[i];
      g.adjacency_[s].records[cursor[s][a.subject]++] = {a.predicate, a.object, Direction::Out};
      g.adjacency_[s].records[cursor[s][a.object]++] = {a.predicate, a.subject, Direction::In};
    }
  }
  for (Csr& csr : g.adjacency_) {
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(csr.records.begin() + csr.offsets[v], csr.records.begin() + csr.offsets[v + 1], neighbor_order);
    }
  }

  g.label_offsets_.assign(g.labels_.size() + 1, 0);
  for (const Assertion& a : g.assertions_) {
    if (a.kind != AssertionKind::TboxSubsumption) g.label_offsets_[a.predicate + 1]++;
  }
  for (std::size_t i = 1; i < g.label_offsets_.size(); ++i) g.label_offsets_[i] += g.label_offsets_[i - 1];
  g.label_edges_.resize(g.label_offsets_.back());
  {
    std::vector<std::size_t> pos(g.label_offsets_.begin(), g.label_offsets_.end() - 1);
    for (const Assertion& a : g.assertions_) {
      if (a.kind != AssertionKind::TboxSubsumption) g.label_edges_[pos[a.predicate]++] = a.edge();
    }
    for (std::size_t l = 0; l < g.labels_.size(); ++l) {
      std::sort(g.label_edges_.begin() + g.label_offsets_[l], g.label_edges_.begin() + g.label_offsets_[l + 1]);
    }
  }

  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    fnv_mix(h, g.terms_.key(static_cast<TermId>(i)));
    fnv_mix(h, static_cast<std::uint64_t>(g.terms_.is_literal(static_cast<TermId>(i))));
  }
  fnv_mix(h, static_cast<std::uint64_t>(g.labels_.size()));
  for (std::size_t i = 0; i < g.labels_.size(); ++i) fnv_mix(h, g.labels_.key(static_cast<LabelId>(i)));
  fnv_mix(h, g.predicates_.type_predicate);
  fnv_mix(h, g.predicates_.subclass_predicate);
  for (const Assertion& a : g.assertions_) {
    fnv_mix(h, (static_cast<std::uint64_t>(a.subject) << 32) | a.predicate);
    fnv_mix(h, (static_cast<std::uint64_t>(a.object) << 8) | static_cast<std::uint64_t>(a.kind));
  }
  g.fingerprint_ = h;
  return g;
}

std::span<const Neighbor> KnowledgeGraph::incident(TermId v, View view) const {
  return adjacency_[csr_slot(view)].at(v);
}

std::vector<Neighbor> KnowledgeGraph::neighbors(TermId v, View view) const {
  std::vector<Neighbor> out;
  if (v >= vertex_count()) return out;
  if (view == View::All) {
    auto a = incident(v, View::ABox);
    auto t = incident(v, View::TBox);
    out.assign(a.begin(), a.end());
    out.insert(out.end(), t.begin(), t.end());
  } else {
    auto r = incident(v, view);
    out.assign(r.begin(), r.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t KnowledgeGraph::degree(TermId v, View view) const {
  if (view == View::All) return incident(v, View::ABox).size() + incident(v, View::TBox).size();
  return incident(v, view).size();
}

std::vector<LabelId> KnowledgeGraph::edge_label_set(TermId v, View view) const {
  std::vector<LabelId> out;
  for (const Neighbor& n : neighbors(v, view)) out.push_back(n.label);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Step> KnowledgeGraph::edge_between(TermId u, TermId v, View view) const {
  if (view == View::All) {
    auto a = edge_between(u, v, View::ABox);
    auto t = edge_between(u, v, View::TBox);
    if (!a) return t;
    if (!t) return a;
    return std::min(*a, *t, [](const Step& x, const Step& y) {
      return std::pair(x.label, !x.forward) < std::pair(y.label, !y.forward);
    });
  }
  auto recs = incident(u, view);
  auto it = std::lower_bound(recs.begin(), recs.end(), v,
                             [](const Neighbor& n, TermId target) { return n.vertex < target; });
  if (it == recs.end() || it->vertex != v) return std::nullopt;
  return it->step();
}

std::span<const Edge> KnowledgeGraph::edges_with_label(LabelId label) const {
  if (label + 1 >= label_offsets_.size()) return {};
  return std::span<const Edge>(label_edges_.data() + label_offsets_[label],
                               label_offsets_[label + 1] - label_offsets_[label]);
}

// ----------------------------------------------------------------------------

AssertionKind classify(std::string_view predicate, bool object_is_literal, const PredicateConfig& predicates) {
  if (object_is_literal) return AssertionKind::Attribute;
  if (predicate == predicates.subclass_predicate) return AssertionKind::TboxSubsumption;
  if (predicate == predicates.type_predicate) return AssertionKind::Type;
  return AssertionKind::Role;
}

namespace {

struct Token {
  std::string_view text;
  bool literal = false;
  bool iri = false;
};

void skip_ws(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
}

// Reads one term starting at pos; returns an error message on failure.
std::optional<std::string> read_term(std::string_view line, std::size_t& pos, Token& out) {
  skip_ws(line, pos);
  if (pos >= line.size()) return "unexpected end of line";
  const std::size_t start = pos;
  const char c = line[pos];
  if (c == '<') {
    std::size_t end = line.find('>', pos + 1);
    if (end == std::string_view::npos) return "unterminated IRI";
    for (std::size_t i = pos + 1; i < end; ++i) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '<' || line[i] == '"') return "invalid character in IRI";
    }
    if (end == pos + 1) return "empty IRI";
    pos = end + 1;
    out = {line.substr(start, pos - start), false, true};
    return std::nullopt;
  }
  if (c == '_' && pos + 1 < line.size() && line[pos + 1] == ':') {
    pos += 2;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == start + 2) return "empty blank node label";
    out = {line.substr(start, pos - start), false, false};
    return std::nullopt;
  }
  if (c == '"') {
    ++pos;
    bool closed = false;
    while (pos < line.size()) {
      if (line[pos] == '\\') {
        pos += 2;
        continue;
      }
      if (line[pos] == '"') {
        closed = true;
        ++pos;
        break;
      }
      ++pos;
    }
    if (!closed || pos > line.size()) return "unterminated literal";
    if (pos < line.size() && line[pos] == '@') {
      ++pos;
      const std::size_t tag = pos;
      while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '-')) ++pos;
      if (pos == tag) return "empty language tag";
    } else if (line.substr(pos, 3) == "^^<") {
      std::size_t end = line.find('>', pos + 3);
      if (end == std::string_view::npos) return "unterminated datatype IRI";
      pos = end + 1;
    }
    out = {line.substr(start, pos - start), true, false};
    return std::nullopt;
  }
  return std::string("unexpected character '") + c + "'";
}

struct LineParser {
  ParseOptions options;
  Dictionary terms;
  Dictionary labels;
  std::vector<Assertion> assertions;
  std::vector<ParseDiagnostic> diagnostics;
  std::size_t line_no = 0;

  void fail(const std::string& message) {
    if (options.strict) throw ParseError(line_no, message);
    diagnostics.push_back({line_no, message});
  }

  void feed(std::string_view line) {
    ++line_no;
    std::size_t pos = 0;
    skip_ws(line, pos);
    if (pos >= line.size() || line[pos] == '#') return;

    Token s, p, o;
    if (auto err = read_term(line, pos, s)) return fail("subject: " + *err);
    if (s.literal) return fail("subject must be an IRI or blank node");
    if (auto err = read_term(line, pos, p)) return fail("predicate: " + *err);
    if (!p.iri) return fail("predicate must be an IRI");
    if (auto err = read_term(line, pos, o)) return fail("object: " + *err);
    skip_ws(line, pos);
    if (pos >= line.size() || line[pos] != '.') return fail("missing terminating ' .'");
    ++pos;
    skip_ws(line, pos);
    if (pos < line.size() && line[pos] != '#') return fail("trailing content after ' .'");

    TermId sid = terms.intern(s.text, false);
    LabelId pid = labels.intern(p.text, false);
    TermId oid = terms.intern(o.text, o.literal);
    assertions.push_back({sid, pid, oid, classify(p.text, o.literal, options.predicates)});
  }

  ParseResult finish() {
    ParseResult r;
    r.lines = line_no;
    r.diagnostics = std::move(diagnostics);
    r.graph = KnowledgeGraph::build(std::move(terms), std::move(labels), std::move(assertions), options.predicates);
    return r;
  }
};

}  // namespace

ParseResult parse_triples(std::istream& in, const ParseOptions& options) {
  if (!in) throw std::runtime_error("cannot read triple stream");
  LineParser parser{options, {}, {}, {}, {}, 0};
  std::string line;
  while (std::getline(in, line)) parser.feed(line);
  if (in.bad()) throw std::runtime_error("I/O error while reading triple stream");
  return parser.finish();
}

ParseResult parse_triples(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_triples(in, options);
}

ParseResult parse_triples_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_triples(in, options);
}

std::string display_term(const KnowledgeGraph& g, TermId v) { return g.terms().key(v); }
std::string display_label(const KnowledgeGraph& g, LabelId l) { return g.labels().key(l); }

}  // namespace kgs
