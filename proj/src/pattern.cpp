#include "kgs/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace kgs {

GraphPattern generate_pattern(const Subgraph& mcs, std::span<const TermId> vertex_keywords) {
  GraphPattern p;
  std::set<TermId> keywords(vertex_keywords.begin(), vertex_keywords.end());
  std::map<TermId, std::uint32_t> var;
  auto term = [&](TermId v) {
    if (keywords.count(v)) return PatternTerm::constant(v);
    auto [it, inserted] = var.try_emplace(v, static_cast<std::uint32_t>(var.size()));
    if (inserted) p.witness.push_back(v);
    return PatternTerm::var(it->second);
  };
  for (const Edge& e : mcs.edges) {
    PatternTerm s = term(e.subject);
    PatternTerm o = term(e.object);
    p.triples.push_back({s, e.label, o});
  }
  for (TermId v : mcs.vertices) {
    if (keywords.count(v)) p.constants.push_back(v);
  }
  p.variable_count = static_cast<std::uint32_t>(var.size());
  return p;
}

GraphPattern rewrite_with_union(const GraphPattern& pattern, const Derivative& winner,
                                std::span<const Derivative> peers, LabelId type_label) {
  GraphPattern out = pattern;
  for (const Derivative& peer : peers) {
    std::vector<TriplePattern> branch = pattern.triples;
    for (TriplePattern& t : branch) {
      if (t.predicate != type_label || t.object.variable) continue;
      const auto& from = winner.keywords.vertex_keywords;
      for (std::size_t i = 0; i < from.size() && i < peer.keywords.vertex_keywords.size(); ++i) {
        if (from[i] == t.object.id) {
          t.object.id = peer.keywords.vertex_keywords[i];
          break;
        }
      }
    }
    out.union_branches.push_back(std::move(branch));
  }
  return out;
}

namespace {

constexpr TermId kUnbound = kNoTerm;

class Matcher {
 public:
  Matcher(const std::vector<TriplePattern>& triples, const KnowledgeGraph& g, std::uint32_t vars)
      : triples_(triples), g_(g), row_(vars, kUnbound), done_(triples.size(), 0) {}

  template <class Emit>
  bool run(Emit&& emit) {
    return search(0, emit);
  }

 private:
  TermId value(const PatternTerm& t) const { return t.variable ? row_[t.id] : t.id; }

  std::size_t estimate(const TriplePattern& t) const {
    TermId s = value(t.subject), o = value(t.object);
    if (s != kUnbound) return g_.degree(s, View::ABox);
    if (o != kUnbound) return g_.degree(o, View::ABox);
    // Unanchored patterns go after anchored ones.
    return g_.edge_count() + g_.edges_with_label(t.predicate).size();
  }

  bool bind(const PatternTerm& t, TermId v, std::vector<std::uint32_t>& bound) {
    if (!t.variable) return t.id == v;
    if (row_[t.id] == kUnbound) {
      row_[t.id] = v;
      bound.push_back(t.id);
      return true;
    }
    return row_[t.id] == v;
  }

  template <class Emit>
  bool search(std::size_t depth, Emit& emit) {
    if (depth == triples_.size()) return emit(row_);
    std::size_t pick = triples_.size();
    std::size_t best = 0;
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      if (done_[i]) continue;
      std::size_t e = estimate(triples_[i]);
      if (pick == triples_.size() || e < best) {
        pick = i;
        best = e;
      }
    }
    const TriplePattern& t = triples_[pick];
    done_[pick] = 1;
    TermId s = value(t.subject), o = value(t.object);

    auto attempt = [&](TermId sv, TermId ov) {
      std::vector<std::uint32_t> bound;
      bool keep = true;
      if (bind(t.subject, sv, bound) && bind(t.object, ov, bound)) keep = search(depth + 1, emit);
      for (std::uint32_t b : bound) row_[b] = kUnbound;
      return keep;
    };

    bool keep = true;
    if (s != kUnbound) {
      for (const Neighbor& rec : g_.incident(s, View::ABox)) {
        if (rec.label != t.predicate || rec.direction != Direction::Out) continue;
        if (o != kUnbound && rec.vertex != o) continue;
        if (!(keep = attempt(s, rec.vertex))) break;
      }
    } else if (o != kUnbound) {
      for (const Neighbor& rec : g_.incident(o, View::ABox)) {
        if (rec.label != t.predicate || rec.direction != Direction::In) continue;
        if (!(keep = attempt(rec.vertex, o))) break;
      }
    } else {
      for (const Edge& e : g_.edges_with_label(t.predicate)) {
        if (!(keep = attempt(e.subject, e.object))) break;
      }
    }
    done_[pick] = 0;
    return keep;
  }

  const std::vector<TriplePattern>& triples_;
  const KnowledgeGraph& g_;
  std::vector<TermId> row_;
  std::vector<std::uint8_t> done_;
};

Subgraph instantiate(const std::vector<TriplePattern>& branch, const GraphPattern& p, std::span<const TermId> row) {
  std::set<TermId> vertices(p.constants.begin(), p.constants.end());
  std::set<Edge> edges;
  auto value = [&](const PatternTerm& t) { return t.variable ? row[t.id] : t.id; };
  for (const TriplePattern& t : branch) {
    Edge e{value(t.subject), t.predicate, value(t.object)};
    edges.insert(e);
    vertices.insert(e.subject);
    vertices.insert(e.object);
  }
  return Subgraph{{vertices.begin(), vertices.end()}, {edges.begin(), edges.end()}};
}

}  // namespace

bool satisfies(const std::vector<TriplePattern>& branch, std::span<const TermId> row, const KnowledgeGraph& g) {
  for (const TriplePattern& t : branch) {
    TermId s = t.subject.variable ? row[t.subject.id] : t.subject.id;
    TermId o = t.object.variable ? row[t.object.id] : t.object.id;
    if (s >= g.vertex_count() || o >= g.vertex_count()) return false;
    bool hit = false;
    for (const Neighbor& rec : g.incident(s, View::ABox)) {
      if (rec.vertex == o && rec.label == t.predicate && rec.direction == Direction::Out) hit = true;
    }
    if (!hit) return false;
  }
  return true;
}

AnswerSet evaluate_pattern(const GraphPattern& pattern, const KnowledgeGraph& g, std::size_t row_limit) {
  AnswerSet out;
  std::map<std::vector<TermId>, std::size_t> first_branch;
  for (std::size_t b = 0; b < pattern.branch_count(); ++b) {
    const auto& branch = pattern.branch(b);
    bool constants_exist = true;
    for (TermId c : pattern.constants) constants_exist = constants_exist && c < g.vertex_count();
    if (!constants_exist) continue;
    Matcher m(branch, g, pattern.variable_count);
    m.run([&](const std::vector<TermId>& row) {
      if (first_branch.count(row)) return true;
      if (first_branch.size() == row_limit) {
        out.truncated = true;
        return false;
      }
      first_branch.emplace(row, b);
      return true;
    });
    if (out.truncated) break;
  }
  for (const auto& [row, b] : first_branch) {
    out.rows.push_back(row);
    out.instances.push_back(instantiate(pattern.branch(b), pattern, row));
  }
  return out;
}

namespace {

void write_branch(std::ostream& os, const std::vector<TriplePattern>& branch, const KnowledgeGraph& g,
                  const std::string& indent) {
  auto term = [&](const PatternTerm& t) {
    return t.variable ? "?v" + std::to_string(t.id) : g.terms().key(t.id);
  };
  for (const TriplePattern& t : branch) {
    os << indent << term(t.subject) << ' ' << g.labels().key(t.predicate) << ' ' << term(t.object) << " .\n";
  }
}

}  // namespace

std::string serialize_sparql(const GraphPattern& pattern, const KnowledgeGraph& g) {
  std::ostringstream os;
  os << "SELECT";
  if (pattern.variable_count == 0) os << " *";
  for (std::uint32_t v = 0; v < pattern.variable_count; ++v) os << " ?v" << v;
  os << " WHERE {\n";
  if (pattern.union_branches.empty()) {
    write_branch(os, pattern.triples, g, "  ");
  } else {
    for (std::size_t b = 0; b < pattern.branch_count(); ++b) {
      if (b) os << "  UNION\n";
      os << "  {\n";
      write_branch(os, pattern.branch(b), g, "    ");
      os << "  }\n";
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

struct SparqlLexer {
  std::string_view text;
  std::size_t pos = 0;

  std::string_view next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) return {};
    std::size_t start = pos;
    char c = text[pos];
    if (c == '{' || c == '}' || c == '.' || c == '*') {
      ++pos;
    } else if (c == '<') {
      pos = text.find('>', pos);
      if (pos == std::string_view::npos) throw std::invalid_argument("sparql: unterminated IRI");
      ++pos;
    } else if (c == '"') {
      ++pos;
      while (pos < text.size() && text[pos] != '"') pos += text[pos] == '\\' ? 2 : 1;
      if (pos >= text.size()) throw std::invalid_argument("sparql: unterminated literal");
      ++pos;
      if (pos < text.size() && text[pos] == '@') {
        ++pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '-')) ++pos;
      } else if (text.substr(pos, 3) == "^^<") {
        pos = text.find('>', pos);
        if (pos == std::string_view::npos) throw std::invalid_argument("sparql: unterminated datatype");
        ++pos;
      }
    } else {
      while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '{' &&
             text[pos] != '}')
        ++pos;
    }
    return text.substr(start, pos - start);
  }
};

}  // namespace

GraphPattern parse_sparql(std::string_view text, const KnowledgeGraph& g) {
  SparqlLexer lex{text};
  auto expect = [&](std::string_view want) {
    auto t = lex.next();
    if (t != want) throw std::invalid_argument("sparql: expected '" + std::string(want) + "', got '" + std::string(t) + "'");
  };
  expect("SELECT");
  GraphPattern p;
  std::string_view tok = lex.next();
  std::uint32_t declared = 0;
  while (tok != "WHERE") {
    if (tok.empty()) throw std::invalid_argument("sparql: missing WHERE");
    if (tok != "*") ++declared;
    tok = lex.next();
  }
  expect("{");

  std::uint32_t max_var = 0;
  bool any_var = false;
  auto term = [&](std::string_view t) {
    if (!t.empty() && t[0] == '?') {
      if (t.size() < 3 || t.substr(0, 2) != "?v") throw std::invalid_argument("sparql: unexpected variable name");
      std::uint32_t id = static_cast<std::uint32_t>(std::stoul(std::string(t.substr(2))));
      max_var = std::max(max_var, id);
      any_var = true;
      return PatternTerm::var(id);
    }
    auto id = g.terms().find(t);
    if (!id) throw std::invalid_argument("sparql: unknown term " + std::string(t));
    return PatternTerm::constant(*id);
  };
  auto read_triples = [&](std::vector<TriplePattern>& out, std::string_view first) {
    std::string_view t = first;
    while (t != "}") {
      if (t.empty()) throw std::invalid_argument("sparql: unterminated group");
      PatternTerm s = term(t);
      auto pred = lex.next();
      auto label = g.labels().find(pred);
      if (!label) throw std::invalid_argument("sparql: unknown predicate " + std::string(pred));
      PatternTerm o = term(lex.next());
      expect(".");
      out.push_back({s, *label, o});
      t = lex.next();
    }
  };

  tok = lex.next();
  if (tok == "{") {
    std::vector<std::vector<TriplePattern>> branches;
    while (tok == "{") {
      branches.emplace_back();
      read_triples(branches.back(), lex.next());
      tok = lex.next();
      if (tok == "UNION") {
        tok = lex.next();
        if (tok != "{") throw std::invalid_argument("sparql: UNION must be followed by a group");
      }
    }
    if (tok != "}") throw std::invalid_argument("sparql: expected closing brace");
    p.triples = std::move(branches.front());
    p.union_branches.assign(std::make_move_iterator(branches.begin() + 1), std::make_move_iterator(branches.end()));
  } else {
    read_triples(p.triples, tok);
  }
  p.variable_count = any_var ? max_var + 1 : 0;
  if (p.variable_count != declared) throw std::invalid_argument("sparql: projection does not match variables");
  return p;
}

}  // namespace kgs
