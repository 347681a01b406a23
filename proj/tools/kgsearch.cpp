// kgsearch: ingest N-Triples, answer keyword queries, run benchmarks.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "kgs/bench.hpp"
#include "kgs/index_file.hpp"
#include "kgs/reasoner.hpp"

using namespace kgs;

namespace {

constexpr int kExitFound = 0;
constexpr int kExitError = 1;
constexpr int kExitEmpty = 2;
constexpr int kExitRefined = 3;

std::map<std::string, std::string> default_prefixes() {
  return {{"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
          {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
          {"owl", "http://www.w3.org/2002/07/owl#"},
          {"xsd", "http://www.w3.org/2001/XMLSchema#"},
          {"dbo", "http://dbpedia.org/ontology/"},
          {"dbr", "http://dbpedia.org/resource/"}};
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Candidate dictionary keys for a keyword as typed on the command line.
std::vector<std::string> spellings(const std::string& kw, const std::map<std::string, std::string>& prefixes) {
  std::vector<std::string> out{kw};
  if (kw.empty() || kw[0] == '<' || kw[0] == '"' || kw.rfind("_:", 0) == 0) return out;
  auto colon = kw.find(':');
  if (colon != std::string::npos) {
    auto it = prefixes.find(kw.substr(0, colon));
    if (it != prefixes.end()) out.push_back("<" + it->second + kw.substr(colon + 1) + ">");
  }
  out.push_back("<" + kw + ">");
  return out;
}

struct Resolution {
  KeywordQuery query;
  std::vector<std::string> errors;
};

Resolution resolve(const KnowledgeGraph& g, const std::vector<std::string>& keywords,
                   const std::map<std::string, std::string>& prefixes) {
  Resolution r;
  for (const std::string& kw : keywords) {
    bool done = false;
    auto forms = spellings(kw, prefixes);
    for (const std::string& s : forms) {
      if (auto v = g.terms().find(s)) {
        r.query.vertex_keywords.push_back(*v);
        done = true;
        break;
      }
    }
    for (std::size_t i = 0; !done && i < forms.size(); ++i) {
      if (auto l = g.labels().find(forms[i])) {
        r.query.label_keywords.push_back(*l);
        done = true;
      }
    }
    if (done) continue;

    std::vector<std::pair<std::size_t, std::string>> near;
    const std::string& probe = forms.back();
    for (TermId v = 0; v < g.terms().size(); ++v) near.emplace_back(edit_distance(probe, g.terms().key(v)), g.terms().key(v));
    for (LabelId l = 0; l < g.labels().size(); ++l) near.emplace_back(edit_distance(probe, g.labels().key(l)), g.labels().key(l));
    std::sort(near.begin(), near.end());
    std::string msg = "unknown keyword '" + kw + "'";
    if (!near.empty()) {
      msg += "; nearest entries:";
      for (std::size_t i = 0; i < near.size() && i < 5; ++i) msg += " " + near[i].second;
    }
    r.errors.push_back(msg);
  }
  std::sort(r.query.label_keywords.begin(), r.query.label_keywords.end());
  r.query.label_keywords.erase(std::unique(r.query.label_keywords.begin(), r.query.label_keywords.end()),
                               r.query.label_keywords.end());
  return r;
}

std::string keyword_text(const KnowledgeGraph& g, const KeywordQuery& q) {
  std::string s;
  for (TermId v : q.vertex_keywords) s += (s.empty() ? "" : " ") + g.terms().key(v);
  for (LabelId l : q.label_keywords) s += (s.empty() ? "" : " ") + g.labels().key(l);
  return s;
}

void print_bindings(std::ostream& os, const AnswerSet& a, const KnowledgeGraph& g) {
  for (const auto& row : a.rows) {
    if (row.empty()) {
      os << "()\n";
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << "?v" << i << '=' << g.terms().key(row[i]);
    os << '\n';
  }
  if (a.truncated) os << "# truncated at the row limit\n";
}

int cmd_ingest(const std::string& input, const std::string& output, const BuildParams& params,
               const ParseOptions& options) {
  ParseResult parsed = parse_triples_file(input, options);
  for (std::size_t i = 0; i < parsed.diagnostics.size() && i < 20; ++i) {
    std::cerr << input << ':' << parsed.diagnostics[i].line << ": " << parsed.diagnostics[i].message << '\n';
  }
  if (parsed.diagnostics.size() > 20) std::cerr << "... " << parsed.diagnostics.size() - 20 << " more skipped lines\n";
  IndexBundle b = build_index(std::move(parsed.graph), params);
  save_index(b, output);
  const KnowledgeGraph& g = b.graph;
  std::cout << "lines " << parsed.lines << " skipped " << parsed.diagnostics.size() << '\n'
            << "vertices " << g.vertex_count() << " labels " << g.labels().size() << '\n'
            << "edges role " << g.edge_count(AssertionKind::Role) << " type " << g.edge_count(AssertionKind::Type)
            << " attribute " << g.edge_count(AssertionKind::Attribute) << " subclass "
            << g.edge_count(AssertionKind::TboxSubsumption) << '\n';
  int views = 0;
  for (View v : kAboxViews) {
    std::size_t members = 0;
    for (TermId x = 0; x < g.vertex_count(); ++x) members += g.in_view(x, v) ? 1 : 0;
    if (members) ++views;
    std::cout << "view " << to_string(v) << " vertices " << members << '\n';
  }
  std::cout << "abox views " << views << '\n'
            << "sketch radius " << b.sketches.params().radius << " rounds " << b.sketches.params().rounds
            << " entries " << b.sketches.entry_count() << '\n'
            << "pll labels " << b.pll.label_count() << '\n'
            << "concepts " << b.hierarchy.concepts().size() << " components " << b.hierarchy.component_count() << '\n'
            << "wrote " << output << '\n';
  return 0;
}

int cmd_inspect(const std::string& path) {
  IndexBundle b = load_index(path);
  const KnowledgeGraph& g = b.graph;
  std::cout << "format RCKG v" << kIndexVersion << '\n'
            << "vertices " << g.vertex_count() << " labels " << g.labels().size() << " edges " << g.edge_count() << '\n'
            << "type predicate " << g.predicates().type_predicate << '\n'
            << "subclass predicate " << g.predicates().subclass_predicate << '\n'
            << "sketch radius " << b.sketches.params().radius << " rounds " << b.sketches.params().rounds << " seed "
            << b.sketches.params().seed << " entries " << b.sketches.entry_count() << '\n'
            << "pll radius " << b.pll.radius() << " labels " << b.pll.label_count() << '\n'
            << "concepts " << b.hierarchy.concepts().size() << " components " << b.hierarchy.component_count() << '\n';
  return 0;
}

struct QueryFlags {
  bool reasoning = true;
  std::string format = "all";
  std::vector<std::string> prefixes;
  std::size_t vmo_cap = 32;
  std::size_t derivative_cap = 10000;
  std::size_t row_limit = 10000;
  bool trace = false;
};

std::map<std::string, std::string> prefix_map(const std::vector<std::string>& extra) {
  auto m = default_prefixes();
  for (const std::string& p : extra) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--prefix", "expected name=iri, got " + p);
    std::string iri = p.substr(eq + 1);
    if (iri.size() >= 2 && iri.front() == '<' && iri.back() == '>') iri = iri.substr(1, iri.size() - 2);
    m[p.substr(0, eq)] = iri;
  }
  return m;
}

int cmd_query(const std::string& path, const std::vector<std::string>& keywords, const QueryFlags& f) {
  IndexBundle b = load_index(path);
  const KnowledgeGraph& g = b.graph;
  Resolution r = resolve(g, keywords, prefix_map(f.prefixes));
  if (!r.errors.empty()) {
    for (const auto& e : r.errors) std::cerr << "error: " << e << '\n';
    return kExitError;
  }
  if (r.query.vertex_keywords.empty()) {
    std::cerr << "error: a query needs at least one vertex keyword\n";
    return kExitError;
  }
  ReasonerOptions opt;
  opt.reasoning = f.reasoning;
  opt.derivative_cap = f.derivative_cap;
  opt.row_limit = f.row_limit;
  opt.search.vmo_cap = f.vmo_cap;
  if (f.trace) opt.search.trace = &std::cerr;

  QueryResult q = answer_query(b.context(), b.hierarchy, r.query, opt);
  const char* status = q.status == QueryStatus::Found ? "found" : q.status == QueryStatus::RefinedFound ? "refined-found" : "empty";
  std::cerr << "status " << status << " attempts " << q.attempts;
  if (q.derivatives_truncated) std::cerr << " (derivative list truncated)";
  std::cerr << '\n';
  if (q.status == QueryStatus::Empty) return kExitEmpty;

  std::ostringstream sim;
  sim.precision(6);
  sim << std::fixed << q.derivative.similarity;
  const Subgraph& m = q.mcs->graph;
  auto& os = std::cout;
  if (f.format == "all") {
    os << "# keywords " << keyword_text(g, q.derivative.keywords) << '\n'
       << "# similarity " << sim.str() << '\n'
       << "# mcs\n" << to_edge_list(m, g) << "# sparql\n" << serialize_sparql(*q.pattern, g) << "# answers\n";
    print_bindings(os, q.answers, g);
  } else if (f.format == "edges" || f.format == "mcs") {
    os << to_edge_list(m, g);
  } else if (f.format == "dot") {
    os << to_dot(m, g, q.derivative.keywords.vertex_keywords);
  } else if (f.format == "sparql") {
    os << serialize_sparql(*q.pattern, g);
  } else if (f.format == "bindings") {
    print_bindings(os, q.answers, g);
  }
  return q.status == QueryStatus::Found ? kExitFound : kExitRefined;
}

struct BenchFlags {
  std::string queries;
  std::vector<std::size_t> ks{2, 4, 6, 8};
  std::size_t per_k = 25;
  std::uint64_t seed = 1;
  std::string out;
  std::string summary;
  bool ablations = false;
  bool no_exact = false;
  bool timing = false;
};

int cmd_bench(const std::string& path, const BenchFlags& f) {
  IndexBundle b = load_index(path);
  std::vector<KeywordQuery> queries;
  if (!f.queries.empty()) {
    std::ifstream in(f.queries);
    if (!in) throw std::runtime_error("cannot read query file " + f.queries);
    auto prefixes = default_prefixes();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream ls(line);
      std::vector<std::string> words;
      for (std::string w; ls >> w;) words.push_back(w);
      if (words.empty() || words[0][0] == '#') continue;
      Resolution r = resolve(b.graph, words, prefixes);
      if (!r.errors.empty()) throw std::runtime_error(f.queries + ":" + std::to_string(line_no) + ": " + r.errors[0]);
      queries.push_back(r.query);
    }
  } else {
    for (std::size_t i = 0; i < f.ks.size(); ++i) {
      auto qs = generate_queries(b.graph, f.ks[i], f.per_k, f.seed + i);
      queries.insert(queries.end(), qs.begin(), qs.end());
    }
  }
  BenchConfig cfg;
  cfg.ablations = f.ablations;
  cfg.exact = !f.no_exact;
  cfg.timing = f.timing;
  BenchReport rep = run_bench(b.context(), queries, cfg);
  if (f.out.empty()) {
    std::cout << rep.csv();
  } else {
    std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    out << rep.csv();
  }
  if (f.summary.empty()) {
    std::cerr << rep.summary_table();
  } else {
    std::ofstream out(f.summary, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + f.summary);
    out << rep.summary_table();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyword search over knowledge graphs"};
  app.require_subcommand(1);

  std::string input, output, index;
  BuildParams params;
  ParseOptions parse;
  auto* ingest = app.add_subcommand("ingest", "Parse N-Triples and build the index file");
  ingest->add_option("input", input, "N-Triples file")->required()->check(CLI::ExistingFile);
  ingest->add_option("-o,--output", output, "Index file to write")->required();
  ingest->add_option("-r,--radius", params.radius, "Sketch and PLL radius")->check(CLI::Range(1, 64));
  ingest->add_option("-k,--rounds", params.rounds, "Sketch rounds per view (default ceil(log2 |V|))")
      ->check(CLI::Range(1, 64));
  ingest->add_option("--seed", params.seed, "Landmark sampling seed");
  ingest->add_option("--type-pred", parse.predicates.type_predicate, "Type predicate IRI");
  ingest->add_option("--subclass-pred", parse.predicates.subclass_predicate, "Subclass predicate IRI");
  ingest->add_flag("--strict", parse.strict, "Fail on the first malformed line");

  std::vector<std::string> keywords;
  QueryFlags qf;
  bool no_reasoning = false;
  auto* query = app.add_subcommand("query", "Answer a keyword query");
  query->add_option("index", index, "Index file")->required();
  query->add_option("keywords", keywords, "Vertex or edge-label keywords")->required();
  query->add_flag("--no-reasoning", no_reasoning, "Do not refine keywords through the ontology");
  query->add_option("--format", qf.format, "Output: all, edges, mcs, dot, sparql, bindings")
      ->check(CLI::IsMember({"all", "edges", "mcs", "dot", "sparql", "bindings"}));
  query->add_option("--prefix", qf.prefixes, "Extra prefix, name=iri (repeatable)")->allow_extra_args(false);
  query->add_option("--vmo-cap", qf.vmo_cap, "Central vertices per patch-up iteration")->check(CLI::PositiveNumber);
  query->add_option("--derivative-cap", qf.derivative_cap, "Keyword refinements to enumerate")
      ->check(CLI::PositiveNumber);
  query->add_option("--row-limit", qf.row_limit, "Answer rows to keep")->check(CLI::PositiveNumber);
  query->add_flag("--trace", qf.trace, "Print per-turn search state to stderr");

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Compare tree sizes against the exact optimum");
  bench->add_option("index", index, "Index file")->required();
  bench->add_option("--queries", bf.queries, "Query file, one keyword list per line")->check(CLI::ExistingFile);
  bench->add_option("--ks", bf.ks, "Keyword counts for generated queries")->delimiter(',')->allow_extra_args(false);
  bench->add_option("--per-k", bf.per_k, "Generated queries per keyword count");
  bench->add_option("--seed", bf.seed, "Query generation seed");
  bench->add_option("--out", bf.out, "CSV output (default stdout)");
  bench->add_option("--summary", bf.summary, "Summary table output (default stderr)");
  bench->add_flag("--ablations", bf.ablations, "Also run without patch-up and without path selection");
  bench->add_flag("--no-exact", bf.no_exact, "Skip the exact oracle");
  bench->add_flag("--timing", bf.timing, "Record wall-clock times (output is no longer reproducible)");

  auto* inspect = app.add_subcommand("inspect", "Print index statistics");
  inspect->add_option("index", index, "Index file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*ingest) return cmd_ingest(input, output, params, parse);
    if (*query) {
      qf.reasoning = !no_reasoning;
      return cmd_query(index, keywords, qf);
    }
    if (*bench) return cmd_bench(index, bf);
    if (*inspect) return cmd_inspect(index);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
