#include "kgs/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "kgs/union_find.hpp"

namespace kgs {

std::vector<KeywordQuery> generate_queries(const KnowledgeGraph& g, std::size_t k, std::size_t count,
                                           std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("queries need at least one keyword");
  const std::size_t n = g.vertex_count();
  UnionFind uf(n);
  for (const Assertion& a : g.assertions()) {
    if (a.kind != AssertionKind::TboxSubsumption) uf.unite(a.subject, a.object);
  }
  std::map<std::size_t, std::vector<TermId>> comps;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.degree(static_cast<TermId>(v), View::ABox) > 0 || k == 1) comps[uf.find(v)].push_back(static_cast<TermId>(v));
  }
  std::vector<TermId> eligible;
  for (const auto& [_, members] : comps) {
    if (members.size() >= k) eligible.insert(eligible.end(), members.begin(), members.end());
  }
  if (eligible.empty()) throw std::invalid_argument("no connected component holds " + std::to_string(k) + " vertices");
  std::sort(eligible.begin(), eligible.end());

  std::mt19937_64 rng(seed);
  std::vector<KeywordQuery> out;
  for (std::size_t q = 0; q < count; ++q) {
    TermId anchor = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    std::vector<TermId> pool = comps.at(uf.find(anchor));
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = std::uniform_int_distribution<std::size_t>(i, pool.size() - 1)(rng);
      std::swap(pool[i], pool[j]);
    }
    KeywordQuery query;
    query.vertex_keywords.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    out.push_back(std::move(query));
  }
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

BenchReport run_bench(const SearchContext& ctx, const std::vector<KeywordQuery>& queries, const BenchConfig& config) {
  BenchReport report;
  std::vector<std::pair<std::string, SearchOptions>> systems{{"pipeline", {}}};
  if (config.ablations) {
    SearchOptions no_patch;
    no_patch.patchup = false;
    SearchOptions no_sel;
    no_sel.path_selection = false;
    systems.emplace_back("no_patchup", no_patch);
    systems.emplace_back("no_pathsel", no_sel);
  }

  using Clock = std::chrono::steady_clock;
  auto ms_since = [&](Clock::time_point t0) {
    if (!config.timing) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  std::map<std::string, std::vector<double>> errors;
  std::map<std::string, double> coverage_sum;
  std::map<std::string, std::size_t> answered;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const KeywordQuery& query = queries[q];
    const std::size_t first = report.rows.size();
    std::optional<std::size_t> optimum;
    if (config.exact) {
      BenchRow row{q, query.vertex_keywords.size(), "exact", {}, 0.0, {}};
      auto t0 = Clock::now();
      try {
        auto tree = exact_steiner_tree(ctx.graph, query.vertex_keywords, config.limits);
        if (tree) optimum = row.size = tree->size();
      } catch (const OracleUnavailable&) {
      }
      row.elapsed_ms = ms_since(t0);
      if (optimum && *optimum > 0) row.app_er = 0.0;
      report.rows.push_back(row);
    }
    for (const auto& [name, options] : systems) {
      BenchRow row{q, query.vertex_keywords.size(), name, {}, 0.0, {}};
      auto t0 = Clock::now();
      StRun run = compute_st(ctx, query.vertex_keywords, query.label_keywords, options);
      row.elapsed_ms = ms_since(t0);
      if (run.tree) row.size = run.tree->size();
      if (row.size && optimum && *optimum > 0) row.app_er = approximation_error(*row.size, *optimum);
      report.rows.push_back(row);
    }

    // Per-query coverage: a system counts when its tree has the smallest size seen.
    std::optional<std::size_t> smallest;
    for (std::size_t i = first; i < report.rows.size(); ++i) {
      if (report.rows[i].size && (!smallest || *report.rows[i].size < *smallest)) smallest = report.rows[i].size;
    }
    for (std::size_t i = first; i < report.rows.size(); ++i) {
      const BenchRow& r = report.rows[i];
      std::size_t hit = r.size && smallest && *r.size == *smallest ? 1 : 0;
      coverage_sum[r.system] += result_coverage(hit, smallest ? 1 : 0);
      if (r.size) ++answered[r.system];
      if (r.app_er) errors[r.system].push_back(*r.app_er);
    }
  }

  std::vector<std::string> order;
  if (config.exact) order.push_back("exact");
  for (const auto& s : systems) order.push_back(s.first);
  for (const std::string& name : order) {
    SystemSummary s;
    s.system = name;
    s.queries = queries.size();
    s.answered = answered[name];
    auto es = errors[name];
    s.scored = es.size();
    if (!es.empty()) {
      double sum = 0;
      for (double e : es) sum += e;
      s.mean_app_er = sum / static_cast<double>(es.size());
      std::sort(es.begin(), es.end());
      std::size_t m = es.size() / 2;
      s.median_app_er = es.size() % 2 ? es[m] : (es[m - 1] + es[m]) / 2.0;
    }
    s.coverage = queries.empty() ? 0.0 : coverage_sum[name] / static_cast<double>(queries.size());
    report.summary.push_back(s);
  }
  return report;
}

std::string BenchReport::csv() const {
  std::ostringstream os;
  os << "query_id,k,system,size,elapsed_ms,app_er\n";
  for (const BenchRow& r : rows) {
    os << r.query_id << ',' << r.k << ',' << r.system << ',' << (r.size ? std::to_string(*r.size) : "") << ','
       << fixed(r.elapsed_ms, 3) << ',' << (r.app_er ? fixed(*r.app_er, 6) : "") << '\n';
  }
  return os.str();
}

std::string BenchReport::summary_table() const {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s %9s %7s %13s %15s %9s\n", "system", "queries", "answered", "scored",
                "mean_app_er", "median_app_er", "coverage");
  os << line;
  for (const SystemSummary& s : summary) {
    std::snprintf(line, sizeof line, "%-12s %8zu %9zu %7zu %13.6f %15.6f %9.4f\n", s.system.c_str(), s.queries,
                  s.answered, s.scored, s.mean_app_er, s.median_app_er, s.coverage);
    os << line;
  }
  return os.str();
}

}  // namespace kgs
