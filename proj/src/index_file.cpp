#include "kgs/index_file.hpp"

#include <fstream>
#include <sstream>

#include <zlib.h>

namespace kgs {

namespace {

enum Section : std::uint8_t { kDictionary = 1, kGraph = 2, kSketches = 3, kPll = 4, kHierarchy = 5 };

struct Writer {
  std::string out;

  void u8(std::uint8_t v) { out.push_back(static_cast<char>(v)); }
  void fixed(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void var(std::uint64_t v) {
    while (v >= 0x80) {
      u8(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    u8(static_cast<std::uint8_t>(v));
  }
  void str(std::string_view s) {
    var(s.size());
    out.append(s);
  }
  void path(const Path& p) {
    var(p.vertices.size());
    for (TermId v : p.vertices) var(v);
    for (const Step& s : p.steps) var((static_cast<std::uint64_t>(s.label) << 1) | (s.forward ? 1 : 0));
  }
};

struct Reader {
  std::string_view in;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const { throw IndexFormatError("index file: " + what); }
  bool done() const { return pos == in.size(); }
  std::uint8_t u8() {
    if (pos >= in.size()) fail("truncated data");
    return static_cast<std::uint8_t>(in[pos++]);
  }
  std::uint64_t fixed(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t var() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      std::uint8_t b = u8();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    fail("varint too long");
  }
  std::uint32_t u32() {
    std::uint64_t v = var();
    if (v > UINT32_MAX) fail("value out of range");
    return static_cast<std::uint32_t>(v);
  }
  std::size_t count(std::size_t unit = 1) {
    std::uint64_t v = var();
    if (v > (in.size() - pos) / unit + 1) fail("count exceeds remaining data");
    return static_cast<std::size_t>(v);
  }
  std::string str() {
    std::size_t n = count();
    if (n > in.size() - pos) fail("truncated string");
    std::string s(in.substr(pos, n));
    pos += n;
    return s;
  }
  Path path() {
    Path p;
    std::size_t n = count();
    for (std::size_t i = 0; i < n; ++i) p.vertices.push_back(u32());
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::uint64_t s = var();
      p.steps.push_back({static_cast<LabelId>(s >> 1), (s & 1) != 0});
    }
    return p;
  }
};

std::uint32_t crc(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string dictionary_section(const KnowledgeGraph& g) {
  Writer w;
  w.str(g.predicates().type_predicate);
  w.str(g.predicates().subclass_predicate);
  w.var(g.terms().size());
  for (TermId i = 0; i < g.terms().size(); ++i) {
    w.u8(g.terms().is_literal(i) ? 1 : 0);
    w.str(g.terms().key(i));
  }
  w.var(g.labels().size());
  for (LabelId i = 0; i < g.labels().size(); ++i) w.str(g.labels().key(i));
  return w.out;
}

std::string graph_section(const KnowledgeGraph& g) {
  Writer w;
  w.var(g.assertions().size());
  for (const Assertion& a : g.assertions()) {
    w.var(a.subject);
    w.var(a.predicate);
    w.var(a.object);
    w.u8(static_cast<std::uint8_t>(a.kind));
  }
  return w.out;
}

std::string sketch_section(const SketchIndex& s) {
  Writer w;
  w.var(static_cast<std::uint64_t>(s.params().radius));
  w.var(static_cast<std::uint64_t>(s.params().rounds));
  w.fixed(s.params().seed, 8);
  for (View view : kAboxViews) {
    for (int r = 0; r < s.params().rounds; ++r) {
      const auto& lm = s.landmarks(view, r);
      w.var(lm.size());
      for (TermId v : lm) w.var(v);
    }
  }
  w.var(s.vertex_count());
  for (TermId v = 0; v < s.vertex_count(); ++v) {
    const Sketch& sk = s.sketch(v);
    w.var(sk.entries.size());
    for (const SketchEntry& e : sk.entries) {
      w.var(e.landmark);
      w.var(e.round);
      w.u8(static_cast<std::uint8_t>(e.view));
      w.path(e.path);
    }
  }
  return w.out;
}

std::string pll_section(const PllIndex& p) {
  Writer w;
  w.var(static_cast<std::uint64_t>(p.radius()));
  w.var(p.order().size());
  for (TermId v : p.order()) w.var(v);
  w.var(p.vertex_count());
  for (TermId v = 0; v < p.vertex_count(); ++v) {
    auto ls = p.labels(v);
    w.var(ls.size());
    for (const PllLabelEntry& e : ls) {
      w.var(e.hub_rank);
      w.var(e.distance);
      w.var(e.predecessor);
    }
  }
  return w.out;
}

std::string hierarchy_section(const ConceptHierarchy& h) {
  Writer w;
  w.var(h.concepts().size());
  for (std::size_t i = 0; i < h.concepts().size(); ++i) {
    w.var(h.concepts()[i]);
    w.var(h.component_of()[i]);
  }
  w.var(h.component_count());
  for (std::uint32_t c = 0; c < h.component_count(); ++c) {
    w.var(h.parents(c).size());
    for (std::uint32_t p : h.parents(c)) w.var(p);
  }
  return w.out;
}

}  // namespace

IndexBundle build_index(KnowledgeGraph graph, const BuildParams& params) {
  IndexBundle b;
  int rounds = params.rounds > 0 ? params.rounds : default_rounds(graph.vertex_count());
  b.sketches = build_sketches(graph, params.radius, rounds, params.seed);
  b.pll = build_pll(graph, params.radius);
  b.hierarchy = ConceptHierarchy::build(graph);
  b.graph = std::move(graph);
  return b;
}

std::string encode_index(const IndexBundle& b) {
  Writer w;
  w.out.append("RCKG");
  w.fixed(kIndexVersion, 4);
  w.fixed(b.graph.fingerprint(), 8);
  const std::pair<Section, std::string> sections[] = {
      {kDictionary, dictionary_section(b.graph)},
      {kGraph, graph_section(b.graph)},
      {kSketches, sketch_section(b.sketches)},
      {kPll, pll_section(b.pll)},
      {kHierarchy, hierarchy_section(b.hierarchy)},
  };
  for (const auto& [tag, payload] : sections) {
    w.u8(tag);
    w.fixed(payload.size(), 8);
    w.fixed(crc(payload), 4);
    w.out.append(payload);
  }
  return w.out;
}

IndexBundle decode_index(std::string_view bytes) {
  Reader r{bytes};
  if (bytes.substr(0, 4) != "RCKG") r.fail("bad magic");
  r.pos = 4;
  std::uint32_t version = static_cast<std::uint32_t>(r.fixed(4));
  if (version != kIndexVersion) {
    r.fail("unsupported version " + std::to_string(version) + " (expected " + std::to_string(kIndexVersion) + ")");
  }
  std::uint64_t hash = r.fixed(8);

  std::string_view payloads[6];
  for (int expect = kDictionary; expect <= kHierarchy; ++expect) {
    std::uint8_t tag = r.u8();
    if (tag != expect) r.fail("unexpected section tag " + std::to_string(tag));
    std::uint64_t len = r.fixed(8);
    std::uint32_t sum = static_cast<std::uint32_t>(r.fixed(4));
    if (len > bytes.size() - r.pos) r.fail("section overruns the file");
    payloads[tag] = bytes.substr(r.pos, static_cast<std::size_t>(len));
    r.pos += static_cast<std::size_t>(len);
    if (crc(payloads[tag]) != sum) r.fail("checksum mismatch in section " + std::to_string(tag));
  }
  if (!r.done()) r.fail("trailing bytes");

  IndexBundle b;
  {
    Reader d{payloads[kDictionary]};
    PredicateConfig preds;
    preds.type_predicate = d.str();
    preds.subclass_predicate = d.str();
    Dictionary terms, labels;
    std::size_t nt = d.count(2);
    for (std::size_t i = 0; i < nt; ++i) {
      bool lit = d.u8() != 0;
      if (terms.intern(d.str(), lit) != i) d.fail("duplicate term key");
    }
    std::size_t nl = d.count();
    for (std::size_t i = 0; i < nl; ++i) {
      if (labels.intern(d.str()) != i) d.fail("duplicate label key");
    }
    if (!d.done()) d.fail("dictionary section has trailing bytes");

    Reader gr{payloads[kGraph]};
    std::vector<Assertion> as(gr.count(4));
    for (Assertion& a : as) {
      a.subject = gr.u32();
      a.predicate = gr.u32();
      a.object = gr.u32();
      std::uint8_t kind = gr.u8();
      if (a.subject >= nt || a.object >= nt || a.predicate >= nl || kind > 3) gr.fail("assertion out of range");
      a.kind = static_cast<AssertionKind>(kind);
    }
    if (!gr.done()) gr.fail("graph section has trailing bytes");
    b.graph = KnowledgeGraph::build(std::move(terms), std::move(labels), std::move(as), preds);
  }
  if (b.graph.fingerprint() != hash) r.fail("graph hash mismatch");
  const std::size_t n = b.graph.vertex_count();
  auto vertex = [&](Reader& x) {
    std::uint32_t v = x.u32();
    if (v >= n) x.fail("vertex id out of range");
    return v;
  };

  {
    Reader s{payloads[kSketches]};
    SketchParams params;
    params.radius = static_cast<int>(s.u32());
    params.rounds = static_cast<int>(s.u32());
    params.seed = s.fixed(8);
    b.sketches = SketchIndex(params, n);
    for (View view : kAboxViews) {
      for (int round = 0; round < params.rounds; ++round) {
        std::size_t m = s.count();
        for (std::size_t i = 0; i < m; ++i) b.sketches.record_landmark(view, round, vertex(s));
      }
    }
    if (s.var() != n) s.fail("sketch vertex count mismatch");
    for (TermId v = 0; v < n; ++v) {
      std::size_t m = s.count(3);
      for (std::size_t i = 0; i < m; ++i) {
        SketchEntry e;
        e.landmark = vertex(s);
        e.round = static_cast<std::uint16_t>(s.u32());
        std::uint8_t view = s.u8();
        if (view > 2) s.fail("bad sketch view");
        e.view = static_cast<View>(view);
        e.path = s.path();
        for (TermId x : e.path.vertices) {
          if (x >= n) s.fail("sketch path vertex out of range");
        }
        try {
          b.sketches.add_entry(v, std::move(e));
        } catch (const std::exception& ex) {
          s.fail(ex.what());
        }
      }
    }
    if (!s.done()) s.fail("sketch section has trailing bytes");
  }
  {
    Reader p{payloads[kPll]};
    int radius = static_cast<int>(p.u32());
    std::vector<TermId> order(p.count());
    for (TermId& v : order) v = vertex(p);
    if (order.size() != n || p.var() != n) p.fail("PLL vertex count mismatch");
    std::vector<std::vector<PllLabelEntry>> labels(n);
    for (auto& l : labels) {
      l.resize(p.count(3));
      for (PllLabelEntry& e : l) {
        e.hub_rank = p.u32();
        e.distance = p.u32();
        e.predecessor = vertex(p);
        if (e.hub_rank >= n) p.fail("hub rank out of range");
      }
    }
    if (!p.done()) p.fail("PLL section has trailing bytes");
    try {
      b.pll = PllIndex(radius, std::move(order), std::move(labels));
    } catch (const std::exception& ex) {
      p.fail(ex.what());
    }
  }
  {
    Reader h{payloads[kHierarchy]};
    std::size_t m = h.count(2);
    std::vector<TermId> concepts(m);
    std::vector<std::uint32_t> comp(m);
    for (std::size_t i = 0; i < m; ++i) {
      concepts[i] = vertex(h);
      comp[i] = h.u32();
    }
    std::vector<std::vector<std::uint32_t>> parents(h.count());
    for (auto& ps : parents) {
      ps.resize(h.count());
      for (auto& x : ps) x = h.u32();
    }
    if (!h.done()) h.fail("hierarchy section has trailing bytes");
    try {
      b.hierarchy = ConceptHierarchy::from_parts(std::move(concepts), std::move(comp), std::move(parents));
    } catch (const std::exception& ex) {
      h.fail(ex.what());
    }
  }
  return b;
}

void save_index(const IndexBundle& bundle, const std::string& path) {
  std::string bytes = encode_index(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

IndexBundle load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index " + path + " (build one with `kgsearch ingest`)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_index(ss.str());
}

}  // namespace kgs
