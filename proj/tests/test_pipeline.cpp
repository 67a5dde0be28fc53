#include <filesystem>
#include <fstream>
#include <random>

#include "catch_amalgamated.hpp"
#include "hardgi/pipeline.hpp"
#include "support.hpp"

using namespace hardgi;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("hardgi-test-" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

PipelineConfig small_config() {
  PipelineConfig c;
  c.n = 12;
  c.ratio = 2.0;
  c.seed = 3;
  c.trials = 6;
  c.gauss_threshold = 1.0;
  return c;
}

}  // namespace

TEST_CASE("configuration errors") {
  auto bad = [](auto edit) {
    PipelineConfig c = small_config();
    edit(c);
    return c;
  };
  CHECK_NOTHROW(validate(small_config()));
  CHECK_THROWS(validate(bad([](auto& c) { c.m = 20; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.ratio.reset(); })));
  CHECK_THROWS(validate(bad([](auto& c) { c.ratio = 1.0; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.ratio = 100.0; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.n = 2; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.trials = 0; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.sat_budget = SolveBudget{}; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.ir_budget = SearchBudget{}; })));
  CHECK_THROWS(validate(bad([](auto& c) { c.gauss_threshold = std::numeric_limits<double>::infinity(); })));
  CHECK_THROWS(validate(bad([](auto& c) { c.filter_order.pop_back(); })));
  CHECK_THROWS(validate(bad([](auto& c) { c.filter_order[0] = Filter::unique; })));
  CHECK(clause_count(small_config()) == 24);
}

TEST_CASE("instance ids") {
  CHECK(instance_id(30, 60, 7, 3) == "n30-m60-s7-t0003");
  CHECK(instance_id(5, 6, 0, 12345) == "n5-m6-s0-t12345");
}

TEST_CASE("screening the complete triples on four variables") {
  const XorFormula f = make_formula(4, {{{1, 2, 3}, false}, {{1, 2, 4}, false}, {{1, 3, 4}, false}, {{2, 3, 4}, false}});
  PipelineConfig c;
  c.gauss_threshold = 0.0;
  c.filter_order = {Filter::unique, Filter::gauss_gap, Filter::phi_asymmetry, Filter::wl1};
  const Screening s = screen(c, f);
  CHECK_FALSE(s.rejection);
  CHECK(s.record.uniquely_satisfiable);
  CHECK_FALSE(s.record.phi_asymmetric);
  CHECK(build_graph(f, c.gadget).vertex_count() == 33);
  CHECK(build_graph(f, c.gadget).edge_count() == 70);

  c.gadget = GadgetMode::core;
  const Screening core = screen(c, f);
  REQUIRE(core.rejection);
  CHECK(*core.rejection == Rejection::phi_symmetric);
  CHECK(core.detail == "|Aut(Phi)| = 24");
}

TEST_CASE("screening rejections") {
  PipelineConfig c;
  c.gauss_threshold = 0.0;
  const XorFormula loose = make_formula(5, {{{1, 2, 3}, false}, {{3, 4, 5}, false}});
  REQUIRE(screen(c, loose).rejection);
  CHECK(*screen(c, loose).rejection == Rejection::not_unique);
  c.filter_order = {Filter::gauss_gap, Filter::unique, Filter::phi_asymmetry, Filter::wl1};
  CHECK(*screen(c, loose).rejection == Rejection::gauss_gap);

  std::mt19937_64 rng(71);
  XorFormula f;
  do f = support::random_formula(30, 60, rng);
  while (!is_uniquely_satisfiable(f));
  c.sat_budget.max_decisions = 1;
  CHECK(*screen(c, f).rejection == Rejection::budget);
  c.sat_budget.max_decisions = 1'000'000;
  c.gauss_threshold = 1e9;
  CHECK(*screen(c, f).rejection == Rejection::gauss_gap);
}

TEST_CASE("filter order does not change which trials are accepted") {
  PipelineConfig c = small_config();
  c.gadget = GadgetMode::core;
  c.trials = 12;
  c.gauss_threshold = 4.0;
  c.wl1_check = true;
  std::vector<Filter> order = c.filter_order;
  std::sort(order.begin(), order.end());
  std::vector<std::string> reference;
  bool first = true;
  do {
    c.filter_order = order;
    std::vector<std::string> ids;
    for (const auto& r : generate(c).accepted) ids.push_back(r.id);
    if (first) reference = ids;
    CHECK(ids == reference);
    first = false;
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("generation is deterministic and independent of jobs") {
  TempDir a("gen-a"), b("gen-b");
  PipelineConfig c = small_config();
  c.out_dir = a.path;
  const GenerateReport ra = generate(c);
  c.out_dir = b.path;
  c.jobs = 3;
  const GenerateReport rb = generate(c);
  REQUIRE(ra.accepted.size() + ra.rejected.size() == c.trials);
  REQUIRE_FALSE(ra.accepted.empty());
  CHECK(ra.accepted == rb.accepted);
  for (const auto& name : {"index.txt", "rejections.txt"}) {
    CHECK(read_text_file((a.path / name).string()) == read_text_file((b.path / name).string()));
  }
  for (const auto& r : ra.accepted) {
    for (const auto& rel : {r.clause_file, r.graph_file, "instances/" + r.id + ".manifest"}) {
      CHECK(read_text_file((a.path / rel).string()) == read_text_file((b.path / rel).string()));
    }
  }
  for (const auto& e : fs::directory_iterator(a.path / "instances")) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("manifests round-trip") {
  const GenerateReport rep = generate(small_config());
  REQUIRE_FALSE(rep.accepted.empty());
  for (const auto& r : rep.accepted) CHECK(parse_manifest(to_manifest(r)) == r);
  InstanceRecord r = rep.accepted.front();
  r.gauss_ratio = std::numeric_limits<double>::infinity();
  r.phi_asymmetric = true;
  r.wl1_nonseparating = false;
  CHECK(parse_manifest(to_manifest(r)) == r);
  CHECK_THROWS(parse_manifest(to_manifest(r) + "extra: 1\n"));
  std::string text = to_manifest(r);
  CHECK_THROWS(parse_manifest(text.substr(text.find('\n') + 1)));
}

TEST_CASE("validation detects tampering") {
  TempDir dir("validate");
  PipelineConfig c = small_config();
  c.out_dir = dir.path;
  const GenerateReport rep = generate(c);
  REQUIRE(rep.accepted.size() >= 2);
  const auto manifests = index_entries(dir.path / "index.txt");
  REQUIRE(manifests.size() == rep.accepted.size());
  for (const auto& m : manifests) CHECK(validate(load_manifest(m), dir.path).ok());

  auto failed = [](const ValidationReport& v) {
    std::set<std::string> out;
    for (const auto& ch : v.checks) {
      if (!ch.ok) out.insert(ch.name);
    }
    return out;
  };

  SECTION("deleted edge") {
    const InstanceRecord r = rep.accepted[0];
    const fs::path graph = dir.path / r.graph_file;
    Graph g = parse_dre(read_text_file(graph.string()));
    const auto edges = g.edges();
    Graph h(g.vertex_count());
    for (std::size_t i = 1; i < edges.size(); ++i) h.add_edge(edges[i].u, edges[i].v);
    write_text_file(graph.string(), to_dre(h));
    const auto bad = failed(validate(r, dir.path));
    CHECK(bad.count("edge_count"));
    CHECK(bad.count("rebuild"));
  }
  SECTION("flipped right-hand side") {
    const InstanceRecord r = rep.accepted[1];
    const fs::path clauses = dir.path / r.clause_file;
    XorFormula f = load_xor_formula(clauses.string());
    std::vector<RawXorClause> raw;
    for (const auto& cl : f.clauses()) raw.push_back({cl.vars, cl.rhs});
    raw[0].rhs = true;
    save_xor_formula(clauses.string(), make_formula(f.num_vars(), raw));
    const auto bad = failed(validate(r, dir.path));
    CHECK(bad.count("digest"));
    CHECK(bad.count("formula"));
  }
  SECTION("missing file") {
    const InstanceRecord r = rep.accepted[0];
    fs::remove(dir.path / r.clause_file);
    CHECK(failed(validate(r, dir.path)) == std::set<std::string>{"clause_file"});
  }
}
