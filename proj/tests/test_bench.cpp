#include <filesystem>

#include "catch_amalgamated.hpp"
#include "hardgi/bench.hpp"
#include "hardgi/cfi.hpp"

using namespace hardgi;
namespace fs = std::filesystem;

namespace {

const fs::path kFakes = HARDGI_FAKE_SOLVER_DIR;

Graph complete(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

struct K4File {
  fs::path path = fs::temp_directory_path() / "hardgi-bench-k4.dre";
  K4File() { write_text_file(path.string(), to_dre(complete(4))); }
  ~K4File() { fs::remove(path); }
  BenchInstance instance() const { return {"k4", 2, 1, path}; }
};

SolverAdapter fake(const std::string& script, std::vector<std::string> args = {}) {
  return SolverAdapter{script, (kFakes / script).string(), std::move(args), "{graph}"};
}

BenchResult row(std::string inst, std::string solver, std::size_t vertices, std::uint64_t nodes) {
  BenchResult r;
  r.instance = std::move(inst);
  r.solver = std::move(solver);
  r.vertices = vertices;
  r.nodes = nodes;
  r.status = BenchStatus::ok;
  return r;
}

}  // namespace

TEST_CASE("group sizes parsed from solver output") {
  CHECK(parse_group_size("grpsize=24; 2 gens") == BigCount(24));
  CHECK(parse_group_size("|Aut|: 6\n") == BigCount(6));
  CHECK(parse_group_size("grpsize=120.000") == BigCount(120));
  CHECK_FALSE(parse_group_size("grpsize=1.5e10"));
  CHECK_FALSE(parse_group_size("nothing here"));
  CHECK(parse_group_size("grpsize=265252859812191058636308480000000") ==
        BigCount("265252859812191058636308480000000"));
}

TEST_CASE("built-in adapters") {
  for (const auto& id : builtin_adapter_ids()) CHECK(builtin_adapter(id));
  CHECK_FALSE(builtin_adapter("saucy"));
  CHECK(builtin_adapter("nauty")->stdin_text.find("{graph}") != std::string::npos);
}

TEST_CASE("external runs") {
  const K4File k4;
  const auto timeout = std::chrono::duration<double>(5);

  const BenchResult ok = run_external(fake("grpsize.sh"), k4.instance(), timeout);
  CHECK(ok.status == BenchStatus::ok);
  CHECK(ok.group_size == BigCount(24));
  CHECK(ok.vertices == 4);
  CHECK(ok.digest.rfind("fnv1a64:", 0) == 0);

  const BenchResult aut = run_external(fake("aut.sh", {"-aut", "{dimacs}"}), k4.instance(), timeout);
  CHECK(aut.status == BenchStatus::ok);
  CHECK(aut.group_size == BigCount("1307674368000"));

  const BenchResult approx = run_external(fake("approx.sh"), k4.instance(), timeout);
  CHECK(approx.status == BenchStatus::ok);
  CHECK_FALSE(approx.group_size);

  const BenchResult failed = run_external(fake("fail.sh"), k4.instance(), timeout);
  CHECK(failed.status == BenchStatus::error);
  CHECK(failed.reason == "EXIT_4");

  const BenchResult missing = run_external(fake("no-such-solver"), k4.instance(), timeout);
  CHECK(missing.status == BenchStatus::error);
  CHECK(missing.reason == "MISSING_SOLVER");

  const auto start = std::chrono::steady_clock::now();
  const BenchResult slow = run_external(fake("sleep.sh"), k4.instance(), std::chrono::duration<double>(0.5));
  const double waited = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(slow.status == BenchStatus::timeout);
  CHECK(slow.time == 0.5);
  CHECK(waited < 5.0);

  BenchInstance gone = k4.instance();
  gone.dre_file = "/nonexistent/graph.dre";
  CHECK(run_external(fake("grpsize.sh"), gone, timeout).reason.rfind("BAD_INPUT", 0) == 0);
}

TEST_CASE("internal runs") {
  const K4File k4;
  const BenchResult r = run_internal(k4.instance(), complete(4), std::chrono::duration<double>(5));
  CHECK(r.status == BenchStatus::ok);
  CHECK(r.group_size == BigCount(24));
  CHECK(r.nodes);
  CHECK(r.solver == "internal-first-smallest");
  const BenchResult capped = run_internal(k4.instance(), complete(8), std::chrono::duration<double>(5),
                                          CellSelector::first, 1);
  CHECK(capped.status == BenchStatus::timeout);
}

TEST_CASE("growth summaries") {
  SECTION("empty") {
    const BenchSummary s = summarize({});
    CHECK(s.csv == std::string(kBenchCsvHeader) + "\n");
    CHECK(s.fits.empty());
  }
  SECTION("two points give only a ratio") {
    const BenchSummary s = summarize({row("b", "x", 20, 40), row("a", "x", 10, 10)});
    REQUIRE(s.fits.size() == 1);
    CHECK_FALSE(s.fits[0].slope);
    CHECK(*s.fits[0].ratio == Catch::Approx(4.0));
    CHECK(s.csv == std::string(kBenchCsvHeader) + "\na,0,0,10,x,0.000000,OK,10\nb,0,0,20,x,0.000000,OK,40\n");
  }
  SECTION("an exponential series is fitted exactly") {
    std::vector<BenchResult> rs;
    for (std::size_t v = 10; v <= 50; v += 10) {
      rs.push_back(row("i" + std::to_string(v), "x", v, static_cast<std::uint64_t>(std::llround(3 * std::exp(0.1 * v)))));
    }
    rs.push_back(row("i10", "y", 10, 5));
    BenchResult err = row("i20", "y", 20, 0);
    err.status = BenchStatus::error;
    rs.push_back(err);
    const BenchSummary s = summarize(rs);
    REQUIRE(s.fits.size() == 2);
    CHECK(*s.fits[0].slope == Catch::Approx(0.1).epsilon(0.01));
    CHECK(*s.fits[0].r_squared > 0.999);
    CHECK(s.fits[1].points == 1);
    CHECK(s.growth_report.find("y: 1 points; not enough data") != std::string::npos);
  }
}

TEST_CASE("internal runs on the complete triples gadget graph") {
  const XorFormula f = make_formula(4, {{{1, 2, 3}, false}, {{1, 2, 4}, false}, {{1, 3, 4}, false}, {{2, 3, 4}, false}});
  const Graph g = build_full(f);
  const BenchInstance inst{"triples", 4, 4, ""};
  const BenchResult a = run_internal(inst, g, std::chrono::duration<double>(5));
  const BenchResult b = run_internal(inst, g, std::chrono::duration<double>(5));
  CHECK(a.status == BenchStatus::ok);
  CHECK(a.group_size == BigCount(1));
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("summary flags parallel runs and group size disagreements") {
  BenchResult x = row("g", "internal", 4, 3), y = row("g", "nauty", 4, 0);
  x.group_size = BigCount(24);
  y.group_size = BigCount(12);
  y.nodes.reset();
  const BenchSummary s = summarize({x, y}, 2);
  CHECK(s.csv.rfind("# parallel=2", 0) == 0);
  CHECK(s.growth_report.find("group size disagreement on g: internal=24 nauty=12") != std::string::npos);
  y.group_size = BigCount(24);
  CHECK(summarize({x, y}).growth_report.find("disagreement") == std::string::npos);
}
