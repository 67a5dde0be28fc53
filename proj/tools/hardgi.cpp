// hardgi: sample formulas, build graphs, run the generation pipeline, validate and benchmark.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hardgi.hpp"

namespace fs = std::filesystem;
using namespace hardgi;

namespace {

struct SizeOptions {
  std::size_t n = 0;
  std::optional<double> ratio;
  std::optional<std::size_t> m;
};

void add_size_options(CLI::App* app, SizeOptions& o) {
  app->add_option("--n", o.n, "Number of variables")->required();
  auto* r = app->add_option("--ratio", o.ratio, "Clauses per variable (m = round(ratio * n))");
  auto* m = app->add_option("--m", o.m, "Number of clauses");
  r->excludes(m);
  m->excludes(r);
}

std::size_t resolve_m(const SizeOptions& o) {
  if (o.m) return *o.m;
  if (o.ratio) return static_cast<std::size_t>(std::llround(*o.ratio * static_cast<double>(o.n)));
  throw std::invalid_argument("one of --ratio and --m is required");
}

const std::map<std::string, GadgetMode> kGadgets{{"full", GadgetMode::full}, {"core", GadgetMode::core}};
const std::map<std::string, GraphFormat> kFormats{{"dre", GraphFormat::dre}, {"dimacs", GraphFormat::dimacs}};
const std::map<std::string, CellSelector> kSelectors{{"first-smallest", CellSelector::first_smallest},
                                                     {"first-largest", CellSelector::first_largest},
                                                     {"first", CellSelector::first}};

int cmd_sample(const SizeOptions& size, std::uint64_t seed, std::size_t count, bool general, const std::string& out) {
  SampleConfig sc;
  sc.n = size.n;
  sc.m = resolve_m(size);
  sc.seed = seed;
  sc.distribution = general ? Distribution::general : Distribution::homogeneous;
  validate(sc);
  if (!out.empty()) fs::create_directories(out);
  for (std::size_t t = 0; t < count; ++t) {
    auto rng = Xoshiro256StarStar::for_stream(seed, t);
    const XorFormula f = sample_with(sc, rng);
    const std::string text = to_xor_dimacs(f);
    if (out.empty()) {
      std::cout << "c trial " << t << "\n" << text;
    } else {
      const fs::path path = fs::path(out) / (instance_id(sc.n, sc.m, seed, t) + ".xcnf");
      write_text_file(path.string(), text);
      std::cout << path.string() << "\n";
    }
  }
  return 0;
}

int cmd_build(const std::string& input, GadgetMode gadget, GraphFormat format, const std::string& out) {
  const XorFormula f = load_xor_formula(input);
  const Graph g = build_graph(f, gadget);
  const std::string text = export_graph(g, format);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
    std::cerr << out << ": " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
  }
  return 0;
}

std::vector<fs::path> manifests_from(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) p /= "index.txt";
    if (p.filename() == "index.txt" || p.extension() == ".txt") {
      for (auto& m : index_entries(p)) out.push_back(std::move(m));
    } else {
      out.push_back(p);
    }
  }
  return out;
}

int cmd_check(const std::vector<std::string>& inputs) {
  int failures = 0;
  for (const auto& path : manifests_from(inputs)) {
    ValidationReport rep;
    try {
      const InstanceRecord rec = load_manifest(path);
      // manifest paths are relative to the tree root, one level above instances/
      rep = validate(rec, path.parent_path().parent_path());
    } catch (const std::exception& e) {
      rep.id = path.string();
      rep.checks.push_back({"manifest", false, e.what()});
    }
    std::cout << (rep.ok() ? "PASS " : "FAIL ") << rep.id << "\n";
    for (const auto& c : rep.checks) {
      if (!c.ok) std::cout << "  " << c.name << ": " << c.detail << "\n";
    }
    failures += rep.ok() ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

int cmd_bench(const std::vector<std::string>& inputs, const std::vector<std::string>& solvers, double timeout_s,
              CellSelector selector, std::size_t parallel, const std::string& results_dir) {
  const auto timeout = std::chrono::duration<double>(timeout_s);
  for (const auto& s : solvers) {
    if (s != "internal" && !builtin_adapter(s)) throw std::invalid_argument("unknown solver '" + s + "'");
  }
  struct Task {
    BenchInstance inst;
    std::string solver;
  };
  std::vector<Task> tasks;
  for (const auto& path : manifests_from(inputs)) {
    const InstanceRecord rec = load_manifest(path);
    const fs::path root = path.parent_path().parent_path();
    if (rec.format != GraphFormat::dre) throw std::runtime_error(rec.id + ": benchmarking needs .dre graph files");
    for (const auto& s : solvers) tasks.push_back({BenchInstance{rec.id, rec.n, rec.m, root / rec.graph_file}, s});
  }
  std::vector<BenchResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      BenchResult r;
      if (t.solver == "internal") {
        const std::string dre = read_text_file(t.inst.dre_file.string());
        r = run_internal(t.inst, parse_dre(dre), timeout, selector);
        r.digest = file_digest(dre);
      } else {
        r = run_external(*builtin_adapter(t.solver), t.inst, timeout);
      }
      std::lock_guard lock(log_mutex);
      std::cerr << r.instance << " " << r.solver << " " << to_string(r.status) << (r.reason.empty() ? "" : " " + r.reason) << "\n";
      results[i] = std::move(r);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < std::max<std::size_t>(1, std::min(parallel, tasks.size())); ++j) pool.emplace_back(worker);
  }
  const BenchSummary sum = summarize(results, parallel);
  if (results_dir.empty()) {
    std::cout << sum.csv << "\n" << sum.growth_report;
  } else {
    fs::create_directories(results_dir);
    write_text_file((fs::path(results_dir) / "bench.csv").string(), sum.csv);
    write_text_file((fs::path(results_dir) / "growth.txt").string(), sum.growth_report);
    write_text_file((fs::path(results_dir) / "growth.dat").string(), sum.plot_data);
    std::cout << sum.growth_report;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard graph-isomorphism instances from random 3-XOR systems"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SizeOptions size;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::string out;
  std::string gadget = "full", format = "dre";

  auto* sample = app.add_subcommand("sample", "Emit sampled formulas (XOR-DIMACS)");
  add_size_options(sample, size);
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--count", count, "Number of formulas")->check(CLI::PositiveNumber);
  bool general = false;
  sample->add_flag("--general", general, "Draw from F(m,n) (random right-hand sides)");
  sample->add_option("--out", out, "Directory for <id>.xcnf files (default: stdout)");

  auto* build = app.add_subcommand("build", "Build the graph of a formula file");
  std::string input;
  build->add_option("formula", input, "XOR-DIMACS formula file")->required();
  build->add_option("--gadget", gadget, "full or core")->check(CLI::IsMember({"full", "core"}));
  build->add_option("--format", format, "dre or dimacs")->check(CLI::IsMember({"dre", "dimacs"}));
  build->add_option("--out", out, "Output file (default: stdout)");

  auto* gen = app.add_subcommand("generate", "Sample, filter, build and export instances");
  add_size_options(gen, size);
  PipelineConfig cfg;
  double threshold = cfg.gauss_threshold;
  std::optional<std::uint64_t> budget_decisions;
  std::optional<double> budget_seconds;
  std::optional<std::uint64_t> ir_nodes;
  std::size_t jobs = 1;
  bool wl1 = false;
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--count", count, "Number of trials")->check(CLI::PositiveNumber);
  gen->add_option("--gadget", gadget, "full or core")->check(CLI::IsMember({"full", "core"}));
  gen->add_option("--gauss-threshold", threshold, "Minimum decision ratio without/with Gaussian elimination");
  gen->add_option("--budget-decisions", budget_decisions, "Decision budget per SAT run (default 1000000)");
  gen->add_option("--budget-seconds", budget_seconds, "Time budget per SAT run (makes output timing-dependent)");
  gen->add_option("--ir-budget-nodes", ir_nodes, "Node budget for the automorphism check of Phi (default 1000000)");
  gen->add_flag("--wl1", wl1, "Reject graphs in which colour refinement separates some X^0, X^1");
  gen->add_option("--jobs", jobs, "Concurrent trials")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--format", format, "dre or dimacs")->check(CLI::IsMember({"dre", "dimacs"}));

  auto* check = app.add_subcommand("check", "Validate generated instances");
  std::vector<std::string> inputs;
  check->add_option("paths", inputs, "Manifest files, index files or output directories")->required();

  auto* bench = app.add_subcommand("bench", "Run solvers on generated instances");
  std::vector<std::string> solvers{"internal"};
  double timeout_s = 60;
  std::string selector = "first-smallest";
  std::string results;
  bench->add_option("paths", inputs, "Manifest files, index files or output directories")->required();
  bench->add_option("--solver", solvers, "internal, nauty, traces, bliss, conauto (repeatable)");
  bench->add_option("--timeout", timeout_s, "Per-run limit in seconds")->check(CLI::PositiveNumber);
  bench->add_option("--selector", selector, "Internal target cell rule")
      ->check(CLI::IsMember({"first-smallest", "first-largest", "first"}));
  std::size_t parallel = 1;
  bench->add_option("--parallel", parallel, "Concurrent runs (marks the CSV; timings become less faithful)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--results", results, "Directory for bench.csv, growth.txt, growth.dat (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) return cmd_sample(size, seed, count, general, out);
    if (*build) return cmd_build(input, kGadgets.at(gadget), kFormats.at(format), out);
    if (*gen) {
      cfg.n = size.n;
      cfg.ratio = size.ratio;
      cfg.m = size.m;
      cfg.seed = seed;
      cfg.trials = count;
      cfg.gadget = kGadgets.at(gadget);
      cfg.format = kFormats.at(format);
      cfg.gauss_threshold = threshold;
      if (budget_decisions || budget_seconds) {
        cfg.sat_budget.max_decisions = budget_decisions;
        if (budget_seconds) cfg.sat_budget.max_time = std::chrono::duration<double>(*budget_seconds);
      }
      if (ir_nodes) cfg.ir_budget.max_nodes = *ir_nodes;
      cfg.wl1_check = wl1;
      cfg.jobs = jobs;
      cfg.out_dir = out;
      const GenerateReport rep = generate(cfg);
      std::cout << "accepted " << rep.accepted.size() << " of " << cfg.trials << " trials; index "
                << (fs::path(out) / "index.txt").string() << "\n";
      return 0;
    }
    if (*check) return cmd_check(inputs);
    if (*bench) return cmd_bench(inputs, solvers, timeout_s, kSelectors.at(selector), parallel, results);
  } catch (const std::exception& e) {
    std::cerr << "hardgi: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
