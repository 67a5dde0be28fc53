#pragma once

// Instance generation: sample a homogeneous 3-XOR formula, screen it, lift it to a graph and
// write the artifacts.
//
// Output tree under cfg.out_dir:
//   index.txt                     batch header plus one "instance: <id> <manifest>" line per accept
//   rejections.txt                "<id> <REASON> <detail>" per rejected trial, in trial order
//   instances/<id>.xcnf           the formula (XOR-DIMACS)
//   instances/<id>.dre|.dimacs    the graph
//   instances/<id>.manifest       the InstanceRecord, "key: value" per line
//
// Every file is written to a temporary name and renamed into place. Nothing in the tree
// depends on wall-clock time unless a time budget is configured.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hardgi/canon/ir.hpp"
#include "hardgi/canon/refine.hpp"
#include "hardgi/cfi.hpp"
#include "hardgi/digest.hpp"
#include "hardgi/formula.hpp"
#include "hardgi/graph_io.hpp"
#include "hardgi/rng.hpp"
#include "hardgi/sampler.hpp"
#include "hardgi/version.hpp"
#include "hardgi/xorsat.hpp"

namespace hardgi {

inline constexpr const char* kManifestSchema = "hardgi-manifest/1";
inline constexpr const char* kIndexSchema = "hardgi-index/1";

enum class Filter { phi_asymmetry, unique, gauss_gap, wl1 };

inline const char* to_string(Filter f) {
  switch (f) {
    case Filter::phi_asymmetry:
      return "phi_asymmetry";
    case Filter::unique:
      return "unique";
    case Filter::gauss_gap:
      return "gauss_gap";
    case Filter::wl1:
      return "wl1";
  }
  return "?";
}

enum class Rejection { phi_symmetric, not_unique, gauss_gap, wl1_separates, budget };

inline const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::phi_symmetric:
      return "PHI_SYMMETRIC";
    case Rejection::not_unique:
      return "NOT_UNIQUE";
    case Rejection::gauss_gap:
      return "GAUSS_GAP";
    case Rejection::wl1_separates:
      return "WL1_SEPARATES";
    case Rejection::budget:
      return "BUDGET";
  }
  return "?";
}

struct PipelineConfig {
  std::size_t n = 0;
  /// Exactly one of ratio and m is set.
  std::optional<double> ratio;
  std::optional<std::size_t> m;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  GadgetMode gadget = GadgetMode::full;
  double gauss_threshold = 5.0;
  bool wl1_check = false;
  SolveBudget sat_budget{1'000'000, std::nullopt};
  SearchBudget ir_budget{1'000'000, std::nullopt};
  std::filesystem::path out_dir;
  GraphFormat format = GraphFormat::dre;
  std::size_t jobs = 1;
  std::vector<Filter> filter_order{Filter::phi_asymmetry, Filter::unique, Filter::gauss_gap, Filter::wl1};
};

inline std::size_t clause_count(const PipelineConfig& cfg) {
  if (cfg.m) return *cfg.m;
  if (!cfg.ratio || !std::isfinite(*cfg.ratio)) throw std::invalid_argument("pipeline: ratio or m required");
  return static_cast<std::size_t>(std::llround(*cfg.ratio * static_cast<double>(cfg.n)));
}

inline void validate(const PipelineConfig& cfg) {
  if (cfg.ratio.has_value() == cfg.m.has_value()) throw std::invalid_argument("pipeline: set exactly one of ratio and m");
  if (cfg.n < 3) throw std::invalid_argument("pipeline: n must be at least 3");
  if (cfg.ratio && !(*cfg.ratio > 1.0)) throw std::invalid_argument("pipeline: ratio must exceed 1");
  const std::size_t m = clause_count(cfg);
  if (m <= cfg.n) throw std::invalid_argument("pipeline: m must exceed n (m/n > 1)");
  if (m > choose3(cfg.n)) throw std::invalid_argument("pipeline: m exceeds C(n,3)");
  if (cfg.trials == 0) throw std::invalid_argument("pipeline: trial count must be positive");
  if (cfg.jobs == 0) throw std::invalid_argument("pipeline: jobs must be positive");
  if (!std::isfinite(cfg.gauss_threshold) || cfg.gauss_threshold < 0) {
    throw std::invalid_argument("pipeline: gauss threshold must be finite and non-negative");
  }
  if (!cfg.sat_budget.bounded()) throw std::invalid_argument("pipeline: SAT budget must be finite");
  if (!cfg.ir_budget.max_nodes && !cfg.ir_budget.max_time) throw std::invalid_argument("pipeline: IR budget must be finite");
  auto sorted = cfg.filter_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::vector<Filter>{Filter::phi_asymmetry, Filter::unique, Filter::gauss_gap, Filter::wl1}) {
    throw std::invalid_argument("pipeline: filter order must be a permutation of the four filters");
  }
}

struct InstanceRecord {
  std::string schema = kManifestSchema;
  std::string id;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::string clause_digest;
  /// Unset when the check was not run (full gadget mode).
  std::optional<bool> phi_asymmetric;
  bool uniquely_satisfiable = false;
  double gauss_ratio = 0;
  std::uint64_t decisions_with_gauss = 0;
  std::uint64_t decisions_without_gauss = 0;
  /// Unset when the 1-WL filter is off.
  std::optional<bool> wl1_nonseparating;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  GadgetMode gadget = GadgetMode::full;
  GraphFormat format = GraphFormat::dre;
  std::string clause_file;
  std::string graph_file;
  std::string tool_version = kToolVersion;

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

inline std::string clause_digest(const std::string& clause_file_bytes) { return file_digest(clause_file_bytes); }

inline std::string instance_id(std::size_t n, std::size_t m, std::uint64_t seed, std::size_t trial) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "n%zu-m%zu-s%llu-t%04zu", n, m, static_cast<unsigned long long>(seed), trial);
  return buf;
}

namespace detail {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("manifest: bad number '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("manifest: bad integer '" + s + "'");
  return v;
}

inline std::string format_tristate(const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : "n/a"; }

inline std::optional<bool> parse_tristate(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s == "n/a") return std::nullopt;
  throw std::runtime_error("manifest: expected true, false or n/a, got '" + s + "'");
}

inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_text_file(tmp.string(), content);
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::string to_manifest(const InstanceRecord& r) {
  std::ostringstream o;
  o << "schema: " << r.schema << "\n"
    << "id: " << r.id << "\n"
    << "n: " << r.n << "\n"
    << "m: " << r.m << "\n"
    << "seed: " << r.seed << "\n"
    << "trial: " << r.trial << "\n"
    << "clause_digest: " << r.clause_digest << "\n"
    << "phi_asymmetric: " << detail::format_tristate(r.phi_asymmetric) << "\n"
    << "uniquely_satisfiable: " << (r.uniquely_satisfiable ? "true" : "false") << "\n"
    << "gauss_ratio: " << detail::format_double(r.gauss_ratio) << "\n"
    << "decisions_with_gauss: " << r.decisions_with_gauss << "\n"
    << "decisions_without_gauss: " << r.decisions_without_gauss << "\n"
    << "wl1_nonseparating: " << detail::format_tristate(r.wl1_nonseparating) << "\n"
    << "vertices: " << r.vertices << "\n"
    << "edges: " << r.edges << "\n"
    << "gadget: " << to_string(r.gadget) << "\n"
    << "graph_format: " << to_string(r.format) << "\n"
    << "clause_file: " << r.clause_file << "\n"
    << "graph_file: " << r.graph_file << "\n"
    << "tool_version: " << r.tool_version << "\n";
  return o.str();
}

inline InstanceRecord parse_manifest(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw std::runtime_error("manifest: malformed line '" + line + "'");
    if (!kv.emplace(line.substr(0, colon), line.substr(colon + 2)).second) {
      throw std::runtime_error("manifest: duplicate key '" + line.substr(0, colon) + "'");
    }
  }
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(std::string("manifest: missing key '") + key + "'");
    std::string v = std::move(it->second);
    kv.erase(it);
    return v;
  };
  InstanceRecord r;
  r.schema = take("schema");
  if (r.schema != kManifestSchema) throw std::runtime_error("manifest: unsupported schema '" + r.schema + "'");
  r.id = take("id");
  r.n = detail::parse_u64(take("n"));
  r.m = detail::parse_u64(take("m"));
  r.seed = detail::parse_u64(take("seed"));
  r.trial = detail::parse_u64(take("trial"));
  r.clause_digest = take("clause_digest");
  r.phi_asymmetric = detail::parse_tristate(take("phi_asymmetric"));
  const auto uniq = detail::parse_tristate(take("uniquely_satisfiable"));
  if (!uniq) throw std::runtime_error("manifest: uniquely_satisfiable must be true or false");
  r.uniquely_satisfiable = *uniq;
  r.gauss_ratio = detail::parse_double(take("gauss_ratio"));
  r.decisions_with_gauss = detail::parse_u64(take("decisions_with_gauss"));
  r.decisions_without_gauss = detail::parse_u64(take("decisions_without_gauss"));
  r.wl1_nonseparating = detail::parse_tristate(take("wl1_nonseparating"));
  r.vertices = detail::parse_u64(take("vertices"));
  r.edges = detail::parse_u64(take("edges"));
  const auto gadget = take("gadget");
  if (gadget != "full" && gadget != "core") throw std::runtime_error("manifest: bad gadget '" + gadget + "'");
  r.gadget = gadget == "full" ? GadgetMode::full : GadgetMode::core;
  r.format = parse_graph_format(take("graph_format"));
  r.clause_file = take("clause_file");
  r.graph_file = take("graph_file");
  r.tool_version = take("tool_version");
  if (!kv.empty()) throw std::runtime_error("manifest: unknown key '" + kv.begin()->first + "'");
  return r;
}

/// Result of running the filters on one formula.
struct Screening {
  std::optional<Rejection> rejection;
  std::string detail;
  InstanceRecord record;
};

/// Applies the enabled filters in cfg.filter_order to f, stopping at the first rejection.
/// Fills the outcome fields of the record; ids and file names are left to the caller.
inline Screening screen(const PipelineConfig& cfg, const XorFormula& f) {
  Screening s;
  s.record.n = f.num_vars();
  s.record.m = f.num_clauses();
  s.record.gadget = cfg.gadget;
  s.record.format = cfg.format;
  auto reject = [&](Rejection r, std::string detail) {
    s.rejection = r;
    s.detail = std::move(detail);
  };
  for (Filter filter : cfg.filter_order) {
    if (s.rejection) break;
    switch (filter) {
      case Filter::phi_asymmetry: {
        if (cfg.gadget != GadgetMode::core) break;
        const AutReport rep = ir_automorphisms(incidence_graph(f), cfg.ir_budget);
        if (rep.status == SearchStatus::timeout) {
          reject(Rejection::budget, "phi automorphism search exceeded its budget");
          break;
        }
        s.record.phi_asymmetric = rep.group_size == 1;
        if (rep.group_size != 1) reject(Rejection::phi_symmetric, "|Aut(Phi)| = " + rep.group_size.str());
        break;
      }
      case Filter::unique: {
        const std::size_t r = rank(to_matrix(f).matrix);
        s.record.uniquely_satisfiable = r == f.num_vars();
        if (!s.record.uniquely_satisfiable) {
          reject(Rejection::not_unique, "rank " + std::to_string(r) + " < " + std::to_string(f.num_vars()));
        }
        break;
      }
      case Filter::gauss_gap: {
        if (!is_uniquely_satisfiable(f)) {
          reject(Rejection::gauss_gap, "phi' is satisfiable, no refutation to time");
          break;
        }
        const GaussGap gap = gauss_ratio(f, cfg.sat_budget);
        s.record.gauss_ratio = gap.ratio;
        s.record.decisions_with_gauss = gap.with_gauss.decisions;
        s.record.decisions_without_gauss = gap.without_gauss.decisions;
        if (gap.with_gauss.result == SolveResult::budget_exhausted ||
            gap.without_gauss.result == SolveResult::budget_exhausted) {
          reject(Rejection::budget, "SAT budget exhausted");
        } else if (gap.ratio < cfg.gauss_threshold) {
          reject(Rejection::gauss_gap, "ratio " + detail::format_double(gap.ratio) + " < " +
                                           detail::format_double(cfg.gauss_threshold));
        }
        break;
      }
      case Filter::wl1: {
        if (!cfg.wl1_check) break;
        const Graph g = build_graph(f, cfg.gadget);
        const Partition p = color_refine(g);
        const VertexScheme vs(f.num_vars(), f.num_clauses());
        std::optional<Var> separated;
        for (Var j = 1; j <= f.num_vars() && !separated; ++j) {
          if (!p.same_cell(vs.variable(j, false), vs.variable(j, true))) separated = j;
        }
        s.record.wl1_nonseparating = !separated;
        if (separated) reject(Rejection::wl1_separates, "colour refinement separates variable " + std::to_string(*separated));
        break;
      }
    }
  }
  return s;
}

struct RejectedTrial {
  std::size_t trial = 0;
  std::string id;
  Rejection reason = Rejection::not_unique;
  std::string detail;
};

struct GenerateReport {
  std::vector<InstanceRecord> accepted;
  std::vector<RejectedTrial> rejected;
};

/// The formula for a given trial; each trial draws from its own stream of cfg.seed.
inline XorFormula trial_formula(const PipelineConfig& cfg, std::size_t trial) {
  SampleConfig sc;
  sc.n = cfg.n;
  sc.m = clause_count(cfg);
  sc.seed = cfg.seed;
  auto rng = Xoshiro256StarStar::for_stream(cfg.seed, trial);
  return sample_with(sc, rng);
}

namespace detail {

struct TrialOutcome {
  std::optional<InstanceRecord> record;
  std::optional<RejectedTrial> rejected;
};

inline TrialOutcome run_trial(const PipelineConfig& cfg, std::size_t trial) {
  const XorFormula f = trial_formula(cfg, trial);
  const std::string id = instance_id(cfg.n, f.num_clauses(), cfg.seed, trial);
  Screening s = screen(cfg, f);
  TrialOutcome out;
  if (s.rejection) {
    out.rejected = RejectedTrial{trial, id, *s.rejection, s.detail};
    return out;
  }
  InstanceRecord& r = s.record;
  r.id = id;
  r.seed = cfg.seed;
  r.trial = trial;
  const std::string clauses = to_xor_dimacs(f);
  r.clause_digest = clause_digest(clauses);
  const Graph g = build_graph(f, cfg.gadget);
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.clause_file = "instances/" + id + ".xcnf";
  r.graph_file = "instances/" + id + file_extension(cfg.format);
  if (!cfg.out_dir.empty()) {
    write_atomically(cfg.out_dir / r.clause_file, clauses);
    write_atomically(cfg.out_dir / r.graph_file, export_graph(g, cfg.format));
    write_atomically(cfg.out_dir / ("instances/" + id + ".manifest"), to_manifest(r));
  }
  out.record = std::move(r);
  return out;
}

inline std::string index_text(const PipelineConfig& cfg, const GenerateReport& rep) {
  std::ostringstream o;
  o << "schema: " << kIndexSchema << "\n"
    << "tool_version: " << kToolVersion << "\n"
    << "n: " << cfg.n << "\n"
    << "m: " << clause_count(cfg) << "\n"
    << "seed: " << cfg.seed << "\n"
    << "trials: " << cfg.trials << "\n"
    << "gadget: " << to_string(cfg.gadget) << "\n"
    << "graph_format: " << to_string(cfg.format) << "\n"
    << "gauss_threshold: " << format_double(cfg.gauss_threshold) << "\n"
    << "wl1_check: " << (cfg.wl1_check ? "on" : "off") << "\n"
    << "accepted: " << rep.accepted.size() << "\n"
    << "rejected: " << rep.rejected.size() << "\n";
  for (const auto& r : rep.accepted) o << "instance: " << r.id << " instances/" << r.id << ".manifest\n";
  return o.str();
}

}  // namespace detail

/// Runs cfg.trials trials (cfg.jobs at a time) and, when cfg.out_dir is set, writes the tree.
inline GenerateReport generate(const PipelineConfig& cfg) {
  validate(cfg);
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir / "instances");
  std::vector<detail::TrialOutcome> outcomes(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t t = next++; t < cfg.trials; t = next++) {
      try {
        outcomes[t] = detail::run_trial(cfg, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, cfg.trials);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  GenerateReport rep;
  for (auto& o : outcomes) {
    if (o.record) rep.accepted.push_back(std::move(*o.record));
    if (o.rejected) rep.rejected.push_back(std::move(*o.rejected));
  }
  if (!cfg.out_dir.empty()) {
    std::string rejections;
    for (const auto& r : rep.rejected) rejections += r.id + " " + to_string(r.reason) + " " + r.detail + "\n";
    detail::write_atomically(cfg.out_dir / "rejections.txt", rejections);
    detail::write_atomically(cfg.out_dir / "index.txt", detail::index_text(cfg, rep));
  }
  return rep;
}

struct ValidationCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ValidationReport {
  std::string id;
  std::vector<ValidationCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
  }
};

/// Re-reads an instance's files (paths relative to root) and re-checks what can be recomputed.
inline ValidationReport validate(const InstanceRecord& r, const std::filesystem::path& root) {
  ValidationReport rep;
  rep.id = r.id;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  std::string clause_bytes, graph_bytes;
  try {
    clause_bytes = read_text_file((root / r.clause_file).string());
    add("clause_file", true);
  } catch (const std::exception& e) {
    add("clause_file", false, e.what());
  }
  try {
    graph_bytes = read_text_file((root / r.graph_file).string());
    add("graph_file", true);
  } catch (const std::exception& e) {
    add("graph_file", false, e.what());
  }
  if (!rep.ok()) return rep;

  const std::string digest = clause_digest(clause_bytes);
  add("digest", digest == r.clause_digest, digest == r.clause_digest ? "" : "recomputed " + digest);

  std::optional<XorFormula> f;
  try {
    f = xor_formula_from_dimacs(clause_bytes);
    const bool shape = f->num_vars() == r.n && f->num_clauses() == r.m && f->homogeneous();
    add("formula", shape, shape ? "" : "n, m or homogeneity differs from the record");
  } catch (const std::exception& e) {
    add("formula", false, e.what());
  }
  std::optional<Graph> g;
  try {
    g = import_graph(graph_bytes, r.format);
    add("graph_parse", true);
  } catch (const std::exception& e) {
    add("graph_parse", false, e.what());
  }
  if (f && f->homogeneous()) {
    const std::size_t rk = rank(to_matrix(*f).matrix);
    add("rank", rk == f->num_vars() && r.uniquely_satisfiable, "rank " + std::to_string(rk));
  }
  const VertexScheme vs(r.n, r.m);
  if (g) {
    const bool nv = g->vertex_count() == vs.expected_vertices(r.gadget) && g->vertex_count() == r.vertices;
    const bool ne = g->edge_count() == vs.expected_edges(r.gadget) && g->edge_count() == r.edges;
    add("vertex_count", nv, std::to_string(g->vertex_count()) + " vertices, expected " + std::to_string(vs.expected_vertices(r.gadget)));
    add("edge_count", ne, std::to_string(g->edge_count()) + " edges, expected " + std::to_string(vs.expected_edges(r.gadget)));
  }
  if (f && g && f->homogeneous()) {
    const Graph rebuilt = build_graph(*f, r.gadget);
    auto spectrum = [](const Graph& h) {
      std::vector<std::size_t> d(h.vertex_count());
      for (Vertex v = 0; v < h.vertex_count(); ++v) d[v] = h.degree(v);
      std::sort(d.begin(), d.end());
      return d;
    };
    add("degree_spectrum", spectrum(*g) == spectrum(rebuilt));
    const bool same = g->vertex_count() == rebuilt.vertex_count() && g->edges() == rebuilt.edges();
    add("rebuild", same, same ? "" : "graph differs from the construction applied to the clause file");
  }
  return rep;
}

inline InstanceRecord load_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(read_text_file(path.string()));
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

/// Manifest paths listed in an index file, relative to its directory.
inline std::vector<std::filesystem::path> index_entries(const std::filesystem::path& index_file) {
  std::istringstream in(read_text_file(index_file.string()));
  std::string line;
  std::vector<std::filesystem::path> out;
  bool schema_ok = false;
  while (std::getline(in, line)) {
    if (line == std::string("schema: ") + kIndexSchema) schema_ok = true;
    if (line.rfind("instance: ", 0) != 0) continue;
    const auto sp = line.rfind(' ');
    out.push_back(index_file.parent_path() / line.substr(sp + 1));
  }
  if (!schema_ok) throw std::runtime_error(index_file.string() + ": missing or unsupported schema line");
  return out;
}

}  // namespace hardgi
