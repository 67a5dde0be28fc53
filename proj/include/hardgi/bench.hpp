#pragma once

// Benchmark harness: external GI solvers as child processes, the internal IR search, and a
// CSV/growth summary.
//
// An adapter names a binary (looked up on PATH unless it contains a '/'), its argument list
// and the text fed to its standard input. In arguments and stdin text, "{dre}" expands to the
// graph file, "{dimacs}" to a temporary DIMACS-graph copy written on demand, and "{graph}" to
// the contents of the .dre file. Group sizes are read from "grpsize=" (dreadnaut) or "|Aut|:"
// (bliss) in the combined stdout/stderr.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hardgi/canon/ir.hpp"
#include "hardgi/digest.hpp"
#include "hardgi/formula.hpp"
#include "hardgi/graph_io.hpp"
#include "hardgi/version.hpp"

namespace hardgi {

enum class BenchStatus { ok, timeout, error };

inline const char* to_string(BenchStatus s) {
  switch (s) {
    case BenchStatus::ok:
      return "OK";
    case BenchStatus::timeout:
      return "TIMEOUT";
    case BenchStatus::error:
      return "ERROR";
  }
  return "?";
}

struct BenchInstance {
  std::string id;
  std::size_t n_vars = 0;
  std::size_t m = 0;
  std::filesystem::path dre_file;
};

struct BenchResult {
  std::string instance;
  /// Digest of the graph file the solver was given.
  std::string digest;
  std::size_t n_vars = 0;
  std::size_t m = 0;
  std::size_t vertices = 0;
  std::string solver;
  std::string solver_version = "unknown";
  /// Seconds; the limit itself for TIMEOUT.
  double time = 0;
  BenchStatus status = BenchStatus::error;
  /// Why an ERROR happened (MISSING_SOLVER, EXIT_<code>, SIGNAL_<n>, ...).
  std::string reason;
  std::optional<BigCount> group_size;
  /// Internal solver only.
  std::optional<std::uint64_t> nodes;
};

struct SolverAdapter {
  std::string id;
  std::string binary;
  std::vector<std::string> args;
  std::string stdin_text;
  std::string version = "unknown";
};

/// Adapters for the solvers the harness knows by name.
inline std::optional<SolverAdapter> builtin_adapter(const std::string& id) {
  if (id == "nauty") return SolverAdapter{"nauty", "dreadnaut", {}, "-a -m\nAn\n{graph}x\nq\n"};
  if (id == "traces") return SolverAdapter{"traces", "dreadnaut", {}, "-a -m\nAt\n{graph}x\nq\n"};
  if (id == "bliss") return SolverAdapter{"bliss", "bliss", {"{dimacs}"}, ""};
  if (id == "conauto") return SolverAdapter{"conauto", "conauto", {"-aut", "{dimacs}"}, ""};
  return std::nullopt;
}

inline std::vector<std::string> builtin_adapter_ids() { return {"bliss", "conauto", "nauty", "traces"}; }

/// Full path of an executable, searching PATH for bare names.
inline std::optional<std::string> find_executable(const std::string& name) {
  auto runnable = [](const std::string& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) return runnable(name) ? std::optional<std::string>(name) : std::nullopt;
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::istringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    const std::string cand = (dir.empty() ? std::string(".") : dir) + "/" + name;
    if (runnable(cand)) return cand;
  }
  return std::nullopt;
}

/// Group order from solver output; absent when no known pattern parses to an integer.
inline std::optional<BigCount> parse_group_size(const std::string& output) {
  for (const char* key : {"grpsize=", "|Aut|:"}) {
    const auto at = output.find(key);
    if (at == std::string::npos) continue;
    std::size_t i = at + std::strlen(key);
    while (i < output.size() && output[i] == ' ') ++i;
    std::size_t j = i;
    while (j < output.size() && std::isdigit(static_cast<unsigned char>(output[j]))) ++j;
    if (j == i) return std::nullopt;
    // "1.5e10" style values are approximations; only exact integers are reported
    if (j < output.size() && (output[j] == '.' || output[j] == 'e' || output[j] == 'E')) {
      std::size_t k = j;
      if (output[k] == '.') {
        ++k;
        while (k < output.size() && output[k] == '0') ++k;
        if (k < output.size() && (std::isdigit(static_cast<unsigned char>(output[k])) || output[k] == 'e')) return std::nullopt;
      } else {
        return std::nullopt;
      }
    }
    return BigCount(output.substr(i, j - i));
  }
  return std::nullopt;
}

struct ProcessResult {
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;
  int signal = 0;
  std::string output;
  double seconds = 0;
};

/// Runs argv[0] with the given stdin, collecting stdout and stderr; kills the process group
/// at the timeout.
inline ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                                 std::chrono::duration<double> timeout) {
  ProcessResult res;
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  // close-on-exec so that concurrently spawned children do not hold our pipe ends open
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) return res;
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return res;
  }
  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    return res;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(out_pipe[1], STDERR_FILENO);
    ::execv(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  res.started = true;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
  ::signal(SIGPIPE, SIG_IGN);

  std::size_t written = 0;
  int in_fd = in_pipe[1];
  if (input.empty()) {
    ::close(in_fd);
    in_fd = -1;
  }
  char buf[4096];
  bool out_open = true;
  while (out_open) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed >= timeout) {
      res.timed_out = true;
      break;
    }
    const auto left_ms = std::chrono::duration_cast<std::chrono::milliseconds>(timeout - elapsed).count();
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {out_pipe[0], POLLIN, 0};
    if (in_fd >= 0) fds[nfds++] = {in_fd, POLLOUT, 0};
    const int ready = ::poll(fds, static_cast<nfds_t>(nfds), static_cast<int>(std::min<long long>(left_ms + 1, 100)));
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t got = ::read(out_pipe[0], buf, sizeof buf);
      if (got > 0) {
        res.output.append(buf, static_cast<std::size_t>(got));
      } else if (got == 0 || errno != EAGAIN) {
        out_open = false;
      }
    }
    if (nfds > 1 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t put = ::write(in_fd, input.data() + written, input.size() - written);
      if (put > 0) written += static_cast<std::size_t>(put);
      if (put < 0 && errno != EAGAIN) written = input.size();
      if (written == input.size()) {
        ::close(in_fd);
        in_fd = -1;
      }
    }
  }
  if (in_fd >= 0) ::close(in_fd);
  ::close(out_pipe[0]);
  int status = 0;
  for (;;) {
    if (res.timed_out) ::kill(-pid, SIGKILL);
    const pid_t w = ::waitpid(pid, &status, res.timed_out ? 0 : WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (w == 0) {
      if (std::chrono::steady_clock::now() - start >= timeout) {
        res.timed_out = true;
      } else {
        ::usleep(2000);
      }
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) res.signal = WTERMSIG(status);
  return res;
}

namespace detail {

inline std::string expand(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t at = s.find(key); at != std::string::npos; at = s.find(key, at + value.size())) {
    s.replace(at, key.size(), value);
  }
  return s;
}

inline double seconds(std::chrono::duration<double> d) { return d.count(); }

}  // namespace detail

inline BenchResult run_external(const SolverAdapter& adapter, const BenchInstance& inst, std::chrono::duration<double> timeout) {
  BenchResult r;
  r.instance = inst.id;
  r.n_vars = inst.n_vars;
  r.m = inst.m;
  r.solver = adapter.id;
  r.solver_version = adapter.version;
  std::string dre;
  try {
    dre = read_text_file(inst.dre_file.string());
    r.digest = file_digest(dre);
    r.vertices = parse_dre(dre).vertex_count();
  } catch (const std::exception& e) {
    r.reason = std::string("BAD_INPUT ") + e.what();
    return r;
  }
  const auto exe = find_executable(adapter.binary);
  if (!exe) {
    r.reason = "MISSING_SOLVER";
    return r;
  }
  std::filesystem::path dimacs_path;
  auto dimacs = [&]() -> std::string {
    if (dimacs_path.empty()) {
      dimacs_path = std::filesystem::temp_directory_path() /
                    ("hardgi-" + std::to_string(::getpid()) + "-" + adapter.id + "-" + inst.dre_file.stem().string() + ".dimacs");
      write_text_file(dimacs_path.string(), to_dimacs_graph(parse_dre(dre)));
    }
    return dimacs_path.string();
  };
  auto substitute = [&](std::string s) {
    s = detail::expand(std::move(s), "{dre}", inst.dre_file.string());
    if (s.find("{dimacs}") != std::string::npos) s = detail::expand(std::move(s), "{dimacs}", dimacs());
    return detail::expand(std::move(s), "{graph}", dre);
  };
  std::vector<std::string> argv{*exe};
  for (const auto& a : adapter.args) argv.push_back(substitute(a));
  const std::string input = substitute(adapter.stdin_text);
  const ProcessResult p = run_process(argv, input, timeout);
  if (!dimacs_path.empty()) std::filesystem::remove(dimacs_path);
  if (!p.started) {
    r.reason = "SPAWN_FAILED";
  } else if (p.timed_out) {
    r.status = BenchStatus::timeout;
    r.time = detail::seconds(timeout);
  } else if (p.signal != 0) {
    r.reason = "SIGNAL_" + std::to_string(p.signal);
    r.time = p.seconds;
  } else if (p.exit_code != 0) {
    r.reason = "EXIT_" + std::to_string(p.exit_code);
    r.time = p.seconds;
  } else {
    r.status = BenchStatus::ok;
    r.time = p.seconds;
    r.group_size = parse_group_size(p.output);
  }
  return r;
}

/// The internal IR search on the instance graph under a wall-clock limit.
inline BenchResult run_internal(const BenchInstance& inst, const Graph& g, std::chrono::duration<double> timeout,
                                CellSelector selector = CellSelector::first_smallest,
                                std::optional<std::uint64_t> max_nodes = std::nullopt) {
  BenchResult r;
  r.instance = inst.id;
  r.n_vars = inst.n_vars;
  r.m = inst.m;
  r.vertices = g.vertex_count();
  r.solver = std::string("internal-") + to_string(selector);
  r.solver_version = kToolVersion;
  const auto start = std::chrono::steady_clock::now();
  const AutReport rep = ir_automorphisms(g, SearchBudget{max_nodes, timeout}, selector);
  r.nodes = rep.search_nodes;
  if (rep.status == SearchStatus::timeout) {
    r.status = BenchStatus::timeout;
    r.time = detail::seconds(timeout);
  } else {
    r.status = BenchStatus::ok;
    r.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.group_size = rep.group_size;
  }
  return r;
}

struct GrowthFit {
  std::string solver;
  std::size_t points = 0;
  /// Present with at least three points: ln(cost) = intercept + slope * vertices.
  std::optional<double> slope;
  std::optional<double> intercept;
  std::optional<double> r_squared;
  /// Present with at least two points: cost at the largest size over cost at the smallest.
  std::optional<double> ratio;
};

struct BenchSummary {
  std::string csv;
  std::string growth_report;
  /// Whitespace-separated "solver vertices cost" rows.
  std::string plot_data;
  std::vector<GrowthFit> fits;
};

inline constexpr const char* kBenchCsvHeader = "instance,n_vars,m,vertices,solver,time,status,nodes";

/// Cost used for growth: search nodes when known, otherwise seconds.
inline double bench_cost(const BenchResult& r) { return r.nodes ? static_cast<double>(*r.nodes) : r.time; }

inline GrowthFit fit_growth(const std::string& solver, std::vector<std::pair<double, double>> points) {
  GrowthFit fit;
  fit.solver = solver;
  fit.points = points.size();
  if (points.size() < 2) return fit;
  std::sort(points.begin(), points.end());
  const double floor = 1e-9;
  fit.ratio = std::max(points.back().second, floor) / std::max(points.front().second, floor);
  if (points.size() < 3) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, c] : points) {
    const double y = std::log(std::max(c, floor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double k = static_cast<double>(points.size());
  const double vx = sxx - sx * sx / k;
  if (vx <= 0) return fit;
  const double slope = (sxy - sx * sy / k) / vx;
  fit.slope = slope;
  fit.intercept = (sy - slope * sx) / k;
  const double vy = syy - sy * sy / k;
  fit.r_squared = vy <= 0 ? 1.0 : slope * slope * vx / vy;
  return fit;
}

/// `parallel` > 1 marks the table as measured with concurrent runs.
inline BenchSummary summarize(std::vector<BenchResult> results, std::size_t parallel = 1) {
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::tie(a.instance, a.solver) < std::tie(b.instance, b.solver);
  });
  BenchSummary s;
  if (parallel > 1) s.csv = "# parallel=" + std::to_string(parallel) + ": wall times measured with concurrent runs\n";
  s.csv += std::string(kBenchCsvHeader) + "\n";
  for (const auto& r : results) {
    char t[64];
    std::snprintf(t, sizeof t, "%.6f", r.time);
    s.csv += r.instance + "," + std::to_string(r.n_vars) + "," + std::to_string(r.m) + "," + std::to_string(r.vertices) + "," +
             r.solver + "," + t + "," + to_string(r.status) + "," + (r.nodes ? std::to_string(*r.nodes) : "") + "\n";
  }
  std::vector<std::string> solvers;
  for (const auto& r : results) {
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);
  }
  std::sort(solvers.begin(), solvers.end());
  std::ostringstream rep, plot;
  plot << "# solver vertices cost\n";
  for (const auto& solver : solvers) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : results) {
      if (r.solver != solver || r.status == BenchStatus::error) continue;
      pts.emplace_back(static_cast<double>(r.vertices), bench_cost(r));
      plot << solver << " " << r.vertices << " " << bench_cost(r) << "\n";
    }
    const GrowthFit fit = fit_growth(solver, pts);
    rep << solver << ": " << fit.points << " points";
    if (fit.slope) {
      rep << "; ln(cost) = " << *fit.intercept << " + " << *fit.slope << " * vertices, R^2 = " << *fit.r_squared;
      if (*fit.slope > 0) rep << ", cost doubles every " << std::log(2.0) / *fit.slope << " vertices";
    } else if (fit.ratio) {
      rep << "; cost ratio largest/smallest = " << *fit.ratio << " (too few points to fit)";
    } else {
      rep << "; not enough data";
    }
    rep << "\n";
    s.fits.push_back(fit);
  }
  for (std::size_t i = 0; i < results.size();) {
    std::size_t j = i;
    std::map<std::string, std::string> sizes;
    for (; j < results.size() && results[j].instance == results[i].instance; ++j) {
      if (results[j].group_size) sizes[results[j].solver] = results[j].group_size->str();
    }
    std::set<std::string> distinct;
    for (const auto& [solver, size] : sizes) distinct.insert(size);
    if (distinct.size() > 1) {
      rep << "group size disagreement on " << results[i].instance << ":";
      for (const auto& [solver, size] : sizes) rep << " " << solver << "=" << size;
      rep << "\n";
    }
    i = j;
  }
  s.growth_report = rep.str();
  s.plot_data = plot.str();
  return s;
}

}  // namespace hardgi
