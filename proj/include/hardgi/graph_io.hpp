#pragma once

// Text formats for graphs.
//
// dre (dreadnaut input):   "n=<N> $=0 g" then "<v> : <w1> <w2> ...;" for every vertex with a
//                          larger neighbour, the last such line ending in '.'; a lone "." when
//                          there are no edges.
// DIMACS graph:            "p edge <N> <E>" then "e <u> <v>" per edge, 1-based, smaller end first.
// Both list edges in ascending (min, max) order. Vertex colours are not written.

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hardgi/graph.hpp"

namespace hardgi {

enum class GraphFormat { dre, dimacs };

inline const char* to_string(GraphFormat f) { return f == GraphFormat::dre ? "dre" : "dimacs"; }

inline GraphFormat parse_graph_format(std::string_view s) {
  if (s == "dre") return GraphFormat::dre;
  if (s == "dimacs") return GraphFormat::dimacs;
  throw std::invalid_argument("unknown graph format '" + std::string(s) + "'");
}

inline const char* file_extension(GraphFormat f) { return f == GraphFormat::dre ? ".dre" : ".dimacs"; }

inline std::string to_dre(const Graph& g) {
  std::string out = "n=" + std::to_string(g.vertex_count()) + " $=0 g\n";
  std::vector<std::string> lines;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::string line;
    for (auto w : g.neighbors(v)) {
      if (w <= v) continue;
      line += line.empty() ? std::to_string(v) + " :" : "";
      line += " " + std::to_string(w);
    }
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) return out + ".\n";
  for (std::size_t i = 0; i < lines.size(); ++i) out += lines[i] + (i + 1 == lines.size() ? ".\n" : ";\n");
  return out;
}

inline std::string to_dimacs_graph(const Graph& g) {
  std::string out = "p edge " + std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const auto& e : g.edges()) out += "e " + std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  return out;
}

namespace detail {

inline std::size_t parse_count(std::string_view s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string(what) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

/// Reads the dre subset written by to_dre: a header "n=N [$=0] g", then adjacency lists
/// "v : w ...;" terminated by '.'. Repeated edges are ignored.
inline Graph parse_dre(const std::string& text) {
  std::string spaced;
  for (char c : text) {
    if (c == ':' || c == ';' || c == '.') {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::istringstream in(spaced);
  std::string tok;
  if (!(in >> tok) || tok.rfind("n=", 0) != 0) throw std::runtime_error("dre: missing 'n=' header");
  const std::size_t n = detail::parse_count(std::string_view(tok).substr(2), "dre");
  if (!(in >> tok)) throw std::runtime_error("dre: truncated header");
  if (tok == "$=0") {
    if (!(in >> tok)) throw std::runtime_error("dre: truncated header");
  }
  if (tok != "g") throw std::runtime_error("dre: expected 'g' after header, got '" + tok + "'");
  Graph g(n);
  Vertex current = 0;
  bool have_current = false;
  bool expect_colon = false;
  bool done = false;
  while (in >> tok) {
    if (done) throw std::runtime_error("dre: trailing content after '.'");
    if (tok == ".") {
      done = true;
    } else if (tok == ";") {
      have_current = false;
    } else if (tok == ":") {
      if (!expect_colon) throw std::runtime_error("dre: unexpected ':'");
      expect_colon = false;
    } else {
      const std::size_t x = detail::parse_count(tok, "dre");
      if (x >= n) throw std::runtime_error("dre: vertex " + tok + " out of range");
      if (!have_current || expect_colon) {
        if (expect_colon) throw std::runtime_error("dre: expected ':' after vertex");
        current = static_cast<Vertex>(x);
        have_current = true;
        expect_colon = true;
      } else if (!g.adjacent(current, static_cast<Vertex>(x))) {
        g.add_edge(current, static_cast<Vertex>(x));
      }
    }
  }
  if (!done) throw std::runtime_error("dre: missing terminating '.'");
  return g;
}

inline Graph parse_dimacs_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Graph> g;
  std::size_t declared = 0, seen = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind == "c") continue;
    const std::string where = "dimacs graph line " + std::to_string(lineno);
    if (kind == "p") {
      std::string fmt, a, b;
      if (g || !(ls >> fmt >> a >> b) || fmt != "edge") throw std::runtime_error(where + ": bad problem line");
      g.emplace(detail::parse_count(a, "dimacs graph"));
      declared = detail::parse_count(b, "dimacs graph");
    } else if (kind == "e") {
      std::string a, b;
      if (!g || !(ls >> a >> b)) throw std::runtime_error(where + ": bad edge line");
      const std::size_t u = detail::parse_count(a, "dimacs graph"), v = detail::parse_count(b, "dimacs graph");
      if (u < 1 || v < 1 || u > g->vertex_count() || v > g->vertex_count()) {
        throw std::runtime_error(where + ": vertex out of range");
      }
      g->add_edge(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
      ++seen;
    } else {
      throw std::runtime_error(where + ": unknown line type '" + kind + "'");
    }
  }
  if (!g) throw std::runtime_error("dimacs graph: missing problem line");
  if (seen != declared) {
    throw std::runtime_error("dimacs graph: declared " + std::to_string(declared) + " edges, found " + std::to_string(seen));
  }
  return std::move(*g);
}

inline std::string export_graph(const Graph& g, GraphFormat f) {
  return f == GraphFormat::dre ? to_dre(g) : to_dimacs_graph(g);
}

inline Graph import_graph(const std::string& text, GraphFormat f) {
  return f == GraphFormat::dre ? parse_dre(text) : parse_dimacs_graph(text);
}

}  // namespace hardgi
