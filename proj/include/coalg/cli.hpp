#pragma once

// Command-line front end. `run` takes the argument vector (program name
// first) and writes reports to `out`, diagnostics to `err`.
//
// Exit codes: 0 success, 1 negative result (not equivalent, invalid
// witness, infeasible polytope), 2 usage or parse error.

#include "coalg/automaton.hpp"
#include "coalg/hilbert.hpp"
#include "coalg/polyhedra.hpp"
#include "coalg/zigzag.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coalg::cli {

enum Exit : int { kSuccess = 0, kNegative = 1, kUsage = 2 };

/// Failure attributable to the invocation rather than the input data.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

inline WeightedAutomaton load_automaton(const std::string& path) {
  auto in = open(path);
  return read_automaton(in, path);
}

/// e_index if given, else the file's `state` line, else e_0.
inline Vec initial_state(const WeightedAutomaton& aut, std::optional<std::size_t> index,
                         const std::string& path) {
  if (index) {
    if (*index >= aut.n)
      throw UsageError("--state-index " + std::to_string(*index) + " out of range for " +
                       std::to_string(aut.n) + " states");
    return unit_vec(aut.n, *index);
  }
  if (aut.state) return *aut.state;
  if (aut.n == 0) throw UsageError(path + ": automaton has no states");
  return unit_vec(aut.n, 0);
}

inline void require_same_tag(const WeightedAutomaton& a, const WeightedAutomaton& b) {
  if (a.tag != b.tag)
    throw UsageError(std::string("semiring tag mismatch between inputs: ") + to_string(a.tag) +
                     " vs " + to_string(b.tag));
  if (a.alphabet != b.alphabet) throw UsageError("alphabet mismatch between inputs");
}

/// `dimension <k>` followed by k rows of W, one row per coordinate. No rows
/// at all means no constraints.
inline IntConeSpec read_cone(std::istream& in, const std::string& file) {
  LineReader r(in, file);
  TokenLine head = r.expect_keyword("dimension");
  if (head.tokens.size() != 2) throw r.error(head.number, "expected 'dimension <k>'");
  const std::size_t k = r.count(head, 1);
  std::vector<Vec> rows;
  std::size_t width = 0, last = head.number;
  while (auto l = r.next()) {
    last = l->number;
    if (rows.size() == k) throw r.error(l->number, "more than " + std::to_string(k) + " rows");
    if (rows.empty()) width = l->tokens.size();
    Vec row = r.vec(*l, 0, width);
    if (!is_integral(std::span<const Rat>(row)))
      throw r.error(l->number, "constraint entries must be integers");
    rows.push_back(std::move(row));
  }
  if (!rows.empty() && rows.size() != k)
    throw r.error(last, "expected " + std::to_string(k) + " rows, found " +
                         std::to_string(rows.size()));
  return {k, rows.empty() ? Mat(k, 0) : Mat::from_rows(rows, width)};
}

inline int cmd_trace(const std::string& path, std::optional<std::size_t> index,
                     std::optional<std::size_t> depth, std::ostream& out) {
  WeightedAutomaton aut = load_automaton(path);
  Vec x = initial_state(aut, index, path);
  Trace t = trace(aut, x, depth.value_or(aut.n));
  for (const auto& [w, r] : t.entries)
    out << word_to_string(aut.alphabet, w) << ' ' << to_string(r) << '\n';
  return kSuccess;
}

inline int cmd_equiv(const std::string& p1, const std::string& p2, std::ostream& out) {
  WeightedAutomaton a1 = load_automaton(p1), a2 = load_automaton(p2);
  require_same_tag(a1, a2);
  Vec x1 = initial_state(a1, std::nullopt, p1), x2 = initial_state(a2, std::nullopt, p2);
  EquivalenceResult r = equivalent(a1, x1, a2, x2);
  if (!r.equivalent) {
    out << "NOT EQUIVALENT, separating word: " << word_to_string(a1.alphabet, *r.separating)
        << '\n';
    return kNegative;
  }
  out << "EQUIVALENT\n";
  for (const auto& b : r.basis) out << "basis " << to_string(b) << '\n';
  return kSuccess;
}

inline int cmd_zigzag(const std::string& p1, const std::string& p2,
                      const std::string& output, std::ostream& out) {
  WeightedAutomaton a1 = load_automaton(p1), a2 = load_automaton(p2);
  require_same_tag(a1, a2);
  Vec x1 = initial_state(a1, std::nullopt, p1), x2 = initial_state(a2, std::nullopt, p2);
  EquivalenceResult r = equivalent(a1, x1, a2, x2);
  if (!r.equivalent) {
    out << "NOT EQUIVALENT, separating word: " << word_to_string(a1.alphabet, *r.separating)
        << '\n';
    return kNegative;
  }
  ZigZag z = build_zigzag(a1, x1, a2, x2);
  if (output.empty()) {
    write(out, z);
    return kSuccess;
  }
  std::ofstream f(output);
  if (!f) throw UsageError("cannot write '" + output + "'");
  write(f, z);
  out << "witness with " << z.nodes.size() << " nodes written to " << output << '\n';
  return kSuccess;
}

inline int cmd_verify(const std::string& path, std::ostream& out) {
  auto in = open(path);
  ZigZag z = read_zigzag(in, path);
  VerifyReport rep = verify_zigzag(z);
  if (rep.valid()) {
    out << "VALID (" << rep.passed() << " checks passed)\n";
    return kSuccess;
  }
  out << "INVALID (failing checks: " << rep.failing() << ")\n";
  for (const auto& c : rep.checks)
    if (!c.passed) out << "  (" << c.check << ") " << c.subject << ": " << c.detail << '\n';
  return kNegative;
}

inline int cmd_hilbert(const std::string& path, std::ostream& out) {
  auto in = open(path);
  IntConeSpec spec = read_cone(in, path);
  for (const auto& v : hilbert_basis(spec)) out << to_string(v) << '\n';
  return kSuccess;
}

inline int cmd_polytope(const std::string& path, std::ostream& out) {
  auto in = open(path);
  PolytopeFile p = read_polytope(in, path);
  switch (p.kind) {
    case PolytopeFile::Kind::H: {
      VRep v = dd_h_to_v(p.h);
      write(out, v);
      if (v.points.empty()) {
        out << "INFEASIBLE\n";
        return kNegative;
      }
      return kSuccess;
    }
    case PolytopeFile::Kind::V:
      if (p.v.points.empty()) {
        out << "INFEASIBLE\n";
        return kNegative;
      }
      write(out, dd_v_to_h(p.v));
      return kSuccess;
    case PolytopeFile::Kind::Pca:
      write(out, dd_v_to_h(p.pca.to_vrep()));
      return kSuccess;
  }
  return kSuccess;
}

inline int cmd_gauge(const std::string& path, const std::vector<std::string>& point,
                     std::ostream& out) {
  auto in = open(path);
  PolytopeFile p = read_polytope(in, path);
  if (p.kind != PolytopeFile::Kind::Pca)
    throw UsageError("gauge expects a 'pca' polytope file");
  if (point.size() != p.pca.dim)
    throw UsageError("point must have " + std::to_string(p.pca.dim) + " entries");
  Vec x;
  for (const auto& s : point) {
    try {
      x.push_back(parse_rat(s));
    } catch (const std::exception&) {
      throw UsageError("invalid rational literal '" + s + "'");
    }
  }
  out << to_string(gauge(p.pca, x)) << '\n';
  return kSuccess;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact equivalence checking and zig-zag witnesses for weighted automata",
               "coalg"};
  app.require_subcommand(1);

  std::string file1, file2, output;
  std::optional<std::size_t> index, depth;
  std::vector<std::string> point;

  auto* trace = app.add_subcommand("trace", "Print the trace of a state up to a depth");
  trace->add_option("automaton", file1, "Automaton file")->required();
  trace->add_option("--state-index", index, "Start in unit vector e_i (0-based)");
  trace->add_option("--depth", depth, "Maximum word length (default: number of states)");

  auto* equiv = app.add_subcommand("equiv", "Decide trace equivalence of two automata");
  equiv->add_option("first", file1, "First automaton")->required();
  equiv->add_option("second", file2, "Second automaton")->required();

  auto* zigzag = app.add_subcommand("zigzag", "Build a zig-zag witness of equivalence");
  zigzag->add_option("first", file1, "First automaton")->required();
  zigzag->add_option("second", file2, "Second automaton")->required();
  zigzag->add_option("-o,--output", output, "Witness file (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Re-check a zig-zag witness file");
  verify->add_option("witness", file1, "Witness file")->required();

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert basis of { x : x W >= 0 }");
  hilbert->add_option("cone", file1, "Cone file: 'dimension <k>' then the rows of W")
      ->required();

  auto* polytope = app.add_subcommand("polytope", "Convert between H- and V-representations");
  polytope->add_option("polytope", file1, "hrep, vrep or pca file")->required();

  auto* gauge = app.add_subcommand("gauge", "Minkowski functional of a point");
  gauge->add_option("polytope", file1, "pca file")->required();
  gauge->add_option("point", point, "Coordinates of the point")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*trace) return detail::cmd_trace(file1, index, depth, out);
    if (*equiv) return detail::cmd_equiv(file1, file2, out);
    if (*zigzag) return detail::cmd_zigzag(file1, file2, output, out);
    if (*verify) return detail::cmd_verify(file1, out);
    if (*hilbert) return detail::cmd_hilbert(file1, out);
    if (*polytope) return detail::cmd_polytope(file1, out);
    if (*gauge) return detail::cmd_gauge(file1, point, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace coalg::cli
