#pragma once

// Zig-zag witnesses of trace equivalence: construction for cubic functors
// (a span through Z cap (X1 x X2)) and for G^ (five nodes through two free
// pyramids), a verifier that re-checks every condition exactly from the
// witness data alone, and a canonical text format.

#include "coalg/automaton.hpp"
#include "coalg/hilbert.hpp"
#include "coalg/pca_functor.hpp"
#include "coalg/polyhedra.hpp"
#include "coalg/text.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace coalg {

enum class NodeKind { FreeModule, GeneratedModule, FreePca, GeneratedPca };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::FreeModule: return "free_module";
    case NodeKind::GeneratedModule: return "generated_module";
    case NodeKind::FreePca: return "free_pca";
    case NodeKind::GeneratedPca: return "generated_pca";
  }
  return "?";
}

inline std::optional<NodeKind> parse_node_kind(const std::string& s) {
  for (NodeKind k : {NodeKind::FreeModule, NodeKind::GeneratedModule, NodeKind::FreePca,
                     NodeKind::GeneratedPca})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

inline bool is_free(NodeKind k) {
  return k == NodeKind::FreeModule || k == NodeKind::FreePca;
}
inline bool is_pca(NodeKind k) {
  return k == NodeKind::FreePca || k == NodeKind::GeneratedPca;
}

struct ZigZagNode {
  NodeKind kind = NodeKind::FreeModule;
  std::size_t dim = 0;
  std::vector<Vec> generators;
  LinearCoalgebra coalgebra;

  bool operator==(const ZigZagNode&) const = default;
};

struct Morphism {
  std::size_t from = 0, to = 0;
  Mat map;  // dim(to) x dim(from)

  bool operator==(const Morphism&) const = default;
};

/// `tag` selects the functor: the cubic functor of that semiring, or G^ for
/// Semiring::Pca.
struct ZigZag {
  Semiring tag = Semiring::Q;
  std::vector<std::string> alphabet;
  std::vector<ZigZagNode> nodes;
  std::vector<Morphism> morphisms;
  std::vector<std::optional<Vec>> relating;  // one slot per node
  Vec x1, x2;

  bool operator==(const ZigZag&) const = default;
};

namespace detail {

inline std::vector<Vec> unit_vectors(std::size_t n) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(unit_vec(n, i));
  return out;
}

/// Coordinate projection of Q^(n1+n2) onto block `which` (0 or 1).
inline Mat block_projection(std::size_t n1, std::size_t n2, int which) {
  std::size_t rows = which == 0 ? n1 : n2, offset = which == 0 ? 0 : n1;
  Mat p(rows, n1 + n2);
  for (std::size_t i = 0; i < rows; ++i) p(i, offset + i) = 1;
  return p;
}

inline ZigZagNode free_node(const WeightedAutomaton& aut, bool pca) {
  return {pca ? NodeKind::FreePca : NodeKind::FreeModule, aut.n, unit_vectors(aut.n),
          aut.linear()};
}

inline Vec require_state(const WeightedAutomaton& aut, const Vec& x) {
  if (x.size() != aut.n) throw std::invalid_argument("state dimension mismatch");
  if (!in_free_carrier(aut.tag, x))
    throw std::invalid_argument("state " + to_string(x) + " is not in the free " +
                                std::string(to_string(aut.tag)) + " algebra");
  return x;
}

}  // namespace detail

/// The span (X1, c1) <- (Z cap (X1 x X2), d) -> (X2, c2).
inline ZigZag cubic_zigzag(const WeightedAutomaton& a1, const Vec& x1,
                           const WeightedAutomaton& a2, const Vec& x2) {
  if (a1.tag == Semiring::Pca || a2.tag == Semiring::Pca)
    throw std::invalid_argument("cubic_zigzag: PCA automata use the G^ pipeline");
  detail::require_state(a1, x1);
  detail::require_state(a2, x2);
  PairSubmodule z = pair_submodule(a1, x1, a2, x2);
  const std::size_t n1 = a1.n, n2 = a2.n, dim = n1 + n2;

  ZigZagNode middle{NodeKind::GeneratedModule, dim, {}, z.d};
  switch (a1.tag) {
    case Semiring::Nat:
      middle.generators = nat_restriction(Lattice{dim, z.basis});
      break;
    case Semiring::QPlus:
    case Semiring::RPlus:
      // With positive rational scalars the extreme rays generate.
      middle.generators = cone_restriction(z.basis, dim);
      std::sort(middle.generators.begin(), middle.generators.end(), detail::graded_less);
      break;
    case Semiring::Unit:
      middle.kind = NodeKind::GeneratedPca;
      if (!z.basis.empty())
        middle.generators =
            simplex_restriction(z.basis, SimplexBound::Product, n1, n2).generators;
      break;
    default:  // Z, Q and R: the closure itself
      middle.generators = z.basis;
  }

  const bool pca = a1.tag == Semiring::Unit;
  ZigZag w;
  w.tag = a1.tag;
  w.alphabet = a1.alphabet;
  w.nodes = {detail::free_node(a1, pca), std::move(middle), detail::free_node(a2, pca)};
  w.morphisms = {{1, 0, detail::block_projection(n1, n2, 0)},
                 {1, 2, detail::block_projection(n1, n2, 1)}};
  w.relating = {std::nullopt, concat(x1, x2), std::nullopt};
  w.x1 = x1;
  w.x2 = x2;
  return w;
}

/// The five-node G^ zig-zag
///   (Delta^n1, c1) -> (U1, g1) <- (middle, d) -> (U2, g2) <- (Delta^n2, c2)
/// with U_j free pyramids and the middle node Z cap 2 Delta^(k1+k2).
inline ZigZag ghat_zigzag(const WeightedAutomaton& a1, const Vec& x1,
                          const WeightedAutomaton& a2, const Vec& x2) {
  if (a1.tag != Semiring::Pca || a2.tag != Semiring::Pca)
    throw std::invalid_argument("ghat_zigzag: PCA automata required");
  detail::require_state(a1, x1);
  detail::require_state(a2, x2);
  if (a1.alphabet != a2.alphabet) throw std::invalid_argument("alphabet mismatch");

  Reduction r1 = reduce_invariant_set(a1), r2 = reduce_invariant_set(a2);
  const WeightedAutomaton &g1 = r1.quotient, &g2 = r2.quotient;
  const std::size_t k1 = g1.n, k2 = g2.n;
  Vec y1 = r1.f * x1, y2 = r2.f * x2;
  PairSubmodule z = pair_submodule(g1, y1, g2, y2);

  ZigZagNode middle{NodeKind::GeneratedPca, k1 + k2, {}, z.d};
  if (!z.basis.empty())
    middle.generators = simplex_restriction(z.basis, SimplexBound::Scaled, k1, k2).generators;

  auto pyramid_node = [&](const WeightedAutomaton& g, int which) {
    Mat p = detail::block_projection(k1, k2, which);
    std::vector<Vec> hull = detail::unit_vectors(g.n);
    for (const auto& m : middle.generators) {
      Vec v = p * m;
      if (!is_zero(v)) hull.push_back(std::move(v));
    }
    detail::sort_unique(hull);
    PyramidCert cert = pyramid_extension(PcaPolytope{g.n, hull}, g.linear());
    return ZigZagNode{NodeKind::FreePca, g.n, cert.generators(), g.linear()};
  };

  ZigZag w;
  w.tag = Semiring::Pca;
  w.alphabet = a1.alphabet;
  w.nodes = {detail::free_node(a1, true), pyramid_node(g1, 0), std::move(middle),
             pyramid_node(g2, 1), detail::free_node(a2, true)};
  w.morphisms = {{0, 1, r1.f},
                 {2, 1, detail::block_projection(k1, k2, 0)},
                 {2, 3, detail::block_projection(k1, k2, 1)},
                 {4, 3, r2.f}};
  w.relating = {x1, std::nullopt, concat(y1, y2), std::nullopt, x2};
  w.x1 = x1;
  w.x2 = x2;
  return w;
}

/// Dispatch on the tag: G^ for PCA automata, the cubic span otherwise.
inline ZigZag build_zigzag(const WeightedAutomaton& a1, const Vec& x1,
                           const WeightedAutomaton& a2, const Vec& x2) {
  if (a1.tag != a2.tag)
    throw std::invalid_argument(std::string("semiring mismatch: ") + to_string(a1.tag) +
                                " vs " + to_string(a2.tag));
  return a1.tag == Semiring::Pca ? ghat_zigzag(a1, x1, a2, x2)
                                 : cubic_zigzag(a1, x1, a2, x2);
}

// ---------------------------------------------------------------------------
// Verification

struct CheckResult {
  char check;  // 'a' .. 'f'
  std::string subject;
  bool passed;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool valid() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::size_t passed() const {
    std::size_t k = 0;
    for (const auto& c : checks) k += c.passed;
    return k;
  }
  /// Letters of the failing checks, in order of first failure.
  std::string failing() const {
    std::string out;
    for (const auto& c : checks)
      if (!c.passed && out.find(c.check) == std::string::npos) out += c.check;
    return out;
  }
};

/// Membership of y in the carrier generated by `gens`: subconvex hull for
/// PCA kinds, otherwise the S-semimodule generated.
inline bool carrier_contains(Semiring tag, NodeKind kind, const std::vector<Vec>& gens,
                             std::size_t dim, const Vec& y) {
  if (y.size() != dim) return false;
  if (gens.empty()) return is_zero(y);
  if (is_pca(kind)) return PcaPolytope{dim, gens}.contains(y);
  switch (tag) {
    case Semiring::Nat: {
      if (linearly_independent(gens, dim)) {
        auto c = coordinates(gens, y);
        return c && is_integral(std::span<const Rat>(*c)) && is_nonnegative(*c);
      }
      for (const auto& g : gens)
        if (!is_integral(std::span<const Rat>(g)) || !is_nonnegative(g))
          throw std::invalid_argument(
              "dependent N-generators outside N^m are not supported");
      return in_nat_span(gens, y);
    }
    case Semiring::Int: {
      Int den = 1;
      for (const auto& g : gens)
        for (const auto& r : g) den = lcm(den, r.get_den());
      for (const auto& r : y) den = lcm(den, r.get_den());
      std::vector<Vec> scaled;
      for (const auto& g : gens) scaled.push_back(Rat(den) * g);
      return hnf(scaled, dim).contains(Rat(den) * y);
    }
    case Semiring::QPlus:
    case Semiring::RPlus:
      return lp_find_nonnegative(Mat::from_columns(gens, dim), y).has_value();
    default:
      return in_span(gens, y);
  }
}

namespace detail {

inline bool coalgebra_shape_ok(const ZigZagNode& node, std::size_t letters) {
  const auto& c = node.coalgebra;
  if (c.n != node.dim || c.out.size() != node.dim || c.trans.size() != letters) return false;
  for (const auto& m : c.trans)
    if (m.rows() != node.dim || m.cols() != node.dim) return false;
  for (const auto& g : node.generators)
    if (g.size() != node.dim) return false;
  return true;
}

}  // namespace detail

/// Re-checks every condition of a zig-zag from the witness data alone.
inline VerifyReport verify_zigzag(const ZigZag& z) {
  VerifyReport rep;
  auto add = [&](char id, std::string subject, bool ok, std::string detail = {}) {
    rep.checks.push_back({id, std::move(subject), ok, ok ? std::string() : std::move(detail)});
  };
  const bool ghat = z.tag == Semiring::Pca;
  const bool convex = ghat || z.tag == Semiring::Unit;
  const std::size_t letters = z.alphabet.size(), count = z.nodes.size();

  if (count == 0) {
    add('a', "shape", false, "no nodes");
    return rep;
  }

  // Orientation of the arrow between nodes i and i+1: +1 forward, -1 back.
  std::vector<int> dir(count > 0 ? count - 1 : 0, 0);
  std::vector<const Morphism*> arrow(dir.size(), nullptr);
  bool shape = z.relating.size() == count;
  std::string shape_detail = shape ? "" : "relating slots do not match node count";
  for (const auto& m : z.morphisms) {
    std::size_t lo = std::min(m.from, m.to);
    if (m.from >= count || m.to >= count || (m.from != lo + 1 && m.to != lo + 1) ||
        m.from == m.to || arrow[lo]) {
      shape = false;
      shape_detail = "morphism " + std::to_string(m.from) + "->" + std::to_string(m.to) +
                     " does not connect a fresh pair of neighbours";
      continue;
    }
    arrow[lo] = &m;
    dir[lo] = m.from == lo ? 1 : -1;
  }
  for (std::size_t i = 0; shape && i < dir.size(); ++i) {
    if (!arrow[i]) {
      shape = false;
      shape_detail = "nodes " + std::to_string(i) + " and " + std::to_string(i + 1) +
                     " are not connected";
    } else if (i > 0 && dir[i] == dir[i - 1]) {
      shape = false;
      shape_detail = "arrows at node " + std::to_string(i) + " do not alternate";
    }
  }
  add('a', "shape", shape, shape_detail);
  if (!shape) return rep;

  auto incoming = [&](std::size_t i) {
    return (i > 0 && dir[i - 1] == 1) || (i + 1 < count && dir[i] == -1);
  };
  // Carriers are read with the functor's semantics, whatever kind is
  // declared, so a wrong kind is reported once under (a).
  const NodeKind reading = convex ? NodeKind::GeneratedPca : NodeKind::GeneratedModule;
  auto node_has = [&](std::size_t i, const Vec& y) {
    const ZigZagNode& nd = z.nodes[i];
    try {
      return carrier_contains(z.tag, reading, nd.generators, nd.dim, y);
    } catch (const std::invalid_argument&) {
      return false;
    }
  };

  // (a) nodes; later checks only need the dimensions to be consistent
  std::vector<bool> node_ok(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ZigZagNode& nd = z.nodes[i];
    std::string subject = "node " + std::to_string(i);
    std::string problem;
    node_ok[i] = detail::coalgebra_shape_ok(nd, letters);
    if (!node_ok[i]) {
      problem = "dimensions of generators or coalgebra do not match";
    } else if (is_pca(nd.kind) != convex) {
      problem = std::string("kind ") + to_string(nd.kind) + " does not fit the functor";
    } else if (is_free(nd.kind) && !linearly_independent(nd.generators, nd.dim)) {
      problem = "generators of a free node are linearly dependent";
    } else if (incoming(i) && !is_free(nd.kind)) {
      problem = "node with incoming arrows is not free";
    } else if (convex && std::any_of(nd.generators.begin(), nd.generators.end(),
                                     [](const Vec& g) { return !is_nonnegative(g); })) {
      problem = "PCA generators must be nonnegative";
    } else if (z.tag == Semiring::Nat && !linearly_independent(nd.generators, nd.dim) &&
               std::any_of(nd.generators.begin(), nd.generators.end(), [](const Vec& g) {
                 return !is_nonnegative(g) || !is_integral(std::span<const Rat>(g));
               })) {
      problem = "dependent N-generators outside N^m are not supported";
    } else {
      for (const auto& g : nd.generators) {
        if (ghat) {
          if (!ghat_member(PcaPolytope{nd.dim, nd.generators}, ghat_image(nd.coalgebra, g)))
            problem = "structure map leaves G^(carrier) at " + to_string(g);
        } else {
          if (!in_semiring(z.tag, dot(nd.coalgebra.out, g)))
            problem = "output at " + to_string(g) + " is not a scalar";
          for (const auto& m : nd.coalgebra.trans)
            if (problem.empty() && !node_has(i, m * g))
              problem = "transition leaves the carrier at " + to_string(g);
        }
        if (!problem.empty()) break;
      }
    }
    add('a', subject, problem.empty(), problem);
  }

  // (b), (c) morphisms
  std::vector<bool> morph_ok(dir.size(), false);
  for (std::size_t i = 0; i < dir.size(); ++i) {
    const Morphism& m = *arrow[i];
    const ZigZagNode &s = z.nodes[m.from], &t = z.nodes[m.to];
    std::string subject = "morphism " + std::to_string(m.from) + "->" + std::to_string(m.to);
    if (!node_ok[m.from] || !node_ok[m.to] || m.map.rows() != t.dim || m.map.cols() != s.dim) {
      add('b', subject, false, "ill-formed endpoints or matrix dimensions");
      continue;
    }
    std::string into, square;
    for (const auto& g : s.generators) {
      Vec fg = m.map * g;
      if (into.empty() && !node_has(m.to, fg)) into = "image of " + to_string(g) + " not in target";
      if (square.empty() && dot(t.coalgebra.out, fg) != dot(s.coalgebra.out, g))
        square = "outputs differ at " + to_string(g);
      for (std::size_t a = 0; a < letters && square.empty(); ++a)
        if (t.coalgebra.trans[a] * fg != m.map * (s.coalgebra.trans[a] * g))
          square = "transition '" + z.alphabet[a] + "' does not commute at " + to_string(g);
    }
    add('b', subject, into.empty(), into);
    add('c', subject, square.empty(), square);
    morph_ok[i] = into.empty() && square.empty();
  }

  // (d) relating elements
  auto rel = [&](std::size_t i) -> const std::optional<Vec>& { return z.relating[i]; };
  for (std::size_t i = 0; i < count; ++i) {
    std::string subject = "node " + std::to_string(i);
    if (!incoming(i)) {
      bool has_out = (i > 0 && dir[i - 1] == -1) || (i + 1 < count && dir[i] == 1);
      if (!has_out && count > 1) continue;
      if (!rel(i)) {
        add('d', subject, false, "missing relating element");
      } else if (!node_ok[i] || !node_has(i, *rel(i))) {
        add('d', subject, false, "relating element not in the carrier");
      } else {
        add('d', subject, true);
      }
      continue;
    }
    if (rel(i)) {
      add('d', subject, false, "relating element on a node with incoming arrows");
      continue;
    }
    if (i == 0 || i + 1 == count) continue;  // a single incoming arrow at an end
    const Morphism &l = *arrow[i - 1], &r = *arrow[i];
    if (!rel(l.from) || !rel(r.from) || !morph_ok[i - 1] || !morph_ok[i]) {
      add('d', subject, false, "neighbouring relating elements or morphisms unusable");
    } else if (rel(l.from)->size() != l.map.cols() || rel(r.from)->size() != r.map.cols()) {
      add('d', subject, false, "relating element dimension mismatch");
    } else {
      Vec left = l.map * *rel(l.from), right = r.map * *rel(r.from);
      add('d', subject, left == right,
          "images " + to_string(left) + " and " + to_string(right) + " differ");
    }
  }

  // (e) endpoints
  auto endpoint = [&](std::size_t i, std::size_t nb, const Vec& x, const char* name) {
    std::optional<Vec> got;
    if (count > 1 && incoming(i)) {
      const Morphism& m = *arrow[std::min(i, nb)];
      if (rel(nb) && rel(nb)->size() == m.map.cols()) got = m.map * *rel(nb);
    } else {
      got = rel(i);
    }
    add('e', name, got && *got == x,
        got ? to_string(*got) + " differs from " + to_string(x) : "no relating element");
  };
  endpoint(0, count > 1 ? 1 : 0, z.x1, "x1");
  endpoint(count - 1, count > 1 ? count - 2 : 0, z.x2, "x2");

  // (f) endpoint traces
  const ZigZagNode &first = z.nodes.front(), &last = z.nodes.back();
  if (!node_ok.front() || !node_ok.back() || z.x1.size() != first.dim ||
      z.x2.size() != last.dim) {
    add('f', "traces", false, "endpoint nodes or states ill-formed");
  } else {
    std::size_t depth = first.dim + last.dim;
    add('f', "traces",
        trace(first.coalgebra, z.x1, depth) == trace(last.coalgebra, z.x2, depth),
        "endpoint traces differ within depth " + std::to_string(depth));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Witness text format
//
//   zigzag <tag>
//   alphabet <sym> ...
//   nodes <count>
//   node <i> <kind> <dim>          then: gens <k>, k lines 'gen ...',
//                                  'output ...', per letter 'trans <a>' and
//                                  dim lines 'row ...'
//   morphism <from> <to>           then dim(to) lines 'row ...'
//   relate <i> <entries>
//   x1 <entries>
//   x2 <entries>

namespace detail {

inline void write_vec(std::ostream& os, const char* key, const Vec& v) {
  os << key;
  for (const auto& r : v) os << ' ' << to_string(r);
  os << '\n';
}

inline void write_rows(std::ostream& os, const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) write_vec(os, "row", m.row(i));
}

}  // namespace detail

inline void write(std::ostream& os, const ZigZag& z) {
  os << "zigzag " << to_string(z.tag) << "\nalphabet";
  for (const auto& a : z.alphabet) os << ' ' << a;
  os << "\nnodes " << z.nodes.size() << '\n';
  for (std::size_t i = 0; i < z.nodes.size(); ++i) {
    const ZigZagNode& nd = z.nodes[i];
    os << "node " << i << ' ' << to_string(nd.kind) << ' ' << nd.dim << '\n';
    os << "gens " << nd.generators.size() << '\n';
    for (const auto& g : nd.generators) detail::write_vec(os, "gen", g);
    detail::write_vec(os, "output", nd.coalgebra.out);
    for (std::size_t a = 0; a < nd.coalgebra.trans.size(); ++a) {
      os << "trans " << z.alphabet.at(a) << '\n';
      detail::write_rows(os, nd.coalgebra.trans[a]);
    }
  }
  std::vector<Morphism> ms = z.morphisms;
  std::sort(ms.begin(), ms.end(), [](const Morphism& a, const Morphism& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  for (const auto& m : ms) {
    os << "morphism " << m.from << ' ' << m.to << '\n';
    detail::write_rows(os, m.map);
  }
  for (std::size_t i = 0; i < z.relating.size(); ++i)
    if (z.relating[i]) {
      os << "relate " << i;
      for (const auto& r : *z.relating[i]) os << ' ' << to_string(r);
      os << '\n';
    }
  detail::write_vec(os, "x1", z.x1);
  detail::write_vec(os, "x2", z.x2);
}

inline ZigZag read_zigzag(std::istream& in, const std::string& file) {
  LineReader rd(in, file);
  ZigZag z;
  auto count_arg = [&](const TokenLine& l, std::size_t i) {
    if (l.tokens.size() <= i) throw rd.error(l.number, "missing count");
    return rd.count(l, i);
  };
  auto rest = [&](const TokenLine& l, std::size_t first, std::size_t n) {
    return rd.vec(l, first, n);
  };
  auto read_matrix = [&](std::size_t rows, std::size_t cols) {
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      TokenLine l = rd.expect_keyword("row");
      Vec v = rest(l, 1, cols);
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[j];
    }
    return m;
  };

  TokenLine l = rd.expect_keyword("zigzag");
  if (l.tokens.size() != 2) throw rd.error(l.number, "expected 'zigzag <tag>'");
  auto tag = parse_semiring(l.tokens[1]);
  if (!tag) throw rd.error(l.number, "unknown functor tag '" + l.tokens[1] + "'");
  z.tag = *tag;
  l = rd.expect_keyword("alphabet");
  z.alphabet.assign(l.tokens.begin() + 1, l.tokens.end());
  l = rd.expect_keyword("nodes");
  std::size_t count = count_arg(l, 1);
  z.relating.assign(count, std::nullopt);

  for (std::size_t i = 0; i < count; ++i) {
    l = rd.expect_keyword("node");
    if (l.tokens.size() != 4 || rd.count(l, 1) != i)
      throw rd.error(l.number, "expected 'node " + std::to_string(i) + " <kind> <dim>'");
    ZigZagNode nd;
    auto kind = parse_node_kind(l.tokens[2]);
    if (!kind) throw rd.error(l.number, "unknown node kind '" + l.tokens[2] + "'");
    nd.kind = *kind;
    nd.dim = rd.count(l, 3);
    l = rd.expect_keyword("gens");
    std::size_t k = count_arg(l, 1);
    for (std::size_t g = 0; g < k; ++g) nd.generators.push_back(rest(rd.expect_keyword("gen"), 1, nd.dim));
    nd.coalgebra.n = nd.dim;
    nd.coalgebra.out = rest(rd.expect_keyword("output"), 1, nd.dim);
    for (const auto& a : z.alphabet) {
      l = rd.expect_keyword("trans");
      if (l.tokens.size() != 2 || l.tokens[1] != a)
        throw rd.error(l.number, "expected 'trans " + a + "'");
      nd.coalgebra.trans.push_back(read_matrix(nd.dim, nd.dim));
    }
    z.nodes.push_back(std::move(nd));
  }

  bool have_x1 = false, have_x2 = false;
  while (auto next = rd.next()) {
    l = *next;
    const std::string& key = l.tokens[0];
    if (key == "morphism") {
      if (l.tokens.size() != 3) throw rd.error(l.number, "expected 'morphism <from> <to>'");
      std::size_t from = rd.count(l, 1), to = rd.count(l, 2);
      if (from >= count || to >= count) throw rd.error(l.number, "node index out of range");
      z.morphisms.push_back({from, to, read_matrix(z.nodes[to].dim, z.nodes[from].dim)});
    } else if (key == "relate") {
      std::size_t i = count_arg(l, 1);
      if (i >= count) throw rd.error(l.number, "node index out of range");
      if (z.relating[i]) throw rd.error(l.number, "duplicate relating element");
      z.relating[i] = rest(l, 2, z.nodes[i].dim);
    } else if (key == "x1" && !have_x1 && count > 0) {
      z.x1 = rest(l, 1, z.nodes.front().dim);
      have_x1 = true;
    } else if (key == "x2" && !have_x2 && count > 0) {
      z.x2 = rest(l, 1, z.nodes.back().dim);
      have_x2 = true;
    } else {
      throw rd.error(l.number, "unexpected '" + key + "'");
    }
  }
  if (!have_x1 || !have_x2) throw rd.error(l.number, "missing endpoint line 'x1' or 'x2'");
  return z;
}

}  // namespace coalg
