#pragma once

// Weighted automata as coalgebras x -> (out . x, (M_a x)_a) on free carriers
// S^n. Column j of M_a is c_a(e_j), so reading a word w = a_1 ... a_k maps x
// to M_{a_k} ... M_{a_1} x.

#include "coalg/linalg.hpp"
#include "coalg/text.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coalg {

enum class Semiring { Nat, Int, QPlus, Q, RPlus, Real, Unit, Pca };

inline const char* to_string(Semiring s) {
  switch (s) {
    case Semiring::Nat: return "nat";
    case Semiring::Int: return "int";
    case Semiring::QPlus: return "qplus";
    case Semiring::Q: return "q";
    case Semiring::RPlus: return "rplus";
    case Semiring::Real: return "real";
    case Semiring::Unit: return "unit";
    case Semiring::Pca: return "pca";
  }
  return "?";
}

inline std::optional<Semiring> parse_semiring(const std::string& s) {
  for (Semiring t : {Semiring::Nat, Semiring::Int, Semiring::QPlus, Semiring::Q,
                     Semiring::RPlus, Semiring::Real, Semiring::Unit, Semiring::Pca})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

/// Ring completion: Z for N and Z, Q for Q_+ and Q, the (rational) reals
/// otherwise.
inline Semiring completion(Semiring s) {
  switch (s) {
    case Semiring::Nat:
    case Semiring::Int: return Semiring::Int;
    case Semiring::QPlus:
    case Semiring::Q: return Semiring::Q;
    default: return Semiring::Real;
  }
}

inline Ring completion_ring(Semiring s) {
  return completion(s) == Semiring::Int ? Ring::Z : Ring::Q;
}

/// Whether r is a scalar of the semiring; [0,1] for the convex tags.
inline bool in_semiring(Semiring s, const Rat& r) {
  switch (s) {
    case Semiring::Nat: return is_integral(r) && r >= 0;
    case Semiring::Int: return is_integral(r);
    case Semiring::QPlus:
    case Semiring::RPlus: return r >= 0;
    case Semiring::Q:
    case Semiring::Real: return true;
    case Semiring::Unit:
    case Semiring::Pca: return r >= 0 && r <= 1;
  }
  return false;
}

/// Membership in the free algebra on n generators: S^n, or the simplex
/// (subconvex vectors) for the convex tags.
inline bool in_free_carrier(Semiring s, const Vec& x) {
  if (s == Semiring::Unit || s == Semiring::Pca)
    return is_nonnegative(x) && sum(x) <= 1;
  return std::all_of(x.begin(), x.end(),
                     [s](const Rat& r) { return in_semiring(s, r); });
}

class NotEquivalent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Word = std::vector<std::size_t>;

/// A linear structure map: output functional plus one matrix per letter.
struct LinearCoalgebra {
  std::size_t n = 0;
  Vec out;
  std::vector<Mat> trans;

  Vec apply(const Word& w, Vec x) const {
    for (std::size_t a : w) x = trans.at(a) * x;
    return x;
  }
  Rat observe(const Word& w, const Vec& x) const { return dot(out, apply(w, x)); }

  bool operator==(const LinearCoalgebra&) const = default;
};

struct WeightedAutomaton {
  Semiring tag = Semiring::Q;
  std::size_t n = 0;
  std::vector<std::string> alphabet;
  Vec out;
  std::vector<Mat> trans;  // trans[i] belongs to alphabet[i]
  std::optional<Vec> state;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (out.size() != n) fail("output vector must have " + std::to_string(n) + " entries");
    if (trans.size() != alphabet.size()) fail("one transition matrix per letter required");
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (alphabet[i] == alphabet[j]) fail("duplicate letter '" + alphabet[i] + "'");
    for (const auto& m : trans)
      if (m.rows() != n || m.cols() != n) fail("transition matrices must be n x n");
    if (state && state->size() != n) fail("state must have n entries");

    const bool convex = tag == Semiring::Unit || tag == Semiring::Pca;
    Semiring entry_tag = convex ? Semiring::RPlus : tag;
    for (std::size_t j = 0; j < n; ++j)
      if (!in_semiring(tag, out[j]))
        fail("output entry " + to_string(out[j]) + " is not a " + to_string(tag) + " scalar");
    for (std::size_t a = 0; a < trans.size(); ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!in_semiring(entry_tag, trans[a](i, j)))
            fail("transition entry " + to_string(trans[a](i, j)) + " for '" +
                 alphabet[a] + "' violates the " + to_string(tag) + " constraints");
    if (tag == Semiring::Unit)
      for (std::size_t a = 0; a < trans.size(); ++a)
        for (std::size_t j = 0; j < n; ++j)
          if (sum(trans[a].col(j)) > 1)
            fail("column " + std::to_string(j) + " of '" + alphabet[a] +
                 "' sums to more than 1");
    if (tag == Semiring::Pca)
      for (std::size_t j = 0; j < n; ++j) {
        Rat total = out[j];
        for (const auto& m : trans) total += sum(m.col(j));
        if (total > 1)
          fail("state " + std::to_string(j) +
               ": output plus column sums exceeds 1");
      }
    if (state && !in_free_carrier(tag, *state))
      fail("state is not an element of the free " + std::string(to_string(tag)) + " algebra");
  }

  std::size_t letter(const std::string& sym) const {
    auto it = std::find(alphabet.begin(), alphabet.end(), sym);
    if (it == alphabet.end()) throw std::invalid_argument("unknown symbol '" + sym + "'");
    return static_cast<std::size_t>(it - alphabet.begin());
  }

  LinearCoalgebra linear() const { return {n, out, trans}; }

  bool operator==(const WeightedAutomaton&) const = default;
};

inline Vec step(const WeightedAutomaton& aut, const Vec& x, const std::string& a) {
  if (x.size() != aut.n) throw std::invalid_argument("step: dimension mismatch");
  return aut.trans[aut.letter(a)] * x;
}

/// Words over an alphabet of size k in shortlex order up to `depth`.
inline std::vector<Word> words_up_to(std::size_t k, std::size_t depth) {
  std::vector<Word> out{Word{}};
  if (k == 0) return out;
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= depth; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t a = 0; a < k; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

inline std::string word_to_string(const std::vector<std::string>& alphabet,
                                  const Word& w) {
  if (w.empty()) return "ε";
  bool single = std::all_of(alphabet.begin(), alphabet.end(),
                            [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !single) out += '.';
    out += alphabet.at(w[i]);
  }
  return out;
}

/// Observations on all words up to a depth, in shortlex order.
struct Trace {
  std::vector<std::pair<Word, Rat>> entries;

  const Rat& at(const Word& w) const {
    for (const auto& [u, r] : entries)
      if (u == w) return r;
    throw std::out_of_range("trace: word beyond depth");
  }
  bool operator==(const Trace&) const = default;
};

inline Trace trace(const LinearCoalgebra& c, const Vec& x, std::size_t depth) {
  if (x.size() != c.n) throw std::invalid_argument("trace: dimension mismatch");
  Trace t;
  // Breadth-first so each configuration is computed from its parent.
  std::vector<std::pair<Word, Vec>> layer{{Word{}, x}};
  for (std::size_t len = 0; len <= depth; ++len) {
    std::vector<std::pair<Word, Vec>> next;
    for (auto& [w, v] : layer) {
      t.entries.emplace_back(w, dot(c.out, v));
      if (len == depth) continue;
      for (std::size_t a = 0; a < c.trans.size(); ++a) {
        Word u = w;
        u.push_back(a);
        next.emplace_back(std::move(u), c.trans[a] * v);
      }
    }
    layer = std::move(next);
  }
  return t;
}

inline Trace trace(const WeightedAutomaton& aut, const Vec& x, std::size_t depth) {
  return trace(aut.linear(), x, depth);
}

namespace detail {

inline void require_compatible(const WeightedAutomaton& a1, const Vec& x1,
                               const WeightedAutomaton& a2, const Vec& x2) {
  if (a1.tag != a2.tag)
    throw std::invalid_argument(std::string("semiring mismatch: ") +
                                to_string(a1.tag) + " vs " + to_string(a2.tag));
  if (a1.alphabet != a2.alphabet) throw std::invalid_argument("alphabet mismatch");
  if (x1.size() != a1.n || x2.size() != a2.n)
    throw std::invalid_argument("state dimension mismatch");
}

inline LinearCoalgebra paired(const WeightedAutomaton& a1,
                              const WeightedAutomaton& a2) {
  LinearCoalgebra d{a1.n + a2.n, concat(a1.out, zero_vec(a2.n)), {}};
  for (std::size_t a = 0; a < a1.trans.size(); ++a)
    d.trans.push_back(block_diag(a1.trans[a], a2.trans[a]));
  return d;
}

inline Vec difference_functional(const WeightedAutomaton& a1,
                                 const WeightedAutomaton& a2) {
  return concat(a1.out, Rat(-1) * a2.out);
}

}  // namespace detail

/// The submodule Z generated by all (c1_w x1, c2_w x2), over the ring
/// completion, with the common restriction d of the two structure maps.
struct PairSubmodule {
  Ring ring = Ring::Q;
  std::vector<Vec> basis;  // HNF basis over Z, discovery-ordered basis over Q
  LinearCoalgebra d;       // out (out1, 0), transitions diag(M1_a, M2_a)
};

inline PairSubmodule pair_submodule(const WeightedAutomaton& a1, const Vec& x1,
                                    const WeightedAutomaton& a2, const Vec& x2) {
  detail::require_compatible(a1, x1, a2, x2);
  PairSubmodule p;
  p.ring = completion_ring(a1.tag);
  p.d = detail::paired(a1, a2);
  p.basis = closure_under_maps(concat(x1, x2), p.d.trans, p.ring);
  Vec diff = detail::difference_functional(a1, a2);
  for (const auto& z : p.basis)
    if (dot(diff, z) != 0)
      throw NotEquivalent("output functionals differ on " + to_string(z));
  return p;
}

struct EquivalenceResult {
  bool equivalent = false;
  std::vector<Vec> basis;             // Z over the completion, if equivalent
  std::optional<Word> separating;     // shortlex-least separating word otherwise
};

/// Exact decision of trace equivalence. Words are explored breadth-first in
/// shortlex order, keeping only those whose paired configuration is new to
/// the span; the least word with nonzero output difference is always kept,
/// so the first one found is the shortlex-least separating word.
inline EquivalenceResult equivalent(const WeightedAutomaton& a1, const Vec& x1,
                                    const WeightedAutomaton& a2, const Vec& x2) {
  detail::require_compatible(a1, x1, a2, x2);
  LinearCoalgebra d = detail::paired(a1, a2);
  Vec diff = detail::difference_functional(a1, a2);
  Vec start = concat(x1, x2);
  EquivalenceResult r;
  if (!is_zero(start)) {
    std::vector<Vec> span{start};
    std::vector<Word> words{Word{}};
    for (std::size_t next = 0; next < span.size(); ++next) {
      if (dot(diff, span[next]) != 0) {
        r.separating = words[next];
        return r;
      }
      for (std::size_t a = 0; a < d.trans.size(); ++a) {
        Vec v = d.trans[a] * span[next];
        if (in_span(span, v)) continue;
        Word w = words[next];
        w.push_back(a);
        span.push_back(std::move(v));
        words.push_back(std::move(w));
      }
    }
  }
  r.equivalent = true;
  r.basis = closure_under_maps(start, d.trans, completion_ring(a1.tag));
  return r;
}

inline WeightedAutomaton extend_scalars(WeightedAutomaton aut) {
  aut.tag = completion(aut.tag);
  return aut;
}

// ---------------------------------------------------------------------------
// Text format
//
//   semiring <tag>
//   alphabet <sym> ...
//   states <n>
//   output <r_1> ... <r_n>
//   trans <a>            followed by n rows of the matrix M_a
//   state <r_1> ... <r_n>   (optional)

inline void write(std::ostream& os, const WeightedAutomaton& aut) {
  os << "semiring " << to_string(aut.tag) << "\nalphabet";
  for (const auto& s : aut.alphabet) os << ' ' << s;
  os << "\nstates " << aut.n << "\noutput";
  for (const auto& r : aut.out) os << ' ' << to_string(r);
  os << '\n';
  for (std::size_t a = 0; a < aut.alphabet.size(); ++a) {
    os << "trans " << aut.alphabet[a] << '\n';
    for (std::size_t i = 0; i < aut.n; ++i) {
      for (std::size_t j = 0; j < aut.n; ++j)
        os << (j ? " " : "") << to_string(aut.trans[a](i, j));
      os << '\n';
    }
  }
  if (aut.state) {
    os << "state";
    for (const auto& r : *aut.state) os << ' ' << to_string(r);
    os << '\n';
  }
}

inline WeightedAutomaton read_automaton(std::istream& in, const std::string& file) {
  LineReader rd(in, file);
  WeightedAutomaton aut;

  TokenLine l = rd.expect_keyword("semiring");
  if (l.tokens.size() != 2) throw rd.error(l.number, "expected 'semiring <tag>'");
  auto tag = parse_semiring(l.tokens[1]);
  if (!tag) throw rd.error(l.number, "unknown semiring '" + l.tokens[1] + "'");
  aut.tag = *tag;

  l = rd.expect_keyword("alphabet");
  for (std::size_t i = 1; i < l.tokens.size(); ++i) {
    if (std::find(aut.alphabet.begin(), aut.alphabet.end(), l.tokens[i]) !=
        aut.alphabet.end())
      throw rd.error(l.number, "duplicate symbol '" + l.tokens[i] + "'");
    aut.alphabet.push_back(l.tokens[i]);
  }

  l = rd.expect_keyword("states");
  if (l.tokens.size() != 2) throw rd.error(l.number, "expected 'states <n>'");
  aut.n = rd.count(l, 1);

  l = rd.expect_keyword("output");
  aut.out = rd.vec(l, 1, aut.n);
  auto check_scalars = [&](const TokenLine& line, const Vec& v, Semiring s) {
    for (const auto& r : v)
      if (!in_semiring(s, r))
        throw rd.error(line.number, "entry " + to_string(r) + " violates the " +
                                        to_string(aut.tag) + " constraints");
  };
  check_scalars(l, aut.out, aut.tag);

  const bool convex = aut.tag == Semiring::Unit || aut.tag == Semiring::Pca;
  std::map<std::string, Mat> seen;
  std::size_t last_line = l.number;
  while (auto next = rd.next()) {
    l = *next;
    last_line = l.number;
    if (l.tokens[0] == "trans") {
      if (l.tokens.size() != 2) throw rd.error(l.number, "expected 'trans <symbol>'");
      const std::string& sym = l.tokens[1];
      if (std::find(aut.alphabet.begin(), aut.alphabet.end(), sym) == aut.alphabet.end())
        throw rd.error(l.number, "symbol '" + sym + "' not in alphabet");
      if (seen.count(sym)) throw rd.error(l.number, "duplicate block for '" + sym + "'");
      Mat m(aut.n, aut.n);
      for (std::size_t i = 0; i < aut.n; ++i) {
        TokenLine row = rd.expect("matrix row");
        Vec v = rd.vec(row, 0, aut.n);
        check_scalars(row, v, convex ? Semiring::RPlus : aut.tag);
        for (std::size_t j = 0; j < aut.n; ++j) m(i, j) = v[j];
      }
      seen.emplace(sym, std::move(m));
    } else if (l.tokens[0] == "state") {
      if (aut.state) throw rd.error(l.number, "duplicate 'state' line");
      aut.state = rd.vec(l, 1, aut.n);
    } else {
      throw rd.error(l.number, "unexpected '" + l.tokens[0] + "'");
    }
  }
  for (const auto& sym : aut.alphabet) {
    auto it = seen.find(sym);
    if (it == seen.end()) throw rd.error(last_line, "missing 'trans " + sym + "' block");
    aut.trans.push_back(it->second);
  }
  try {
    aut.validate();
  } catch (const std::invalid_argument& e) {
    throw rd.error(last_line, e.what());
  }
  return aut;
}

}  // namespace coalg
