#pragma once

// The subcubic convex functor G^ on finitely generated positively convex
// algebras. An element over X is (o, phi) with phi(a) a vector per letter;
// it belongs to G^X iff o >= 0 and o + sum_a mu_X(phi(a)) <= 1.

#include "coalg/automaton.hpp"
#include "coalg/lp.hpp"
#include "coalg/polyhedra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace coalg {

class InconsistentValues : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantZeroSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GhatElement {
  Rat o;
  std::vector<Vec> phi;  // one vector per letter

  bool operator==(const GhatElement&) const = default;
};

inline GaugeValue ghat_weight(const PcaPolytope& x, const GhatElement& e) {
  GaugeValue total(e.o);
  for (const auto& v : e.phi) {
    if (v.size() != x.dim) throw std::invalid_argument("ghat: dimension mismatch");
    total = total + gauge(x, v);
  }
  return total;
}

inline bool ghat_member(const PcaPolytope& x, const GhatElement& e) {
  return e.o >= 0 && ghat_weight(x, e) <= GaugeValue(Rat(1));
}

inline GhatElement ghat_image(const LinearCoalgebra& c, const Vec& x) {
  GhatElement e{dot(c.out, x), {}};
  for (const auto& m : c.trans) e.phi.push_back(m * x);
  return e;
}

/// G^ f = id x (f o -).
inline GhatElement ghat_apply(const Mat& f, const GhatElement& e) {
  GhatElement out{e.o, {}};
  for (const auto& v : e.phi) out.phi.push_back(f * v);
  return out;
}

/// The linear map agreeing with `values` on the generators of X, extended
/// by zero on the unit vectors completing a basis of their span.
inline LinearCoalgebra linear_extension(const PcaPolytope& x,
                                        const std::vector<GhatElement>& values,
                                        std::size_t letters) {
  const std::size_t n = x.dim;
  if (values.size() != x.generators.size())
    throw std::invalid_argument("linear_extension: one value per generator required");
  auto stack = [&](const GhatElement& e) {
    if (e.phi.size() != letters)
      throw std::invalid_argument("linear_extension: wrong number of letters");
    Vec v{e.o};
    for (const auto& p : e.phi) {
      if (p.size() != n) throw std::invalid_argument("linear_extension: dimension mismatch");
      v.insert(v.end(), p.begin(), p.end());
    }
    return v;
  };
  const std::size_t rows = 1 + letters * n;

  std::vector<Vec> basis, targets;
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    const Vec& g = x.generators[i];
    Vec t = stack(values[i]);
    if (auto coords = coordinates(basis, g)) {
      Vec expect = zero_vec(rows);
      for (std::size_t b = 0; b < basis.size(); ++b)
        expect = expect + (*coords)[b] * targets[b];
      if (expect != t)
        throw InconsistentValues("values are not the restriction of a linear map at generator " +
                                 to_string(g));
    } else {
      basis.push_back(g);
      targets.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
    Vec e = unit_vec(n, i);
    if (!in_span(basis, e)) {
      basis.push_back(e);
      targets.push_back(zero_vec(rows));
    }
  }

  // Row r of the stacked map L satisfies <L_r, b_j> = targets[j][r].
  Mat pt = Mat::from_rows(basis, n);
  Mat stacked(rows, n);
  for (std::size_t r = 0; r < rows; ++r) {
    Vec rhs(n);
    for (std::size_t j = 0; j < n; ++j) rhs[j] = targets[j][r];
    Vec lr = *solve(pt, rhs);
    for (std::size_t c = 0; c < n; ++c) stacked(r, c) = lr[c];
  }
  LinearCoalgebra c{n, stacked.row(0), {}};
  for (std::size_t a = 0; a < letters; ++a) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = stacked(1 + a * n + i, j);
    c.trans.push_back(std::move(m));
  }
  return c;
}

/// Whether c maps X into G^Y; generators suffice by linearity and because
/// G^Y is closed under subconvex combinations.
inline bool is_ghat_coalgebra(const PcaPolytope& x, const PcaPolytope& y,
                              const LinearCoalgebra& c) {
  for (const auto& g : x.generators)
    if (!ghat_member(y, ghat_image(c, g))) return false;
  return true;
}

/// Largest I with out_k = 0 and supp(M_a e_k) within I for all k in I and
/// all letters; a greatest fixpoint starting from the zero-output indices.
inline std::vector<std::size_t> invariant_zero_set(const LinearCoalgebra& c) {
  std::vector<bool> in(c.n);
  for (std::size_t k = 0; k < c.n; ++k) in[k] = c.out[k] == 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < c.n; ++k) {
      if (!in[k]) continue;
      for (const auto& m : c.trans)
        for (std::size_t i = 0; i < c.n && in[k]; ++i)
          if (m(i, k) != 0 && !in[i]) in[k] = false;
      if (!in[k]) changed = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < c.n; ++k)
    if (in[k]) out.push_back(k);
  return out;
}

struct PyramidCert {
  Vec u;

  std::vector<Vec> generators() const {
    std::vector<Vec> g;
    for (std::size_t j = 0; j < u.size(); ++j) {
      Vec e = zero_vec(u.size());
      e[j] = 1 / u[j];
      g.push_back(std::move(e));
    }
    return g;
  }
  PcaPolytope pyramid() const { return {u.size(), generators()}; }
};

/// Linear constraints on u whose solutions give an invariant pyramid
/// {x >= 0 : <x, u> <= 1} containing X.
inline std::vector<Halfspace> pyramid_system(const PcaPolytope& x,
                                             const LinearCoalgebra& c) {
  const std::size_t n = c.n;
  std::vector<Halfspace> sys = orthant(n);
  for (const auto& g : x.generators) sys.push_back({g, Rat(1)});
  for (std::size_t j = 0; j < n; ++j) {
    // out_j + sum_a <M_a e_j, u> <= u_j
    Vec normal = zero_vec(n);
    for (const auto& m : c.trans) normal = normal + m.col(j);
    normal[j] -= 1;
    sys.push_back({normal, -c.out[j]});
  }
  return sys;
}

inline PyramidCert pyramid_extension(const PcaPolytope& x, const LinearCoalgebra& c) {
  const std::size_t n = c.n;
  if (x.dim != n) throw std::invalid_argument("pyramid_extension: dimension mismatch");
  for (const auto& g : x.generators)
    if (!is_nonnegative(g))
      throw std::invalid_argument("pyramid_extension: X must lie in the nonnegative orthant");
  for (std::size_t j = 0; j < n; ++j)
    if (!x.contains(unit_vec(n, j)))
      throw std::invalid_argument("pyramid_extension: X must contain the simplex");
  if (auto inv = invariant_zero_set(c); !inv.empty())
    throw InvariantZeroSet("coordinate " + std::to_string(inv.front()) +
                           " lies in an invariant set with zero output");
  if (n == 0) return {};
  auto u = fm_feasible(pyramid_system(x, c), n);
  if (!u) throw std::logic_error("pyramid_extension: constraint system infeasible");
  for (const auto& r : *u)
    if (r <= 0) throw std::logic_error("pyramid_extension: solution not strictly positive");
  return {*u};
}

struct Reduction {
  std::vector<std::size_t> removed;  // the invariant zero-output set I
  WeightedAutomaton quotient;        // on the remaining coordinates
  Mat f;                             // deletes the I-coordinates
};

inline Reduction reduce_invariant_set(const WeightedAutomaton& aut) {
  if (aut.tag != Semiring::Pca)
    throw std::invalid_argument("reduce_invariant_set: PCA automaton required");
  aut.validate();
  Reduction r;
  r.quotient = aut;
  r.quotient.state.reset();
  r.f = Mat::identity(aut.n);
  std::vector<std::size_t> original(aut.n);
  for (std::size_t i = 0; i < aut.n; ++i) original[i] = i;

  while (true) {
    const WeightedAutomaton& q = r.quotient;
    auto inv = invariant_zero_set(q.linear());
    if (inv.empty()) break;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0, p = 0; i < q.n; ++i) {
      if (p < inv.size() && inv[p] == i) {
        r.removed.push_back(original[i]);
        ++p;
      } else {
        keep.push_back(i);
      }
    }
    WeightedAutomaton next = q;
    next.n = keep.size();
    next.out = zero_vec(keep.size());
    next.trans.assign(q.trans.size(), Mat(keep.size(), keep.size()));
    Mat del(keep.size(), q.n);
    std::vector<std::size_t> next_original;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      del(i, keep[i]) = 1;
      next.out[i] = q.out[keep[i]];
      next_original.push_back(original[keep[i]]);
      for (std::size_t a = 0; a < q.trans.size(); ++a)
        for (std::size_t j = 0; j < keep.size(); ++j)
          next.trans[a](i, j) = q.trans[a](keep[i], keep[j]);
    }
    r.f = del * r.f;
    r.quotient = std::move(next);
    original = std::move(next_original);
  }
  std::sort(r.removed.begin(), r.removed.end());
  return r;
}

/// Preimage for a surjection f: Delta^n -> Y = f(Delta^n): write
/// phi(a) = p_a y_a with p_a = mu_Y(phi(a)), lift each y_a to the simplex by
/// LP, and scale back.
inline GhatElement ghat_preimage(const Mat& f, const GhatElement& e) {
  const std::size_t m = f.rows(), n = f.cols();
  PcaPolytope y{m, {}};
  for (std::size_t j = 0; j < n; ++j) y.generators.push_back(f.col(j));
  if (!ghat_member(y, e)) throw std::invalid_argument("ghat_preimage: element not in G^Y");

  GhatElement out{e.o, {}};
  for (const auto& v : e.phi) {
    GaugeValue p = gauge(y, v);
    if (p.value() == 0) {
      out.phi.push_back(zero_vec(n));
      continue;
    }
    Vec target = (1 / p.value()) * v;
    // f lambda = target, sum lambda + s = 1, lambda, s >= 0.
    Mat a(m + 1, n + 1);
    Vec b(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = f(i, j);
      b[i] = target[i];
    }
    for (std::size_t j = 0; j <= n; ++j) a(m, j) = 1;
    b[m] = 1;
    auto lambda = lp_find_nonnegative(a, b);
    if (!lambda) throw std::logic_error("ghat_preimage: no preimage in the simplex");
    lambda->resize(n);
    out.phi.push_back(p.value() * *lambda);
  }
  return out;
}

}  // namespace coalg
