// End-to-end acceptance run. Each criterion prints one PASS/FAIL line with
// its instance count and wall time; a criterion fails on any mismatch or when
// it exceeds its time limit. The exit status is the number of failures.

#include "coalg/hilbert.hpp"
#include "coalg/pca_functor.hpp"
#include "coalg/polyhedra.hpp"
#include "coalg/zigzag.hpp"

#include "support/automata_gen.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace coalg;
using namespace coalg::testing;

namespace {

/// Counts checks and keeps the first few failure descriptions.
class Tally {
 public:
  void check(bool ok, const std::function<std::string()>& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what());
  }
  void instance() { ++instances_; }

  bool ok() const { return failures_ == 0; }
  std::size_t instances() const { return instances_; }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::size_t instances_ = 0, checks_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Tally&)> body;
};

std::string describe(Semiring tag, const AutomatonPair& p) {
  std::ostringstream os;
  os << to_string(tag) << " pair n=(" << p.a1.n << "," << p.a2.n << ") x1=" << to_string(p.x1)
     << " x2=" << to_string(p.x2);
  return os.str();
}

bool incoming_nodes_free(const ZigZag& z) {
  for (const auto& m : z.morphisms)
    if (!is_free(z.nodes[m.to].kind)) return false;
  return true;
}

std::size_t outgoing(const ZigZag& z, std::size_t node) {
  std::size_t k = 0;
  for (const auto& m : z.morphisms) k += m.from == node;
  return k;
}

// ---------------------------------------------------------------------------
// 1, 2: zig-zag shapes

void cubic_spans(Tally& t) {
  Rng rng(1001);
  for (Semiring tag : {Semiring::Nat, Semiring::QPlus, Semiring::RPlus, Semiring::Unit}) {
    for (int i = 0; i < 200; ++i) {
      AutomatonPair p = random_equivalent_pair(rng, tag, 4, 2);
      ZigZag z = cubic_zigzag(p.a1, p.x1, p.a2, p.x2);
      t.instance();
      t.check(z.nodes.size() == 3 && outgoing(z, 1) == 2 && outgoing(z, 0) == 0 &&
                  outgoing(z, 2) == 0,
              [&] { return "not a span: " + describe(tag, p); });
      t.check(incoming_nodes_free(z), [&] { return "non-free target: " + describe(tag, p); });
      VerifyReport r = verify_zigzag(z);
      t.check(r.valid(), [&] { return "invalid (" + r.failing() + "): " + describe(tag, p); });
    }
  }
}

void ghat_zigzags(Tally& t) {
  Rng rng(1002);
  for (int i = 0; i < 100; ++i) {
    AutomatonPair p = random_equivalent_pair(rng, Semiring::Pca, 3, 2);
    ZigZag z = ghat_zigzag(p.a1, p.x1, p.a2, p.x2);
    t.instance();
    t.check(z.nodes.size() == 5, [&] { return "node count: " + describe(Semiring::Pca, p); });
    if (z.nodes.size() != 5) continue;
    t.check(z.nodes[1].kind == NodeKind::FreePca && z.nodes[3].kind == NodeKind::FreePca &&
                incoming_nodes_free(z),
            [&] { return "non-free target: " + describe(Semiring::Pca, p); });
    t.check(outgoing(z, 2) == 2 && outgoing(z, 1) == 0 && outgoing(z, 3) == 0,
            [&] { return "middle is not a span: " + describe(Semiring::Pca, p); });
    VerifyReport r = verify_zigzag(z);
    t.check(r.valid(),
            [&] { return "invalid (" + r.failing() + "): " + describe(Semiring::Pca, p); });
  }
}

// ---------------------------------------------------------------------------
// 3: decision procedure against bounded trace comparison

void equivalence_oracle(Tally& t) {
  Rng rng(1003);
  for (Semiring tag : {Semiring::Nat, Semiring::Int, Semiring::QPlus, Semiring::Q,
                       Semiring::RPlus, Semiring::Real, Semiring::Unit, Semiring::Pca}) {
    for (int i = 0; i < 1000; ++i) {
      AutomatonPair p = random_pair(rng, tag, 4, 2);
      const std::size_t depth = p.a1.n + p.a2.n;
      bool traces_agree = trace(p.a1, p.x1, depth) == trace(p.a2, p.x2, depth);
      EquivalenceResult r = equivalent(p.a1, p.x1, p.a2, p.x2);
      t.instance();
      t.check(r.equivalent == traces_agree, [&] { return "verdict differs: " + describe(tag, p); });
      if (!r.equivalent && r.separating) {
        const Word& w = *r.separating;
        t.check(p.a1.linear().observe(w, p.x1) != p.a2.linear().observe(w, p.x2),
                [&] { return "separating word does not separate: " + describe(tag, p); });
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 4: Hilbert bases

/// An N-combination of `gens` summing to `target`, found by exhaustive
/// search over the nonnegative vectors below `target`.
std::optional<std::vector<long>> nat_combination(const std::vector<Vec>& gens,
                                                 const Vec& target) {
  std::vector<long> coeff(gens.size(), 0);
  std::set<Vec, detail::LexLess> dead;
  std::function<bool(const Vec&)> rec = [&](const Vec& v) -> bool {
    if (is_zero(v)) return true;
    if (dead.count(v)) return false;
    std::size_t i = 0;
    while (v[i] == 0) ++i;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (gens[g][i] <= 0) continue;
      Vec rest = v - gens[g];
      if (!is_nonnegative(rest)) continue;
      ++coeff[g];
      if (rec(rest)) return true;
      --coeff[g];
    }
    dead.insert(v);
    return false;
  };
  if (!is_nonnegative(target) || !rec(target)) return std::nullopt;
  return coeff;
}

IntConeSpec cone(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<Vec> r;
  for (auto row : rows) {
    Vec v;
    for (long x : row) v.emplace_back(x);
    r.push_back(v);
  }
  return {r.size(), Mat::from_rows(r, r[0].size())};
}

bool within(const Vec& x, long box) {
  for (const auto& c : x)
    if (abs(c) > box) return false;
  return true;
}

using VecSet = std::set<Vec, detail::LexLess>;

/// Generation, minimality and oracle agreement for one cone. Returns whether
/// the whole basis fitted in the oracle box.
bool check_hilbert(Tally& t, Rng& rng, const IntConeSpec& s, long box) {
  const std::string name = "W=" + to_string(s.w);
  std::vector<Vec> hb = hilbert_basis(s);
  std::vector<Vec> pointed, pointed_vals, lineality;
  for (const auto& h : hb) {
    t.check(s.contains(h) && is_integral(std::span<const Rat>(h)),
            [&] { return name + ": basis element outside cone " + to_string(h); });
    Vec val = s.values(h);
    if (is_zero(val)) {
      lineality.push_back(h);
    } else {
      pointed.push_back(h);
      pointed_vals.push_back(val);
    }
  }
  // Lineality elements come in +/- pairs of a lattice basis.
  t.check(lineality.size() % 2 == 0 && rank(lineality, s.k) == lineality.size() / 2,
          [&] { return name + ": lineality part is not a +/- basis"; });
  Lattice lin = hnf(lineality, s.k);

  // Minimality: no element is a sum of the others.
  for (std::size_t j = 0; j < pointed_vals.size(); ++j) {
    std::vector<Vec> others;
    for (std::size_t o = 0; o < pointed_vals.size(); ++o)
      if (o != j) others.push_back(pointed_vals[o]);
    t.check(!nat_combination(others, pointed_vals[j]),
            [&] { return name + ": reducible element " + to_string(pointed[j]); });
  }

  // Generation on small combinations and on box samples.
  std::vector<Vec> samples;
  while (samples.size() < 25) {
    Vec x = zero_vec(s.k);
    for (const auto& h : pointed) x = x + Rat(rng.uniform(0, 2)) * h;
    for (const auto& l : lineality) x = x + Rat(rng.uniform(0, 1)) * l;
    samples.push_back(x);
  }
  for (int tries = 0; samples.size() < 50 && tries < 2000; ++tries) {
    Vec x = rng.int_vec(s.k, -4, 4);
    if (s.contains(x)) samples.push_back(x);
  }
  for (const auto& x : samples) {
    auto c = nat_combination(pointed_vals, s.values(x));
    t.check(c.has_value(), [&] { return name + ": no N-combination for " + to_string(x); });
    if (!c) continue;
    Vec rest = x;
    for (std::size_t g = 0; g < pointed.size(); ++g) rest = rest - Rat((*c)[g]) * pointed[g];
    t.check(lin.contains(rest),
            [&] { return name + ": remainder outside the lineality lattice " + to_string(x); });
  }

  // Oracle: value sets agree inside the box; the basis part inside the box
  // is always found by the oracle.
  VecSet mine, oracle;
  bool fits = true;
  for (const auto& h : pointed) {
    if (within(h, box)) mine.insert(s.values(h));
    fits = fits && within(h, box);
  }
  for (const auto& l : lineality) fits = fits && within(l, box);
  for (const auto& o : hilbert_bruteforce_oracle(s, box)) oracle.insert(s.values(o));
  for (const auto& v : mine)
    t.check(oracle.count(v) > 0, [&] { return name + ": oracle misses value " + to_string(v); });
  if (fits)
    t.check(mine == oracle, [&] { return name + ": oracle value set differs"; });
  return fits;
}

void hilbert_bases(Tally& t) {
  Rng rng(1004);
  auto v = [](std::initializer_list<long> xs) {
    Vec out;
    for (long x : xs) out.emplace_back(x);
    return out;
  };

  IntConeSpec orthant2 = cone({{1, 0}, {0, 1}});
  IntConeSpec wedge = cone({{1, 0}, {-1, 1}});
  IntConeSpec half = cone({{1}, {0}});
  t.check(hilbert_basis(orthant2) == std::vector<Vec>{v({1, 0}), v({0, 1})},
          [] { return "orthant example"; });
  t.check(hilbert_basis(wedge) == std::vector<Vec>{v({1, 0}), v({1, 1})},
          [] { return "wedge example"; });
  auto hb = hilbert_basis(half);
  t.check(std::count(hb.begin(), hb.end(), v({0, 1})) == 1 &&
              std::count(hb.begin(), hb.end(), v({0, -1})) == 1,
          [] { return "half-plane example lacks the line pair"; });
  for (const auto* s : {&orthant2, &wedge, &half}) {
    t.instance();
    t.check(check_hilbert(t, rng, *s, 3), [] { return "fixed example exceeds box 3"; });
  }

  std::vector<Vec> even = nat_restriction(hnf({v({1, 1}), v({2, 0})}, 2));
  VecSet got(even.begin(), even.end()), want{v({1, 1}), v({2, 0}), v({0, 2})};
  t.check(even.size() == 3 && got == want, [] { return "even-sum lattice restriction"; });

  std::size_t fitted = 0;
  for (int i = 0; i < 400 && fitted < 30; ++i) {
    std::size_t k = rng.uniform(2, 3), m = rng.uniform(1, 3);
    IntConeSpec s{k, rng.mat(k, m, -3, 3, 1)};
    t.instance();
    fitted += check_hilbert(t, rng, s, 4);
  }
  t.check(fitted >= 20, [&] { return "only " + std::to_string(fitted) + " bases fitted the box"; });
}

// ---------------------------------------------------------------------------
// 5: double description

void double_description(Tally& t) {
  Rng rng(1005);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t dim = rng.uniform(1, 4);
    HRep h{dim, {}};
    for (long j = 0, c = rng.uniform(1, 7); j < c; ++j)
      h.inequalities.push_back({rng.int_vec(dim, -3, 3), rng.rat(-2, 4, 1)});
    if (rng.coin(0.5))
      for (std::size_t i = 0; i < dim; ++i) {
        h.inequalities.push_back({unit_vec(dim, i), Rat(3)});
        h.inequalities.push_back({Rat(-1) * unit_vec(dim, i), Rat(3)});
      }
    VRep vr = dd_h_to_v(h);
    HRep back = dd_v_to_h(vr);
    t.instance();
    const std::string name = "H-rep #" + std::to_string(inst);
    for (int s = 0; s < 1000; ++s) {
      Vec x;
      if (!vr.points.empty() && rng.coin(0.2)) {
        // Near the boundary: a vertex, a midpoint, or a nudged vertex.
        x = vr.points[rng.index(vr.points.size())];
        if (rng.coin(0.4))
          x = Rat(1, 2) * (x + vr.points[rng.index(vr.points.size())]);
        else if (rng.coin(0.5))
          x[rng.index(dim)] += Rat(rng.coin() ? 1 : -1, 7);
      } else {
        x = rng.vec(dim, -4, 4, 3);
      }
      bool in_h = h.contains(x), in_v = vr.contains(x), in_back = back.contains(x);
      t.check(in_h == in_v && in_h == in_back, [&] {
        return name + ": membership of " + to_string(x) + " differs (H " +
               std::to_string(in_h) + ", V " + std::to_string(in_v) + ", H' " +
               std::to_string(in_back) + ")";
      });
    }
  }
}

// ---------------------------------------------------------------------------
// 6: gauge

PcaPolytope random_pca(Rng& rng, std::size_t dim) {
  PcaPolytope x{dim, {}};
  for (long j = 0, k = rng.uniform(1, 4); j < k; ++j) x.generators.push_back(rng.vec(dim, 0, 3, 2));
  return x;
}

void gauge_laws(Tally& t) {
  Rng rng(1006);
  const GaugeValue one(Rat(1));
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = rng.uniform(1, 3);
    PcaPolytope x = random_pca(rng, dim), y = random_pca(rng, dim);
    Vec a = rng.vec(dim, rng.coin(0.8) ? 0 : -1, 3, 3), b = rng.vec(dim, 0, 3, 3);
    Rat p = rng.rat(0, 5, 3);
    GaugeValue ga = gauge(x, a), gb = gauge(x, b);
    const std::string name = "X gens " + std::to_string(x.generators.size()) + " point " +
                             to_string(a);
    t.instance();
    t.check(gauge(x, p * a) == p * ga, [&] { return name + ": homogeneity"; });
    t.check(gauge(x, a + b) <= ga + gb, [&] { return name + ": subadditivity"; });
    t.check(gauge(intersect(x, y), a) == max(ga, gauge(y, a)),
            [&] { return name + ": intersection"; });
    bool member = subconvex_member_fm(x.generators, dim, a);
    if (ga < one) t.check(member, [&] { return name + ": gauge < 1 but outside"; });
    t.check(member == (ga <= one), [&] { return name + ": X differs from {gauge <= 1}"; });
    if (!ga.is_infinite() && ga.value() > 0) {
      // The boundary point a / mu(a) is in X, anything beyond it is not.
      Vec edge = (1 / ga.value()) * a;
      t.check(subconvex_member_fm(x.generators, dim, edge),
              [&] { return name + ": scaled point not on the boundary"; });
      t.check(!subconvex_member_fm(x.generators, dim, Rat(101, 100) * edge),
              [&] { return name + ": point beyond the boundary inside"; });
    }
  }
  // Pyramids have the closed form <x, u> on the orthant.
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = rng.uniform(1, 3);
    PyramidCert c{rng.vec(n, 1, 4, 3)};
    Vec x = rng.vec(n, rng.coin(0.8) ? 0 : -1, 3, 3);
    GaugeValue want = is_nonnegative(x) ? GaugeValue(dot(x, c.u)) : GaugeValue::infinity();
    t.instance();
    t.check(gauge(c.pyramid(), x) == want, [&] { return "pyramid closed form at " + to_string(x); });
  }
  t.check(gauge(PcaPolytope::simplex(2), Vec{Rat(1, 2), Rat(1, 4)}) == GaugeValue(Rat(3, 4)),
          [] { return "simplex example"; });
  t.check(gauge(PyramidCert{Vec{2, 1}}.pyramid(), Vec{1, 1}) == GaugeValue(Rat(3)),
          [] { return "pyramid example"; });
}

// ---------------------------------------------------------------------------
// 7: pyramid extension

void pyramid_extensions(Tally& t) {
  Rng rng(1007);
  for (int i = 0; i < 1000 && t.instances() < 100; ++i) {
    WeightedAutomaton aut = random_automaton(rng, Semiring::Pca, rng.uniform(1, 3), 2);
    if (rng.coin(0.3)) aut.out[rng.index(aut.n)] = 0;
    Reduction r = reduce_invariant_set(aut);
    if (r.quotient.n == 0) continue;
    LinearCoalgebra c = r.quotient.linear();
    t.check(invariant_zero_set(c).empty(), [] { return "reduced coalgebra violates (nv)"; });
    PcaPolytope x = PcaPolytope::simplex(c.n);
    PyramidCert cert = pyramid_extension(x, c);
    const std::string name = "u=" + to_string(cert.u);
    t.instance();
    t.check(cert.u.size() == c.n, [&] { return name + ": wrong length"; });
    for (const auto& u : cert.u) t.check(u > 0, [&] { return name + ": not strictly positive"; });
    for (const auto& g : x.generators)
      t.check(dot(g, cert.u) <= 1, [&] { return name + ": generator outside pyramid"; });
    for (std::size_t j = 0; j < c.n; ++j) {
      Rat lhs = c.out[j];
      for (const auto& m : c.trans) lhs += dot(m.col(j), cert.u);
      t.check(lhs <= cert.u[j], [&] { return name + ": invariance fails at " + std::to_string(j); });
    }
    PcaPolytope y = cert.pyramid();
    t.check(is_ghat_coalgebra(y, y, c), [&] { return name + ": not a G^ coalgebra"; });
  }
  t.check(t.instances() >= 100, [] { return "fewer than 100 coalgebras"; });

  Mat half(2, 2);
  half(0, 0) = half(1, 1) = Rat(1, 2);
  LinearCoalgebra diag{2, Vec{Rat(1, 2), Rat(1, 2)}, {half}};
  t.check(pyramid_extension(PcaPolytope::simplex(2), diag).u == Vec{1, 1},
          [] { return "diag(1/2) example"; });
}

// ---------------------------------------------------------------------------
// 8: functor laws and structural properties

GhatElement random_element(Rng& rng, std::size_t dim, std::size_t letters) {
  GhatElement e{rng.rat(0, 2, 4) / 2, {}};
  for (std::size_t a = 0; a < letters; ++a) e.phi.push_back(rng.vec(dim, 0, 2, 4));
  return e;
}

void ghat_laws(Tally& t, Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    std::size_t n = rng.uniform(1, 3), m = rng.uniform(1, 3), l = rng.uniform(1, 3);
    Mat f = rng.mat(m, n, 0, 2, 2), g = rng.mat(l, m, 0, 2, 2);
    GhatElement e = random_element(rng, n, 2);
    t.instance();
    t.check(ghat_apply(Mat::identity(n), e) == e, [] { return "identity law"; });
    t.check(ghat_apply(g * f, e) == ghat_apply(g, ghat_apply(f, e)),
            [] { return "composition law"; });
    PcaPolytope x = random_pca(rng, n);
    if (ghat_member(x, e)) {
      PcaPolytope y{m, {}};
      for (const auto& gen : x.generators) y.generators.push_back(f * gen);
      t.check(ghat_member(y, ghat_apply(f, e)), [] { return "image leaves G^Y"; });
    }
    t.check(ghat_member(x, e) == ghat_member_summands(x, e),
            [] { return "membership differs from the summand form"; });
  }
  for (int i = 0; i < 200; ++i) {
    std::size_t dim = rng.uniform(1, 2);
    PcaPolytope x1 = random_pca(rng, dim);
    PcaPolytope x2 = x1;
    x2.generators.push_back(rng.vec(dim, 0, 3, 2));
    if (rng.coin()) x1.generators[0] = Rat(1, 2) * x1.generators[0];
    GhatElement e = random_element(rng, dim, 2);
    t.instance();
    if (ghat_member(x1, e)) t.check(ghat_member(x2, e), [] { return "monotonicity"; });
  }
}

void surjections(Tally& t, Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    std::size_t n = rng.uniform(1, 3), m = rng.uniform(1, 3);
    Mat f = rng.mat(m, n, 0, 2, 2);
    Vec w = rng.split(1, 4, false);
    GhatElement e{w[0], {}};
    for (std::size_t a = 0; a < 2; ++a) e.phi.push_back(f * rng.split(w[1 + a], n, false));
    GhatElement pre = ghat_preimage(f, e);
    t.instance();
    t.check(ghat_member(PcaPolytope::simplex(n), pre) && ghat_apply(f, pre) == e,
            [&] { return "no preimage for f=" + to_string(f); });
  }
}

void reduction_squares(Tally& t, Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    WeightedAutomaton aut = random_automaton(rng, Semiring::Pca, rng.uniform(1, 4), 2);
    if (rng.coin(0.5)) aut.out[rng.index(aut.n)] = 0;
    Reduction r = reduce_invariant_set(aut);
    t.instance();
    t.check(invariant_zero_set(r.quotient.linear()).empty() &&
                r.removed.size() + r.quotient.n == aut.n,
            [] { return "reduction incomplete"; });
    for (std::size_t j = 0; j < aut.n; ++j) {
      Vec e = unit_vec(aut.n, j);
      t.check(ghat_apply(r.f, ghat_image(aut.linear(), e)) ==
                  ghat_image(r.quotient.linear(), r.f * e),
              [] { return "reduction square fails"; });
    }
  }
}

/// Membership in the free S-carrier S^n1 x S^n2, block by block.
bool in_free_product(Semiring tag, std::size_t n1, const Vec& y) {
  Vec first(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n1));
  Vec second(y.begin() + static_cast<std::ptrdiff_t>(n1), y.end());
  return in_free_carrier(tag, first) && in_free_carrier(tag, second);
}

/// Membership in S^n1 x S^n2 read through generators of the product.
bool in_product_carrier(Semiring tag, std::size_t n1, std::size_t n2, const Vec& y) {
  const std::size_t dim = n1 + n2;
  std::vector<Vec> units;
  for (std::size_t i = 0; i < dim; ++i) units.push_back(unit_vec(dim, i));
  if (tag == Semiring::Unit)
    return simplex_restriction(units, SimplexBound::Product, n1, n2).contains(y);
  return carrier_contains(tag, NodeKind::FreeModule, units, dim, y);
}

/// F_E X cap F_S Y = F_S (X cap Y) with X = Z over the completion E and
/// Y = S^n1 x S^n2, whose right side is read from the witness generators;
/// and the product form of the preimages under the projections.
void cubic_properties(Tally& t, Rng& rng) {
  for (Semiring tag : {Semiring::Nat, Semiring::QPlus, Semiring::RPlus, Semiring::Unit}) {
    const bool integral = tag == Semiring::Nat;
    for (int i = 0; i < 40; ++i) {
      AutomatonPair p = random_equivalent_pair(rng, tag, 3, 2);
      PairSubmodule z = pair_submodule(p.a1, p.x1, p.a2, p.x2);
      ZigZag w = cubic_zigzag(p.a1, p.x1, p.a2, p.x2);
      const ZigZagNode& mid = w.nodes[1];
      const std::size_t n1 = p.a1.n, n2 = p.a2.n, dim = n1 + n2;
      auto in_z = [&](const Vec& y) {
        return integral ? carrier_contains(Semiring::Int, NodeKind::GeneratedModule, z.basis,
                                           dim, y)
                        : (z.basis.empty() ? is_zero(y) : in_span(z.basis, y));
      };
      auto scalar = [&](long hi) { return integral ? Rat(rng.uniform(0, hi)) : rng.rat(0, hi, 3); };

      std::vector<Vec> points;
      Vec start = concat(p.x1, p.x2);
      for (const auto& word : words_up_to(p.a1.alphabet.size(), 2))
        points.push_back(z.d.apply(word, start));
      for (int s = 0; s < 5; ++s) {
        Vec y = zero_vec(dim);
        for (const auto& b : z.basis)
          y = y + (integral ? Rat(rng.uniform(-2, 2)) : rng.rat(-2, 2, 3)) * b;
        if (tag == Semiring::Unit) y = rng.rat(0, 1, 4) * y;
        points.push_back(y);
      }
      for (int s = 0; s < 5 && !mid.generators.empty(); ++s) {
        Vec y = zero_vec(dim);
        if (tag == Semiring::Unit) {
          Vec l = rng.split(1, mid.generators.size() + 1, false);
          for (std::size_t g = 0; g < mid.generators.size(); ++g) y = y + l[g] * mid.generators[g];
        } else {
          for (const auto& g : mid.generators) y = y + scalar(2) * g;
        }
        points.push_back(y);
      }
      for (int s = 0; s < 5; ++s) {
        Vec y = zero_vec(dim);
        if (tag == Semiring::Unit) {
          Vec a = rng.split(rng.rat(0, 4, 1) / 4, n1, false);
          Vec b = rng.split(rng.rat(0, 4, 1) / 4, n2, false);
          y = concat(a, b);
        } else {
          for (auto& c : y) c = scalar(3);
        }
        points.push_back(y);
      }
      // Near misses of members.
      for (std::size_t s = 0, count = points.size(); s < count; s += 3) {
        Vec y = points[s];
        y[rng.index(dim)] += Rat(rng.coin() ? 1 : -1, integral ? 1 : 2);
        points.push_back(y);
      }

      t.instance();
      for (const auto& y : points) {
        bool lhs = in_z(y) && in_free_product(tag, n1, y);
        bool rhs = carrier_contains(tag, mid.kind, mid.generators, dim, y);
        t.check(lhs == rhs, [&] {
          return describe(tag, p) + ": intersection identity fails at " + to_string(y);
        });
        t.check(in_free_product(tag, n1, y) == in_product_carrier(tag, n1, n2, y),
                [&] { return describe(tag, p) + ": product identity fails at " + to_string(y); });
      }
    }
  }
}

void functor_properties(Tally& t) {
  Rng rng(1008);
  ghat_laws(t, rng);
  surjections(t, rng);
  cubic_properties(t, rng);
  reduction_squares(t, rng);
}

// ---------------------------------------------------------------------------
// 9: tampering

/// Picks a morphism entry whose +1 change is visible in the output square:
/// target output nonzero in the row, some source generator nonzero in the
/// column.
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> visible_entry(const ZigZag& z) {
  for (std::size_t m = 0; m < z.morphisms.size(); ++m) {
    const auto& src = z.nodes[z.morphisms[m].from];
    const auto& dst = z.nodes[z.morphisms[m].to];
    for (std::size_t i = 0; i < dst.dim; ++i) {
      if (dst.coalgebra.out[i] == 0) continue;
      for (std::size_t j = 0; j < src.dim; ++j)
        for (const auto& g : src.generators)
          if (g[j] != 0) return std::tuple{m, i, j};
    }
  }
  return std::nullopt;
}

void tamper_classes(Tally& t, const ZigZag& good, const std::string& name) {
  t.check(verify_zigzag(good).valid(), [&] { return name + ": untampered witness invalid"; });

  if (auto entry = visible_entry(good)) {
    auto [m, i, j] = *entry;
    ZigZag bad = good;
    bad.morphisms[m].map(i, j) += 1;
    std::string f = verify_zigzag(bad).failing();
    t.check(f.find('c') != std::string::npos,
            [&] { return name + ": morphism tamper reported as '" + f + "'"; });
  }

  for (std::size_t node = 0; node < good.nodes.size(); ++node) {
    if (!good.relating[node]) continue;
    ZigZag bad = good;
    bad.relating[node].reset();
    std::string f = verify_zigzag(bad).failing();
    t.check(!f.empty() && f.find_first_not_of("de") == std::string::npos,
            [&] { return name + ": relating tamper reported as '" + f + "'"; });
    if (good.relating[node]->empty()) continue;
    bad = good;
    (*bad.relating[node])[0] += 1;
    f = verify_zigzag(bad).failing();
    t.check(f.find_first_of("de") != std::string::npos,
            [&] { return name + ": shifted relating element reported as '" + f + "'"; });
  }

  for (const auto& m : good.morphisms) {
    ZigZag bad = good;
    NodeKind& k = bad.nodes[m.to].kind;
    k = is_pca(k) ? NodeKind::GeneratedPca : NodeKind::GeneratedModule;
    std::string f = verify_zigzag(bad).failing();
    t.check(f == "a", [&] { return name + ": node kind tamper reported as '" + f + "'"; });
  }
}

void negative_controls(Tally& t) {
  Rng rng(1009);
  for (Semiring tag : {Semiring::Nat, Semiring::Int, Semiring::QPlus, Semiring::Q,
                       Semiring::RPlus, Semiring::Real, Semiring::Unit}) {
    for (int i = 0; i < 8; ++i) {
      AutomatonPair p = random_equivalent_pair(rng, tag, 3, 2);
      t.instance();
      tamper_classes(t, cubic_zigzag(p.a1, p.x1, p.a2, p.x2), describe(tag, p));
    }
  }
  for (int i = 0; i < 15; ++i) {
    AutomatonPair p = random_equivalent_pair(rng, Semiring::Pca, 3, 2);
    t.instance();
    tamper_classes(t, ghat_zigzag(p.a1, p.x1, p.a2, p.x2), describe(Semiring::Pca, p));
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cubic zig-zags are verified spans", 60, cubic_spans},
      {2, "G^ zig-zags have five nodes and free targets", 120, ghat_zigzags},
      {3, "equivalence agrees with bounded trace comparison", 60, equivalence_oracle},
      {4, "Hilbert bases generate, are minimal and match the oracle", 30, hilbert_bases},
      {5, "double description preserves membership", 30, double_description},
      {6, "gauge laws and worked examples", 30, gauge_laws},
      {7, "pyramid extensions are certified", 30, pyramid_extensions},
      {8, "functor laws, surjections, cubic properties, reductions", 30, functor_properties},
      {9, "tampered witnesses are rejected by the right check", 60, negative_controls},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Tally t;
    std::string error;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = error.empty() && t.ok() && secs < c.limit_seconds;
    failed += !ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, c.limit_seconds);
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << ": "
              << t.instances() << " instances, " << t.checks() << " checks, " << t.failures()
              << " failures (" << timing << ")\n";
    if (!error.empty()) std::cout << "      exception: " << error << '\n';
    for (const auto& n : t.notes()) std::cout << "      " << n << '\n';
    if (secs >= c.limit_seconds) std::cout << "      time limit exceeded\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed;
}
