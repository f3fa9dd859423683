#pragma once

// Exact rational polyhedra.
//
// Conversion between the inequality description (H) and the generator
// description (V, points plus directions) uses the incremental double
// description method on the homogenized cone, with combinatorial adjacency
// tests. Finitely generated positively convex algebras (subconvex hulls of
// nonnegative generators) get a Minkowski functional computed by exact LP.

#include "coalg/linalg.hpp"
#include "coalg/lp.hpp"
#include "coalg/text.hpp"

#include <algorithm>
#include <compare>
#include <iosfwd>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace coalg {

struct HRep {
  std::size_t dim = 0;
  std::vector<Halfspace> inequalities;

  bool contains(const Vec& x) const {
    if (x.size() != dim) throw std::invalid_argument("HRep: dim mismatch");
    for (const auto& h : inequalities)
      if (dot(h.normal, x) > h.bound) return false;
    return true;
  }
};

struct VRep {
  std::size_t dim = 0;
  std::vector<Vec> points;
  std::vector<Vec> directions;

  bool empty() const { return points.empty(); }
  bool bounded() const { return directions.empty(); }

  /// Exact membership: x is a convex combination of points plus a conic
  /// combination of directions.
  bool contains(const Vec& x) const {
    if (x.size() != dim) throw std::invalid_argument("VRep: dim mismatch");
    if (points.empty()) return false;
    const std::size_t k = points.size() + directions.size();
    Mat a(dim + 1, k);
    Vec b = concat(x, Vec{Rat(1)});
    for (std::size_t j = 0; j < points.size(); ++j) {
      for (std::size_t i = 0; i < dim; ++i) a(i, j) = points[j][i];
      a(dim, j) = 1;
    }
    for (std::size_t j = 0; j < directions.size(); ++j)
      for (std::size_t i = 0; i < dim; ++i)
        a(i, points.size() + j) = directions[j][i];
    return lp_find_nonnegative(a, b).has_value();
  }
};

/// Subconvex hull { sum l_i g_i : l_i >= 0, sum l_i <= 1 } of nonnegative
/// generators. Always contains 0 and is compact.
struct PcaPolytope {
  std::size_t dim = 0;
  std::vector<Vec> generators;

  static PcaPolytope simplex(std::size_t n) {
    PcaPolytope p{n, {}};
    for (std::size_t i = 0; i < n; ++i) p.generators.push_back(unit_vec(n, i));
    return p;
  }

  bool contains(const Vec& x) const {
    if (x.size() != dim) throw std::invalid_argument("PcaPolytope: dim mismatch");
    if (generators.empty()) return is_zero(x);
    const std::size_t k = generators.size();
    Mat a(dim + 1, k + 1);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < dim; ++i) a(i, j) = generators[j][i];
      a(dim, j) = 1;
    }
    a(dim, k) = 1;  // slack
    return lp_find_nonnegative(a, concat(x, Vec{Rat(1)})).has_value();
  }

  VRep to_vrep() const {
    VRep v{dim, {zero_vec(dim)}, {}};
    for (const auto& g : generators) v.points.push_back(g);
    return v;
  }
};

/// Value of a Minkowski functional: a nonnegative rational or +infinity.
class GaugeValue {
 public:
  GaugeValue(Rat v) : value_(std::move(v)) {}  // NOLINT: implicit by intent
  static GaugeValue infinity() {
    GaugeValue g(Rat(0));
    g.infinite_ = true;
    return g;
  }

  bool is_infinite() const { return infinite_; }
  const Rat& value() const {
    if (infinite_) throw std::logic_error("GaugeValue: infinite");
    return value_;
  }

  friend GaugeValue operator+(const GaugeValue& a, const GaugeValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return GaugeValue(a.value_ + b.value_);
  }

  /// Scaling by p >= 0, with 0 * infinity = 0.
  friend GaugeValue operator*(const Rat& p, const GaugeValue& g) {
    if (p == 0) return GaugeValue(Rat(0));
    if (g.infinite_) return infinity();
    return GaugeValue(p * g.value_);
  }

  friend bool operator==(const GaugeValue& a, const GaugeValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const GaugeValue& a,
                                          const GaugeValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const GaugeValue& g) {
    return os << (g.infinite_ ? std::string("inf") : to_string(g.value_));
  }

 private:
  Rat value_;
  bool infinite_ = false;
};

inline GaugeValue max(const GaugeValue& a, const GaugeValue& b) {
  return a < b ? b : a;
}

inline std::string to_string(const GaugeValue& g) {
  return g.is_infinite() ? "inf" : to_string(g.value());
}

// ---------------------------------------------------------------------------
// Double description

namespace detail {

struct LexLess {
  bool operator()(const Vec& a, const Vec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

inline void sort_unique(std::vector<Vec>& v) {
  std::sort(v.begin(), v.end(), LexLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct Cone {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;
};

// Generators of the cone { y in R^d : <a, y> <= 0 for every a in rows }.
inline Cone cone_generators(const std::vector<Vec>& rows, std::size_t d) {
  struct Ray {
    Vec v;
    std::vector<bool> zero;  // tight constraints among those processed
  };
  const std::size_t m = rows.size();
  std::vector<Vec> lin;
  for (std::size_t i = 0; i < d; ++i) lin.push_back(unit_vec(d, i));
  std::vector<Ray> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const Vec& a = rows[k];
    auto lin_it = std::find_if(lin.begin(), lin.end(),
                               [&](const Vec& l) { return dot(a, l) != 0; });
    if (lin_it != lin.end()) {
      Vec l = *lin_it;
      lin.erase(lin_it);
      Rat al = dot(a, l);
      if (al > 0) {
        l = Rat(-1) * l;
        al = -al;
      }
      for (auto& o : lin) o = primitive(o - (dot(a, o) / al) * l);
      for (auto& r : rays) {
        r.v = primitive(r.v - (dot(a, r.v) / al) * l);
        r.zero[k] = true;
      }
      std::vector<bool> z(m, false);
      for (std::size_t j = 0; j < k; ++j) z[j] = true;
      rays.push_back({primitive(l), std::move(z)});
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<Rat> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
    }
    if (pos.empty()) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (val[i] == 0) rays[i].zero[k] = true;
      continue;
    }
    const std::ptrdiff_t need =
        static_cast<std::ptrdiff_t>(d) - static_cast<std::ptrdiff_t>(lin.size()) - 2;
    std::vector<Ray> next;
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        std::vector<bool> common(m, false);
        std::ptrdiff_t count = 0;
        for (std::size_t j = 0; j < k; ++j)
          if (rays[p].zero[j] && rays[n].zero[j]) {
            common[j] = true;
            ++count;
          }
        if (count < need) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          bool covers = true;
          for (std::size_t j = 0; j < k && covers; ++j)
            if (common[j] && !rays[r].zero[j]) covers = false;
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        Vec v = primitive(val[p] * rays[n].v - val[n] * rays[p].v);
        common[k] = true;
        next.push_back({std::move(v), std::move(common)});
      }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (val[i] > 0) continue;
      if (val[i] == 0) rays[i].zero[k] = true;
      next.push_back(std::move(rays[i]));
    }
    rays = std::move(next);
  }

  Cone out;
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  out.lineality = std::move(lin);
  return out;
}

}  // namespace detail

/// Canonical ordering: points and directions sorted lexicographically,
/// directions primitive integral.
inline VRep canonical(VRep v) {
  for (auto& d : v.directions) d = primitive(d);
  detail::sort_unique(v.points);
  detail::sort_unique(v.directions);
  return v;
}

inline HRep canonical(HRep h) {
  std::vector<Vec> rows;
  for (const auto& ineq : h.inequalities)
    rows.push_back(primitive(concat(ineq.normal, Vec{ineq.bound})));
  detail::sort_unique(rows);
  HRep out{h.dim, {}};
  for (auto& r : rows) {
    Rat b = r.back();
    r.pop_back();
    out.inequalities.push_back({std::move(r), b});
  }
  return out;
}

/// V-representation of { x : <n_i, x> <= b_i }. An empty polyhedron yields a
/// VRep without points.
inline VRep dd_h_to_v(const HRep& h) {
  const std::size_t n = h.dim;
  std::vector<Vec> rows;
  Vec t_nonneg = zero_vec(n + 1);
  t_nonneg[n] = -1;
  rows.push_back(t_nonneg);
  for (const auto& ineq : h.inequalities) {
    if (ineq.normal.size() != n)
      throw std::invalid_argument("dd_h_to_v: dimension mismatch");
    rows.push_back(concat(ineq.normal, Vec{-ineq.bound}));
  }
  detail::Cone cone = detail::cone_generators(rows, n + 1);
  VRep v{n, {}, {}};
  for (const auto& r : cone.rays) {
    Vec x(r.begin(), r.end() - 1);
    if (r[n] > 0)
      v.points.push_back(Rat(1) / r[n] * x);
    else
      v.directions.push_back(x);
  }
  for (const auto& l : cone.lineality) {
    Vec x(l.begin(), l.end() - 1);
    v.directions.push_back(x);
    v.directions.push_back(Rat(-1) * x);
  }
  if (v.points.empty()) v.directions.clear();
  return canonical(std::move(v));
}

/// H-representation of conv(points) + cone(directions). An empty VRep yields
/// the single infeasible inequality 0 <= -1.
inline HRep dd_v_to_h(const VRep& v) {
  const std::size_t n = v.dim;
  if (v.points.empty()) return HRep{n, {{zero_vec(n), Rat(-1)}}};
  std::vector<Vec> rows;
  for (const auto& p : v.points) rows.push_back(concat(p, Vec{Rat(-1)}));
  for (const auto& d : v.directions) rows.push_back(concat(d, Vec{Rat(0)}));
  detail::Cone cone = detail::cone_generators(rows, n + 1);
  HRep h{n, {}};
  auto add = [&](const Vec& r) {
    Vec normal(r.begin(), r.end() - 1);
    if (is_zero(normal)) return;
    h.inequalities.push_back({std::move(normal), r[n]});
  };
  for (const auto& r : cone.rays) add(r);
  for (const auto& l : cone.lineality) {
    add(l);
    add(Rat(-1) * l);
  }
  return canonical(std::move(h));
}

inline HRep intersect(const HRep& a, const HRep& b) {
  if (a.dim != b.dim) throw std::invalid_argument("intersect: dim mismatch");
  HRep r = a;
  r.inequalities.insert(r.inequalities.end(), b.inequalities.begin(),
                        b.inequalities.end());
  return r;
}

/// PCA generators from a bounded V-representation containing 0: the nonzero
/// points.
inline PcaPolytope pca_from_vrep(const VRep& v) {
  if (!v.bounded())
    throw std::invalid_argument("pca_from_vrep: unbounded polyhedron");
  PcaPolytope p{v.dim, {}};
  for (const auto& x : v.points)
    if (!is_zero(x)) p.generators.push_back(x);
  return p;
}

inline PcaPolytope intersect(const PcaPolytope& x, const PcaPolytope& y) {
  HRep h = intersect(dd_v_to_h(x.to_vrep()), dd_v_to_h(y.to_vrep()));
  return pca_from_vrep(dd_h_to_v(h));
}

// ---------------------------------------------------------------------------
// LP and gauge

/// A point satisfying every inequality, or nothing when infeasible. Solved by
/// Fourier-Motzkin; coordinates are fixed in index order at their largest
/// admissible value, which gives a vertex when the region is pointed.
inline std::optional<Vec> lp_feasible(const HRep& h) {
  return fm_feasible(h.inequalities, h.dim);
}

/// Minkowski functional inf{ t > 0 : x in tX }, computed as
/// min{ sum c_i : x = sum c_i g_i, c >= 0 }.
inline GaugeValue gauge(const PcaPolytope& x_set, const Vec& x) {
  if (x.size() != x_set.dim) throw std::invalid_argument("gauge: dim mismatch");
  if (is_zero(x)) return GaugeValue(Rat(0));
  if (x_set.generators.empty()) return GaugeValue::infinity();
  Mat g = Mat::from_columns(x_set.generators, x_set.dim);
  Vec ones(x_set.generators.size(), Rat(1));
  LpResult r = lp_minimize(g, x, ones);
  if (!r.optimal()) return GaugeValue::infinity();
  return GaugeValue(r.value);
}

// ---------------------------------------------------------------------------
// Restrictions of subspaces to cones and simplices

/// Equations <w, x> = 0 cutting out span(z) in Q^dim, as inequality pairs.
inline std::vector<Halfspace> subspace_equations(const std::vector<Vec>& z,
                                                 std::size_t dim) {
  std::vector<Vec> perp;
  if (z.empty()) {
    for (std::size_t i = 0; i < dim; ++i) perp.push_back(unit_vec(dim, i));
  } else {
    perp = kernel_basis(Mat::from_rows(z, dim));
  }
  std::vector<Halfspace> out;
  for (const auto& w : perp) {
    out.push_back({w, Rat(0)});
    out.push_back({Rat(-1) * w, Rat(0)});
  }
  return out;
}

inline std::vector<Halfspace> orthant(std::size_t dim) {
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec n = zero_vec(dim);
    n[i] = -1;
    out.push_back({n, Rat(0)});
  }
  return out;
}

/// Generators of span(z) intersected with the nonnegative orthant as a
/// convex cone: its extreme rays plus both signs of any lineality direction.
inline std::vector<Vec> cone_restriction(const std::vector<Vec>& z,
                                         std::size_t dim) {
  HRep h{dim, orthant(dim)};
  auto eqs = subspace_equations(z, dim);
  h.inequalities.insert(h.inequalities.end(), eqs.begin(), eqs.end());
  return dd_h_to_v(h).directions;
}

enum class SimplexBound {
  Product,  // x >= 0, first block sums to <= 1, second block sums to <= 1
  Scaled,   // x >= 0, total sum <= 2
};

/// span(z) intersected with the product of simplices (or with 2 * simplex),
/// as a finitely generated PCA given by the nonzero vertices.
inline PcaPolytope simplex_restriction(const std::vector<Vec>& z,
                                       SimplexBound bound, std::size_t n1,
                                       std::size_t n2) {
  const std::size_t dim = n1 + n2;
  for (const auto& v : z)
    if (v.size() != dim)
      throw std::invalid_argument("simplex_restriction: dimension mismatch");
  HRep h{dim, orthant(dim)};
  if (bound == SimplexBound::Product) {
    Vec first = zero_vec(dim), second = zero_vec(dim);
    for (std::size_t i = 0; i < n1; ++i) first[i] = 1;
    for (std::size_t i = n1; i < dim; ++i) second[i] = 1;
    h.inequalities.push_back({first, Rat(1)});
    h.inequalities.push_back({second, Rat(1)});
  } else {
    h.inequalities.push_back({Vec(dim, Rat(1)), Rat(2)});
  }
  auto eqs = subspace_equations(z, dim);
  h.inequalities.insert(h.inequalities.end(), eqs.begin(), eqs.end());
  return pca_from_vrep(dd_h_to_v(h));
}

// ---------------------------------------------------------------------------
// Text formats
//
//   hrep <dim>                    vrep <dim>              pca <dim>
//   ineq <a_1> ... <a_d> <b>      point <x_1> ... <x_d>   gen <x_1> ... <x_d>
//                                 direction <...>
//
// `ineq a b` means <a, x> <= b.

inline void write(std::ostream& os, const HRep& h) {
  os << "hrep " << h.dim << '\n';
  for (const auto& i : h.inequalities)
    os << "ineq " << to_string(concat(i.normal, Vec{i.bound})) << '\n';
}

inline void write(std::ostream& os, const VRep& v) {
  os << "vrep " << v.dim << '\n';
  for (const auto& p : v.points) os << "point " << to_string(p) << '\n';
  for (const auto& d : v.directions) os << "direction " << to_string(d) << '\n';
}

inline void write(std::ostream& os, const PcaPolytope& p) {
  os << "pca " << p.dim << '\n';
  for (const auto& g : p.generators) os << "gen " << to_string(g) << '\n';
}

struct PolytopeFile {
  enum class Kind { H, V, Pca } kind = Kind::H;
  HRep h;
  VRep v;
  PcaPolytope pca;
};

inline PolytopeFile read_polytope(std::istream& in, const std::string& file) {
  LineReader r(in, file);
  TokenLine head = r.expect("a 'hrep', 'vrep' or 'pca' header");
  if (head.tokens.size() != 2)
    throw r.error(head.number, "header must be '<kind> <dimension>'");
  const std::size_t dim = r.count(head, 1);
  PolytopeFile out;
  const std::string& kind = head.tokens[0];
  if (kind == "hrep") {
    out.kind = PolytopeFile::Kind::H;
    out.h.dim = dim;
  } else if (kind == "vrep") {
    out.kind = PolytopeFile::Kind::V;
    out.v.dim = dim;
  } else if (kind == "pca") {
    out.kind = PolytopeFile::Kind::Pca;
    out.pca.dim = dim;
  } else {
    throw r.error(head.number, "unknown polytope kind '" + kind + "'");
  }
  while (auto l = r.next()) {
    const std::string& key = l->tokens[0];
    if (out.kind == PolytopeFile::Kind::H && key == "ineq") {
      Vec row = r.vec(*l, 1, dim + 1);
      Rat b = row.back();
      row.pop_back();
      out.h.inequalities.push_back({std::move(row), b});
    } else if (out.kind == PolytopeFile::Kind::V && key == "point") {
      out.v.points.push_back(r.vec(*l, 1, dim));
    } else if (out.kind == PolytopeFile::Kind::V && key == "direction") {
      out.v.directions.push_back(r.vec(*l, 1, dim));
    } else if (out.kind == PolytopeFile::Kind::Pca && key == "gen") {
      Vec g = r.vec(*l, 1, dim);
      if (!is_nonnegative(g))
        throw r.error(l->number, "PCA generators must be nonnegative");
      out.pca.generators.push_back(std::move(g));
    } else {
      throw r.error(l->number, "unexpected line '" + key + "' in " + kind +
                                   " file");
    }
  }
  return out;
}

}  // namespace coalg
