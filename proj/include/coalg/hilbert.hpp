#pragma once

// Hilbert bases of integer cones { x in Z^k : x W >= 0 } and the restriction
// of lattices and rational subspaces to the nonnegative orthant.
//
// The cone is first split along its lineality lattice { x : x W = 0 }. The
// pointed remainder is computed by completion: starting from the whole
// lattice, one halfspace at a time is imposed, and the generators on either
// side of the new hyperplane are closed under pairwise sums reduced modulo
// the generators already found (Pottier's algorithm).

#include "coalg/linalg.hpp"
#include "coalg/polyhedra.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace coalg {

/// Constraints x W >= 0 on x in Z^k; W is k x m and integral.
struct IntConeSpec {
  std::size_t k = 0;
  Mat w;

  bool contains(const Vec& x) const {
    for (std::size_t j = 0; j < w.cols(); ++j)
      if (dot(x, w.col(j)) < 0) return false;
    return true;
  }

  Vec values(const Vec& x) const {
    Vec v(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) v[j] = dot(x, w.col(j));
    return v;
  }
};

namespace detail {

inline Rat abs_sum(const Vec& v) {
  Rat s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

/// Graded-lexicographic order: by sum of absolute values, then descending
/// lexicographic (so e_1 precedes e_2).
inline bool graded_less(const Vec& a, const Vec& b) {
  Rat sa = abs_sum(a), sb = abs_sum(b);
  if (sa != sb) return sa < sb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

using IntVec = std::vector<Int>;

/// An element of the intermediate monoid together with its values under the
/// forms processed so far; the values determine it modulo the lineality.
struct DualElem {
  IntVec z;
  IntVec val;  // processed forms, then |sigma| for the current cut
  Int sigma;
};

inline Int idot(const IntVec& a, const Vec& form) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * form[i].get_num();
  return s;
}

inline bool all_le(const IntVec& a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool all_zero(const IntVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline Int total(const IntVec& a) {
  Int s = 0;
  for (const auto& x : a) s += x;
  return s;
}

/// One half of a cut: the elements on that side, kept sorted by degree so
/// that reduction only scans candidates no larger than the element.
class HalfMonoid {
 public:
  explicit HalfMonoid(int sign) : sign_(sign) {}

  // Half-side value vector: processed values, then sign * sigma.
  IntVec key(const DualElem& e) const {
    IntVec k = e.val;
    k.push_back(sign_ * e.sigma);
    return k;
  }

  /// Subtracts members while one lies below x; returns the remainder.
  DualElem reduce(DualElem x) const {
    for (bool changed = true; changed;) {
      changed = false;
      IntVec kx = key(x);
      Int dx = total(kx);
      for (const auto& [deg, idx] : order_) {
        if (deg > dx) break;
        const IntVec& ky = keys_[idx];
        if (!all_le(ky, kx)) continue;
        const DualElem& y = elems_[idx];
        for (std::size_t i = 0; i < x.z.size(); ++i) x.z[i] -= y.z[i];
        for (std::size_t i = 0; i < x.val.size(); ++i) x.val[i] -= y.val[i];
        x.sigma -= y.sigma;
        changed = true;
        break;
      }
    }
    return x;
  }

  bool is_zero(const DualElem& x) const { return all_zero(key(x)); }

  void add(const DualElem& e) {
    IntVec k = key(e);
    Int d = total(k);
    elems_.push_back(e);
    keys_.push_back(std::move(k));
    order_.insert({d, elems_.size() - 1});
  }

  const std::vector<DualElem>& elems() const { return elems_; }

  /// Members not lying above another member: the Hilbert basis of the half.
  std::vector<DualElem> minimal() const {
    std::vector<DualElem> out;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < elems_.size() && minimal; ++j)
        if (j != i && keys_[j] != keys_[i] && all_le(keys_[j], keys_[i])) minimal = false;
      for (std::size_t j = 0; j < i && minimal; ++j)
        if (keys_[j] == keys_[i]) minimal = false;
      if (minimal) out.push_back(elems_[i]);
    }
    return out;
  }

 private:
  int sign_;
  std::vector<DualElem> elems_;
  std::vector<IntVec> keys_;
  std::multiset<std::pair<Int, std::size_t>> order_;
};

/// Hilbert basis of the pointed monoid { z in Z^r : z B >= 0 }, B integral
/// and injective. The columns of B are imposed one at a time starting from
/// the group Z^r, tracking the lineality lattice separately.
inline std::vector<Vec> pointed_hilbert_basis(const Mat& b) {
  const std::size_t r = b.rows();
  if (r == 0) return {};
  std::vector<Vec> forms;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Vec c = b.col(j);
    if (!coalg::is_zero(c)) forms.push_back(primitive(c));
  }
  sort_unique(forms);

  std::vector<IntVec> lin;
  for (std::size_t i = 0; i < r; ++i) {
    IntVec e(r, 0);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<DualElem> basis;

  for (std::size_t processed = 0; processed < forms.size(); ++processed) {
    const Vec& form = forms[processed];
    // Unimodular change of the lineality basis concentrating the form on
    // a single vector.
    std::vector<Int> a;
    for (const auto& l : lin) a.push_back(idot(l, form));
    while (true) {
      std::size_t piv = a.size();
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != 0 && (piv == a.size() || abs(a[k]) < abs(a[piv]))) piv = k;
      if (piv == a.size()) break;
      bool others = false;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (k == piv || a[k] == 0) continue;
        Int q = a[k] / a[piv];
        for (std::size_t i = 0; i < r; ++i) lin[k][i] -= q * lin[piv][i];
        a[k] -= q * a[piv];
        others = others || a[k] != 0;
      }
      if (!others) break;
    }
    std::optional<DualElem> u;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == 0) continue;
      // Processed forms vanish on the lineality.
      DualElem e{lin[k], IntVec(processed, 0), a[k]};
      if (a[k] < 0) {
        for (auto& x : e.z) x = -x;
        e.sigma = -a[k];
      }
      u = std::move(e);
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }

    HalfMonoid pos(1), neg(-1);
    std::vector<std::size_t> pos_strict, neg_strict;
    std::vector<std::pair<std::size_t, std::size_t>> queue;
    auto insert = [&](const DualElem& e) {
      if (e.sigma >= 0) {
        pos.add(e);
        if (e.sigma > 0) {
          pos_strict.push_back(pos.elems().size() - 1);
          for (auto n : neg_strict) queue.push_back({pos.elems().size() - 1, n});
        }
      }
      if (e.sigma <= 0) {
        neg.add(e);
        if (e.sigma < 0) {
          neg_strict.push_back(neg.elems().size() - 1);
          for (auto p : pos_strict) queue.push_back({p, neg.elems().size() - 1});
        }
      }
    };
    for (auto& e : basis) {
      e.sigma = idot(e.z, form);
      insert(e);
    }
    if (u) {
      insert(*u);
      DualElem minus = *u;
      for (auto& x : minus.z) x = -x;
      minus.sigma = -minus.sigma;
      insert(minus);
    }
    while (!queue.empty()) {
      auto [pi, ni] = queue.back();
      queue.pop_back();
      const DualElem& p = pos.elems()[pi];
      const DualElem& n = neg.elems()[ni];
      DualElem c{p.z, p.val, p.sigma + n.sigma};
      for (std::size_t i = 0; i < r; ++i) c.z[i] += n.z[i];
      for (std::size_t i = 0; i < c.val.size(); ++i) c.val[i] += n.val[i];
      const HalfMonoid& side = c.sigma >= 0 ? pos : neg;
      DualElem rest = side.reduce(std::move(c));
      if (!side.is_zero(rest)) insert(rest);
    }

    basis = pos.minimal();
    for (auto& e : basis) e.val.push_back(e.sigma);
  }
  if (!lin.empty()) throw std::logic_error("pointed_hilbert_basis: cone is not pointed");

  std::vector<Vec> out;
  for (const auto& e : basis) {
    Vec z(r);
    for (std::size_t i = 0; i < r; ++i) z[i] = e.z[i];
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace detail

/// Minimal generating set of the monoid { x in Z^k : x W >= 0 }. Lineality
/// directions appear as +/- pairs of a lattice basis of { x : x W = 0 };
/// pointed generators are reduced modulo that lattice.
inline std::vector<Vec> hilbert_basis(const IntConeSpec& spec) {
  const std::size_t k = spec.k, m = spec.w.cols();
  if (spec.w.rows() != k)
    throw std::invalid_argument("hilbert_basis: W must have k rows");
  for (std::size_t i = 0; i < k; ++i)
    if (!is_integral(std::span<const Rat>(spec.w.row(i))))
      throw std::invalid_argument("hilbert_basis: W must be integral");

  // Unimodular row reduction of [W | I]: rows with nonzero W-part give a
  // basis of the value lattice with integer preimages, the others the kernel.
  std::vector<Vec> aug;
  for (std::size_t i = 0; i < k; ++i)
    aug.push_back(concat(spec.w.row(i), unit_vec(k, i)));
  Lattice h = hnf(aug, m + k);
  std::vector<Vec> values, preimages, kernel;
  for (const auto& row : h.basis) {
    Vec head(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
    Vec tail(row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
    if (is_zero(head)) {
      kernel.push_back(std::move(tail));
    } else {
      values.push_back(std::move(head));
      preimages.push_back(std::move(tail));
    }
  }
  Lattice lineality = hnf(kernel, k);

  std::vector<Vec> out;
  Mat b = Mat::from_rows(values, m);
  for (const auto& z : detail::pointed_hilbert_basis(b)) {
    Vec x = zero_vec(k);
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] != 0) x = x + z[i] * preimages[i];
    out.push_back(lineality.reduce(x));
  }
  for (const auto& l : lineality.basis) {
    out.push_back(l);
    out.push_back(Rat(-1) * l);
  }
  std::sort(out.begin(), out.end(), detail::graded_less);
  return out;
}

/// Generators of Z cap N^m as a commutative monoid, for a lattice Z in HNF.
inline std::vector<Vec> nat_restriction(const Lattice& z) {
  if (z.basis.empty()) return {};
  IntConeSpec spec{z.rank(), Mat::from_rows(z.basis, z.dim)};
  std::vector<Vec> out;
  for (const auto& c : hilbert_basis(spec)) {
    Vec x = zero_vec(z.dim);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) x = x + c[i] * z.basis[i];
    out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end(), detail::graded_less);
  return out;
}

/// Generators of span_Q(z) cap Q_+^m as a Q_+-semimodule: clear denominators
/// to get a lattice of full rank in the subspace, then take its N-restriction.
inline std::vector<Vec> qplus_restriction_by_scaling(const std::vector<Vec>& z,
                                                     std::size_t dim) {
  std::vector<Vec> rows;
  for (const auto& v : z) {
    if (v.size() != dim)
      throw std::invalid_argument("qplus_restriction: dimension mismatch");
    rows.push_back(clear_denominators(v));
  }
  return nat_restriction(hnf(rows, dim));
}

/// Test oracle: all cone points with |x_i| <= box whose value vector x W is
/// nonzero and componentwise minimal among nonzero value vectors of such
/// points. For pointed cones this is exactly the part of the Hilbert basis
/// inside the box.
inline std::vector<Vec> hilbert_bruteforce_oracle(const IntConeSpec& spec,
                                                  long box) {
  if (box < 1) throw std::invalid_argument("oracle: box must be >= 1");
  const std::size_t k = spec.k;
  std::vector<Vec> points;
  std::vector<long> x(k, -box);
  if (k == 0) return {};
  while (true) {
    Vec v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = x[i];
    if (spec.contains(v) && !is_zero(spec.values(v))) points.push_back(v);
    std::size_t i = 0;
    while (i < k) {
      if (++x[i] <= box) break;
      x[i] = -box;
      ++i;
    }
    if (i == k) break;
  }
  std::vector<Vec> vals;
  for (const auto& p : points) vals.push_back(spec.values(p));
  auto le = [](const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > b[i]) return false;
    return true;
  };
  std::vector<Vec> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < points.size() && minimal; ++j)
      if (vals[j] != vals[i] && le(vals[j], vals[i])) minimal = false;
    if (minimal) out.push_back(points[i]);
  }
  std::sort(out.begin(), out.end(), detail::graded_less);
  return out;
}

/// Whether `target` is a sum of elements of `generators` (repetition
/// allowed). Generators and target must be nonnegative integral vectors;
/// the search is exhaustive with memoization of failed remainders.
inline bool in_nat_span(const std::vector<Vec>& generators, const Vec& target) {
  if (!is_integral(std::span<const Rat>(target)) || !is_nonnegative(target))
    return false;
  std::vector<Vec> gens;
  for (const auto& g : generators) {
    if (!is_integral(std::span<const Rat>(g)) || !is_nonnegative(g))
      throw std::invalid_argument("in_nat_span: generators must lie in N^m");
    if (!is_zero(g)) gens.push_back(g);
  }
  std::set<Vec, detail::LexLess> failed;
  std::function<bool(const Vec&)> rec = [&](const Vec& v) -> bool {
    if (is_zero(v)) return true;
    if (failed.count(v)) return false;
    std::size_t i = 0;
    while (v[i] == 0) ++i;
    // Some generator with a positive i-th entry must be used.
    for (const auto& g : gens) {
      if (g[i] == 0) continue;
      bool fits = true;
      for (std::size_t j = 0; j < v.size() && fits; ++j)
        if (g[j] > v[j]) fits = false;
      if (fits && rec(v - g)) return true;
    }
    failed.insert(v);
    return false;
  };
  return rec(target);
}

}  // namespace coalg
