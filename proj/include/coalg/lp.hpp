#pragma once

// Exact linear programming: two-phase primal simplex with Bland's rule on a
// dense rational tableau, and Fourier-Motzkin elimination for feasibility of
// small inequality systems.

#include "coalg/linalg.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace coalg {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rat value;
  Vec x;

  bool optimal() const { return status == Status::Optimal; }
};

namespace detail {

// Tableau rows 0..m-1 are constraints, row m is the reduced-cost row.
// Column `cols` holds the right-hand side (and minus the objective value).
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m + 1, n + 1) {}

  Rat& at(std::size_t i, std::size_t j) { return t_(i, j); }
  Rat& rhs(std::size_t i) { return t_(i, n_); }
  Rat& cost(std::size_t j) { return t_(m_, j); }

  void pivot(std::size_t r, std::size_t c) {
    Rat inv = 1 / t_(r, c);
    for (std::size_t j = 0; j <= n_; ++j) t_(r, j) *= inv;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || t_(i, c) == 0) continue;
      Rat f = t_(i, c);
      for (std::size_t j = 0; j <= n_; ++j)
        if (t_(r, j) != 0) t_(i, j) -= f * t_(r, j);
    }
    basis_[r] = c;
  }

  // Runs simplex iterations over columns [0, allowed). Returns false when
  // the objective is unbounded below.
  bool optimize(std::size_t allowed) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j)
        if (t_(m_, j) < 0) {
          enter = j;
          break;
        }
      if (enter == allowed) return true;
      std::size_t leave = m_;
      Rat best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_(i, enter) <= 0) continue;
        Rat ratio = t_(i, n_) / t_(i, enter);
        if (leave == m_ || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::vector<std::size_t> basis_;

 private:
  std::size_t m_, n_;
  Mat t_;
};

}  // namespace detail

/// Minimizes c.x subject to A x = b, x >= 0.
inline LpResult lp_minimize(const Mat& a, const Vec& b, const Vec& c) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("lp_minimize: size mismatch");

  // Columns: n structural, m artificial.
  detail::Tableau t(m, n + m);
  t.basis_.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    Rat sign = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * a(i, j);
    t.at(i, n + i) = 1;
    t.rhs(i) = sign * b[i];
    t.basis_[i] = n + i;
  }
  // Phase one: minimize the sum of artificials.
  for (std::size_t j = 0; j < n; ++j) {
    Rat s = 0;
    for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
    t.cost(j) = -s;
  }
  {
    Rat s = 0;
    for (std::size_t i = 0; i < m; ++i) s += t.rhs(i);
    t.rhs(m) = -s;
  }
  t.optimize(n + m);
  if (t.rhs(m) != 0) return {LpResult::Status::Infeasible, Rat(0), {}};

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and stay pinned at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis_[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (t.at(i, j) != 0) {
        t.pivot(i, j);
        break;
      }
  }

  // Phase two.
  for (std::size_t j = 0; j <= n + m; ++j) t.cost(j) = 0;
  for (std::size_t j = 0; j < n; ++j) t.cost(j) = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t bj = t.basis_[i];
    if (bj >= n || c[bj] == 0) continue;
    Rat f = c[bj];
    for (std::size_t j = 0; j <= n + m; ++j) t.cost(j) -= f * t.at(i, j);
  }
  // Artificial columns are excluded from entering.
  if (!t.optimize(n)) return {LpResult::Status::Unbounded, Rat(0), {}};

  Vec x = zero_vec(n);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis_[i] < n) x[t.basis_[i]] = t.rhs(i);
  return {LpResult::Status::Optimal, dot(c, x), x};
}

/// Some x >= 0 with A x = b, if one exists.
inline std::optional<Vec> lp_find_nonnegative(const Mat& a, const Vec& b) {
  LpResult r = lp_minimize(a, b, zero_vec(a.cols()));
  if (!r.optimal()) return std::nullopt;
  return r.x;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin

/// One inequality <normal, x> <= bound.
struct Halfspace {
  Vec normal;
  Rat bound;

  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

namespace detail {

// Scales so that the normal is primitive integral; a zero normal is left as
// is. Positive scaling preserves the inequality.
inline Halfspace normalize(const Halfspace& h) {
  if (is_zero(h.normal)) return h;
  Int den = 1;
  for (const auto& x : h.normal) den = lcm(den, x.get_den());
  Int g = 0;
  for (const auto& x : h.normal)
    g = gcd(g, Int(x.get_num() * (den / x.get_den())));
  Rat f = Rat(den) / Rat(g);
  return {f * h.normal, f * h.bound};
}

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Keeps the tightest bound per normal direction.
inline std::vector<Halfspace> simplify(const std::vector<Halfspace>& sys,
                                       bool& infeasible) {
  std::map<Vec, Rat, VecLess> tightest;
  infeasible = false;
  for (const auto& h0 : sys) {
    Halfspace h = normalize(h0);
    if (is_zero(h.normal)) {
      if (h.bound < 0) infeasible = true;
      continue;
    }
    auto it = tightest.find(h.normal);
    if (it == tightest.end())
      tightest.emplace(h.normal, h.bound);
    else if (h.bound < it->second)
      it->second = h.bound;
  }
  std::vector<Halfspace> out;
  for (auto& [n, b] : tightest) out.push_back({n, b});
  return out;
}

}  // namespace detail

/// Feasible point of { x : <normal, x> <= bound } by Fourier-Motzkin
/// elimination of x_{d-1}, ..., x_0 and back-substitution in the order
/// x_0, x_1, ...; each coordinate takes its largest admissible value, or
/// its smallest when unbounded above, or 0 when free.
inline std::optional<Vec> fm_feasible(const std::vector<Halfspace>& system,
                                      std::size_t dim) {
  for (const auto& h : system)
    if (h.normal.size() != dim)
      throw std::invalid_argument("fm_feasible: dimension mismatch");
  // stages[k] is the system over x_0..x_{k-1}.
  std::vector<std::vector<Halfspace>> stages(dim + 1);
  bool infeasible = false;
  stages[dim] = detail::simplify(system, infeasible);
  if (infeasible) return std::nullopt;
  for (std::size_t k = dim; k-- > 0;) {
    const auto& cur = stages[k + 1];
    // An equality pair on x_k lets us substitute instead of pairing.
    std::optional<Halfspace> eq;
    for (const auto& h : cur) {
      if (h.normal[k] == 0) continue;
      Halfspace neg{Rat(-1) * h.normal, -h.bound};
      for (const auto& g : cur)
        if (g == neg) {
          eq = h;
          break;
        }
      if (eq) break;
    }
    std::vector<Halfspace> next;
    if (eq) {
      for (const auto& h : cur) {
        if (h.normal[k] == 0) {
          next.push_back(h);
          continue;
        }
        Rat f = h.normal[k] / eq->normal[k];
        next.push_back({h.normal - f * eq->normal, h.bound - f * eq->bound});
      }
    } else {
      std::vector<const Halfspace*> pos, neg;
      for (const auto& h : cur) {
        if (h.normal[k] > 0)
          pos.push_back(&h);
        else if (h.normal[k] < 0)
          neg.push_back(&h);
        else
          next.push_back(h);
      }
      for (auto* p : pos)
        for (auto* q : neg) {
          Rat fp = -q->normal[k], fq = p->normal[k];
          next.push_back({fp * p->normal + fq * q->normal,
                          fp * p->bound + fq * q->bound});
        }
    }
    stages[k] = detail::simplify(next, infeasible);
    if (infeasible) return std::nullopt;
  }
  Vec x = zero_vec(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::optional<Rat> lo, hi;
    for (const auto& h : stages[k + 1]) {
      if (h.normal[k] == 0) continue;
      Rat rest = h.bound;
      for (std::size_t j = 0; j < k; ++j) rest -= h.normal[j] * x[j];
      Rat v = rest / h.normal[k];
      if (h.normal[k] > 0) {
        if (!hi || v < *hi) hi = v;
      } else {
        if (!lo || v > *lo) lo = v;
      }
    }
    if (lo && hi && *lo > *hi) return std::nullopt;  // cannot happen
    x[k] = hi ? *hi : (lo ? *lo : Rat(0));
  }
  return x;
}

}  // namespace coalg
