#pragma once

// Dense exact linear algebra over Q and Z: echelon forms, kernels, linear
// solves, Hermite normal forms of integer lattices and the smallest
// submodule closed under a family of linear maps.

#include "coalg/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coalg {

using Vec = std::vector<Rat>;

inline Vec zero_vec(std::size_t n) { return Vec(n, Rat(0)); }

inline Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v = zero_vec(n);
  v[i] = 1;
  return v;
}

inline bool is_zero(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

inline bool is_integral(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Rat& x) { return is_integral(x); });
}

inline bool is_nonnegative(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x >= 0; });
}

inline Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat sum(std::span<const Rat> v) {
  Rat s = 0;
  for (const auto& x : v) s += x;
  return s;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(const Rat& s, const Vec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Positive multiple of `v` with coprime integer entries (zero stays zero).
inline Vec primitive(const Vec& v) {
  Int den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  Int g = 0;
  for (const auto& x : v) g = gcd(g, Int(x.get_num() * (den / x.get_den())));
  if (g == 0) return v;
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = Rat(Int(v[i].get_num() * (den / v[i].get_den()) / g));
  return r;
}

inline std::string to_string(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += to_string(v[i]);
  }
  return s;
}

/// Dense row-major rational matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw std::invalid_argument("Mat::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Mat from_columns(const std::vector<Vec>& columns, std::size_t rows) {
    return from_rows(columns, rows).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vec row(std::size_t i) const {
    return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
               data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vec col(std::size_t j) const {
    Vec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<Vec> row_list() const {
    std::vector<Vec> r;
    for (std::size_t i = 0; i < rows_; ++i) r.push_back(row(i));
    return r;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Rat& x) { return x == 0; });
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

inline Vec operator*(const Mat& m, const Vec& v) {
  if (m.cols() != v.size())
    throw std::invalid_argument("matrix-vector product: size mismatch");
  Vec r = zero_vec(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

inline Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matrix product: size mismatch");
  Mat r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

/// Block-diagonal matrix diag(a, b).
inline Mat block_diag(const Mat& a, const Mat& b) {
  Mat r(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

inline std::string to_string(const Mat& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) os << to_string(m.row(i)) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Echelon forms, kernels, solves

struct Rref {
  Mat reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

inline Rref rref(Mat m) {
  Rref out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Rat inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = out.pivots.size();
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const Mat& m) { return rref(m).rank; }

inline std::size_t rank(const std::vector<Vec>& vectors, std::size_t dim) {
  return rref(Mat::from_rows(vectors, dim)).rank;
}

/// Basis of {x : Mx = 0}, one vector per free column.
inline std::vector<Vec> kernel_basis(const Mat& m) {
  Rref r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec x = zero_vec(m.cols());
    x[f] = 1;
    for (std::size_t i = 0; i < r.rank; ++i) x[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Some x with Mx = b (free variables set to zero), or nothing.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: size mismatch");
  Mat aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Rref r = rref(aug);
  if (!r.pivots.empty() && r.pivots.back() == m.cols()) return std::nullopt;
  Vec x = zero_vec(m.cols());
  for (std::size_t i = 0; i < r.rank; ++i)
    x[r.pivots[i]] = r.reduced(i, m.cols());
  return x;
}

/// Coefficients expressing `v` in terms of `generators`, if it lies in their
/// span. Unique when the generators are linearly independent.
inline std::optional<Vec> coordinates(const std::vector<Vec>& generators,
                                      const Vec& v) {
  return solve(Mat::from_columns(generators, v.size()), v);
}

inline bool in_span(const std::vector<Vec>& generators, const Vec& v) {
  if (generators.empty()) return is_zero(v);
  return coordinates(generators, v).has_value();
}

inline bool linearly_independent(const std::vector<Vec>& vectors,
                                 std::size_t dim) {
  return vectors.empty() || rank(vectors, dim) == vectors.size();
}

// ---------------------------------------------------------------------------
// Integer lattices

/// Sublattice of Z^dim given by a basis in row-style Hermite normal form:
/// leading entries positive, strictly increasing pivot columns, entries above
/// each pivot reduced into [0, pivot).
struct Lattice {
  std::size_t dim = 0;
  std::vector<Vec> basis;

  std::size_t rank() const { return basis.size(); }

  std::size_t pivot_column(std::size_t i) const {
    const Vec& r = basis[i];
    std::size_t c = 0;
    while (r[c] == 0) ++c;
    return c;
  }

  /// Reduces `v` modulo the lattice; the result is zero iff v is a member.
  Vec reduce(Vec v) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::size_t c = pivot_column(i);
      Int q = floor_int(v[c] / basis[i][c]);
      if (q != 0) v = v - Rat(q) * basis[i];
    }
    return v;
  }

  bool contains(const Vec& v) const {
    if (v.size() != dim) throw std::invalid_argument("lattice: dim mismatch");
    if (!is_integral(std::span<const Rat>(v))) return false;
    return is_zero(reduce(v));
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;
};

/// Hermite normal form of the integer row span of `rows`.
inline Lattice hnf(std::vector<Vec> rows, std::size_t dim) {
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("hnf: dimension mismatch");
    if (!is_integral(std::span<const Rat>(r)))
      throw std::invalid_argument("hnf: non-integral entry");
  }
  std::vector<std::vector<Int>> a;
  for (const auto& r : rows) {
    std::vector<Int> z(dim);
    for (std::size_t j = 0; j < dim; ++j) z[j] = r[j].get_num();
    a.push_back(std::move(z));
  }
  std::size_t top = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t col = 0; col < dim && top < a.size(); ++col) {
    // Euclid on column entries below `top` until one nonzero remains.
    while (true) {
      std::size_t best = a.size();
      for (std::size_t i = top; i < a.size(); ++i)
        if (a[i][col] != 0 &&
            (best == a.size() || abs(a[i][col]) < abs(a[best][col])))
          best = i;
      if (best == a.size()) break;
      std::swap(a[top], a[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < a.size(); ++i) {
        if (a[i][col] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(),
                   a[top][col].get_mpz_t());
        for (std::size_t j = col; j < dim; ++j) a[i][j] -= q * a[top][j];
        if (a[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (a[top][col] == 0) continue;
    if (a[top][col] < 0)
      for (std::size_t j = col; j < dim; ++j) a[top][j] = -a[top][j];
    for (std::size_t i = 0; i < top; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[top][col].get_mpz_t());
      if (q != 0)
        for (std::size_t j = col; j < dim; ++j) a[i][j] -= q * a[top][j];
    }
    pivot_cols.push_back(col);
    ++top;
  }
  Lattice lat;
  lat.dim = dim;
  for (std::size_t i = 0; i < top; ++i) {
    Vec r(dim);
    for (std::size_t j = 0; j < dim; ++j) r[j] = Rat(a[i][j]);
    lat.basis.push_back(std::move(r));
  }
  return lat;
}

/// Basis of the integer kernel {x in Z^k : x W = 0} for an integral k x m
/// matrix W, in Hermite normal form.
inline Lattice integer_left_kernel(const Mat& w) {
  std::size_t k = w.rows(), m = w.cols();
  std::vector<Vec> aug;
  for (std::size_t i = 0; i < k; ++i) {
    Vec r = w.row(i);
    Vec e = unit_vec(k, i);
    aug.push_back(concat(r, e));
  }
  Lattice h = hnf(aug, m + k);
  std::vector<Vec> ker;
  for (const auto& r : h.basis) {
    if (!is_zero(std::span<const Rat>(r).first(m))) continue;
    ker.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(m), r.end());
  }
  return hnf(ker, k);
}

/// Smallest positive integer multiple of `v` with integral entries.
inline Vec clear_denominators(const Vec& v) {
  Int den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  return Rat(den) * v;
}

// ---------------------------------------------------------------------------
// Closure under linear maps

enum class Ring { Z, Q };

/// Generating set of the smallest Z- or Q-submodule containing `start` and
/// closed under every map. Over Q the result is a linearly independent list
/// in discovery order (start first); over Z it is an HNF basis.
inline std::vector<Vec> closure_under_maps(const Vec& start,
                                           const std::vector<Mat>& maps,
                                           Ring ring) {
  const std::size_t n = start.size();
  for (const auto& m : maps)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("closure_under_maps: map dimension mismatch");
  if (is_zero(start)) return {};

  if (ring == Ring::Q) {
    std::vector<Vec> basis{start};
    for (std::size_t next = 0; next < basis.size(); ++next) {
      for (const auto& m : maps) {
        Vec w = m * basis[next];
        if (!in_span(basis, w)) basis.push_back(std::move(w));
      }
    }
    return basis;
  }

  if (!is_integral(std::span<const Rat>(start)))
    throw std::invalid_argument("closure_under_maps: non-integral start over Z");
  for (const auto& m : maps)
    for (std::size_t i = 0; i < n; ++i)
      if (!is_integral(std::span<const Rat>(m.row(i))))
        throw std::invalid_argument(
            "closure_under_maps: non-integral map over Z");

  // Ascending chain of lattices; stops when the HNF no longer changes.
  Lattice current = hnf({start}, n);
  while (true) {
    std::vector<Vec> rows = current.basis;
    for (const auto& b : current.basis)
      for (const auto& m : maps) rows.push_back(m * b);
    Lattice next = hnf(rows, n);
    if (next == current) return current.basis;
    current = std::move(next);
  }
}

}  // namespace coalg
