#pragma once

// Exact scalars. Every value in the library is an arbitrary-precision
// rational in canonical form (positive denominator, coprime parts).

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coalg {

using Int = mpz_class;
using Rat = mpq_class;

/// Parses a rational literal: optional sign, digits, optionally "/" and a
/// positive denominator ("3", "-1/2", "+4/6"). No whitespace, no decimals.
inline Rat parse_rat(std::string_view text) {
  auto fail = [&] {
    return std::invalid_argument("invalid rational literal '" +
                                 std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[end])))
      ++end;
    return end;
  };
  std::size_t num_end = digits(pos);
  if (num_end == pos) throw fail();
  Int num(std::string(text.substr(pos, num_end - pos)), 10);
  Int den = 1;
  if (num_end < text.size()) {
    if (text[num_end] != '/') throw fail();
    std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1 || den_end != text.size()) throw fail();
    den = Int(std::string(text.substr(num_end + 1)), 10);
    if (den == 0) throw fail();
  }
  Rat r(negative ? Int(-num) : num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline bool is_integral(const Rat& r) { return r.get_den() == 1; }

inline Int floor_int(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Fractional part in [0, 1).
inline Rat frac(const Rat& r) { return r - Rat(floor_int(r)); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

}  // namespace coalg
