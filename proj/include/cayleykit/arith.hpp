#pragma once

// Exact integer and rational scalars used throughout the library.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cayleykit {

using Integer = mpz_class;
using Rational = mpq_class;

/// A point of the integer lattice. Length is the ambient dimension.
using LatticeVector = std::vector<Integer>;
/// A point with exact rational coordinates; entries are kept canonical.
using RationalVector = std::vector<Rational>;

inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// Extended gcd: returns g >= 0 and sets x, y with x*a + y*b == g.
inline Integer gcdext(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer vector_gcd(const LatticeVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline bool is_primitive(const LatticeVector& v) { return vector_gcd(v) == 1; }

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
inline LatticeVector make_primitive(LatticeVector v) {
  Integer g = vector_gcd(v);
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

inline Integer dot(const LatticeVector& a, const LatticeVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline LatticeVector add(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline LatticeVector sub(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline LatticeVector scale(const LatticeVector& a, const Integer& m) {
  LatticeVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * m;
  return r;
}

inline LatticeVector lattice_vector(std::initializer_list<long> xs) {
  LatticeVector v;
  v.reserve(xs.size());
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline LatticeVector unit_vector(std::size_t dim, std::size_t i) {
  LatticeVector v(dim, Integer(0));
  v[i] = 1;
  return v;
}

inline RationalVector to_rational(const LatticeVector& v) {
  return RationalVector(v.begin(), v.end());
}

/// Checked narrowing used by the enumeration hot loops.
inline std::int64_t to_int64(const Integer& x) {
  if (!mpz_fits_slong_p(x.get_mpz_t()))
    throw std::overflow_error("integer " + x.get_str() + " does not fit in 64 bits");
  return static_cast<std::int64_t>(x.get_si());
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline std::string to_string(const LatticeVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace cayleykit
