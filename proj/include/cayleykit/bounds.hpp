#pragma once

// Explicit bound formulas for degree-d lattice polytopes, evaluated exactly
// or by a certified decimal digit count.

#include "cayleykit/arith.hpp"
#include "cayleykit/ehrhart.hpp"
#include "cayleykit/polytope.hpp"

#include <mpfr.h>

#include <cstddef>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cayleykit {

/// (d^2 + 19d - 4) / 2; the formula is negative at d = 0, where the value is
/// clamped to 0 (degree-0 polytopes are unimodular simplices).
inline Integer cayley_bound(std::size_t d) {
  if (d == 0) return 0;
  Integer dd = static_cast<unsigned long>(d);
  return (dd * dd + 19 * dd - 4) / 2;
}

/// An exact value would exceed the decimal digit budget.
class DigitBudgetExceeded : public std::length_error {
 public:
  DigitBudgetExceeded(const Integer& digits, const Integer& budget)
      : std::length_error("value has " + digits.get_str() + " decimal digits, budget is " + budget.get_str()),
        digits(digits) {}
  Integer digits;
};

inline constexpr unsigned long default_digit_budget = 10'000'000;

/// CAYLEYKIT_DIGIT_BUDGET when set to a positive integer, else 10^7.
inline Integer digit_budget() {
  if (const char* s = std::getenv("CAYLEYKIT_DIGIT_BUDGET")) {
    Integer b;
    if (b.set_str(s, 10) == 0 && b > 0) return b;
  }
  return default_digit_budget;
}

/// prod base_i ^ exponent_i with positive bases and nonnegative exponents.
struct PowerProduct {
  std::vector<std::pair<Integer, Integer>> factors;

  PowerProduct& times(const Integer& base, const Integer& exponent = 1) {
    if (base <= 0 || exponent < 0) throw std::invalid_argument("power product needs positive bases");
    if (base != 1 && exponent != 0) factors.emplace_back(base, exponent);
    return *this;
  }
  PowerProduct& times(const PowerProduct& o) {
    factors.insert(factors.end(), o.factors.begin(), o.factors.end());
    return *this;
  }
};

namespace detail {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

// Encloses log10 of the product in [lo, hi] using directed rounding.
inline void log10_enclosure(const PowerProduct& p, mpfr_prec_t prec, mpfr_t lo, mpfr_t hi) {
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  Mpfr b(prec), t(prec);
  for (const auto& [base, e] : p.factors) {
    mpfr_set_z(b.v, base.get_mpz_t(), MPFR_RNDD);
    mpfr_log10(t.v, b.v, MPFR_RNDD);
    mpfr_mul_z(t.v, t.v, e.get_mpz_t(), MPFR_RNDD);
    mpfr_add(lo, lo, t.v, MPFR_RNDD);
    mpfr_set_z(b.v, base.get_mpz_t(), MPFR_RNDU);
    mpfr_log10(t.v, b.v, MPFR_RNDU);
    mpfr_mul_z(t.v, t.v, e.get_mpz_t(), MPFR_RNDU);
    mpfr_add(hi, hi, t.v, MPFR_RNDU);
  }
}

inline mpfr_prec_t start_precision(const PowerProduct& p) {
  std::size_t bits = 64;
  for (const auto& [base, e] : p.factors) bits = std::max(bits, mpz_sizeinbase(e.get_mpz_t(), 2) + 64);
  return static_cast<mpfr_prec_t>(bits);
}

inline Integer floor_of(const mpfr_t x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDD);
  return z;
}

inline constexpr mpfr_prec_t max_precision = 1 << 16;

inline Integer exact_digits(const Integer& v) {
  if (v == 0) return 1;
  std::size_t s = mpz_sizeinbase(v.get_mpz_t(), 10);  // exact or one too large
  Integer ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, s - 1);
  return static_cast<unsigned long>(abs(v) < ten ? s - 1 : s);
}

}  // namespace detail

/// Exact product; refuses when its digit count exceeds the budget.
inline Integer evaluate(const PowerProduct& p, const Integer& budget);

/// Number of decimal digits, floor(log10 v) + 1, certified by interval
/// arithmetic. Ties at an exact power of ten fall back to exact evaluation.
inline Integer digit_count(const PowerProduct& p) {
  if (p.factors.empty()) return 1;
  for (mpfr_prec_t prec = detail::start_precision(p); prec <= detail::max_precision; prec *= 2) {
    detail::Mpfr lo(prec), hi(prec);
    detail::log10_enclosure(p, prec, lo.v, hi.v);
    Integer a = detail::floor_of(lo.v), b = detail::floor_of(hi.v);
    if (a == b) return a + 1;
  }
  return detail::exact_digits(evaluate(p, digit_budget()));
}

inline Integer evaluate(const PowerProduct& p, const Integer& budget) {
  if (p.factors.empty()) return 1;
  // cheap upper estimate before the certified count
  detail::Mpfr lo(64), hi(64);
  detail::log10_enclosure(p, 64, lo.v, hi.v);
  Integer upper = detail::floor_of(hi.v) + 1;
  if (upper > budget) {
    Integer lower = detail::floor_of(lo.v) + 1;
    if (lower > budget) throw DigitBudgetExceeded(lower, budget);
  }
  Integer out = 1;
  for (const auto& [base, e] : p.factors) {
    if (!e.fits_ulong_p()) throw DigitBudgetExceeded(upper, budget);
    Integer t;
    mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), e.get_ui());
    out *= t;
  }
  return out;
}

inline Integer evaluate(const PowerProduct& p) { return evaluate(p, digit_budget()); }

/// Compares two products: negative, zero or positive as a <=> b. Logarithm
/// enclosures decide first; exact comparison is the fallback.
inline int compare(const PowerProduct& a, const PowerProduct& b) {
  mpfr_prec_t prec = std::max(detail::start_precision(a), detail::start_precision(b));
  for (; prec <= detail::max_precision; prec *= 2) {
    detail::Mpfr alo(prec), ahi(prec), blo(prec), bhi(prec);
    detail::log10_enclosure(a, prec, alo.v, ahi.v);
    detail::log10_enclosure(b, prec, blo.v, bhi.v);
    if (mpfr_less_p(ahi.v, blo.v)) return -1;
    if (mpfr_less_p(bhi.v, alo.v)) return 1;
  }
  return cmp(evaluate(a), evaluate(b));
}

/// The smaller of the two arguments of a min(...), with the branch index.
struct MinBranch {
  PowerProduct value;
  std::size_t branch = 0;
};

inline MinBranch select_min(const PowerProduct& a, const PowerProduct& b) {
  if (compare(a, b) <= 0) return {a, 0};
  return {b, 1};
}

/// A bound expression after branch selection.
struct BoundExpression {
  PowerProduct product;
  std::size_t branch = 0;
};

/// N^N (N!)^{N+1} k^N min((7(k+1))^{N^2 2^{N+1}}, (8N)^{N^2} 15^{N^2 2^{2N+1}})
/// with N = cayley_bound(d).
inline BoundExpression volume_bound_expression(std::size_t d, const Integer& k) {
  if (d < 1 || k < 1) throw std::invalid_argument("volume bound needs d >= 1 and k >= 1");
  const Integer n = cayley_bound(d);
  const unsigned long nu = n.get_ui();
  Integer n2 = n * n;
  Integer two_n1, two_2n1;
  mpz_ui_pow_ui(two_n1.get_mpz_t(), 2, nu + 1);
  mpz_ui_pow_ui(two_2n1.get_mpz_t(), 2, 2 * nu + 1);
  PowerProduct a, b;
  a.times(7 * (k + 1), n2 * two_n1);
  b.times(8 * n, n2).times(15, n2 * two_2n1);
  auto m = select_min(a, b);
  PowerProduct out;
  out.times(n, n).times(factorial(nu), n + 1).times(k, n).times(m.value);
  return {out, m.branch};
}

/// q q! min(k (7(k+1))^{q 2^{q+1}}, k (8q)^q 15^{q 2^{2q+1}})
inline BoundExpression lz_cube_constant_expression(std::size_t q, const Integer& k) {
  if (q < 1 || k < 1) throw std::invalid_argument("cube constant needs q >= 1 and k >= 1");
  const Integer qq = static_cast<unsigned long>(q);
  Integer two_q1, two_2q1;
  mpz_ui_pow_ui(two_q1.get_mpz_t(), 2, q + 1);
  mpz_ui_pow_ui(two_2q1.get_mpz_t(), 2, 2 * q + 1);
  PowerProduct a, b;
  a.times(k).times(7 * (k + 1), qq * two_q1);
  b.times(k).times(8 * qq, qq).times(15, qq * two_2q1);
  auto m = select_min(a, b);
  PowerProduct out;
  out.times(qq).times(factorial(q)).times(m.value);
  return {out, m.branch};
}

/// (2d-1)^{2d-1} ((2d-1)!)^{2d} 14^{(2d-1)^2 2^{2d}}
inline BoundExpression gorenstein_volume_bound_expression(std::size_t d) {
  if (d < 1) throw std::invalid_argument("Gorenstein volume bound needs d >= 1");
  const unsigned long m = 2 * d - 1;
  Integer two_2d;
  mpz_ui_pow_ui(two_2d.get_mpz_t(), 2, 2 * d);
  PowerProduct out;
  out.times(m, m).times(factorial(m), 2 * d).times(14, Integer(m) * m * two_2d);
  return {out, 0};
}

inline Integer volume_bound(std::size_t d, const Integer& k) { return evaluate(volume_bound_expression(d, k).product); }
inline Integer volume_bound_digits(std::size_t d, const Integer& k) {
  return digit_count(volume_bound_expression(d, k).product);
}
inline Integer lz_cube_constant(std::size_t q, const Integer& k) {
  return evaluate(lz_cube_constant_expression(q, k).product);
}
inline Integer gorenstein_volume_bound(std::size_t d) { return evaluate(gorenstein_volume_bound_expression(d).product); }
inline Integer gorenstein_volume_bound_digits(std::size_t d) {
  return digit_count(gorenstein_volume_bound_expression(d).product);
}

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "skipped";
  }
}

struct BoundVerdict {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string note;
};

struct BoundReport {
  std::size_t d = 0;
  Integer k = 0;
  std::size_t n = 0;
  Integer N = 0;
  Integer cayley_bound_value = 0;
  Integer volume_bound_digits = 0;             // 0 when not applicable
  std::optional<std::size_t> volume_bound_branch;
  std::optional<Integer> C_value;              // lz_cube_constant(q, k) for the achieved q
  std::optional<std::size_t> q;
  Integer volume = 0;
  std::vector<BoundVerdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (v.status == CheckStatus::fail) return false;
    return true;
  }
};

namespace detail {

// value <= bound, deciding by digit counts before any exact evaluation.
inline bool at_most(const Integer& value, const PowerProduct& bound) {
  Integer vd = exact_digits(value);
  Integer bd = digit_count(bound);
  if (vd < bd) return true;
  if (vd > bd) return false;
  return value <= evaluate(bound);
}

}  // namespace detail

/// Checks Vol against the volume bound (and the Gorenstein volume bound for
/// Gorenstein input) and, when q is given, q against cayley_bound(d).
inline BoundReport check_volume_bound(const LatticePolytope& p, std::optional<std::size_t> q = std::nullopt,
                                      std::optional<HStarData> hstar = std::nullopt) {
  const HStarData h = hstar ? *hstar : h_star(p);
  BoundReport r;
  r.d = h.degree;
  r.k = h.leading;
  r.n = h.dim;
  r.N = cayley_bound(r.d);
  r.cayley_bound_value = r.N;
  r.volume = h.normalized_volume;
  r.q = q;
  if (q) {
    bool ok = Integer(static_cast<unsigned long>(*q)) <= r.cayley_bound_value;
    r.verdicts.push_back({"q <= cayley_bound(d)", ok ? CheckStatus::pass : CheckStatus::fail, {}});
    if (*q >= 1) {
      try {
        r.C_value = lz_cube_constant(*q, r.k);
      } catch (const DigitBudgetExceeded&) {
      }
    }
  }
  if (r.d == 0) {
    r.verdicts.push_back({"Vol <= volume_bound(d,k)", CheckStatus::skipped, "degree 0: bound formula undefined, Vol = 1"});
    return r;
  }
  auto vb = volume_bound_expression(r.d, r.k);
  r.volume_bound_branch = vb.branch;
  r.volume_bound_digits = digit_count(vb.product);
  r.verdicts.push_back(
      {"Vol <= volume_bound(d,k)", detail::at_most(r.volume, vb.product) ? CheckStatus::pass : CheckStatus::fail, {}});
  if (h.gorenstein) {
    auto gb = gorenstein_volume_bound_expression(r.d);
    r.verdicts.push_back({"Vol <= gorenstein_volume_bound(d)",
                          detail::at_most(r.volume, gb.product) ? CheckStatus::pass : CheckStatus::fail, {}});
  }
  return r;
}

}  // namespace cayleykit
