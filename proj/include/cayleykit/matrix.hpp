#pragma once

// Small dense exact matrices: rational inversion, Bareiss determinants and
// unimodular column reduction over the integers.

#include "cayleykit/arith.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cayleykit {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds a matrix whose rows are the given vectors.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
  }

  /// Builds a matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix/vector size mismatch");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product size mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

/// Returns the integer matrix equal to `m`, or nullopt if some entry is fractional.
inline std::optional<IntegerMatrix> to_integer(const RationalMatrix& m) {
  IntegerMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) return std::nullopt;
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

/// Row echelon form by Gauss elimination over Q. Returns the rank and the
/// pivot columns in order.
inline std::pair<std::size_t, std::vector<std::size_t>> row_echelon(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {r, pivots};
}

inline std::size_t rank(RationalMatrix m) { return row_echelon(m).first; }
inline std::size_t rank(const IntegerMatrix& m) { return rank(to_rational(m)); }

/// Rank of a set of integer vectors of common length `dim`.
inline std::size_t rank_of(const std::vector<LatticeVector>& vs, std::size_t dim) {
  if (vs.empty() || dim == 0) return 0;
  return rank(IntegerMatrix::from_rows(vs, dim));
}

/// Gauss-Jordan inverse over Q; nullopt when singular.
inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RationalMatrix m = a;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    m.swap_rows(p, c);
    inv.swap_rows(p, c);
    Rational piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Fraction-free Bareiss determinant.
inline Integer determinant(IntegerMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Inverse of a unimodular integer matrix; throws when |det| != 1.
inline IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
  auto inv = inverse(to_rational(m));
  if (!inv) throw std::domain_error("matrix is singular");
  auto r = to_integer(*inv);
  if (!r) throw std::domain_error("matrix is not unimodular");
  return *r;
}

struct ColumnEchelon {
  IntegerMatrix reduced;     // A * transform
  IntegerMatrix transform;   // unimodular, cols x cols
  std::size_t rank = 0;      // the first `rank` columns of `reduced` are nonzero
};

/// Unimodular column reduction: finds U with det U = +-1 such that A*U has
/// all nonzero columns first (lower echelon). The trailing cols-rank columns
/// of U form a basis of the integer kernel of A, and the leading `rank`
/// rows of U^{-1} form a basis of the saturated lattice spanned by A's rows.
inline ColumnEchelon column_echelon(const IntegerMatrix& a) {
  ColumnEchelon out{a, IntegerMatrix::identity(a.cols()), 0};
  IntegerMatrix& h = out.reduced;
  IntegerMatrix& u = out.transform;
  const std::size_t cols = a.cols();
  auto combine = [&](IntegerMatrix& m, std::size_t i, std::size_t j, const Integer& x,
                     const Integer& y, const Integer& p, const Integer& q) {
    // (col_i, col_j) <- (x col_i + y col_j, p col_i + q col_j)
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Integer ci = m(r, i), cj = m(r, j);
      m(r, i) = x * ci + y * cj;
      m(r, j) = p * ci + q * cj;
    }
  };
  std::size_t c = 0;
  for (std::size_t row = 0; row < h.rows() && c < cols; ++row) {
    for (std::size_t j = c + 1; j < cols; ++j) {
      if (h(row, j) == 0) continue;
      Integer av = h(row, c), bv = h(row, j), x, y;
      Integer g = gcdext(av, bv, x, y);
      Integer p = -bv / g, q = av / g;
      combine(h, c, j, x, y, p, q);
      combine(u, c, j, x, y, p, q);
    }
    if (h(row, c) != 0) {
      if (h(row, c) < 0) {
        for (std::size_t r = 0; r < h.rows(); ++r) h(r, c) = -h(r, c);
        for (std::size_t r = 0; r < u.rows(); ++r) u(r, c) = -u(r, c);
      }
      ++c;
    }
  }
  out.rank = c;
  return out;
}

/// Basis (as columns) of { x in Z^cols : A x = 0 }.
inline std::vector<LatticeVector> integer_kernel(const IntegerMatrix& a) {
  auto ce = column_echelon(a);
  std::vector<LatticeVector> basis;
  for (std::size_t j = ce.rank; j < a.cols(); ++j) basis.push_back(ce.transform.column(j));
  return basis;
}

}  // namespace cayleykit
