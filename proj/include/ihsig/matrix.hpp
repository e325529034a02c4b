#ifndef IHSIG_MATRIX_HPP
#define IHSIG_MATRIX_HPP

#include <ihsig/rational.hpp>

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ihsig {

/**
 * Dense row-major matrix over the rationals.
 *
 * Zero-sized shapes are legal and common: a map out of (or into) a zero
 * vector space is an r x 0 (or 0 x c) matrix.
 */
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  static Matrix column_vector(const Vector& v) { return from_columns(v.size(), {v}); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<const Rational> entries() const { return data_; }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  Vector row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  std::vector<Vector> columns() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_symmetric() const { return is_square() && *this == transpose(); }

  Matrix select_columns(const std::vector<std::size_t>& which) const {
    Matrix m(rows_, which.size());
    for (std::size_t k = 0; k < which.size(); ++k)
      for (std::size_t r = 0; r < rows_; ++r) m(r, k) = (*this)(r, which[k]);
    return m;
  }

  Matrix select_rows(const std::vector<std::size_t>& which) const {
    Matrix m(which.size(), cols_);
    for (std::size_t k = 0; k < which.size(); ++k)
      for (std::size_t c = 0; c < cols_; ++c) m(k, c) = (*this)(which[k], c);
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw std::invalid_argument("matrix product shape mismatch: " + std::to_string(a.rows_) +
                                  "x" + std::to_string(a.cols_) + " * " +
                                  std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    }
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) != 0) out(i, j) += aik * b(k, j);
        }
      }
    }
    return out;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    Vector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a(i, k) != 0 && v[k] != 0) out[i] += a(i, k) * v[k];
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }

  friend Matrix operator*(const Rational& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << (r ? ", [" : "[");
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? ", " : "") << m(r, c);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// [a | b]; both must have the same row count.
inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
  Matrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r) out(a.rows() + r, c) = b(r, c);
  }
  return out;
}

/// Block diagonal sum.
inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, a.cols() + c) = b(r, c);
  return out;
}

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

// ---------------------------------------------------------------------------
// Elimination

struct RowEchelon {
  Matrix reduced;                    // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

/// Gauss-Jordan reduction. The pivot in each column is the first nonzero
/// entry at or below the current row, so the result depends only on the input.
inline RowEchelon rref(Matrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    Rational inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (m(row, c) != 0) m(r, c) -= factor * m(row, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

/**
 * Rank by fraction-free (Bareiss) elimination.
 *
 * Each row is first scaled by the lcm of its denominators so elimination
 * runs over the integers; every intermediate entry is a minor of the scaled
 * matrix, which bounds coefficient growth.
 */
inline std::size_t rank(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    Integer lcm = 1;
    for (std::size_t c = 0; c < cols; ++c) {
      const Integer den = boost::multiprecision::denominator(m(r, c));
      lcm = boost::multiprecision::lcm(lcm, den);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      a[r][c] = boost::multiprecision::numerator(m(r, c)) *
                (lcm / boost::multiprecision::denominator(m(r, c)));
    }
  }
  Integer prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        a[r][c] = (a[row][col] * a[r][c] - a[r][col] * a[row][c]) / prev;
      }
      a[r][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return row;
}

/// Determinant of a square matrix (Gauss-Jordan over the rationals).
inline Rational determinant(Matrix m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == 0) continue;
      Rational factor = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Subspaces

/**
 * A linear subspace of Q^ambient, stored as a matrix whose columns are a
 * basis. Construction through span() guarantees independence.
 */
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(ambient, 0) {}

  /// Wraps columns already known to be independent (checked).
  static Subspace from_basis(Matrix basis) {
    if (rank(basis) != basis.cols()) throw std::invalid_argument("basis columns are dependent");
    Subspace s;
    s.ambient_ = basis.rows();
    s.basis_ = std::move(basis);
    return s;
  }

  /// Span of arbitrary columns; keeps the first independent ones, in order.
  static Subspace span(const Matrix& generators) {
    Subspace s;
    s.ambient_ = generators.rows();
    s.basis_ = generators.select_columns(rref(generators).pivots);
    return s;
  }

  static Subspace full(std::size_t ambient) { return from_basis(Matrix::identity(ambient)); }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  bool contains(const Vector& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("vector not in ambient space");
    if (is_zero(v)) return true;
    return rank(hstack(basis_, Matrix::column_vector(v))) == dim();
  }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw std::invalid_argument("ambient dimension mismatch");
    return rank(hstack(basis_, other.basis_)) == dim();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contains(b);
  }

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("ambient mismatch");
  return Subspace::span(hstack(a.basis(), b.basis()));
}

/// {v : m v = 0}. Basis vectors come from the free columns of rref(m).
inline Subspace kernel(const Matrix& m) {
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  Subspace s(m.cols());
  if (!basis.empty()) s = Subspace::from_basis(Matrix::from_columns(m.cols(), basis));
  return s;
}

/// Column space, spanned by the pivot columns of m itself.
inline Subspace image(const Matrix& m) {
  return Subspace::span(m);
}

/// A particular solution of m x = rhs, if any.
inline std::optional<Vector> solve(const Matrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  RowEchelon e = rref(hstack(m, Matrix::column_vector(rhs)));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

/// Solves m X = rhs column by column; throws when some column is not in range.
inline Matrix solve_columns(const Matrix& m, const Matrix& rhs) {
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solve: rhs rows mismatch");
  RowEchelon e = rref(hstack(m, rhs));
  Matrix x(m.cols(), rhs.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= m.cols()) throw InconsistentData("linear system has no solution");
    for (std::size_t c = 0; c < rhs.cols(); ++c) x(e.pivots[r], c) = e.reduced(r, m.cols() + c);
  }
  return x;
}

/// Coordinates of v in the basis of s.
inline Vector coordinates(const Subspace& s, const Vector& v) {
  auto x = solve(s.basis(), v);
  if (!x) throw InconsistentData("vector lies outside the subspace");
  return *x;
}

/**
 * Representatives for a basis of big/small, chosen greedily from big's basis
 * columns in order. The result has dim big - dim small columns.
 */
inline Matrix quotient_basis(const Subspace& big, const Subspace& small) {
  if (big.ambient_dim() != small.ambient_dim()) throw std::invalid_argument("ambient mismatch");
  if (!big.contains(small)) {
    throw InconsistentData("quotient_basis: subspace is not contained in the larger space");
  }
  RowEchelon e = rref(hstack(small.basis(), big.basis()));
  std::vector<std::size_t> picked;
  for (auto p : e.pivots)
    if (p >= small.dim()) picked.push_back(p - small.dim());
  return big.basis().select_columns(picked);
}

/// Coordinates of v modulo `modulo`, against representatives `reps`.
/// Requires v in span(reps) + modulo.
inline Vector coordinates_mod(const Matrix& reps, const Matrix& modulo, const Vector& v) {
  auto x = solve(hstack(reps, modulo), v);
  if (!x) throw InconsistentData("vector lies outside representatives + subspace");
  return Vector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(reps.cols()));
}

/// coordinates_mod applied to every column of vs.
inline Matrix coordinates_mod_columns(const Matrix& reps, const Matrix& modulo, const Matrix& vs) {
  Matrix x = solve_columns(hstack(reps, modulo), vs);
  std::vector<std::size_t> keep(reps.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  return x.select_rows(keep);
}

/// Columns spanning a complement of ker(m) in the source: the nonzero rows of
/// rref(m), transposed.
inline Matrix row_space_complement(const Matrix& m) {
  RowEchelon e = rref(m);
  Matrix out(m.cols(), e.pivots.size());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = e.reduced(r, c);
  return out;
}

/// Inverse of a square invertible matrix.
inline Matrix inverse(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  return solve_columns(m, Matrix::identity(m.rows()));
}

// ---------------------------------------------------------------------------
// Signature

struct Inertia {
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t n_zero = 0;

  long signature() const { return static_cast<long>(n_plus) - static_cast<long>(n_minus); }
  std::size_t dimension() const { return n_plus + n_minus + n_zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/**
 * Inertia of a symmetric matrix by symmetric congruence reduction.
 *
 * A nonzero diagonal pivot is eliminated from its row and column at once.
 * When the remaining diagonal is zero but some a_ij is not, row/column j is
 * added to row/column i, which makes a_ii = 2 a_ij nonzero.
 */
inline Inertia sylvester_signature(Matrix a) {
  if (!a.is_symmetric()) throw std::invalid_argument("sylvester_signature: matrix is not symmetric");
  const std::size_t n = a.rows();
  Inertia out;
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && a(i, i) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i) {
        if (done[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (!done[j] && a(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
        }
      }
      if (pi == n) break;  // remaining block is zero
      for (std::size_t c = 0; c < n; ++c) a(pi, c) += a(pj, c);
      for (std::size_t r = 0; r < n; ++r) a(r, pi) += a(r, pj);
      piv = pi;
    }
    const Rational p = a(piv, piv);
    for (std::size_t r = 0; r < n; ++r) {
      if (done[r] || r == piv || a(r, piv) == 0) continue;
      Rational factor = a(r, piv) / p;
      for (std::size_t c = 0; c < n; ++c) {
        if (!done[c]) a(r, c) -= factor * a(piv, c);
      }
    }
    for (std::size_t c = 0; c < n; ++c)
      if (c != piv) a(piv, c) = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (r != piv) a(r, piv) = 0;
    if (p > 0) ++out.n_plus; else ++out.n_minus;
    done[piv] = true;
    --remaining;
  }
  out.n_zero = remaining;
  return out;
}

}  // namespace ihsig

#endif  // IHSIG_MATRIX_HPP
