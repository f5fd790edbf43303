#pragma once

#include "arith.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace hkp {

template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool operator==(const Matrix&) const = default;

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row a += k * row b
  void add_row(std::size_t a, std::size_t b, const T& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) += k * (*this)(b, j);
  }
  // col a += k * col b
  void add_col(std::size_t a, std::size_t b, const T& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) += k * (*this)(i, b);
  }

  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> out(rows_, std::vector<T>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

/// Fraction-free Gaussian elimination.
inline Integer determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithForm {
  IntMatrix diagonal;  // U * A * V
  IntMatrix u;
  IntMatrix v;
  IntMatrix v_inv;
  std::vector<Integer> invariants;  // nonnegative, each dividing the next
};

/// Smith normal form with unimodular transforms: u * a * v = diagonal.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t r = a.rows(), c = a.cols();
  IntMatrix d = a, u = IntMatrix::identity(r), v = IntMatrix::identity(c), vi = IntMatrix::identity(c);
  auto col_swap = [&](std::size_t x, std::size_t y) {
    d.swap_cols(x, y);
    v.swap_cols(x, y);
    vi.swap_rows(x, y);
  };
  auto col_add = [&](std::size_t x, std::size_t y, const Integer& k) {  // col x += k col y
    d.add_col(x, y, k);
    v.add_col(x, y, k);
    vi.add_row(y, x, -k);
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    d.swap_rows(x, y);
    u.swap_rows(x, y);
  };
  auto row_add = [&](std::size_t x, std::size_t y, const Integer& k) {
    d.add_row(x, y, k);
    u.add_row(x, y, k);
  };
  const std::size_t n = std::min(r, c);
  for (std::size_t k = 0; k < n; ++k) {
    for (;;) {
      // pivot: smallest nonzero absolute value in the trailing block
      std::size_t pi = r, pj = c;
      for (std::size_t i = k; i < r; ++i)
        for (std::size_t j = k; j < c; ++j)
          if (d(i, j) != 0 && (pi == r || abs(d(i, j)) < abs(d(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) break;
      if (pi != k) row_swap(k, pi);
      if (pj != k) col_swap(k, pj);
      bool clean = true;
      for (std::size_t i = k + 1; i < r; ++i) {
        if (d(i, k) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(i, k).get_mpz_t(), d(k, k).get_mpz_t());
        row_add(i, k, -q);
        if (d(i, k) != 0) clean = false;
      }
      for (std::size_t j = k + 1; j < c; ++j) {
        if (d(k, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(k, j).get_mpz_t(), d(k, k).get_mpz_t());
        col_add(j, k, -q);
        if (d(k, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the trailing block by the pivot
      bool divides = true;
      for (std::size_t i = k + 1; i < r && divides; ++i)
        for (std::size_t j = k + 1; j < c; ++j)
          if (d(i, j) % d(k, k) != 0) {
            row_add(k, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(k, k) < 0) {
      d(k, k) = -d(k, k);
      for (std::size_t j = 0; j < r; ++j) u(k, j) = -u(k, j);
    }
  }
  SmithForm out{d, u, v, vi, {}};
  for (std::size_t k = 0; k < n; ++k) out.invariants.push_back(d(k, k));
  return out;
}

}  // namespace hkp
