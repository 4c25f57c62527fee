#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "opcal/rational.hpp"

namespace opcal {

/// Dense matrix over exact rationals.  Row-major.
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == Rational(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (bkj != Rational(0)) out(i, j) += aik * bkj;
        }
      }
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("Matrix difference: shape mismatch");
    Matrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
    return out;
  }

  /// Kronecker product, blocks indexed by this matrix's entries.
  Matrix kronecker(const Matrix& b) const {
    Matrix out(rows_ * b.rows_, cols_ * b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const Rational& v = (*this)(i, j);
        if (v == Rational(0)) continue;
        for (std::size_t p = 0; p < b.rows_; ++p)
          for (std::size_t q = 0; q < b.cols_; ++q)
            out(i * b.rows_ + p, j * b.cols_ + q) = v * b(p, q);
      }
    return out;
  }

  /// In-place row reduction to reduced row echelon form with
  /// first-nonzero pivoting.  Returns the pivot column of each pivot row.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t pr = row;
      while (pr < rows_ && (*this)(pr, col) == Rational(0)) ++pr;
      if (pr == rows_) continue;
      if (pr != row)
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(row, c), (*this)(pr, c));
      Rational inv = Rational(1) / (*this)(row, col);
      for (std::size_t c = col; c < cols_; ++c) (*this)(row, c) *= inv;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row) continue;
        Rational f = (*this)(r, col);
        if (f == Rational(0)) continue;
        for (std::size_t c = col; c < cols_; ++c) (*this)(r, c) -= f * (*this)(row, c);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  std::size_t rank() const {
    Matrix copy = *this;
    return copy.rref().size();
  }

  bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

  Matrix inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("Matrix inverse: not square");
    Matrix aug(rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = Rational(1);
    }
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || pivots.back() != cols_ - 1)
      throw std::invalid_argument("Matrix inverse: singular");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = aug(i, cols_ + j);
    return out;
  }

  /// Solve X * S = T for X given S (this call: S.solve_left(T)).
  /// Throws if inconsistent (i.e. ker S is not contained in ker T).
  Matrix solve_left(const Matrix& t) const {
    const Matrix& s = *this;
    if (t.cols() != s.cols()) throw std::invalid_argument("solve_left: shape mismatch");
    // Transpose both: S^T X^T = T^T; solve column by column via one rref of
    // the augmented matrix [S^T | T^T].
    Matrix aug(s.cols(), s.rows() + t.rows());
    for (std::size_t i = 0; i < s.cols(); ++i) {
      for (std::size_t j = 0; j < s.rows(); ++j) aug(i, j) = s(j, i);
      for (std::size_t j = 0; j < t.rows(); ++j) aug(i, s.rows() + j) = t(j, i);
    }
    auto pivots = aug.rref();
    Matrix xt(s.rows(), t.rows());
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      if (pivots[p] >= s.rows())
        throw std::invalid_argument("solve_left: inconsistent system");
      for (std::size_t j = 0; j < t.rows(); ++j) xt(pivots[p], j) = aug(p, s.rows() + j);
    }
    Matrix x(t.rows(), s.rows());
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < s.rows(); ++j) x(i, j) = xt(j, i);
    // Verify (catches underdetermined-but-inconsistent cases).
    if (!(x * s == t)) throw std::invalid_argument("solve_left: no solution");
    return x;
  }

private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

} // namespace opcal
