#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sosq/rational.hpp"

namespace sosq {

/// Small dense matrix of exact rationals.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, Rational(0)) {}
  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_.at(size_t(i) * cols_ + j); }
  const Rational& operator()(int i, int j) const { return data_.at(size_t(i) * cols_ + j); }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("QMatrix product shape mismatch");
    QMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("QMatrix difference shape mismatch");
    QMatrix r(a.rows_, a.cols_);
    for (size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

/// Solves A x = b exactly by Gaussian elimination with partial pivoting.
/// Free variables (rank-deficient A) are set to zero; returns nullopt when the
/// system is inconsistent.
inline std::optional<std::vector<Rational>> solve_linear_system(QMatrix A, std::vector<Rational> b) {
  const int m = A.rows(), n = A.cols();
  if (static_cast<int>(b.size()) != m) throw std::invalid_argument("solve: rhs size mismatch");
  std::vector<std::pair<int, int>> pivots;  // (row, col)
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int best = -1;
    for (int r = row; r < m; ++r)
      if (A(r, col) != 0) {
        if (best < 0 || abs(A(r, col)) > abs(A(best, col))) best = r;
      }
    if (best < 0) continue;
    if (best != row) {
      for (int c = col; c < n; ++c) std::swap(A(row, c), A(best, c));
      std::swap(b[row], b[best]);
    }
    const Rational piv = A(row, col);
    for (int r = 0; r < m; ++r) {
      if (r == row || A(r, col) == 0) continue;
      Rational f = A(r, col) / piv;
      for (int c = col; c < n; ++c) A(r, c) -= f * A(row, c);
      b[r] -= f * b[row];
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  for (int r = row; r < m; ++r)
    if (b[r] != 0) return std::nullopt;  // inconsistent
  std::vector<Rational> x(n, Rational(0));
  for (auto [r, c] : pivots) x[c] = b[r] / A(r, c);
  return x;
}

}  // namespace sosq
