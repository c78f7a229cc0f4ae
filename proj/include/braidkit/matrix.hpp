#pragma once
// Small dense matrices over Q(q) with the exact linear algebra the engine
// needs: products, inverses, row reduction, kernels and span membership.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qscalar.hpp"

namespace braidkit {

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& w) : std::runtime_error(w) {}
};
struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& w) : std::runtime_error(w) {}
};

class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(size_t r, size_t c) : rows_(r), cols_(c), e_(r * c) {}

  static Mat identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = QScalar::one();
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  QScalar& operator()(size_t r, size_t c) { return e_[r * cols_ + c]; }
  const QScalar& operator()(size_t r, size_t c) const { return e_[r * cols_ + c]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  bool isZero() const {
    for (const auto& x : e_)
      if (!x.isZero()) return false;
    return true;
  }

  Mat operator+(const Mat& o) const {
    requireSameShape(o);
    Mat r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    requireSameShape(o);
    Mat r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }
  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
    Mat r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        const QScalar& a = (*this)(i, k);
        if (a.isZero()) continue;
        for (size_t j = 0; j < o.cols_; ++j) {
          const QScalar& b = o(k, j);
          if (!b.isZero()) r(i, j) += a * b;
        }
      }
    return r;
  }
  Mat operator*(const QScalar& s) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * s;
    return r;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Mat inverse() const {
    if (rows_ != cols_) throw DimensionError("inverse of non-square matrix");
    size_t n = rows_;
    Mat a(*this), inv = identity(n);
    for (size_t col = 0; col < n; ++col) {
      size_t piv = col;
      while (piv < n && a(piv, col).isZero()) ++piv;
      if (piv == n) throw SingularMatrix("matrix not invertible over Q(q)");
      if (piv != col) {
        a.swapRows(piv, col);
        inv.swapRows(piv, col);
      }
      QScalar d = a(col, col).inverse();
      a.scaleRow(col, d);
      inv.scaleRow(col, d);
      for (size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        QScalar f = a(r, col);
        if (f.isZero()) continue;
        a.addRow(r, col, -f);
        inv.addRow(r, col, -f);
      }
    }
    return inv;
  }

  size_t rank() const {
    Mat a(*this);
    return a.rowReduceInPlace().size();
  }

  // Reduced row echelon form in place; returns the pivot column list.
  std::vector<size_t> rowReduceInPlace() {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
      size_t piv = r;
      while (piv < rows_ && (*this)(piv, c).isZero()) ++piv;
      if (piv == rows_) continue;
      if (piv != r) swapRows(piv, r);
      scaleRow(r, (*this)(r, c).inverse());
      for (size_t rr = 0; rr < rows_; ++rr) {
        if (rr == r) continue;
        QScalar f = (*this)(rr, c);
        if (!f.isZero()) addRow(rr, r, -f);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  // Basis of the right null space (columns are kernel vectors).
  Mat kernel() const {
    Mat a(*this);
    std::vector<size_t> piv = a.rowReduceInPlace();
    std::vector<bool> isPivot(cols_, false);
    for (size_t c : piv) isPivot[c] = true;
    std::vector<size_t> freeCols;
    for (size_t c = 0; c < cols_; ++c)
      if (!isPivot[c]) freeCols.push_back(c);
    Mat k(cols_, freeCols.size());
    for (size_t fi = 0; fi < freeCols.size(); ++fi) {
      size_t fc = freeCols[fi];
      k(fc, fi) = QScalar::one();
      for (size_t pi = 0; pi < piv.size(); ++pi) k(piv[pi], fi) = -a(pi, fc);
    }
    return k;
  }

  // A particular solution x of (*this) * x = b (free variables set to zero),
  // or nullopt when the system is inconsistent.  b must be a column vector.
  std::optional<Mat> solveParticular(const Mat& b) const {
    if (b.rows() != rows_ || b.cols() != 1)
      throw DimensionError("solveParticular: rhs must be a matching column vector");
    Mat aug(rows_, cols_ + 1);
    for (size_t r = 0; r < rows_; ++r) {
      for (size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
      aug(r, cols_) = b(r, 0);
    }
    std::vector<size_t> piv = aug.rowReduceInPlace();
    Mat x(cols_, 1);
    for (size_t pi = 0; pi < piv.size(); ++pi) {
      if (piv[pi] == cols_) return std::nullopt;  // pivot in the rhs column
      x(piv[pi], 0) = aug(pi, cols_);
    }
    return x;
  }

  void swapRows(size_t a, size_t b) {
    for (size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void scaleRow(size_t r, const QScalar& s) {
    for (size_t c = 0; c < cols_; ++c)
      if (!(*this)(r, c).isZero()) (*this)(r, c) *= s;
  }
  void addRow(size_t dst, size_t src, const QScalar& f) {
    for (size_t c = 0; c < cols_; ++c)
      if (!(*this)(src, c).isZero()) (*this)(dst, c) += f * (*this)(src, c);
  }

 private:
  size_t rows_, cols_;
  std::vector<QScalar> e_;

  void requireSameShape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  }
};

}  // namespace braidkit
