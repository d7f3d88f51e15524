#pragma once

#include <optional>
#include <vector>

#include "reltilt/field.hpp"

namespace rt {

// Dense matrix over F_p. 0xN and Nx0 shapes are legal and stand for maps
// to/from the zero space.
class Mat {
 public:
  Mat() = default;
  Mat(Fp f, int rows, int cols)
      : f_(f), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}

  static Mat identity(Fp f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static Mat zeros(Fp f, int rows, int cols) { return Mat(f, rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Fp field() const { return f_; }

  Fel& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  Fel at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  bool isZero() const {
    for (Fel v : a_)
      if (v) return false;
    return true;
  }
  bool isIdentity() const;

  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat scaled(Fel c) const;
  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Mat transpose() const;
  std::vector<Fel> applyTo(const std::vector<Fel>& v) const;  // A * v
  std::vector<Fel> row(int i) const;
  std::vector<Fel> col(int j) const;

  static Mat hcat(const Mat& a, const Mat& b);
  static Mat vcat(const Mat& a, const Mat& b);
  static Mat fromCols(Fp f, int rows, const std::vector<std::vector<Fel>>& cols);

  Mat subCols(int from, int count) const;
  Mat subRows(int from, int count) const;
  Mat powN(int e) const;  // square matrices

 private:
  Fp f_{};
  int rows_ = 0, cols_ = 0;
  std::vector<Fel> a_;
};

struct Rref {
  Mat m;
  std::vector<int> pivots;  // pivot column per nonzero row
};

Rref rref(Mat a);
int rank(const Mat& a);

// Basis of {v : Av = 0}; columns of the result, in canonical reduced-echelon
// order (one vector per free column, ascending).
Mat kernelBasis(const Mat& a);

// Some x with Ax = b (free variables set to zero), or nullopt when
// inconsistent.
std::optional<std::vector<Fel>> solve(const Mat& a, const std::vector<Fel>& b);

// Column-wise solve: X with A X = B, or nullopt when any column is
// inconsistent.
std::optional<Mat> solveMatrix(const Mat& a, const Mat& b);

std::optional<Mat> invert(const Mat& a);

// Incremental fully-reduced row space (RREF maintained across insertions).
class Echelon {
 public:
  Echelon(Fp f, int n) : f_(f), n_(n) {}

  // Returns true when the vector enlarged the span.
  bool insert(std::vector<Fel> v);
  // Residual of v after reduction; zero iff v lies in the span.
  std::vector<Fel> reduce(std::vector<Fel> v) const;
  bool contains(const std::vector<Fel>& v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  int ambient() const { return n_; }
  const std::vector<int>& pivots() const { return pivots_; }
  const std::vector<std::vector<Fel>>& rows() const { return rows_; }
  bool isPivot(int j) const;

 private:
  Fp f_;
  int n_;
  std::vector<std::vector<Fel>> rows_;  // sorted by pivot column
  std::vector<int> pivots_;
};

}  // namespace rt
