#include "reltilt/matrix.hpp"

#include <algorithm>

namespace rt {

bool Mat::isIdentity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) fail(Errc::Internal, "matrix product shape mismatch");
  Mat r(f_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      Fel aik = at(i, k);
      if (!aik) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.at(i, j) = f_.add(r.at(i, j), f_.mul(aik, o.at(k, j)));
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::Internal, "matrix sum shape mismatch");
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.add(a_[i], o.a_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::Internal, "matrix diff shape mismatch");
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.sub(a_[i], o.a_[i]);
  return r;
}

Mat Mat::scaled(Fel c) const {
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.mul(a_[i], c);
  return r;
}

Mat Mat::transpose() const {
  Mat r(f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

std::vector<Fel> Mat::applyTo(const std::vector<Fel>& v) const {
  if (static_cast<int>(v.size()) != cols_) fail(Errc::Internal, "matrix apply shape mismatch");
  std::vector<Fel> r(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (int j = 0; j < cols_; ++j) acc += std::uint64_t(at(i, j)) * v[j];
    r[i] = static_cast<Fel>(acc % f_.p);
  }
  return r;
}

std::vector<Fel> Mat::row(int i) const {
  std::vector<Fel> r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

std::vector<Fel> Mat::col(int j) const {
  std::vector<Fel> r(rows_);
  for (int i = 0; i < rows_; ++i) r[i] = at(i, j);
  return r;
}

Mat Mat::hcat(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_) fail(Errc::Internal, "hcat shape mismatch");
  Mat r(a.f_, a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
  }
  return r;
}

Mat Mat::vcat(const Mat& a, const Mat& b) {
  if (a.cols_ != b.cols_) fail(Errc::Internal, "vcat shape mismatch");
  Mat r(a.f_, a.rows_ + b.rows_, a.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
  return r;
}

Mat Mat::fromCols(Fp f, int rows, const std::vector<std::vector<Fel>>& cols) {
  Mat r(f, rows, static_cast<int>(cols.size()));
  for (int j = 0; j < r.cols(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) fail(Errc::Internal, "fromCols shape");
    for (int i = 0; i < rows; ++i) r.at(i, j) = cols[j][i];
  }
  return r;
}

Mat Mat::subCols(int from, int count) const {
  Mat r(f_, rows_, count);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < count; ++j) r.at(i, j) = at(i, from + j);
  return r;
}

Mat Mat::subRows(int from, int count) const {
  Mat r(f_, count, cols_);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(from + i, j);
  return r;
}

Mat Mat::powN(int e) const {
  if (rows_ != cols_) fail(Errc::Internal, "powN needs a square matrix");
  Mat r = Mat::identity(f_, rows_);
  Mat base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Rref rref(Mat a) {
  Fp f = a.field();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
    Fel inv = f.inv(a.at(r, c));
    for (int j = 0; j < a.cols(); ++j) a.at(r, j) = f.mul(a.at(r, j), inv);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      Fel m = a.at(i, c);
      if (!m) continue;
      for (int j = 0; j < a.cols(); ++j) a.at(i, j) = f.sub(a.at(i, j), f.mul(m, a.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

int rank(const Mat& a) { return static_cast<int>(rref(a).pivots.size()); }

Mat kernelBasis(const Mat& a) {
  Fp f = a.field();
  Rref e = rref(a);
  std::vector<bool> isPiv(a.cols(), false);
  for (int c : e.pivots) isPiv[c] = true;
  std::vector<std::vector<Fel>> cols;
  for (int c = 0; c < a.cols(); ++c) {
    if (isPiv[c]) continue;
    std::vector<Fel> v(a.cols(), 0);
    v[c] = 1;
    for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = f.neg(e.m.at(static_cast<int>(r), c));
    cols.push_back(std::move(v));
  }
  return Mat::fromCols(f, a.cols(), cols);
}

std::optional<std::vector<Fel>> solve(const Mat& a, const std::vector<Fel>& b) {
  if (static_cast<int>(b.size()) != a.rows()) fail(Errc::BadInput, "solve: rhs length mismatch");
  Mat rhs(a.field(), a.rows(), 1);
  for (int i = 0; i < a.rows(); ++i) rhs.at(i, 0) = b[i];
  auto x = solveMatrix(a, rhs);
  if (!x) return std::nullopt;
  return x->col(0);
}

std::optional<Mat> solveMatrix(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) fail(Errc::BadInput, "solveMatrix: shape mismatch");
  Rref e = rref(Mat::hcat(a, b));
  // Inconsistent iff some pivot falls in the appended block.
  for (int c : e.pivots)
    if (c >= a.cols()) return std::nullopt;
  Mat x(a.field(), a.cols(), b.cols());
  for (size_t r = 0; r < e.pivots.size(); ++r)
    for (int j = 0; j < b.cols(); ++j) x.at(e.pivots[r], j) = e.m.at(static_cast<int>(r), a.cols() + j);
  return x;
}

std::optional<Mat> invert(const Mat& a) {
  if (a.rows() != a.cols()) fail(Errc::BadInput, "invert: non-square input");
  auto x = solveMatrix(a, Mat::identity(a.field(), a.rows()));
  if (!x) return std::nullopt;
  if (!((a * *x).isIdentity())) return std::nullopt;
  return x;
}

bool Echelon::isPivot(int j) const {
  return std::binary_search(pivots_.begin(), pivots_.end(), j);
}

std::vector<Fel> Echelon::reduce(std::vector<Fel> v) const {
  for (size_t r = 0; r < rows_.size(); ++r) {
    Fel c = v[pivots_[r]];
    if (!c) continue;
    for (int j = 0; j < n_; ++j) v[j] = f_.sub(v[j], f_.mul(c, rows_[r][j]));
  }
  return v;
}

bool Echelon::contains(const std::vector<Fel>& v) const {
  auto r = reduce(v);
  for (Fel x : r)
    if (x) return false;
  return true;
}

bool Echelon::insert(std::vector<Fel> v) {
  if (static_cast<int>(v.size()) != n_) fail(Errc::Internal, "echelon dim mismatch");
  v = reduce(std::move(v));
  int piv = -1;
  for (int j = 0; j < n_; ++j)
    if (v[j]) {
      piv = j;
      break;
    }
  if (piv < 0) return false;
  Fel inv = f_.inv(v[piv]);
  for (int j = 0; j < n_; ++j) v[j] = f_.mul(v[j], inv);
  // Back-eliminate the new pivot from existing rows, keep rows pivot-sorted.
  for (size_t r = 0; r < rows_.size(); ++r) {
    Fel c = rows_[r][piv];
    if (!c) continue;
    for (int j = 0; j < n_; ++j) rows_[r][j] = f_.sub(rows_[r][j], f_.mul(c, v[j]));
  }
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
  size_t pos = static_cast<size_t>(it - pivots_.begin());
  pivots_.insert(it, piv);
  rows_.insert(rows_.begin() + pos, std::move(v));
  return true;
}

}  // namespace rt
