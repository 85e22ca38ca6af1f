#pragma once

// Small dense matrices and vectors, row-major, runtime-sized.
//
// Every matrix in this library is at most (n+1) x (n+1) with n <= 20, so all
// factorizations below are direct O(n^3) routines with no blocking.  The LU
// uses partial pivoting; detection of exact singularity is left to callers,
// which compare pivots against their own scale-aware thresholds.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace immob {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// Vec helpers
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline Vec operator+(Vec a, const Vec& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec operator*(double s, Vec a) {
  for (double& x : a) x *= s;
  return a;
}

// a += s*b
inline void axpy(double s, const Vec& b, Vec& a) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

// ---------------------------------------------------------------------------
// Mat
// ---------------------------------------------------------------------------

class Mat {
 public:
  Mat() = default;

  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }

  // Row-by-row brace construction, mostly for tests and frozen constants.
  Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    a_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      assert(static_cast<int>(r.size()) == cols_);
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat from_columns(const std::vector<Vec>& cols) {
    const int c = static_cast<int>(cols.size());
    const int r = c ? static_cast<int>(cols[0].size()) : 0;
    Mat m(r, c);
    for (int j = 0; j < c; ++j) {
      assert(static_cast<int>(cols[j].size()) == r);
      for (int i = 0; i < r; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  Vec col(int j) const {
    Vec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Vec row(int i) const {
    Vec v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  void set_col(int j, const Vec& v) {
    assert(static_cast<int>(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

inline Mat operator+(const Mat& a, const Mat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline Mat operator-(const Mat& a, const Mat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Mat c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline Mat operator*(double s, Mat a) {
  Mat c = std::move(a);
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) c(i, j) *= s;
  return c;
}

inline Mat operator*(const Mat& a, const Mat& b) {
  assert(a.cols() == b.rows());
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vec operator*(const Mat& a, const Vec& x) {
  assert(a.cols() == static_cast<int>(x.size()));
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// x^T A contraction, used by the stochastic-iteration check.
inline Vec left_mult(const Vec& x, const Mat& a) {
  assert(a.rows() == static_cast<int>(x.size()));
  Vec y(a.cols(), 0.0);
  for (int j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += x[i] * a(i, j);
    y[j] = s;
  }
  return y;
}

// Rank-one update a += s * u v^T.
inline void add_outer(Mat& a, double s, const Vec& u, const Vec& v) {
  assert(a.rows() == static_cast<int>(u.size()));
  assert(a.cols() == static_cast<int>(v.size()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) += s * u[i] * v[j];
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

struct Lu {
  Mat lu;                  // packed L (unit diagonal) and U
  std::vector<int> perm;   // row permutation applied to the input
  double parity = 1.0;     // sign of the permutation
  bool singular = false;   // a pivot was exactly zero
  int n = 0;
};

inline Lu lu_factor(Mat a) {
  assert(a.rows() == a.cols());
  const int n = a.rows();
  Lu f;
  f.n = n;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.parity = -f.parity;
    }
    const double pivot = a(k, k);
    if (pivot == 0.0) {
      f.singular = true;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / pivot;
      a(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

inline double lu_det(const Lu& f) {
  if (f.singular) return 0.0;
  double d = f.parity;
  for (int i = 0; i < f.n; ++i) d *= f.lu(i, i);
  return d;
}

inline Vec lu_solve(const Lu& f, const Vec& b) {
  assert(!f.singular);
  assert(static_cast<int>(b.size()) == f.n);
  const int n = f.n;
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

inline Mat lu_solve(const Lu& f, const Mat& b) {
  assert(b.rows() == f.n);
  Mat x(f.n, b.cols());
  for (int j = 0; j < b.cols(); ++j) x.set_col(j, lu_solve(f, b.col(j)));
  return x;
}

inline double det(const Mat& a) { return lu_det(lu_factor(a)); }

inline Mat inverse(const Mat& a) {
  Lu f = lu_factor(a);
  if (f.singular) throw std::domain_error("inverse: matrix is singular");
  return lu_solve(f, Mat::identity(f.n));
}

}  // namespace immob
