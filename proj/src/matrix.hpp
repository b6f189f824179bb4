#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace matlog {

using Complex = std::complex<double>;

inline double sq_abs(double x) { return x * x; }
inline double sq_abs(const Complex& z) { return std::norm(z); }

inline bool finite_entry(double x) { return std::isfinite(x); }
inline bool finite_entry(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Dense square matrix, row-major storage. S is double or Complex.
template <class S>
class Matrix {
public:
  Matrix() = default;

  explicit Matrix(int n) : n_(n) {
    if (n < 1) fail(errc::invalid_argument, "matrix dimension must be >= 1");
    a_.assign(static_cast<size_t>(n) * n, S(0));
  }

  explicit Matrix(const std::vector<std::vector<S>>& rows) : Matrix(static_cast<int>(rows.size())) {
    for (int i = 0; i < n_; ++i) {
      if (static_cast<int>(rows[i].size()) != n_)
        fail(errc::dimension_mismatch, "row length does not match matrix dimension");
      for (int j = 0; j < n_; ++j) (*this)(i, j) = rows[i][j];
    }
  }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int dim() const { return n_; }
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  S* data() { return a_.data(); }
  const S* data() const { return a_.data(); }

  Matrix& operator+=(const Matrix& o) {
    check_same_dim(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_dim(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(double f) {
    for (auto& e : a_) e *= f;
    return *this;
  }

private:
  void check_same_dim(const Matrix& o) const {
    if (n_ != o.n_) fail(errc::dimension_mismatch, "matrix dimensions differ");
  }

  int n_ = 0;
  std::vector<S> a_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

template <class S>
Matrix<S> operator+(Matrix<S> a, const Matrix<S>& b) { a += b; return a; }

template <class S>
Matrix<S> operator-(Matrix<S> a, const Matrix<S>& b) { a -= b; return a; }

template <class S>
Matrix<S> operator-(Matrix<S> a) { a *= -1.0; return a; }

template <class S>
Matrix<S> operator*(Matrix<S> a, double f) { a *= f; return a; }

template <class S>
Matrix<S> operator*(double f, Matrix<S> a) { a *= f; return a; }

template <class S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
  const int n = a.dim();
  if (n != b.dim()) fail(errc::dimension_mismatch, "matrix product needs equal dimensions");
  Matrix<S> c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const S aik = a(i, k);
      if (aik == S(0)) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline ComplexMatrix scaled(const ComplexMatrix& m, Complex f) {
  ComplexMatrix r = m;
  for (int i = 0; i < r.dim(); ++i)
    for (int j = 0; j < r.dim(); ++j) r(i, j) *= f;
  return r;
}

template <class S>
void shift_diag(Matrix<S>& m, S v) {
  for (int i = 0; i < m.dim(); ++i) m(i, i) += v;
}

template <class S>
double fro_norm(const Matrix<S>& m) {
  double s = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s += sq_abs(m(i, j));
  return std::sqrt(s);
}

template <class S>
double max_abs(const Matrix<S>& m) {
  double s = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s = std::max(s, std::abs(m(i, j)));
  return s;
}

// ||M - I||_F without forming the difference.
template <class S>
double fro_dist_identity(const Matrix<S>& m) {
  double s = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s += sq_abs(m(i, j) - (i == j ? S(1) : S(0)));
  return std::sqrt(s);
}

template <class S>
bool all_finite(const Matrix<S>& m) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (!finite_entry(m(i, j))) return false;
  return true;
}

template <class S>
Matrix<S> transpose(const Matrix<S>& m) {
  Matrix<S> t(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) t(j, i) = m(i, j);
  return t;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix c(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) c(i, j) = Complex(m(i, j), 0.0);
  return c;
}

inline RealMatrix real_part(const ComplexMatrix& m) {
  RealMatrix r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j).real();
  return r;
}

inline RealMatrix imag_part(const ComplexMatrix& m) {
  RealMatrix r(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) r(i, j) = m(i, j).imag();
  return r;
}

}  // namespace matlog
