#pragma once

#include <cmath>
#include <limits>
#include <type_traits>
#include <vector>

#include "matrix.hpp"

namespace matlog {

// LU decomposition with partial pivoting (PA = LU, unit lower L stored in place).
//
// By default a pivot whose magnitude falls to or below n * eps * max|a_ij| marks
// the matrix as numerically non-invertible and throws Singular. With a positive
// pivot_floor such pivots are replaced by pivot_floor instead (keeping the sign /
// phase); that mode exists for inverse iteration, where factoring a shifted,
// nearly singular matrix is the whole point.
template <class S>
class LuFactor {
public:
  explicit LuFactor(const Matrix<S>& a, double pivot_floor = 0.0)
      : lu_(a), perm_(a.dim()), parity_(1) {
    const int n = a.dim();
    const double eps = std::numeric_limits<double>::epsilon();
    const double thresh = n * eps * max_abs(a);
    min_pivot_ = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) perm_[k] = k;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) { best = v; p = i; }
      }
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        parity_ = -parity_;
      }
      min_pivot_ = std::min(min_pivot_, best);
      if (best <= thresh) {
        if (pivot_floor <= 0.0)
          fail(errc::singular, "pivot " + std::to_string(best) +
                                   " at column " + std::to_string(k) +
                                   " is below the invertibility threshold");
        clamped_ = true;
        const S cur = lu_(k, k);
        lu_(k, k) = (best == 0.0) ? S(pivot_floor) : cur * S(pivot_floor / best);
      }
      const S piv = lu_(k, k);
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) /= piv;
        const S lik = lu_(i, k);
        if (lik == S(0)) continue;
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
      }
    }
  }

  // Solves A X = B column by column.
  Matrix<S> solve(const Matrix<S>& b) const {
    const int n = lu_.dim();
    if (b.dim() != n) fail(errc::dimension_mismatch, "right-hand side dimension differs");
    Matrix<S> x(n);
    std::vector<S> col(n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) col[i] = b(perm_[i], j);
      solve_in_place(col);
      for (int i = 0; i < n; ++i) x(i, j) = col[i];
    }
    return x;
  }

  std::vector<S> solve(const std::vector<S>& b) const {
    const int n = lu_.dim();
    std::vector<S> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
    solve_in_place(x);
    return x;
  }

  double min_pivot() const { return min_pivot_; }
  bool clamped() const { return clamped_; }

  S det() const {
    S d = S(parity_);
    for (int i = 0; i < lu_.dim(); ++i) d *= lu_(i, i);
    return d;
  }

  // Sign of the determinant from pivot signs and permutation parity; no
  // determinant expansion, so no overflow for larger matrices.
  int det_sign() const {
    static_assert(std::is_same_v<S, double>, "det_sign is for real matrices");
    int s = parity_;
    for (int i = 0; i < lu_.dim(); ++i) s *= (lu_(i, i) < 0.0) ? -1 : 1;
    return s;
  }

private:
  void solve_in_place(std::vector<S>& x) const {
    const int n = lu_.dim();
    for (int i = 1; i < n; ++i) {
      S s = x[i];
      for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      S s = x[i];
      for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
  }

  Matrix<S> lu_;
  std::vector<int> perm_;
  int parity_;
  double min_pivot_ = 0.0;
  bool clamped_ = false;
};

template <class S>
Matrix<S> solve_lu(const Matrix<S>& a, const Matrix<S>& b) {
  return LuFactor<S>(a).solve(b);
}

}  // namespace matlog
