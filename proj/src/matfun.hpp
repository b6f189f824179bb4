#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lu.hpp"
#include "matrix.hpp"

namespace matlog {

// Shared accuracy knobs. residual_tol bounds the certified residual of every
// log-producing operation (relative to max(1, target norm) or the target norm,
// per operation); series_tail_tol bounds the a-priori truncation tail of every
// power series; eta is the contraction target accepted by continuation steps.
struct Tolerance {
  double residual_tol = 1e-10;
  double series_tail_tol = 1e-15;
  double eta = 0.5;

  void validate() const {
    if (!(residual_tol >= 0.0) || !std::isfinite(residual_tol))
      fail(errc::invalid_argument, "residual tolerance must be a nonnegative real");
    if (!(series_tail_tol >= 0.0) || !std::isfinite(series_tail_tol))
      fail(errc::invalid_argument, "series tail tolerance must be a nonnegative real");
    if (!(eta > 0.0 && eta < 1.0))
      fail(errc::invalid_argument, "contraction target must lie strictly inside (0, 1)");
  }
};

template <class S>
struct SeriesLog {
  Matrix<S> log;
  double contraction = 0.0;  // ||I - F||_F of the series argument
  int terms = 0;             // series terms actually summed
};

namespace detail {
inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}
}  // namespace detail

// Matrix exponential by scaling and squaring with a truncated Taylor series.
// The scaled norm is brought to <= 1/2 and the truncation order picked from the
// a-priori tail bound r^{N+1}/((N+1)! (1 - r/(N+2))) <= tail_tol. The bound that
// was actually achieved is reported through tail_bound if given.
template <class S>
Matrix<S> expm(const Matrix<S>& a, double tail_tol = 1e-15, double* tail_bound = nullptr) {
  const int n = a.dim();
  const double r = fro_norm(a);
  if (!std::isfinite(r)) fail(errc::numerical_failure, "exponential of a non-finite matrix");

  int s = 0;
  double rs = r;
  while (rs > 0.5 && s < 1100) { rs *= 0.5; ++s; }

  // truncation order for the scaled series
  int order = 1;
  double tn = rs;  // rs^N / N!
  double bound = rs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  while (rs > 0.0 && order < 160) {
    const double next = tn * rs / (order + 1);  // rs^{N+1} / (N+1)!
    bound = next / (1.0 - rs / (order + 2));
    if (bound <= tail_tol) break;
    tn = next;
    ++order;
  }
  if (tail_bound) *tail_bound = bound;

  Matrix<S> x = a * std::ldexp(1.0, -s);
  Matrix<S> sum = Matrix<S>::identity(n);
  Matrix<S> term = x;
  sum += term;
  for (int k = 2; k <= order; ++k) {
    term = term * x;
    term *= 1.0 / k;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  if (!all_finite(sum))
    fail(errc::numerical_failure, "matrix exponential overflowed (norm " + detail::fmt(r) + ")");
  return sum;
}

// Principal-branch logarithm near the identity: L = -sum_{j>=1} (1/j) (I - F)^j,
// valid for r = ||I - F||_F < 1. The truncation order satisfies the a-priori
// tail bound r^{N+1}/((N+1)(1-r)) <= tail_tol; a running remainder bound lets
// the sum stop early (nilpotent arguments terminate as soon as powers vanish).
template <class S>
SeriesLog<S> log_series(const Matrix<S>& f, double tail_tol = 1e-15) {
  const int n = f.dim();
  Matrix<S> p = Matrix<S>::identity(n);
  p -= f;
  const double r = fro_norm(p);
  if (!(r < 1.0))
    fail(errc::not_contractive,
         "log series needs ||I - F||_F < 1, got " + detail::fmt(r));
  SeriesLog<S> out{Matrix<S>(n), r, 0};
  if (r == 0.0) return out;

  long nmax = 1;
  double pw = r * r;  // r^{N+1}
  while (nmax < 1000000 && pw / ((nmax + 1) * (1.0 - r)) > tail_tol) {
    pw *= r;
    ++nmax;
  }
  if (nmax >= 1000000)
    fail(errc::numerical_failure, "log series truncation bound did not close");

  Matrix<S> pow = p;  // p^j
  for (long j = 1; j <= nmax; ++j) {
    Matrix<S> term = pow;
    term *= -1.0 / static_cast<double>(j);
    out.log += term;
    out.terms = static_cast<int>(j);
    if (j == nmax) break;
    pow = pow * p;
    // remainder after term j: sum_{m>j} ||p^m||/m <= ||p^{j+1}|| / ((j+1)(1-r))
    if (fro_norm(pow) / ((j + 1) * (1.0 - r)) <= tail_tol) break;
  }
  return out;
}

// Logarithm of the shifted matrix g - lambda*I for |lambda| > ||g||_F:
// with f = I - g/lambda and a = log_series(f),
//   exp((i*pi + log(lambda)) I + a) = -lambda * f = g - lambda*I.
// Complex-typed on purpose; there is no real-typed variant of this shift.
inline SeriesLog<Complex> shifted_exp_log(const ComplexMatrix& g, Complex lambda,
                                          double tail_tol = 1e-15) {
  const double gn = fro_norm(g);
  if (!(std::abs(lambda) > gn))
    fail(errc::invalid_argument,
         "shift modulus " + detail::fmt(std::abs(lambda)) +
             " must exceed the matrix norm " + detail::fmt(gn));
  ComplexMatrix f = ComplexMatrix::identity(g.dim());
  f -= scaled(g, Complex(1.0) / lambda);
  SeriesLog<Complex> sl = log_series(f, tail_tol);
  shift_diag(sl.log, Complex(0.0, std::numbers::pi) + std::log(lambda));
  return sl;
}

}  // namespace matlog
