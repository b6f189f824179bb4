#include "factorization.hpp"

#include <cmath>
#include <numbers>

#include "lu.hpp"
#include "spectral.hpp"

namespace matlog {

RealMatrix reflection_prefix(int n) {
  RealMatrix m = RealMatrix::identity(n);
  m(0, 0) = -1.0;
  return m;
}

RealMatrix SignMatrix::to_matrix() const {
  if (k_negative < 0 || k_negative > n)
    fail(errc::invalid_argument, "sign count out of range");
  RealMatrix m = RealMatrix::identity(n);
  for (int i = 0; i < k_negative; ++i) m(i, i) = -1.0;
  return m;
}

RealMatrix sign_matrix_log(const SignMatrix& p) {
  if (p.k_negative < 0 || p.k_negative > p.n)
    fail(errc::invalid_argument, "sign count out of range");
  if (p.k_negative % 2 != 0)
    fail(errc::odd_parity, "a sign matrix needs an even number of -1 entries for a real logarithm");
  RealMatrix c(p.n);
  for (int b = 0; b + 1 < p.k_negative; b += 2) {
    c(b, b + 1) = -std::numbers::pi;
    c(b + 1, b) = std::numbers::pi;
  }
  return c;
}

TwoExpFactorization two_exp_factor(const RealMatrix& m, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
  const int n = m.dim();
  {
    LuFactor<double> lu(m);  // throws Singular when |det| is numerically zero
    if (lu.det_sign() < 0)
      fail(errc::non_positive_determinant, "two-exponential factorization needs det > 0");
  }

  const WeakSchurForm ws = weak_schur(m);

  // ascending deflation puts the negative real eigenvalues first
  int kneg = 0;
  while (kneg < ws.k && ws.T(kneg, kneg) < 0.0) ++kneg;
  for (int i = kneg; i < ws.k; ++i)
    if (ws.T(i, i) < 0.0)
      fail(errc::numerical_failure, "negative real eigenvalues are not contiguous after deflation");
  if (kneg % 2 != 0)
    fail(errc::parity_violation,
         "odd count of negative real eigenvalues despite det > 0 (numerical misclassification)");

  RealMatrix pa = ws.T;
  for (int i = 0; i < kneg; ++i)
    for (int j = 0; j < n; ++j) pa(i, j) = -pa(i, j);

  LogResult<double> inner;
  try {
    inner = ray_log(pa, tol);
  } catch (const error& e) {
    if (e.code() == errc::spectrum_on_ray || e.code() == errc::singular_spectrum ||
        e.code() == errc::singular)
      fail(errc::numerical_failure,
           std::string("sign-flipped Schur factor lost ray-freeness: ") + e.what());
    throw;
  }

  const RealMatrix c = sign_matrix_log({kneg, n});
  const RealMatrix qt = transpose(ws.Q);

  TwoExpFactorization out;
  out.b1 = ws.Q * c * qt;
  out.b2 = ws.Q * inner.log * qt;
  out.prefix = Prefix::identity;
  out.k_negative = kneg;
  out.residual = fro_norm(expm(out.b1, tol.series_tail_tol) * expm(out.b2, tol.series_tail_tol) - m);
  if (!(out.residual <= tol.residual_tol * fro_norm(m)))
    fail(errc::numerical_failure,
         "factorization residual " + detail::fmt(out.residual) + " exceeds its certificate");
  return out;
}

TwoExpFactorization neg_det_factor(const RealMatrix& m, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
  const int n = m.dim();
  {
    LuFactor<double> lu(m);
    if (lu.det_sign() > 0)
      fail(errc::non_negative_determinant, "this factorization needs det < 0");
  }

  RealMatrix flipped = m;
  for (int j = 0; j < n; ++j) flipped(0, j) = -flipped(0, j);

  TwoExpFactorization out = two_exp_factor(flipped, tol);
  out.prefix = Prefix::reflection;

  RealMatrix rebuilt =
      expm(out.b1, tol.series_tail_tol) * expm(out.b2, tol.series_tail_tol);
  for (int j = 0; j < n; ++j) rebuilt(0, j) = -rebuilt(0, j);
  out.residual = fro_norm(rebuilt - m);
  if (!(out.residual <= tol.residual_tol * fro_norm(m)))
    fail(errc::numerical_failure,
         "factorization residual " + detail::fmt(out.residual) + " exceeds its certificate");
  return out;
}

LogResult<double> doubled_block_log(const RealMatrix& a, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(a)) fail(errc::invalid_argument, "matrix entries must be finite");
  const int n = a.dim();
  { LuFactor<double> invertible(a); }

  const LogResult<Complex> h = path_log(to_complex(a), tol);
  const ComplexMatrix e = expm(h.log * 0.5, tol.series_tail_tol);
  const RealMatrix c = real_part(e);
  const RealMatrix d = imag_part(e);

  // s = [[c, -d], [d, c]] squares to diag(a, a) because c d + d c = 0 and
  // c^2 - d^2 = a (both inherited from e^2 = a).
  RealMatrix s(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      s(i, j) = c(i, j);
      s(i, n + j) = -d(i, j);
      s(n + i, j) = d(i, j);
      s(n + i, n + j) = c(i, j);
    }

  LogResult<double> out = square_log(s, tol);

  RealMatrix target(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      target(i, j) = a(i, j);
      target(n + i, n + j) = a(i, j);
    }
  out.residual = fro_norm(expm(out.log, tol.series_tail_tol) - target);
  out.trace.final_residual = out.residual;
  if (!(out.residual <= tol.residual_tol * std::max(1.0, fro_norm(target))))
    fail(errc::numerical_failure,
         "doubled-block residual " + detail::fmt(out.residual) + " exceeds its certificate");
  return out;
}

Component classify_component(const RealMatrix& m) {
  if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
  LuFactor<double> lu(m);  // Singular when the determinant is numerically zero
  return lu.det_sign() > 0 ? Component::g_plus : Component::g_minus;
}

}  // namespace matlog
