#include "continuation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "lu.hpp"
#include "spectral.hpp"

namespace matlog {

namespace {

// Walks t from t0 down to 0. Invariant: exp(h) = path(t) within the series
// budget at every accepted t. Each iteration first probes t' = 0 (the walk
// finishes as soon as the remaining correction is contractive), then falls
// back to the proposal delta = t/2 with bisection on rejection down to
// delta_min = t * eps. On acceptance h grows by log_series(path(t)^-1 path(t')),
// which commutes with everything built from the same matrix.
//
// Corrections are anchored at the exact path value path(t) rather than at the
// recomputed exponential of the running sum. The two anchors agree under the
// loop invariant, but the exponential form feeds its own rounding noise back
// into every later correction, where the cross terms of non-commuting
// summands amplify it at a rate set by the spread of the logarithm's
// spectrum; the path anchor keeps each correction's error independent. The
// small residue the summation does accumulate is mopped up by a finishing
// polish against the target, kept only while it measurably improves the
// certified residual.
template <class S>
LogResult<S> run_continuation(const std::function<Matrix<S>(double)>& path, double t0,
                              SeriesLog<S> init, const Tolerance& tol) {
  LogResult<S> out;
  out.log = std::move(init.log);
  ContinuationTrace& trace = out.trace;
  trace.steps.push_back({t0, init.contraction, init.terms});

  const Matrix<S> target = path(0.0);
  const double target_scale = std::max(1.0, fro_norm(target));
  const int n = target.dim();
  constexpr int kMaxSteps = 10000;

  double t = t0;
  while (t > 0.0) {
    if (static_cast<int>(trace.steps.size()) > kMaxSteps)
      fail(errc::numerical_failure, "continuation exceeded its step budget");

    std::optional<LuFactor<S>> lu;
    try {
      lu.emplace(path(t));
    } catch (const error&) {
      fail(errc::numerical_failure,
           "path value is numerically singular at t = " + detail::fmt(t));
    }

    Matrix<S> x(n);
    auto contraction_at = [&](double tp) {
      x = lu->solve(path(tp));
      return fro_dist_identity(x);
    };

    double accepted = -1.0;
    double r = contraction_at(0.0);
    if (r <= tol.eta) {
      accepted = 0.0;
    } else {
      double delta = 0.5 * t;
      const double delta_min = t * std::numeric_limits<double>::epsilon();
      while (delta >= delta_min && delta > 0.0) {
        const double tp = t - delta;
        r = contraction_at(tp);
        if (r <= tol.eta) {
          accepted = tp;
          break;
        }
        delta *= 0.5;
        ++trace.bisections;
      }
      if (accepted < 0.0)
        fail(errc::numerical_failure,
             "continuation step collapsed near t = " + detail::fmt(t) +
                 " (path approaches the spectrum)");
    }

    const SeriesLog<S> corr = log_series(x, tol.series_tail_tol);
    out.log += corr.log;
    t = accepted;
    trace.steps.push_back({t, r, corr.terms});
  }

  Matrix<S> e = expm(out.log, tol.series_tail_tol);
  out.residual = fro_norm(e - target);
  constexpr int kPolishRounds = 6;
  for (int round = 0; round < kPolishRounds; ++round) {
    if (out.residual <= 0.05 * tol.residual_tol * target_scale) break;
    std::optional<LuFactor<S>> lu;
    try {
      lu.emplace(e);
    } catch (const error&) {
      break;
    }
    const Matrix<S> c = lu->solve(target);
    if (!(fro_dist_identity(c) < 1.0)) break;
    Matrix<S> refined = out.log;
    refined += log_series(c, tol.series_tail_tol).log;
    Matrix<S> e2 = expm(refined, tol.series_tail_tol);
    const double r2 = fro_norm(e2 - target);
    if (!(r2 < out.residual)) break;  // keep the better certificate
    out.log = std::move(refined);
    e = std::move(e2);
    out.residual = r2;
  }
  trace.final_residual = out.residual;
  if (!(out.residual <= tol.residual_tol * target_scale))
    fail(errc::numerical_failure,
         "residual certificate failed: " + detail::fmt(out.residual) + " exceeds " +
             detail::fmt(tol.residual_tol * target_scale));
  return out;
}

}  // namespace

LogResult<Complex> path_log(const ComplexMatrix& a, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(a)) fail(errc::invalid_argument, "matrix entries must be finite");
  { LuFactor<Complex> invertible(a); }  // throws Singular otherwise
  const Ray ray = select_ray(eigenvalues(a));
  const Complex dir = std::polar(1.0, ray.angle);

  const double na = fro_norm(a);
  const double eta_eff = std::min(tol.eta, 0.5);
  const double t0 = std::max(2.0 * (na + 1.0), na / eta_eff + 1.0);

  SeriesLog<Complex> init = shifted_exp_log(a, t0 * dir, tol.series_tail_tol);
  auto path = [&a, dir](double t) {
    ComplexMatrix p = a;
    shift_diag(p, -(t * dir));
    return p;
  };
  return run_continuation<Complex>(path, t0, std::move(init), tol);
}

LogResult<double> ray_log(const RealMatrix& a, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(a)) fail(errc::invalid_argument, "matrix entries must be finite");
  if (!ray_is_clear(eigenvalues(a)))
    fail(errc::spectrum_on_ray, "an eigenvalue lies on (-inf, 0]");

  const double na = fro_norm(a);
  const double eta_eff = std::min(tol.eta, 0.5);
  const double t0 = std::max(2.0 * (na + 1.0), na / eta_eff + 1.0);

  RealMatrix f = a * (1.0 / t0);
  shift_diag(f, 1.0);
  SeriesLog<double> init = log_series(f, tol.series_tail_tol);
  shift_diag(init.log, std::log(t0));

  auto path = [&a](double t) {
    RealMatrix p = a;
    shift_diag(p, t);
    return p;
  };
  return run_continuation<double>(path, t0, std::move(init), tol);
}

LogResult<double> square_log(const RealMatrix& x, const Tolerance& tol) {
  tol.validate();
  if (!all_finite(x)) fail(errc::invalid_argument, "matrix entries must be finite");
  // a numerically singular x surfaces here as SingularSpectrum (0 is in the
  // spectrum, so no ray can avoid it)
  const Ray ray = select_ray(eigenvalues(x));
  const double c = std::cos(ray.angle);

  const double nx = fro_norm(x);
  const double m = std::min(tol.eta, 0.5);
  const double umax = std::sqrt(1.0 + m) - 1.0;
  const double t0 = std::max(2.0 * (nx + 1.0) * (nx + 1.0), nx / umax + 1.0);

  const RealMatrix xx = x * x;
  auto path = [&x, &xx, c](double t) {
    RealMatrix p = xx;
    p += x * (-2.0 * t * c);
    shift_diag(p, t * t);
    return p;
  };

  SeriesLog<double> init = log_series(path(t0) * (1.0 / (t0 * t0)), tol.series_tail_tol);
  shift_diag(init.log, 2.0 * std::log(t0));
  return run_continuation<double>(path, t0, std::move(init), tol);
}

LogResult<double> log_from_square(const RealMatrix& y, const Tolerance& tol) {
  return square_log(y, tol);
}

}  // namespace matlog
