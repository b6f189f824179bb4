#pragma once

#include <vector>

#include "matfun.hpp"
#include "matrix.hpp"

namespace matlog {

struct TraceStep {
  double t = 0.0;            // accepted path parameter
  double contraction = 0.0;  // ||exp(-h) Phi(t) - I||_F at acceptance
  int series_terms = 0;      // log-series terms consumed by the update
};

struct ContinuationTrace {
  std::vector<TraceStep> steps;  // first entry is the start point t0
  int bisections = 0;            // rejected step proposals (halvings)
  double final_residual = 0.0;
};

// A logarithm with its certificate: residual = ||expm(log) - target||_F, where
// the target is the matrix the operation promises to hit (the input itself,
// its square, or a doubled block). Real-typed instantiations are real by
// construction, not by rounding.
template <class S>
struct LogResult {
  Matrix<S> log;
  double residual = 0.0;
  ContinuationTrace trace;
};

// Complex logarithm by homotopy continuation: walks Phi(t) = A - t*e^{i*theta} I
// from a dominating start down to A along the ray through the widest spectral
// gap, accepting steps whose multiplicative correction stays eta-contractive.
LogResult<Complex> path_log(const ComplexMatrix& a, const Tolerance& tol = {});

// Real logarithm along Phi(t) = A + t*I, for spectra avoiding (-inf, 0].
LogResult<double> ray_log(const RealMatrix& a, const Tolerance& tol = {});

// Real logarithm of x^2 along Phi(t) = x^2 - 2 Re(phi(t)) x + |phi(t)|^2 I,
// which stays real even though the selected ray is genuinely complex.
LogResult<double> square_log(const RealMatrix& x, const Tolerance& tol = {});

// Real logarithm of y^2 for any invertible real y (no ray condition on y).
LogResult<double> log_from_square(const RealMatrix& y, const Tolerance& tol = {});

}  // namespace matlog
