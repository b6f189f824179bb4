#pragma once

#include <vector>

#include "matrix.hpp"

namespace matlog {

// Eigenvalues sorted lexicographically by (Re, Im).
struct Spectrum {
  std::vector<Complex> values;
};

// Ray t -> t * exp(i*angle), angle in [0, 2*pi).
struct Ray {
  double angle = 0.0;
};

// Eigenvalues of a general complex matrix: Householder reduction to Hessenberg
// form followed by shifted QR iteration (Wilkinson shifts).
Spectrum eigenvalues(const ComplexMatrix& a);

// Eigenvalues of a real matrix with conjugate symmetry enforced exactly:
// near-real values are flattened onto the axis and conjugate partners are
// averaged, so the returned multiset equals its own conjugate.
Spectrum eigenvalues(const RealMatrix& m);

// Ray through the widest angular gap of the spectrum (tie-break: smallest
// angle). Requires min|lambda| > 1e-12 * max|lambda|, else SingularSpectrum.
Ray select_ray(const Spectrum& s);

// True iff no eigenvalue lies on the closed negative real axis (-inf, 0],
// within a relative tolerance of 1e-12 * (1 + |lambda|).
bool ray_is_clear(const Spectrum& s);

// Partial real Schur form: Q orthogonal, T = Q^T M Q with the leading k
// columns upper triangular and T(i,i), i < k, the real eigenvalues of M,
// deflated in ascending order. The trailing block carries the non-real
// spectrum. Construction: per real eigenvalue, a unit eigenvector from inverse
// iteration, then a Householder reflection that deflates it.
struct WeakSchurForm {
  RealMatrix Q;
  RealMatrix T;
  int k = 0;
};

WeakSchurForm weak_schur(const RealMatrix& m);

// Certificate for a weak Schur form: max of ||Q^T Q - I||_F and
// ||Q^T M Q - T||_F / max(1, ||M||_F).
double weak_schur_residual(const RealMatrix& m, const WeakSchurForm& w);

// Certificate for a computed spectrum: the largest (over eigenvalues) smallest
// LU pivot of A - lambda*I, scaled by max(1, ||A||_F). Small means every
// computed eigenvalue makes A - lambda*I numerically singular, as it should.
double spectrum_residual(const ComplexMatrix& a, const Spectrum& s);

}  // namespace matlog
