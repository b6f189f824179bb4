#pragma once

#include "continuation.hpp"
#include "matrix.hpp"

namespace matlog {

// diag(-1, 1, ..., 1): reflects the first coordinate; the orthogonal prefix
// used for negative determinants.
RealMatrix reflection_prefix(int n);

// diag(-1 x k, +1 x (n-k)). k must be even for the matrix to admit a real
// logarithm made of plane rotations.
struct SignMatrix {
  int k_negative = 0;
  int n = 0;
  RealMatrix to_matrix() const;
};

// Real logarithm of a sign matrix with an even number of -1 entries:
// block-diagonal with k/2 rotation blocks [[0, -pi], [pi, 0]]. Throws OddParity
// for odd k.
RealMatrix sign_matrix_log(const SignMatrix& p);

enum class Prefix { identity, reflection };

// m = prefix * expm(b1) * expm(b2), certified by residual (Frobenius).
struct TwoExpFactorization {
  RealMatrix b1;
  RealMatrix b2;
  Prefix prefix = Prefix::identity;
  double residual = 0.0;
  int k_negative = 0;  // negative real eigenvalues absorbed by the rotation log
};

// Factors a real matrix with positive determinant into two real exponentials:
// a weak Schur form separates the real eigenvalues, the (evenly many) negative
// ones are flipped by a sign matrix whose rotation logarithm gives b1, and the
// flipped triangular factor - now with spectrum off (-inf, 0] - yields b2
// through the real ray logarithm.
TwoExpFactorization two_exp_factor(const RealMatrix& m, const Tolerance& tol = {});

// det < 0 variant: factors the first-row-reflected matrix and reports the
// reflection prefix, so m = reflection_prefix(n) * expm(b1) * expm(b2).
TwoExpFactorization neg_det_factor(const RealMatrix& m, const Tolerance& tol = {});

// Real logarithm of diag(a, a) for any invertible real a: from the complex
// logarithm h of a, the real/imaginary parts of expm(h/2) assemble a real
// matrix s with s^2 = diag(a, a), and the square logarithm finishes the job.
LogResult<double> doubled_block_log(const RealMatrix& a, const Tolerance& tol = {});

// Connected component of the real general linear group by determinant sign.
enum class Component { g_plus, g_minus };

Component classify_component(const RealMatrix& m);

}  // namespace matlog
