#include <cmath>

#include "doctest.h"
#include "factorization.hpp"
#include "lu.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "selftest.hpp"
#include "spectral.hpp"
#include "test_support.hpp"

using namespace matlog;

namespace {

constexpr double kPi = 3.14159265358979323846;

RealMatrix diag3(double a, double b, double c) {
  RealMatrix m(3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

RealMatrix diag2(double a, double b) {
  RealMatrix m(2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

RealMatrix reconstruct(const TwoExpFactorization& f, int n) {
  RealMatrix m = expm(f.b1) * expm(f.b2);
  if (f.prefix == Prefix::reflection) m = reflection_prefix(n) * m;
  return m;
}

// Orthogonal sample: the transform from the certified decomposition of a
// random symmetric matrix.
RealMatrix random_orthogonal(selftest::Rng& rng, int n) {
  const RealMatrix r = selftest::random_real(rng, n);
  const WeakSchurForm w = weak_schur(r + transpose(r));
  REQUIRE(fro_dist_identity(transpose(w.Q) * w.Q) <= 1e-10);
  return w.Q;
}

}  // namespace

TEST_CASE("the reflection prefix flips exactly the first coordinate") {
  const RealMatrix r = reflection_prefix(3);
  CHECK(r(0, 0) == -1.0);
  CHECK(r(1, 1) == 1.0);
  CHECK(r(2, 2) == 1.0);
  CHECK(max_abs(r * r - RealMatrix::identity(3)) == 0.0);
  CHECK_FAILS(invalid_argument, (void)reflection_prefix(0));
}

TEST_CASE("sign matrix log with no negatives is exactly zero") {
  const RealMatrix l = sign_matrix_log({0, 3});
  CHECK(max_abs(l) == 0.0);
}

TEST_CASE("sign matrix log of a full 2x2 flip is a half-turn generator") {
  const RealMatrix l = sign_matrix_log({2, 2});
  CHECK(l(0, 0) == 0.0);
  CHECK(l(0, 1) == -kPi);
  CHECK(l(1, 0) == kPi);
  CHECK(l(1, 1) == 0.0);
  CHECK(max_abs(expm(l) + RealMatrix::identity(2)) <= 1e-12);
}

TEST_CASE("sign matrix log of two flips in three dimensions") {
  const RealMatrix l = sign_matrix_log({2, 3});
  CHECK(l(0, 1) == -kPi);
  CHECK(l(1, 0) == kPi);
  CHECK(l(2, 2) == 0.0);
  CHECK(l(0, 2) == 0.0);
  CHECK(l(2, 0) == 0.0);
  const RealMatrix e = expm(l);
  CHECK(max_abs(e - diag3(-1.0, -1.0, 1.0)) <= 1e-12);
}

TEST_CASE("sign matrix log rejects odd flip counts and bad ranges") {
  CHECK_FAILS(odd_parity, (void)sign_matrix_log({1, 2}));
  CHECK_FAILS(odd_parity, (void)sign_matrix_log({3, 4}));
  CHECK_FAILS(invalid_argument, (void)sign_matrix_log({4, 2}));
  CHECK_FAILS(invalid_argument, (void)sign_matrix_log({-2, 2}));
}

TEST_CASE("sign matrix log exponentiates back exactly for every even count") {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k <= n; k += 2) {
      const SignMatrix p{k, n};
      const RealMatrix e = expm(sign_matrix_log(p));
      CHECK(max_abs(e - p.to_matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("sign matrix materialization") {
  const RealMatrix p = SignMatrix{2, 3}.to_matrix();
  CHECK(max_abs(p - diag3(-1.0, -1.0, 1.0)) == 0.0);
}

TEST_CASE("two-exponential factorization of the identity is trivial on the left") {
  const TwoExpFactorization f = two_exp_factor(RealMatrix::identity(3));
  CHECK(f.prefix == Prefix::identity);
  CHECK(f.k_negative == 0);
  CHECK(max_abs(f.b1) == 0.0);
  CHECK(fro_norm(f.b2) <= 1e-8);
  CHECK(f.residual <= 1e-10 * std::sqrt(3.0));
}

TEST_CASE("two-exponential factorization absorbs negative eigenvalues in pairs") {
  const RealMatrix m = diag3(-1.0, -2.0, 1.0);
  const TwoExpFactorization f = two_exp_factor(m);
  CHECK(f.k_negative == 2);
  CHECK(f.prefix == Prefix::identity);
  CHECK(f.residual <= 1e-10 * fro_norm(m));
  CHECK(fro_norm(reconstruct(f, 3) - m) <= 1e-8 * fro_norm(m));
}

TEST_CASE("two-exponential factorization requires positive determinant") {
  CHECK_FAILS(non_positive_determinant, (void)two_exp_factor(diag2(-1.0, 1.0)));
  CHECK_FAILS(singular, (void)two_exp_factor(diag2(0.0, 1.0)));
}

TEST_CASE("two-exponential factorization on random positive-determinant input") {
  selftest::Rng rng(501);
  for (int i = 0; i < 12; ++i) {
    const int n = 1 + i % 6;
    const RealMatrix m = selftest::random_positive_det(rng, n);
    const TwoExpFactorization f = two_exp_factor(m);
    CHECK(f.k_negative % 2 == 0);
    CHECK(f.residual <= 1e-10 * std::max(1.0, fro_norm(m)));
    CHECK(fro_norm(reconstruct(f, n) - m) <= 1e-8 * std::max(1.0, fro_norm(m)));
  }
}

TEST_CASE("negative-determinant factorization reports the reflection prefix") {
  const RealMatrix m = diag2(-1.0, 1.0);
  const TwoExpFactorization f = neg_det_factor(m);
  CHECK(f.prefix == Prefix::reflection);
  CHECK(max_abs(f.b1) == 0.0);
  CHECK(fro_norm(f.b2) <= 1e-8);
  CHECK(f.residual <= 1e-10 * fro_norm(m));
  CHECK(fro_norm(reconstruct(f, 2) - m) <= 1e-8 * fro_norm(m));
}

TEST_CASE("negative-determinant factorization of a mixed diagonal") {
  const RealMatrix m = diag3(1.0, 1.0, -2.0);
  const TwoExpFactorization f = neg_det_factor(m);
  CHECK(f.prefix == Prefix::reflection);
  CHECK(f.residual <= 1e-10 * fro_norm(m));
  CHECK(fro_norm(reconstruct(f, 3) - m) <= 1e-8 * fro_norm(m));
}

TEST_CASE("negative-determinant factorization rejects the wrong component") {
  CHECK_FAILS(non_negative_determinant, (void)neg_det_factor(RealMatrix::identity(2)));
  CHECK_FAILS(singular, (void)neg_det_factor(diag2(0.0, 1.0)));
}

TEST_CASE("factor path stays inside the component at every intermediate time") {
  selftest::Rng rng(502);
  for (int i = 0; i < 6; ++i) {
    const int n = 2 + i % 4;
    const bool neg = i % 2 == 1;
    RealMatrix m = selftest::random_positive_det(rng, n);
    if (neg) {
      for (int c = 0; c < n; ++c) m(0, c) = -m(0, c);
    }
    const TwoExpFactorization f = neg ? neg_det_factor(m) : two_exp_factor(m);
    const int want_sign = neg ? -1 : 1;
    for (int step = 0; step <= 10; ++step) {
      const double t = 0.1 * step;
      RealMatrix p = expm(f.b1 * t) * expm(f.b2 * t);
      if (f.prefix == Prefix::reflection) p = reflection_prefix(n) * p;
      CHECK(LuFactor<double>(p).det_sign() == want_sign);
    }
  }
}

TEST_CASE("exponentials commute with orthogonal conjugation") {
  selftest::Rng rng(503);
  const int n = 4;
  const RealMatrix q = random_orthogonal(rng, n);
  RealMatrix c = selftest::random_real(rng, n);
  RealMatrix b = selftest::random_real(rng, n);
  const RealMatrix lhs = expm(q * c * transpose(q)) * expm(q * b * transpose(q));
  const RealMatrix rhs = q * (expm(c) * expm(b)) * transpose(q);
  CHECK(fro_norm(lhs - rhs) <= 1e-9 * std::max(1.0, fro_norm(rhs)));
}

TEST_CASE("doubled block log of the identity") {
  const LogResult<double> lr = doubled_block_log(RealMatrix::identity(2));
  CHECK(lr.residual <= 1e-10 * 2.0);
  CHECK(fro_dist_identity(expm(lr.log)) <= 1e-9);
  CHECK(lr.log.dim() == 4);
}

TEST_CASE("doubled block log of -1 is a real half-turn") {
  RealMatrix a(1);
  a(0, 0) = -1.0;
  const LogResult<double> lr = doubled_block_log(a);
  REQUIRE(lr.log.dim() == 2);
  const RealMatrix e = expm(lr.log);
  CHECK(fro_norm(e + RealMatrix::identity(2)) <= 1e-9);
}

TEST_CASE("doubled block log certifies against the block diagonal target") {
  const RealMatrix a = diag2(-1.0, -2.0);
  const LogResult<double> lr = doubled_block_log(a);
  REQUIRE(lr.log.dim() == 4);
  RealMatrix target(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      target(i, j) = a(i, j);
      target(2 + i, 2 + j) = a(i, j);
    }
  CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(target)));
  CHECK(fro_norm(expm(lr.log) - target) <= 1e-8 * std::max(1.0, fro_norm(target)));
}

TEST_CASE("doubled block log rejects singular input") {
  CHECK_FAILS(singular, (void)doubled_block_log(diag2(0.0, 1.0)));
}

TEST_CASE("component classification follows the determinant sign") {
  CHECK(classify_component(RealMatrix::identity(3)) == Component::g_plus);
  CHECK(classify_component(reflection_prefix(3)) == Component::g_minus);
  CHECK(classify_component(diag3(-1.0, -2.0, 1.0)) == Component::g_plus);
  CHECK_FAILS(singular, (void)classify_component(diag2(0.0, 1.0)));
}
