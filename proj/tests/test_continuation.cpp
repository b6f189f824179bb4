#include <cmath>
#include <utility>

#include "continuation.hpp"
#include "doctest.h"
#include "lu.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "selftest.hpp"
#include "spectral.hpp"
#include "test_support.hpp"

using namespace matlog;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent logarithm of a diagonalizable 2x2 matrix: eigenvalues from the
// quadratic formula, eigenvectors from the kernel structure of a - lambda*I,
// scalar logs on the diagonal. Used as an oracle against the continuation
// engine; only the residual is compared, never the entries, since logarithm
// branches are free to differ.
ComplexMatrix eigen_log_2x2(const ComplexMatrix& a) {
  const Complex tr = a(0, 0) + a(1, 1);
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = (tr + disc) / 2.0;
  const Complex l2 = (tr - disc) / 2.0;
  const auto eigvec = [&](const Complex& l) -> std::pair<Complex, Complex> {
    const Complex xa = a(0, 1), ya = l - a(0, 0);
    const Complex xb = l - a(1, 1), yb = a(1, 0);
    if (std::abs(xa) + std::abs(ya) >= std::abs(xb) + std::abs(yb)) return {xa, ya};
    return {xb, yb};
  };
  ComplexMatrix v(2);
  const auto [x1, y1] = eigvec(l1);
  const auto [x2, y2] = eigvec(l2);
  v(0, 0) = x1;
  v(1, 0) = y1;
  v(0, 1) = x2;
  v(1, 1) = y2;
  ComplexMatrix d(2);
  d(0, 0) = std::log(l1);
  d(1, 1) = std::log(l2);
  const ComplexMatrix vinv = LuFactor<Complex>(v).solve(ComplexMatrix::identity(2));
  return v * d * vinv;
}

double eigen_gap_2x2(const ComplexMatrix& a) {
  const Complex tr = a(0, 0) + a(1, 1);
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return std::abs(std::sqrt(tr * tr - 4.0 * det));
}

}  // namespace

TEST_CASE("complex log of the identity certifies immediately") {
  const LogResult<Complex> lr = path_log(ComplexMatrix::identity(3));
  CHECK(lr.residual <= 1e-10 * std::sqrt(3.0));
  CHECK(fro_dist_identity(expm(lr.log)) <= 1e-10 * std::sqrt(3.0) + 1e-14);
}

TEST_CASE("complex log of -1 is an odd half-turn branch") {
  ComplexMatrix a(1);
  a(0, 0) = -1.0;
  const LogResult<Complex> lr = path_log(a);
  CHECK(lr.residual <= 1e-10);
  // some branch of log(-1): purely imaginary and exponentiating back to -1
  CHECK(std::fabs(lr.log(0, 0).real()) <= 1e-9);
  CHECK(std::abs(std::exp(lr.log(0, 0)) + Complex(1.0)) <= 1e-10);
}

TEST_CASE("complex log of a rotation matches an eigendecomposition oracle by residual") {
  ComplexMatrix a(2);
  a(0, 1) = -1.0;
  a(1, 0) = 1.0;
  const LogResult<Complex> lr = path_log(a);
  CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(a)));

  // hand-built diagonalization: V = [[1, 1], [-i, i]], eigenvalues {i, -i}
  ComplexMatrix v(2);
  v(0, 0) = 1.0;
  v(0, 1) = 1.0;
  v(1, 0) = Complex(0.0, -1.0);
  v(1, 1) = Complex(0.0, 1.0);
  ComplexMatrix d(2);
  d(0, 0) = std::log(Complex(0.0, 1.0));
  d(1, 1) = std::log(Complex(0.0, -1.0));
  const ComplexMatrix oracle = v * d * LuFactor<Complex>(v).solve(ComplexMatrix::identity(2));
  CHECK(fro_norm(expm(oracle) - a) <= 1e-10 * std::max(1.0, fro_norm(a)));
  // both are logarithms of the same matrix; entries may differ by branch
}

TEST_CASE("complex log agrees with the quadratic-formula oracle on random 2x2 input") {
  selftest::Rng rng(401);
  int done = 0;
  while (done < 10) {
    const ComplexMatrix a = selftest::random_invertible_complex(rng, 2);
    if (eigen_gap_2x2(a) < 1e-3 * fro_norm(a)) continue;  // oracle needs separation
    ++done;
    const double scale = 1e-8 * std::max(1.0, fro_norm(a));
    const LogResult<Complex> lr = path_log(a);
    CHECK(lr.residual <= scale);
    const ComplexMatrix oracle = eigen_log_2x2(a);
    CHECK(fro_norm(expm(oracle) - a) <= scale);
  }
}

TEST_CASE("complex log trace records a disciplined walk") {
  selftest::Rng rng(402);
  const ComplexMatrix a = selftest::random_invertible_complex(rng, 5);
  Tolerance tol;
  const LogResult<Complex> lr = path_log(a, tol);
  REQUIRE(lr.trace.steps.size() >= 2);
  for (std::size_t i = 0; i < lr.trace.steps.size(); ++i) {
    CHECK(lr.trace.steps[i].contraction <= tol.eta + 1e-12);
    if (i > 0) CHECK(lr.trace.steps[i].t < lr.trace.steps[i - 1].t);
  }
  CHECK(lr.trace.steps.back().t == 0.0);
  CHECK(lr.trace.final_residual == lr.residual);
  CHECK(lr.trace.bisections >= 0);
}

TEST_CASE("complex log respects a tightened contraction budget") {
  selftest::Rng rng(403);
  const ComplexMatrix a = selftest::random_invertible_complex(rng, 4);
  Tolerance tol;
  tol.eta = 0.1;
  const LogResult<Complex> lr = path_log(a, tol);
  CHECK(lr.residual <= tol.residual_tol * std::max(1.0, fro_norm(a)));
  for (const TraceStep& s : lr.trace.steps) CHECK(s.contraction <= tol.eta + 1e-12);
}

TEST_CASE("complex log rejects singular and non-finite input") {
  ComplexMatrix z(2);
  z(0, 0) = 1.0;  // second column/row zero
  CHECK_FAILS(singular, (void)path_log(z));
  ComplexMatrix bad(1);
  bad(0, 0) = Complex(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_FAILS(invalid_argument, (void)path_log(bad));
  Tolerance tol;
  tol.eta = 1.5;
  CHECK_FAILS(invalid_argument, (void)path_log(ComplexMatrix::identity(2), tol));
}

TEST_CASE("an unreachable certificate is reported, not fudged") {
  ComplexMatrix a(2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  a(0, 1) = 0.5;
  Tolerance tol;
  tol.residual_tol = 0.0;  // no nonzero residual can satisfy this
  CHECK_FAILS(numerical_failure, (void)path_log(a, tol));
}

TEST_CASE("real ray log handles a positive diagonal") {
  RealMatrix a(2);
  a(0, 0) = 2.0;
  a(1, 1) = 3.0;
  const LogResult<double> lr = ray_log(a);
  CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(a)));
  // derived check: the log's spectrum must be {log 2, log 3}
  const double d = selftest::hausdorff(eigenvalues(lr.log).values,
                                       {Complex(std::log(2.0)), Complex(std::log(3.0))});
  CHECK(d <= 1e-8);
}

TEST_CASE("real ray log of a rotation stays real and certifies") {
  RealMatrix a(2);
  a(0, 1) = -1.0;
  a(1, 0) = 1.0;
  const LogResult<double> lr = ray_log(a);
  CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(a)));
  CHECK(fro_norm(expm(lr.log) - a) <= 1e-9);
}

TEST_CASE("real ray log refuses spectra touching the closed negative axis") {
  RealMatrix a(2);
  a(0, 0) = -1.0;
  a(1, 1) = 1.0;
  CHECK_FAILS(spectrum_on_ray, (void)ray_log(a));
}

TEST_CASE("square log certifies against the square, not the argument") {
  RealMatrix x(2);
  x(0, 0) = -1.0;
  x(1, 1) = 1.0;
  const LogResult<double> lr = square_log(x);  // x^2 = I
  CHECK(lr.residual <= 1e-10);
  CHECK(fro_dist_identity(expm(lr.log)) <= 1e-9);
}

TEST_CASE("square log of a quarter-turn hits minus the identity") {
  RealMatrix x(2);
  x(0, 1) = -1.0;
  x(1, 0) = 1.0;
  const LogResult<double> lr = square_log(x);  // x^2 = -I
  CHECK(lr.residual <= 1e-10 * std::max(1.0, 1.0 * std::sqrt(2.0)));
  CHECK(fro_norm(expm(lr.log) + RealMatrix::identity(2)) <= 1e-9);
}

TEST_CASE("square log reports a singular spectrum for singular input") {
  RealMatrix x(2);
  x(1, 1) = 1.0;  // first row zero
  CHECK_FAILS(singular_spectrum, (void)square_log(x));
}

TEST_CASE("doubling through the square removes the ray condition") {
  const LogResult<double> id = log_from_square(RealMatrix::identity(2));
  CHECK(id.residual <= 1e-10 * std::sqrt(2.0));
  CHECK(fro_dist_identity(expm(id.log)) <= 1e-9);

  RealMatrix y(2);
  y(0, 0) = -1.0;
  y(1, 1) = -2.0;  // y itself has spectrum on the bad ray; y^2 = diag(1, 4) does not
  const LogResult<double> lr = log_from_square(y);
  RealMatrix target(2);
  target(0, 0) = 1.0;
  target(1, 1) = 4.0;
  CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(target)));
  CHECK(fro_norm(expm(lr.log) - target) <= 1e-9);

  RealMatrix g(2);
  g(0, 1) = -2.0;
  g(1, 0) = 2.0;  // g^2 = -4 I
  const LogResult<double> lg = log_from_square(g);
  CHECK(fro_norm(expm(lg.log) + 4.0 * RealMatrix::identity(2)) <= 1e-8);
}

TEST_CASE("square log certifies on random invertible real matrices") {
  selftest::Rng rng(404);
  for (int i = 0; i < 8; ++i) {
    const int n = 1 + i % 4;
    const RealMatrix x = selftest::random_invertible_real(rng, n);
    const RealMatrix target = x * x;
    const LogResult<double> lr = square_log(x);
    CHECK(lr.residual <= 1e-10 * std::max(1.0, fro_norm(target)));
    CHECK(fro_norm(expm(lr.log) - target) <= 1e-8 * std::max(1.0, fro_norm(target)));
  }
}

TEST_CASE("continuation traces surface through every engine") {
  selftest::Rng rng(405);
  const RealMatrix x = selftest::random_invertible_real(rng, 3);
  const LogResult<double> lr = square_log(x);
  REQUIRE(!lr.trace.steps.empty());
  CHECK(lr.trace.steps.back().t == 0.0);
  CHECK(lr.trace.final_residual == lr.residual);
}
