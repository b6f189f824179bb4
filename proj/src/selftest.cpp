#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "continuation.hpp"
#include "error.hpp"
#include "factorization.hpp"
#include "lu.hpp"
#include "matfun.hpp"
#include "spectral.hpp"

namespace matlog::selftest {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

template <class S>
double min_pivot_of(const Matrix<S>& a) {
  // a positive pivot floor puts the factorization in clamp mode, so nearly
  // singular samples report a tiny pivot instead of throwing
  LuFactor<S> lu(a, std::numeric_limits<double>::min());
  return lu.min_pivot();
}

double trace_of(const RealMatrix& a) {
  double t = 0.0;
  for (int i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

}  // namespace

RealMatrix random_real(Rng& rng, int n) {
  RealMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.symmetric();
  return m;
}

ComplexMatrix random_complex(Rng& rng, int n) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = rng.symmetric();
      const double im = rng.symmetric();
      m(i, j) = Complex(re, im);
    }
  return m;
}

RealMatrix random_invertible_real(Rng& rng, int n) {
  for (;;) {
    RealMatrix m = random_real(rng, n);
    if (min_pivot_of(m) >= 1e-3) return m;
  }
}

ComplexMatrix random_invertible_complex(Rng& rng, int n) {
  for (;;) {
    ComplexMatrix m = random_complex(rng, n);
    if (min_pivot_of(m) >= 1e-3) return m;
  }
}

RealMatrix random_positive_det(Rng& rng, int n) {
  RealMatrix m = random_invertible_real(rng, n);
  LuFactor<double> lu(m);
  if (lu.det_sign() < 0)
    for (int j = 0; j < n; ++j) m(0, j) = -m(0, j);
  return m;
}

std::vector<Complex> charpoly_roots(const ComplexMatrix& a) {
  const int n = a.dim();
  // Faddeev-LeVerrier: c[k] = -tr(A M_k)/k with M_{k+1} = A M_k + c[k] I,
  // giving p(x) = x^n + c[1] x^{n-1} + ... + c[n]
  std::vector<Complex> c(n + 1);
  c[0] = 1.0;
  ComplexMatrix am = a;  // A * M_1 with M_1 = I
  for (int k = 1; k <= n; ++k) {
    Complex tr = 0.0;
    for (int i = 0; i < n; ++i) tr += am(i, i);
    c[k] = tr * (-1.0 / k);
    if (k < n) {
      ComplexMatrix m = am;
      shift_diag(m, c[k]);
      am = a * m;
    }
  }
  if (n == 1) return {-c[1]};

  double radius = 0.0;
  for (int k = 1; k <= n; ++k) radius = std::max(radius, std::abs(c[k]));
  radius += 1.0;  // Cauchy bound: every root satisfies |z| < 1 + max|c_k|

  // Durand-Kerner from staggered starting points on a spiral of that radius
  std::vector<Complex> z(n);
  const Complex w(0.4, 0.9);
  Complex spin = 1.0;
  for (int j = 0; j < n; ++j) {
    z[j] = radius * spin;
    spin *= w;
  }
  auto eval = [&](Complex x) {
    Complex v = c[0];
    for (int k = 1; k <= n; ++k) v = v * x + c[k];
    return v;
  };
  for (int iter = 0; iter < 512; ++iter) {
    double moved = 0.0;
    for (int j = 0; j < n; ++j) {
      Complex denom = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != j) denom *= z[j] - z[k];
      if (denom == Complex(0.0)) {  // split collided iterates and retry
        z[j] += radius * 1e-8;
        moved = radius;
        continue;
      }
      const Complex step = eval(z[j]) / denom;
      z[j] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved <= 1e-15 * radius) break;
  }
  return z;
}

double hausdorff(const std::vector<Complex>& xs, const std::vector<Complex>& ys) {
  if (xs.empty() || ys.empty())
    return (xs.empty() && ys.empty()) ? 0.0 : std::numeric_limits<double>::infinity();
  auto one_sided = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& f : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& t : to) best = std::min(best, std::abs(f - t));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(xs, ys), one_sided(ys, xs));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string criterion_pi_rotation_fixture() {
  const double pi = std::numbers::pi;
  RealMatrix l(3);
  l(0, 1) = -pi;
  l(1, 0) = pi;
  require(max_abs(l - sign_matrix_log({2, 3})) == 0.0,
          "sign-matrix log builder disagrees with the 3x3 pi-rotation block");
  RealMatrix want(3);
  want(0, 0) = -1.0;
  want(1, 1) = -1.0;
  want(2, 2) = 1.0;
  const double err = max_abs(expm(l) - want);
  require(err <= 1e-12, "exp of the pi-rotation block missed diag(-1,-1,1) by " + detail::fmt(err));
  return "max-abs error " + detail::fmt(err);
}

std::string criterion_planar_rotations() {
  const double pi = std::numbers::pi;
  double worst = 0.0;
  for (double t : {0.0, pi / 2.0, pi, 1.2345}) {
    RealMatrix g(2);
    g(0, 1) = -t;
    g(1, 0) = t;
    RealMatrix want(2);
    want(0, 0) = std::cos(t);
    want(0, 1) = -std::sin(t);
    want(1, 0) = std::sin(t);
    want(1, 1) = std::cos(t);
    const double err = max_abs(expm(g) - want);
    require(err <= 1e-12,
            "exp of the planar rotation generator at t=" + detail::fmt(t) + " missed by " +
                detail::fmt(err));
    worst = std::max(worst, err);
  }
  return "4 angles, worst max-abs error " + detail::fmt(worst);
}

std::string criterion_complex_log_batch(std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  double worst_res = 0.0;
  double worst_comm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 12;
    const ComplexMatrix a = random_invertible_complex(rng, n);
    const LogResult<Complex> lr = path_log(a);
    const double na = fro_norm(a);
    const double res = fro_norm(expm(lr.log) - a);
    require(res <= 1e-8 * std::max(1.0, na),
            "log certificate failed at sample " + std::to_string(i) + ": residual " +
                detail::fmt(res));
    const double comm = fro_norm(lr.log * a - a * lr.log);
    require(comm <= 1e-8 * na * fro_norm(lr.log),
            "log does not commute with its argument at sample " + std::to_string(i) + ": " +
                detail::fmt(comm));
    worst_res = std::max(worst_res, res / std::max(1.0, na));
    const double comm_scale = na * fro_norm(lr.log);
    if (comm_scale > 0.0) worst_comm = std::max(worst_comm, comm / comm_scale);
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 60.0, "batch took " + detail::fmt(elapsed) + " s, over the 60 s budget");
  return "100 logs, worst residual " + detail::fmt(worst_res) + ", worst commutator " +
         detail::fmt(worst_comm) + ", " + detail::fmt(elapsed) + " s";
}

std::string criterion_factor_batch(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 10;
    const RealMatrix m = random_positive_det(rng, n);
    const TwoExpFactorization f = two_exp_factor(m);
    require(f.k_negative % 2 == 0, "odd negative-eigenvalue count at sample " + std::to_string(i));
    const double res = fro_norm(expm(f.b1) * expm(f.b2) - m);
    require(res <= 1e-8 * fro_norm(m),
            "factorization certificate failed at sample " + std::to_string(i) + ": residual " +
                detail::fmt(res));
    worst = std::max(worst, res / fro_norm(m));
  }
  return "100 factorizations, worst relative residual " + detail::fmt(worst);
}

std::string criterion_negative_ray_dispatch() {
  RealMatrix m(3);
  m(0, 0) = -1.0;
  m(1, 1) = -2.0;
  m(2, 2) = 1.0;
  bool refused = false;
  try {
    ray_log(m);
  } catch (const error& e) {
    refused = e.code() == errc::spectrum_on_ray;
  }
  require(refused, "ray log accepted a matrix with eigenvalues on the closed negative axis");
  const TwoExpFactorization f = two_exp_factor(m);
  require(f.residual <= 1e-8 * fro_norm(m),
          "factorization of diag(-1,-2,1) has residual " + detail::fmt(f.residual));
  return "ray log refused (SpectrumOnRay); factorization residual " + detail::fmt(f.residual);
}

std::string criterion_doubled_block_batch(std::uint64_t seed) {
  Rng rng(seed);
  double worst_res = 0.0;
  double worst_anti = 0.0;
  double worst_square = 0.0;
  for (int i = 0; i < 50; ++i) {
    RealMatrix a(1);
    if (i == 0) {
      a = RealMatrix(2);
      a(0, 0) = -1.0;
      a(1, 1) = -2.0;
    } else {
      a = random_invertible_real(rng, 1 + i % 6);
    }
    const int n = a.dim();
    const double na = fro_norm(a);

    const LogResult<double> lr = doubled_block_log(a);

    // rebuild the intermediate square root e^{H/2} = C + iD and check the
    // identities the block embedding relies on
    const LogResult<Complex> h = path_log(to_complex(a));
    const ComplexMatrix e = expm(h.log * 0.5);
    const RealMatrix c = real_part(e);
    const RealMatrix d = imag_part(e);
    const double cd_scale = (fro_norm(c) + fro_norm(d)) * (fro_norm(c) + fro_norm(d));
    const double anti = fro_norm(c * d + d * c);
    require(anti <= 1e-10 * cd_scale,
            "C D + D C is not negligible at sample " + std::to_string(i) + ": " +
                detail::fmt(anti));
    const double square = fro_norm(c * c - d * d - a);
    require(square <= 1e-8 * na,
            "C^2 - D^2 missed the original matrix at sample " + std::to_string(i) + ": " +
                detail::fmt(square));

    const double target_norm = std::sqrt(2.0) * na;
    require(lr.residual <= 1e-8 * std::max(1.0, target_norm),
            "doubled-block certificate failed at sample " + std::to_string(i) + ": residual " +
                detail::fmt(lr.residual));
    require(lr.log.dim() == 2 * n, "doubled-block log has the wrong dimension");

    worst_res = std::max(worst_res, lr.residual / std::max(1.0, target_norm));
    worst_anti = std::max(worst_anti, anti / cd_scale);
    worst_square = std::max(worst_square, square / na);
  }
  return "50 doubled blocks, worst residual " + detail::fmt(worst_res) + ", worst CD+DC " +
         detail::fmt(worst_anti) + ", worst C^2-D^2 " + detail::fmt(worst_square);
}

std::string criterion_det_trace_identity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 8;
    RealMatrix a = random_real(rng, n);
    const double na = fro_norm(a);
    if (na > 3.0) a *= 3.0 / na;
    const double want = std::exp(trace_of(a));
    const double got = LuFactor<double>(expm(a)).det();
    const double err = std::abs(got - want);
    require(err <= 1e-8 * std::abs(want),
            "det(exp A) strayed from exp(tr A) at sample " + std::to_string(i) + ": " +
                detail::fmt(err));
    worst = std::max(worst, err / std::abs(want));
  }
  return "100 samples, worst relative error " + detail::fmt(worst);
}

std::string criterion_eigenvalue_oracle(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 5;
    const ComplexMatrix a = random_complex(rng, n);
    const std::vector<Complex> got = eigenvalues(a).values;
    const std::vector<Complex> want = charpoly_roots(a);
    const double dist = hausdorff(got, want);
    require(dist <= 1e-7 * fro_norm(a),
            "eigenvalues disagree with the polynomial-root oracle at sample " +
                std::to_string(i) + ": Hausdorff distance " + detail::fmt(dist));
    worst = std::max(worst, dist / fro_norm(a));
  }
  return "100 spectra, worst scaled Hausdorff distance " + detail::fmt(worst);
}

std::string criterion_schur_certificates(std::uint64_t seed) {
  Rng rng(seed);
  double worst_orth = 0.0;
  double worst_sim = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 8;
    const RealMatrix m = random_real(rng, n);
    const WeakSchurForm ws = weak_schur(m);
    const RealMatrix qt = transpose(ws.Q);
    const double orth = fro_norm(qt * ws.Q - RealMatrix::identity(m.dim()));
    require(orth <= 1e-10,
            "Q lost orthogonality at sample " + std::to_string(i) + ": " + detail::fmt(orth));
    const double sim = fro_norm(qt * m * ws.Q - ws.T);
    require(sim <= 1e-8 * fro_norm(m),
            "Q^t M Q strayed from T at sample " + std::to_string(i) + ": " + detail::fmt(sim));
    for (int j = 0; j < ws.k; ++j)
      for (int r = j + 1; r < m.dim(); ++r)
        require(ws.T(r, j) == 0.0, "deflated column " + std::to_string(j) +
                                       " is not exactly triangular at sample " + std::to_string(i));
    worst_orth = std::max(worst_orth, orth);
    if (fro_norm(m) > 0.0) worst_sim = std::max(worst_sim, sim / fro_norm(m));
  }
  return "100 forms, worst orthogonality " + detail::fmt(worst_orth) + ", worst similarity " +
         detail::fmt(worst_sim);
}

}  // namespace

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> results;
  auto run = [&results](int idx, const char* name, auto&& body) {
    CriterionResult r;
    r.index = idx;
    r.name = name;
    const auto start = Clock::now();
    try {
      r.detail = body();
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
      r.passed = false;
    }
    r.seconds = seconds_since(start);
    results.push_back(r);
  };
  auto sub_seed = [seed](int idx) {
    return seed + static_cast<std::uint64_t>(idx) * 0x9e3779b97f4a7c15ULL;
  };

  run(1, "pi-rotation-fixture", [] { return criterion_pi_rotation_fixture(); });
  run(2, "planar-rotations", [] { return criterion_planar_rotations(); });
  run(3, "complex-log-batch", [&] { return criterion_complex_log_batch(sub_seed(3)); });
  run(4, "factor-batch", [&] { return criterion_factor_batch(sub_seed(4)); });
  run(5, "negative-ray-dispatch", [] { return criterion_negative_ray_dispatch(); });
  run(6, "doubled-block-batch", [&] { return criterion_doubled_block_batch(sub_seed(6)); });
  run(7, "det-trace-identity", [&] { return criterion_det_trace_identity(sub_seed(7)); });
  run(8, "eigenvalue-oracle", [&] { return criterion_eigenvalue_oracle(sub_seed(8)); });
  run(9, "schur-certificates", [&] { return criterion_schur_certificates(sub_seed(9)); });

  CriterionResult total;
  total.index = 10;
  total.name = "suite-runtime";
  total.seconds = 0.0;
  bool all_passed = true;
  for (const CriterionResult& r : results) {
    total.seconds += r.seconds;
    all_passed = all_passed && r.passed;
  }
  total.passed = all_passed && total.seconds < 300.0;
  total.detail = "9 criteria in " + detail::fmt(total.seconds) + " s (budget 300 s)" +
                 (all_passed ? "" : ", with earlier failures");
  results.push_back(total);
  return results;
}

}  // namespace matlog::selftest
