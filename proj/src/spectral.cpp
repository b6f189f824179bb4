#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lu.hpp"

namespace matlog {

namespace {

constexpr double kDeflateTol = 1e-13;   // relative subdiagonal deflation threshold
constexpr double kRealImagTol = 1e-9;   // |Im| below this (times the matrix norm) counts as real
constexpr double kSpectrumGapTol = 1e-12;

// Householder similarity reduction to upper Hessenberg form, in place.
void hessenberg_reduce(ComplexMatrix& h) {
  const int n = h.dim();
  std::vector<Complex> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double below = 0.0;
    for (int i = k + 2; i < n; ++i) below += sq_abs(h(i, k));
    if (below == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(sq_abs(x0) + below);
    const Complex phase = (x0 == Complex(0)) ? Complex(1) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;

    const int m = n - k - 1;  // reflector acts on rows/cols k+1..n-1
    v[0] = x0 - alpha;
    for (int i = 1; i < m; ++i) v[i] = h(k + 1 + i, k);
    double vsq = 0.0;
    for (int i = 0; i < m; ++i) vsq += sq_abs(v[i]);
    if (vsq == 0.0) continue;
    const double beta = 2.0 / vsq;

    // left: H <- (I - beta v v^H) H on rows k+1.., columns k..
    for (int j = k; j < n; ++j) {
      Complex dot(0);
      for (int i = 0; i < m; ++i) dot += std::conj(v[i]) * h(k + 1 + i, j);
      dot *= beta;
      for (int i = 0; i < m; ++i) h(k + 1 + i, j) -= v[i] * dot;
    }
    // right: H <- H (I - beta v v^H) on all rows, columns k+1..
    for (int r = 0; r < n; ++r) {
      Complex dot(0);
      for (int i = 0; i < m; ++i) dot += h(r, k + 1 + i) * v[i];
      dot *= beta;
      for (int i = 0; i < m; ++i) h(r, k + 1 + i) -= dot * std::conj(v[i]);
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0;
  }
}

struct Givens {
  double c;
  Complex s;
};

// Rotation [c, s; -conj(s), c] with real c mapping (f, g) to (r, 0).
Givens make_givens(Complex f, Complex g) {
  if (g == Complex(0)) return {1.0, Complex(0)};
  if (f == Complex(0)) return {0.0, std::conj(g) / std::abs(g)};
  const double af = std::abs(f);
  const double d = std::sqrt(sq_abs(f) + sq_abs(g));
  return {af / d, (f / af) * std::conj(g) / d};
}

// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
Complex wilkinson_shift(const ComplexMatrix& h, int hi) {
  const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
  const Complex c = h(hi, hi - 1), d = h(hi, hi);
  const Complex p = (a - d) * 0.5;
  const Complex disc = std::sqrt(p * p + b * c);
  const Complex r1 = d + p + disc;
  const Complex r2 = d + p - disc;
  return (std::abs(r1 - d) < std::abs(r2 - d)) ? r1 : r2;
}

// One explicit-shift QR sweep on the decoupled window [lo, hi].
void qr_step(ComplexMatrix& h, int lo, int hi, Complex mu) {
  std::vector<Givens> rot(hi - lo);
  for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
  for (int i = lo; i < hi; ++i) {
    const Givens g = make_givens(h(i, i), h(i + 1, i));
    rot[i - lo] = g;
    for (int j = i; j <= hi; ++j) {
      const Complex u = h(i, j), w = h(i + 1, j);
      h(i, j) = g.c * u + g.s * w;
      h(i + 1, j) = -std::conj(g.s) * u + g.c * w;
    }
  }
  for (int i = lo; i < hi; ++i) {
    const Givens g = rot[i - lo];
    for (int r = lo; r <= hi; ++r) {
      const Complex u = h(r, i), w = h(r, i + 1);
      h(r, i) = g.c * u + std::conj(g.s) * w;
      h(r, i + 1) = -g.s * u + g.c * w;
    }
  }
  for (int i = lo; i <= hi; ++i) h(i, i) += mu;
}

std::vector<Complex> eig_qr(ComplexMatrix h) {
  const int n = h.dim();
  std::vector<Complex> out(n);
  if (n == 1) {
    out[0] = h(0, 0);
    return out;
  }
  const double anorm = fro_norm(h);
  hessenberg_reduce(h);

  auto negligible = [&](int i) {
    const double d = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
    const double thresh = kDeflateTol * (d > 0.0 ? d : anorm);
    return std::abs(h(i, i - 1)) <= thresh;
  };

  int hi = n - 1;
  int iter = 0, stagnant = 0;
  const int max_iter = 100 * n;
  while (hi > 0) {
    int lo = hi;
    while (lo > 0 && !negligible(lo)) --lo;
    if (lo > 0) h(lo, lo - 1) = 0;
    if (lo == hi) {
      --hi;
      stagnant = 0;
      continue;
    }
    Complex mu = wilkinson_shift(h, hi);
    if (stagnant > 0 && stagnant % 15 == 0) {
      // exceptional shift to break symmetric cycles
      mu = h(hi, hi) + std::abs(h(hi, hi - 1)) * Complex(1.3, 0.7);
    }
    qr_step(h, lo, hi, mu);
    ++iter;
    ++stagnant;
    if (iter > max_iter)
      fail(errc::numerical_failure,
           "eigenvalue iteration did not converge within " + std::to_string(max_iter) + " sweeps");
  }
  for (int i = 0; i < n; ++i) out[i] = h(i, i);
  return out;
}

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Unit eigenvector of a real matrix for a (refined copy of a) real eigenvalue,
// by inverse iteration with clamped pivots, then two Rayleigh refinement steps.
struct EigVec {
  std::vector<double> v;
  double lambda = 0.0;
  double resid = 0.0;
};

double vec_resid(const RealMatrix& b, const std::vector<double>& v, double lam) {
  const int m = b.dim();
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    double r = -lam * v[i];
    for (int j = 0; j < m; ++j) r += b(i, j) * v[j];
    s += r * r;
  }
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s == 0.0 || !std::isfinite(s)) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
    return;
  }
  for (double& x : v) x /= s;
}

EigVec real_eigenvector(const RealMatrix& b, double lambda0, double scale) {
  const int m = b.dim();
  const double eps = std::numeric_limits<double>::epsilon();
  const double target = 1e-12 * scale;

  auto shifted = [&](double lam) {
    RealMatrix s = b;
    shift_diag(s, -lam);
    return s;
  };
  auto floor_for = [&](const RealMatrix& s) {
    return std::max(m * eps * max_abs(s), std::numeric_limits<double>::min());
  };

  EigVec best;
  best.resid = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= std::min(m, 3) && best.resid > target; ++attempt) {
    std::vector<double> x(m, 0.0);
    if (attempt == 0)
      std::fill(x.begin(), x.end(), 1.0);
    else
      x[attempt - 1] = 1.0;
    normalize(x);

    double lam = lambda0;
    RealMatrix s = shifted(lam);
    LuFactor<double> lu(s, floor_for(s));
    double resid = vec_resid(b, x, lam);
    for (int it = 0; it < 50 && resid > target; ++it) {
      x = lu.solve(x);
      normalize(x);
      resid = vec_resid(b, x, lam);
    }
    // two refinement steps: Rayleigh update, one inverse step each
    for (int rs = 0; rs < 2; ++rs) {
      double rq = 0.0;
      for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) row += b(i, j) * x[j];
        rq += x[i] * row;
      }
      lam = rq;
      RealMatrix s2 = shifted(lam);
      LuFactor<double> lu2(s2, floor_for(s2));
      x = lu2.solve(x);
      normalize(x);
    }
    resid = vec_resid(b, x, lam);
    if (resid < best.resid) best = {x, lam, resid};
  }

  if (!(best.resid <= 1e-6 * scale))
    fail(errc::numerical_failure,
         "inverse iteration stagnated (residual " + std::to_string(best.resid) + ")");
  // deterministic sign: first sizable component positive
  for (double x : best.v) {
    if (std::abs(x) > 1e-8) {
      if (x < 0)
        for (double& y : best.v) y = -y;
      break;
    }
  }
  return best;
}

}  // namespace

Spectrum eigenvalues(const ComplexMatrix& a) {
  if (!all_finite(a)) fail(errc::invalid_argument, "matrix entries must be finite");
  Spectrum s{eig_qr(a)};
  std::sort(s.values.begin(), s.values.end(), lex_less);
  return s;
}

Spectrum eigenvalues(const RealMatrix& m) {
  Spectrum s = eigenvalues(to_complex(m));
  const double flat = kRealImagTol * fro_norm(m);

  std::vector<Complex> fixed;
  std::vector<Complex> pos, neg;
  for (const Complex& z : s.values) {
    if (std::abs(z.imag()) <= flat)
      fixed.emplace_back(z.real(), 0.0);
    else if (z.imag() > 0)
      pos.push_back(z);
    else
      neg.push_back(z);
  }
  // pair each upper-half value with its nearest conjugate candidate and average
  std::vector<bool> used(neg.size(), false);
  for (const Complex& p : pos) {
    int bestj = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < neg.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(p - std::conj(neg[j]));
      if (d < bestd) { bestd = d; bestj = static_cast<int>(j); }
    }
    if (bestj < 0) {
      fixed.emplace_back(p.real(), 0.0);  // unmatched: flatten
      continue;
    }
    used[bestj] = true;
    const Complex avg = (p + std::conj(neg[bestj])) * 0.5;
    fixed.push_back(avg);
    fixed.push_back(std::conj(avg));
  }
  for (size_t j = 0; j < neg.size(); ++j)
    if (!used[j]) fixed.emplace_back(neg[j].real(), 0.0);

  std::sort(fixed.begin(), fixed.end(), lex_less);
  return Spectrum{fixed};
}

Ray select_ray(const Spectrum& s) {
  if (s.values.empty()) fail(errc::invalid_argument, "empty spectrum");
  double maxa = 0.0, mina = std::numeric_limits<double>::infinity();
  for (const Complex& z : s.values) {
    const double a = std::abs(z);
    maxa = std::max(maxa, a);
    mina = std::min(mina, a);
  }
  if (maxa == 0.0 || mina <= kSpectrumGapTol * maxa)
    fail(errc::singular_spectrum, "an eigenvalue sits at (or numerically at) the origin");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> args;
  args.reserve(s.values.size());
  for (const Complex& z : s.values) {
    double a = std::atan2(z.imag(), z.real());
    if (a < 0) a += two_pi;
    args.push_back(a);
  }
  std::sort(args.begin(), args.end());

  const size_t m = args.size();
  double best_gap = -1.0, best_theta = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double next = (i + 1 < m) ? args[i + 1] : args[0] + two_pi;
    const double gap = next - args[i];
    double theta = args[i] + gap / 2.0;
    if (theta >= two_pi - 1e-12) theta -= two_pi;  // wrap, treating ~2*pi as 0
    if (theta < 0.0) theta = 0.0;
    if (gap > best_gap + 1e-12) {
      best_gap = gap;
      best_theta = theta;
    } else if (std::abs(gap - best_gap) <= 1e-12 && theta < best_theta) {
      best_theta = theta;
    }
  }
  return Ray{best_theta};
}

bool ray_is_clear(const Spectrum& s) {
  for (const Complex& z : s.values) {
    const double tol = 1e-12 * (1.0 + std::abs(z));
    if (std::abs(z.imag()) <= tol && z.real() <= tol) return false;
  }
  return true;
}

WeakSchurForm weak_schur(const RealMatrix& m) {
  if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
  const int n = m.dim();
  const double scale = std::max(fro_norm(m), 1.0);
  WeakSchurForm out{RealMatrix::identity(n), m, 0};

  while (out.k < n) {
    const int mdim = n - out.k;
    RealMatrix block(mdim);
    for (int i = 0; i < mdim; ++i)
      for (int j = 0; j < mdim; ++j) block(i, j) = out.T(out.k + i, out.k + j);

    // smallest remaining real eigenvalue (values sorted by (Re, Im))
    bool found = false;
    double lam = 0.0;
    for (const Complex& z : eigenvalues(block).values) {
      if (z.imag() == 0.0) {
        lam = z.real();
        found = true;
        break;
      }
    }
    if (!found) break;

    if (mdim == 1) {
      ++out.k;
      continue;
    }

    const EigVec ev = real_eigenvector(block, lam, scale);

    // Householder reflection mapping the eigenvector to +-e1
    std::vector<double> u = ev.v;
    const double alpha = (u[0] >= 0.0) ? -1.0 : 1.0;
    u[0] -= alpha;
    double usq = 0.0;
    for (double x : u) usq += x * x;
    if (usq > 0.0) {
      const double beta = 2.0 / usq;
      const int off = out.k;
      // T <- H T (rows off.., deflated columns < off stay zero)
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int i = 0; i < mdim; ++i) dot += u[i] * out.T(off + i, j);
        dot *= beta;
        if (dot == 0.0) continue;
        for (int i = 0; i < mdim; ++i) out.T(off + i, j) -= u[i] * dot;
      }
      // T <- T H and Q <- Q H (columns off..)
      for (int r = 0; r < n; ++r) {
        double dot = 0.0;
        for (int i = 0; i < mdim; ++i) dot += out.T(r, off + i) * u[i];
        dot *= beta;
        for (int i = 0; i < mdim; ++i) out.T(r, off + i) -= dot * u[i];
      }
      for (int r = 0; r < n; ++r) {
        double dot = 0.0;
        for (int i = 0; i < mdim; ++i) dot += out.Q(r, off + i) * u[i];
        dot *= beta;
        for (int i = 0; i < mdim; ++i) out.Q(r, off + i) -= dot * u[i];
      }
    }

    // the new column must have deflated; certify, then zero it exactly
    double below = 0.0;
    for (int i = out.k + 1; i < n; ++i) below = std::max(below, std::abs(out.T(i, out.k)));
    if (below > 1e-6 * scale)
      fail(errc::numerical_failure, "deflation left a large subdiagonal column");
    for (int i = out.k + 1; i < n; ++i) out.T(i, out.k) = 0.0;
    ++out.k;
  }
  return out;
}

double weak_schur_residual(const RealMatrix& m, const WeakSchurForm& w) {
  const RealMatrix qt = transpose(w.Q);
  const double orth = fro_dist_identity(qt * w.Q);
  const double sim = fro_norm(qt * m * w.Q - w.T) / std::max(1.0, fro_norm(m));
  return std::max(orth, sim);
}

double spectrum_residual(const ComplexMatrix& a, const Spectrum& s) {
  double worst = 0.0;
  for (const Complex& z : s.values) {
    ComplexMatrix shifted = a;
    shift_diag(shifted, -z);
    LuFactor<Complex> lu(shifted, std::numeric_limits<double>::min());
    worst = std::max(worst, lu.min_pivot());
  }
  return worst / std::max(1.0, fro_norm(a));
}

}  // namespace matlog
