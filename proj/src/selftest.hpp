#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace matlog::selftest {

// Deterministic pseudo-random source. Doubles are built directly from the
// top 53 bits of each mt19937_64 draw so sequences are identical across
// standard libraries (std::uniform_real_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double symmetric() { return 2.0 * unit() - 1.0; }

 private:
  std::mt19937_64 gen_;
};

// Entrywise uniform samples: real entries in [-1, 1); complex entries with
// independent real and imaginary parts in [-1, 1).
RealMatrix random_real(Rng& rng, int n);
ComplexMatrix random_complex(Rng& rng, int n);

// Same, but resampled until the smallest LU pivot (a cheap proxy for the
// smallest singular value) is at least 1e-3, so downstream solves are safe.
RealMatrix random_invertible_real(Rng& rng, int n);
ComplexMatrix random_invertible_complex(Rng& rng, int n);

// Invertible real sample with the first row negated when needed to force a
// positive determinant.
RealMatrix random_positive_det(Rng& rng, int n);

// Independent eigenvalue oracle: characteristic-polynomial coefficients by
// the Faddeev-LeVerrier trace recursion, roots by Durand-Kerner iteration.
// Accurate for small dimensions (intended for n <= 5).
std::vector<Complex> charpoly_roots(const ComplexMatrix& a);

// Symmetric Hausdorff distance between two finite point sets in the plane.
double hausdorff(const std::vector<Complex>& xs, const std::vector<Complex>& ys);

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // worst residuals / counts on success, failure text otherwise
};

// Runs the embedded acceptance suite: ten independent criteria covering the
// closed-form fixtures, the randomized certificate batches, and the overall
// runtime budget. Deterministic for a fixed seed.
std::vector<CriterionResult> run_all(std::uint64_t seed = 12345);

}  // namespace matlog::selftest
