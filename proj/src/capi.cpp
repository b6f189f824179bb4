#include "matlog.h"

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "continuation.hpp"
#include "error.hpp"
#include "factorization.hpp"
#include "matfun.hpp"
#include "matrix.hpp"
#include "selftest.hpp"
#include "spectral.hpp"

using namespace matlog;

struct ml_matrix {
  std::variant<RealMatrix, ComplexMatrix> m;
};

struct ml_trace {
  ContinuationTrace t;
};

struct ml_selftest_report {
  std::vector<selftest::CriterionResult> rows;
};

namespace {

thread_local std::string t_last_error;

ml_status map_code(errc c) {
  switch (c) {
    case errc::invalid_argument:         return ML_INVALID_ARGUMENT;
    case errc::dimension_mismatch:       return ML_DIMENSION_MISMATCH;
    case errc::singular:                 return ML_SINGULAR;
    case errc::not_contractive:          return ML_NOT_CONTRACTIVE;
    case errc::singular_spectrum:        return ML_SINGULAR_SPECTRUM;
    case errc::spectrum_on_ray:          return ML_SPECTRUM_ON_RAY;
    case errc::non_positive_determinant: return ML_NON_POSITIVE_DETERMINANT;
    case errc::non_negative_determinant: return ML_NON_NEGATIVE_DETERMINANT;
    case errc::odd_parity:               return ML_ODD_PARITY;
    case errc::parity_violation:         return ML_PARITY_VIOLATION;
    case errc::numerical_failure:        return ML_NUMERICAL_FAILURE;
  }
  return ML_NUMERICAL_FAILURE;
}

ml_status set_error(ml_status s, const char* msg) {
  t_last_error = msg;
  return s;
}

template <class F>
ml_status guarded(F&& body) {
  try {
    return body();
  } catch (const error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return ML_NUMERICAL_FAILURE;
  }
}

Tolerance cvt(const ml_tolerance* t) {
  Tolerance out;
  if (t) {
    out.residual_tol = t->residual_tol;
    out.series_tail_tol = t->series_tail_tol;
    out.eta = t->eta;
  }
  return out;
}

const RealMatrix& require_real(const ml_matrix* m) {
  if (const RealMatrix* r = std::get_if<RealMatrix>(&m->m)) return *r;
  fail(errc::invalid_argument, "this operation requires a real matrix");
}

ComplexMatrix as_complex(const ml_matrix* m) {
  if (const RealMatrix* r = std::get_if<RealMatrix>(&m->m)) return to_complex(*r);
  return std::get<ComplexMatrix>(m->m);
}

template <class M>
std::unique_ptr<ml_matrix> wrap(M v) {
  return std::unique_ptr<ml_matrix>(new ml_matrix{std::move(v)});
}

std::unique_ptr<ml_trace> wrap_trace(ContinuationTrace t) {
  return std::unique_ptr<ml_trace>(new ml_trace{std::move(t)});
}

// shared body of the four log entry points
template <class Op>
ml_status log_like(const char* what, ml_matrix** log, double* residual, ml_trace** trace,
                   Op&& op) {
  if (!log) return set_error(ML_INVALID_ARGUMENT, what);
  return guarded([&]() -> ml_status {
    auto lr = op();
    auto h = wrap(std::move(lr.log));
    auto tr = trace ? wrap_trace(std::move(lr.trace)) : nullptr;
    *log = h.release();
    if (residual) *residual = lr.residual;
    if (trace) *trace = tr.release();
    return ML_OK;
  });
}

}  // namespace

extern "C" {

const char* ml_status_name(ml_status s) {
  switch (s) {
    case ML_OK:                        return "Ok";
    case ML_INVALID_ARGUMENT:          return errc_name(errc::invalid_argument);
    case ML_DIMENSION_MISMATCH:        return errc_name(errc::dimension_mismatch);
    case ML_SINGULAR:                  return errc_name(errc::singular);
    case ML_NOT_CONTRACTIVE:           return errc_name(errc::not_contractive);
    case ML_SINGULAR_SPECTRUM:         return errc_name(errc::singular_spectrum);
    case ML_SPECTRUM_ON_RAY:           return errc_name(errc::spectrum_on_ray);
    case ML_NON_POSITIVE_DETERMINANT:  return errc_name(errc::non_positive_determinant);
    case ML_NON_NEGATIVE_DETERMINANT:  return errc_name(errc::non_negative_determinant);
    case ML_ODD_PARITY:                return errc_name(errc::odd_parity);
    case ML_PARITY_VIOLATION:          return errc_name(errc::parity_violation);
    case ML_NUMERICAL_FAILURE:         return errc_name(errc::numerical_failure);
  }
  return "UnknownError";
}

const char* ml_last_error(void) { return t_last_error.c_str(); }

ml_tolerance ml_tolerance_default(void) {
  const Tolerance t;
  return {t.residual_tol, t.series_tail_tol, t.eta};
}

ml_status ml_matrix_new_real(int n, const double* entries, ml_matrix** out) {
  if (!entries || !out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    RealMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
    *out = wrap(std::move(m)).release();
    return ML_OK;
  });
}

ml_status ml_matrix_new_complex(int n, const double* entries, ml_matrix** out) {
  if (!entries || !out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int k = 2 * (i * n + j);
        m(i, j) = Complex(entries[k], entries[k + 1]);
      }
    if (!all_finite(m)) fail(errc::invalid_argument, "matrix entries must be finite");
    *out = wrap(std::move(m)).release();
    return ML_OK;
  });
}

void ml_matrix_free(ml_matrix* m) { delete m; }

int ml_matrix_dim(const ml_matrix* m) {
  if (!m) return 0;
  return std::visit([](const auto& v) { return v.dim(); }, m->m);
}

int ml_matrix_is_real(const ml_matrix* m) {
  return m && std::holds_alternative<RealMatrix>(m->m) ? 1 : 0;
}

ml_status ml_matrix_entries(const ml_matrix* m, double* out) {
  if (!m || !out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  const int n = ml_matrix_dim(m);
  if (const RealMatrix* r = std::get_if<RealMatrix>(&m->m)) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = (*r)(i, j);
  } else {
    const ComplexMatrix& c = std::get<ComplexMatrix>(m->m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int k = 2 * (i * n + j);
        out[k] = c(i, j).real();
        out[k + 1] = c(i, j).imag();
      }
  }
  return ML_OK;
}

int ml_trace_steps(const ml_trace* t) {
  return t ? static_cast<int>(t->t.steps.size()) : 0;
}

int ml_trace_bisections(const ml_trace* t) { return t ? t->t.bisections : 0; }

double ml_trace_final_residual(const ml_trace* t) { return t ? t->t.final_residual : 0.0; }

ml_status ml_trace_step(const ml_trace* t, int i, double* param, double* contraction,
                        int* series_terms) {
  if (!t || i < 0 || i >= static_cast<int>(t->t.steps.size()))
    return set_error(ML_INVALID_ARGUMENT, "trace step index out of range");
  const TraceStep& s = t->t.steps[static_cast<size_t>(i)];
  if (param) *param = s.t;
  if (contraction) *contraction = s.contraction;
  if (series_terms) *series_terms = s.series_terms;
  return ML_OK;
}

void ml_trace_free(ml_trace* t) { delete t; }

ml_status ml_eigenvalues(const ml_matrix* a, double* out, double* residual) {
  if (!a || !out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    const Spectrum s = std::visit([](const auto& v) { return eigenvalues(v); }, a->m);
    if (residual) *residual = spectrum_residual(as_complex(a), s);
    for (size_t i = 0; i < s.values.size(); ++i) {
      out[2 * i] = s.values[i].real();
      out[2 * i + 1] = s.values[i].imag();
    }
    return ML_OK;
  });
}

ml_status ml_expm(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** out,
                  double* tail_bound) {
  if (!a || !out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    const double tail = cvt(tol).series_tail_tol;
    std::visit(
        [&](const auto& v) {
          double tb = 0.0;
          auto e = expm(v, tail, &tb);
          *out = wrap(std::move(e)).release();
          if (tail_bound) *tail_bound = tb;
        },
        a->m);
    return ML_OK;
  });
}

ml_status ml_log_complex(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                         double* residual, ml_trace** trace) {
  if (!a) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return log_like("null pointer", log, residual, trace,
                  [&] { return path_log(as_complex(a), cvt(tol)); });
}

ml_status ml_log_real_ray(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                          double* residual, ml_trace** trace) {
  if (!a) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return log_like("null pointer", log, residual, trace,
                  [&] { return ray_log(require_real(a), cvt(tol)); });
}

ml_status ml_log_real_square(const ml_matrix* x, const ml_tolerance* tol, ml_matrix** log,
                             double* residual, ml_trace** trace) {
  if (!x) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return log_like("null pointer", log, residual, trace,
                  [&] { return square_log(require_real(x), cvt(tol)); });
}

ml_status ml_log_doubled_block(const ml_matrix* a, const ml_tolerance* tol, ml_matrix** log,
                               double* residual, ml_trace** trace) {
  if (!a) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return log_like("null pointer", log, residual, trace,
                  [&] { return doubled_block_log(require_real(a), cvt(tol)); });
}

static ml_status factor_common(const ml_matrix* m, const ml_tolerance* tol, ml_matrix** b1,
                               ml_matrix** b2, int* k_negative, double* residual, bool neg_det) {
  if (!m || !b1 || !b2) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    const RealMatrix& mm = require_real(m);
    TwoExpFactorization f =
        neg_det ? neg_det_factor(mm, cvt(tol)) : two_exp_factor(mm, cvt(tol));
    auto h1 = wrap(std::move(f.b1));
    auto h2 = wrap(std::move(f.b2));
    *b1 = h1.release();
    *b2 = h2.release();
    if (k_negative) *k_negative = f.k_negative;
    if (residual) *residual = f.residual;
    return ML_OK;
  });
}

ml_status ml_factor_two_exp(const ml_matrix* m, const ml_tolerance* tol, ml_matrix** b1,
                            ml_matrix** b2, int* k_negative, double* residual) {
  return factor_common(m, tol, b1, b2, k_negative, residual, false);
}

ml_status ml_factor_neg_det(const ml_matrix* m, const ml_tolerance* tol, ml_matrix** b1,
                            ml_matrix** b2, int* k_negative, double* residual) {
  return factor_common(m, tol, b1, b2, k_negative, residual, true);
}

ml_status ml_classify_component(const ml_matrix* m, int* sign) {
  if (!m || !sign) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    *sign = classify_component(require_real(m)) == Component::g_plus ? 1 : -1;
    return ML_OK;
  });
}

ml_status ml_weak_schur(const ml_matrix* m, ml_matrix** q, ml_matrix** t, int* k,
                        double* residual) {
  if (!m || !q || !t) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    const RealMatrix& mm = require_real(m);
    WeakSchurForm ws = weak_schur(mm);
    if (residual) *residual = weak_schur_residual(mm, ws);
    auto hq = wrap(std::move(ws.Q));
    auto ht = wrap(std::move(ws.T));
    *q = hq.release();
    *t = ht.release();
    if (k) *k = ws.k;
    return ML_OK;
  });
}

ml_status ml_selftest_run(uint64_t seed, ml_selftest_report** out) {
  if (!out) return set_error(ML_INVALID_ARGUMENT, "null pointer");
  return guarded([&]() -> ml_status {
    auto rows = selftest::run_all(seed);
    *out = new ml_selftest_report{std::move(rows)};
    return ML_OK;
  });
}

int ml_selftest_count(const ml_selftest_report* r) {
  return r ? static_cast<int>(r->rows.size()) : 0;
}

static const selftest::CriterionResult* row_at(const ml_selftest_report* r, int i) {
  if (!r || i < 0 || i >= static_cast<int>(r->rows.size())) return nullptr;
  return &r->rows[static_cast<size_t>(i)];
}

int ml_selftest_index(const ml_selftest_report* r, int i) {
  const auto* row = row_at(r, i);
  return row ? row->index : 0;
}

const char* ml_selftest_name(const ml_selftest_report* r, int i) {
  const auto* row = row_at(r, i);
  return row ? row->name.c_str() : "";
}

int ml_selftest_passed(const ml_selftest_report* r, int i) {
  const auto* row = row_at(r, i);
  return row && row->passed ? 1 : 0;
}

double ml_selftest_seconds(const ml_selftest_report* r, int i) {
  const auto* row = row_at(r, i);
  return row ? row->seconds : 0.0;
}

const char* ml_selftest_detail(const ml_selftest_report* r, int i) {
  const auto* row = row_at(r, i);
  return row ? row->detail.c_str() : "";
}

void ml_selftest_free(ml_selftest_report* r) { delete r; }

}  // extern "C"
