#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matfile.hpp"
#include "matlog.h"

namespace {

using nlohmann::json;

struct MatrixHandle {
  ml_matrix* p = nullptr;
  MatrixHandle() = default;
  MatrixHandle(const MatrixHandle&) = delete;
  MatrixHandle& operator=(const MatrixHandle&) = delete;
  ~MatrixHandle() { ml_matrix_free(p); }
  ml_matrix** out() { return &p; }
};

struct TraceHandle {
  ml_trace* p = nullptr;
  TraceHandle() = default;
  TraceHandle(const TraceHandle&) = delete;
  TraceHandle& operator=(const TraceHandle&) = delete;
  ~TraceHandle() { ml_trace_free(p); }
  ml_trace** out() { return &p; }
};

ml_status make_handle(const matfile::MatrixData& m, MatrixHandle& h) {
  return m.real ? ml_matrix_new_real(m.n, m.entries.data(), h.out())
                : ml_matrix_new_complex(m.n, m.entries.data(), h.out());
}

matfile::MatrixData fetch(const ml_matrix* m) {
  matfile::MatrixData d;
  d.n = ml_matrix_dim(m);
  d.real = ml_matrix_is_real(m) != 0;
  d.entries.assign(static_cast<size_t>(d.real ? d.n * d.n : 2 * d.n * d.n), 0.0);
  ml_matrix_entries(m, d.entries.data());
  return d;
}

int emit_report(const json& report, int code) {
  std::cout << report.dump(2) << std::endl;
  return code;
}

int fail_code(json report, ml_status s, const std::string& msg) {
  report["status"] = "error";
  report["error"] = {{"code", ml_status_name(s)}, {"message", msg}};
  return emit_report(report, s == ML_NUMERICAL_FAILURE ? 4 : 2);
}

int fail_op(json report, ml_status s) { return fail_code(std::move(report), s, ml_last_error()); }

int fail_input(json report, const std::string& code, const std::string& msg) {
  report["status"] = "error";
  report["error"] = {{"code", code}, {"message", msg}};
  return emit_report(report, 3);
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  return static_cast<bool>(out);
}

json trace_summary(const ml_trace* t) {
  return {{"steps", ml_trace_steps(t)}, {"bisections", ml_trace_bisections(t)}};
}

json trace_full(const ml_trace* t) {
  json steps = json::array();
  for (int i = 0; i < ml_trace_steps(t); ++i) {
    double param = 0.0;
    double contraction = 0.0;
    int terms = 0;
    ml_trace_step(t, i, &param, &contraction, &terms);
    steps.push_back({{"t", param}, {"contraction", contraction}, {"series_terms", terms}});
  }
  return {{"steps", std::move(steps)},
          {"bisections", ml_trace_bisections(t)},
          {"final_residual", ml_trace_final_residual(t)}};
}

struct CommonArgs {
  std::string file;
  std::string logfile;  // verify only
  std::string out_path;
  ml_tolerance tol = {};
  bool trace = false;
  std::uint64_t seed = 12345;
};

// Loads the input file, stamps the digest, builds the matrix handle. On
// failure the error report has already been emitted and rc holds the exit code.
bool load_input(const std::string& path, json& report, MatrixHandle& h, int& rc) {
  matfile::LoadedMatrix lm;
  try {
    lm = matfile::load(path);
  } catch (const matfile::ParseError& e) {
    rc = fail_input(std::move(report), "ParseError", e.what());
    return false;
  }
  report["input_digest"] = matfile::digest(lm.text);
  const ml_status s = make_handle(lm.m, h);
  if (s != ML_OK) {
    rc = fail_op(std::move(report), s);
    return false;
  }
  return true;
}

int cmd_eig(const CommonArgs& a) {
  json report{{"operation", "eig"}, {"status", "ok"}};
  MatrixHandle m;
  int rc = 0;
  if (!load_input(a.file, report, m, rc)) return rc;
  const int n = ml_matrix_dim(m.p);
  std::vector<double> vals(static_cast<size_t>(2 * n), 0.0);
  double residual = 0.0;
  const ml_status s = ml_eigenvalues(m.p, vals.data(), &residual);
  if (s != ML_OK) return fail_op(std::move(report), s);
  json ev = json::array();
  for (int i = 0; i < n; ++i) ev.push_back(json::array({vals[2 * i], vals[2 * i + 1]}));
  report["residual"] = residual;
  report["eigenvalues"] = std::move(ev);
  return emit_report(report, 0);
}

int cmd_expm(const CommonArgs& a) {
  json report{{"operation", "expm"}, {"status", "ok"}};
  MatrixHandle m;
  int rc = 0;
  if (!load_input(a.file, report, m, rc)) return rc;
  MatrixHandle e;
  double tail = 0.0;
  const ml_status s = ml_expm(m.p, &a.tol, e.out(), &tail);
  if (s != ML_OK) return fail_op(std::move(report), s);
  const matfile::MatrixData md = fetch(e.p);
  report["residual"] = tail;  // achieved a-priori truncation bound of the series
  report["output"] = matfile::to_json(md);
  if (!a.out_path.empty() && !write_text(a.out_path, matfile::emit(md)))
    return fail_input(std::move(report), "IoError", "cannot write file: " + a.out_path);
  return emit_report(report, 0);
}

using LogFn = ml_status (*)(const ml_matrix*, const ml_tolerance*, ml_matrix**, double*,
                            ml_trace**);

int cmd_log_like(const char* op, LogFn fn, const CommonArgs& a) {
  json report{{"operation", op}, {"status", "ok"}};
  MatrixHandle m;
  int rc = 0;
  if (!load_input(a.file, report, m, rc)) return rc;
  MatrixHandle b;
  TraceHandle t;
  double residual = 0.0;
  const ml_status s = fn(m.p, &a.tol, b.out(), &residual, t.out());
  if (s != ML_OK) return fail_op(std::move(report), s);
  const matfile::MatrixData md = fetch(b.p);
  report["residual"] = residual;
  report["trace_summary"] = trace_summary(t.p);
  if (a.trace) report["trace"] = trace_full(t.p);
  report["output"] = matfile::to_json(md);
  if (!a.out_path.empty() && !write_text(a.out_path, matfile::emit(md)))
    return fail_input(std::move(report), "IoError", "cannot write file: " + a.out_path);
  return emit_report(report, 0);
}

int cmd_factor(const CommonArgs& a) {
  json report{{"operation", "factor"}, {"status", "ok"}};
  MatrixHandle m;
  int rc = 0;
  if (!load_input(a.file, report, m, rc)) return rc;
  int sign = 0;
  ml_status s = ml_classify_component(m.p, &sign);
  if (s != ML_OK) return fail_op(std::move(report), s);
  MatrixHandle b1;
  MatrixHandle b2;
  int kneg = 0;
  double residual = 0.0;
  s = sign > 0 ? ml_factor_two_exp(m.p, &a.tol, b1.out(), b2.out(), &kneg, &residual)
               : ml_factor_neg_det(m.p, &a.tol, b1.out(), b2.out(), &kneg, &residual);
  if (s != ML_OK) return fail_op(std::move(report), s);
  const matfile::MatrixData md1 = fetch(b1.p);
  const matfile::MatrixData md2 = fetch(b2.p);
  report["residual"] = residual;
  report["prefix"] = sign > 0 ? "identity" : "reflection";
  report["k_negative"] = kneg;
  report["b1"] = matfile::to_json(md1);
  report["b2"] = matfile::to_json(md2);
  if (!a.out_path.empty()) {
    const json pair = {{"b1", matfile::to_json(md1)}, {"b2", matfile::to_json(md2)}};
    if (!write_text(a.out_path, pair.dump(2) + "\n"))
      return fail_input(std::move(report), "IoError", "cannot write file: " + a.out_path);
  }
  return emit_report(report, 0);
}

int cmd_schur(const CommonArgs& a) {
  json report{{"operation", "schur"}, {"status", "ok"}};
  MatrixHandle m;
  int rc = 0;
  if (!load_input(a.file, report, m, rc)) return rc;
  MatrixHandle q;
  MatrixHandle t;
  int k = 0;
  double residual = 0.0;
  const ml_status s = ml_weak_schur(m.p, q.out(), t.out(), &k, &residual);
  if (s != ML_OK) return fail_op(std::move(report), s);
  const matfile::MatrixData mq = fetch(q.p);
  const matfile::MatrixData mt = fetch(t.p);
  report["residual"] = residual;
  report["k"] = k;
  report["q"] = matfile::to_json(mq);
  report["t"] = matfile::to_json(mt);
  if (!a.out_path.empty()) {
    const json pair = {{"q", matfile::to_json(mq)}, {"t", matfile::to_json(mt)}};
    if (!write_text(a.out_path, pair.dump(2) + "\n"))
      return fail_input(std::move(report), "IoError", "cannot write file: " + a.out_path);
  }
  return emit_report(report, 0);
}

int cmd_verify(const CommonArgs& a) {
  json report{{"operation", "verify"}, {"status", "ok"}};
  matfile::LoadedMatrix la;
  matfile::LoadedMatrix lb;
  try {
    la = matfile::load(a.file);
    lb = matfile::load(a.logfile);
  } catch (const matfile::ParseError& e) {
    return fail_input(std::move(report), "ParseError", e.what());
  }
  report["input_digest"] = matfile::digest(la.text);
  report["log_digest"] = matfile::digest(lb.text);
  if (la.m.n != lb.m.n)
    return fail_code(std::move(report), ML_DIMENSION_MISMATCH,
                     "the two files hold matrices of different sizes");
  MatrixHandle hb;
  ml_status s = make_handle(lb.m, hb);
  if (s != ML_OK) return fail_op(std::move(report), s);
  MatrixHandle e;
  double tail = 0.0;
  s = ml_expm(hb.p, &a.tol, e.out(), &tail);
  if (s != ML_OK) return fail_op(std::move(report), s);
  const matfile::MatrixData em = fetch(e.p);

  auto interleaved = [](const matfile::MatrixData& m) {
    if (!m.real) return m.entries;
    std::vector<double> v(2 * m.entries.size(), 0.0);
    for (size_t k = 0; k < m.entries.size(); ++k) v[2 * k] = m.entries[k];
    return v;
  };
  const std::vector<double> va = interleaved(la.m);
  const std::vector<double> ve = interleaved(em);
  double diff2 = 0.0;
  double na2 = 0.0;
  for (size_t k = 0; k < va.size(); ++k) {
    const double d = ve[k] - va[k];
    diff2 += d * d;
    na2 += va[k] * va[k];
  }
  const double residual = std::sqrt(diff2);
  report["residual"] = residual;
  report["relative_residual"] = residual / std::max(1.0, std::sqrt(na2));
  return emit_report(report, 0);
}

int cmd_selftest(const CommonArgs& a) {
  json report{{"operation", "selftest"}, {"status", "ok"}, {"seed", a.seed}};
  ml_selftest_report* r = nullptr;
  const ml_status s = ml_selftest_run(a.seed, &r);
  if (s != ML_OK) return fail_op(std::move(report), s);
  json rows = json::array();
  int failed = 0;
  const int count = ml_selftest_count(r);
  for (int i = 0; i < count; ++i) {
    const bool pass = ml_selftest_passed(r, i) != 0;
    if (!pass) ++failed;
    std::fprintf(stderr, "[%2d/%d] %s  %-22s %7.2f s  %s\n", ml_selftest_index(r, i), count,
                 pass ? "pass" : "FAIL", ml_selftest_name(r, i), ml_selftest_seconds(r, i),
                 ml_selftest_detail(r, i));
    rows.push_back({{"index", ml_selftest_index(r, i)},
                    {"name", ml_selftest_name(r, i)},
                    {"passed", pass},
                    {"seconds", ml_selftest_seconds(r, i)},
                    {"detail", ml_selftest_detail(r, i)}});
  }
  ml_selftest_free(r);
  report["criteria"] = std::move(rows);
  if (failed > 0) {
    report["status"] = "error";
    report["error"] = {{"code", "SelftestFailure"},
                       {"message", std::to_string(failed) + " criteria failed"}};
    return emit_report(report, 1);
  }
  return emit_report(report, 0);
}

}  // namespace

int main(int argc, char** argv) {
  CommonArgs args;
  args.tol = ml_tolerance_default();

  CLI::App app{
      "certified dense matrix logarithms, exponentials, and two-exponential factorizations"};
  app.require_subcommand(1);

  auto with_file = [&](CLI::App* sub) {
    sub->add_option("file", args.file, "matrix file (JSON object {\"n\", \"field\", \"data\"})")
        ->required();
    return sub;
  };
  auto with_tols = [&](CLI::App* sub) {
    sub->add_option("--tol", args.tol.residual_tol, "certified residual bound");
    sub->add_option("--eta", args.tol.eta, "continuation contraction target in (0,1)");
    return sub;
  };
  auto with_out = [&](CLI::App* sub) {
    sub->add_option("--out", args.out_path, "also write the result matrix file here");
    return sub;
  };
  auto with_trace = [&](CLI::App* sub) {
    sub->add_flag("--trace", args.trace, "emit the full continuation trace");
    return sub;
  };

  CLI::App* eig =
      with_file(app.add_subcommand("eig", "eigenvalues with a near-singularity certificate"));
  CLI::App* expm_cmd =
      with_out(with_tols(with_file(app.add_subcommand("expm", "matrix exponential"))));
  CLI::App* logm = with_trace(with_out(with_tols(
      with_file(app.add_subcommand("logm", "logarithm over the complexes: exp(B) = A")))));
  CLI::App* logm_real = with_trace(with_out(with_tols(with_file(app.add_subcommand(
      "logm-real", "real logarithm of a real matrix with no eigenvalue on (-inf, 0]")))));
  CLI::App* sqlog = with_trace(with_out(with_tols(
      with_file(app.add_subcommand("sqlog", "real logarithm of the square: exp(B) = X^2")))));
  CLI::App* dlog = with_trace(with_out(with_tols(
      with_file(app.add_subcommand("double-log", "real logarithm of diag(A, A)")))));
  CLI::App* factor = with_out(with_tols(with_file(app.add_subcommand(
      "factor", "two real exponentials (times a first-row reflection when det < 0)"))));
  CLI::App* schur = with_out(
      with_file(app.add_subcommand("schur", "weak Schur form: real eigenvalues deflated first")));
  CLI::App* verify =
      app.add_subcommand("verify", "recompute ||exp(B) - A||_F for a matrix file and a log file");
  verify->add_option("file", args.file, "matrix file A")->required();
  verify->add_option("logfile", args.logfile, "log matrix file B")->required();
  CLI::App* selftest = app.add_subcommand("selftest", "run the embedded acceptance suite");
  selftest->add_option("--seed", args.seed, "seed for the randomized batches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (eig->parsed()) return cmd_eig(args);
  if (expm_cmd->parsed()) return cmd_expm(args);
  if (logm->parsed()) return cmd_log_like("logm", ml_log_complex, args);
  if (logm_real->parsed()) return cmd_log_like("logm-real", ml_log_real_ray, args);
  if (sqlog->parsed()) return cmd_log_like("sqlog", ml_log_real_square, args);
  if (dlog->parsed()) return cmd_log_like("double-log", ml_log_doubled_block, args);
  if (factor->parsed()) return cmd_factor(args);
  if (schur->parsed()) return cmd_schur(args);
  if (verify->parsed()) return cmd_verify(args);
  if (selftest->parsed()) return cmd_selftest(args);
  return 3;
}
