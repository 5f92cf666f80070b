#pragma once

// Command-line front end. run_cli() is the whole program; main() only forwards
// argv and the standard streams, so tests drive it in-process.
//
// Exit codes: 0 ok, 1 usage or input error, 2 fit failure, 3 degraded
// benchmark table, 4 entropy audit failure.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "unimodal/bench.hpp"
#include "unimodal/dataio.hpp"
#include "unimodal/entropy_audit.hpp"
#include "unimodal/error.hpp"
#include "unimodal/fitter.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/plot.hpp"
#include "unimodal/version.hpp"

namespace unimodal {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFitFailure = 2,
  kExitDegraded = 3,
  kExitAuditFailure = 4,
};

struct FitCommand {
  std::string input;
  std::string model = "all";
  std::string out;
  std::string plot;
  int starts = 16;
  std::uint64_t seed = 0;
  double padding = 0.02;
};

struct BenchCommand {
  int trials = 100;
  std::size_t grid = 101;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct AuditCommand {
  std::string model;
  double a = 0.0;
  double b = 0.0;
  int perturbations = 200;
  std::uint64_t seed = 42;
};

inline constexpr std::size_t kPlotGrid = 201;

inline int run_fit(const FitCommand& cmd, std::ostream& out, std::ostream& err) {
  std::vector<ModelKind> kinds;
  if (cmd.model == "all") {
    kinds.assign(kAllKinds.begin(), kAllKinds.end());
  } else if (auto kind = parse_kind(cmd.model)) {
    kinds.push_back(*kind);
  } else {
    err << "unknown model '" << cmd.model << "'\n";
    return kExitUsage;
  }

  const RawSeries raw = load_series_file(cmd.input);
  const NormalizedSeries normalized = normalize(raw, cmd.padding);
  FitConfig config;
  config.starts = cmd.starts;
  config.seed = cmd.seed;

  int status = kExitOk;
  std::vector<FitResult> results;
  for (ModelKind kind : kinds) {
    try {
      FitResult result = fit(normalized.series, kind, config);
      fmt::print(out, "{:<11} rms={:.6g} rms_original={:.6g} converged={}\n", kind_slug(kind), result.rms,
                 result.rms * normalized.transform.y_scale, result.converged ? "true" : "false");
      results.push_back(std::move(result));
    } catch (const FitFailureError& e) {
      fmt::print(out, "{:<11} failed\n", kind_slug(kind));
      err << kind_slug(kind) << ": fit failed: " << e.what() << "\n";
      status = kExitFitFailure;
    }
  }

  if (!cmd.out.empty() && !results.empty()) {
    if (kinds.size() == 1) {
      write_fit(results.front(), normalized.transform, cmd.out);
    } else {
      write_text_file(cmd.out, fit_documents_text(results, normalized.transform));
    }
  }
  if (!cmd.plot.empty()) {
    std::vector<PlotCurve> curves;
    for (const auto& r : results) {
      curves.push_back({r.model.kind(), denormalize_fit(r, normalized.transform, kPlotGrid)});
    }
    render_plot(raw, curves, cmd.plot);
  }
  return status;
}

inline int run_bench(const BenchCommand& cmd, std::ostream& out, std::ostream& err) {
  BenchConfig config;
  config.trials_per_cell = cmd.trials;
  config.grid_size = cmd.grid;
  config.noise_sigma = cmd.noise;
  config.seed = cmd.seed;
  const CrossTable table = cross_compare(config);
  if (!cmd.out.empty()) {
    write_text_file(cmd.out, render_csv(table));
  }
  out << render_grid(table);
  out << "\noff-diagonal row means:\n";
  for (ModelKind kind : kAllKinds) {
    fmt::print(out, "  {:<11} {:.6g}\n", kind_name(kind), table.off_diagonal_mean(kind));
  }
  if (table.degraded()) {
    err << "benchmark degraded: a cell has more than half of its fits failed\n";
    return kExitDegraded;
  }
  return kExitOk;
}

inline int run_audit(const AuditCommand& cmd, std::ostream& out, std::ostream& err) {
  const auto kind = parse_kind(cmd.model);
  if (!kind || (*kind != ModelKind::MaxEnt && *kind != ModelKind::Beta)) {
    err << "audit supports --model maxent or beta, not '" << cmd.model << "'\n";
    return kExitUsage;
  }
  const ShapeParams params(*kind, {cmd.a, cmd.b});
  const AuditReport report = perturbation_audit(params, QuadratureSpec{}, cmd.perturbations, cmd.seed);
  fmt::print(out, "model     {}\n", kind_slug(*kind));
  fmt::print(out, "a         {:.10g}\nb         {:.10g}\n", cmd.a, cmd.b);
  fmt::print(out, "mode      {:.10g}\n", mode(params));
  fmt::print(out, "H         {:.10g}\n", report.entropy);
  fmt::print(out, "C1        {:.10g}\n", report.constraints.c1);
  fmt::print(out, "C2        {:.10g}\n", report.constraints.c2);
  fmt::print(out, "C3        {:.10g}\n", report.constraints.c3);
  if (!report.audited) {
    fmt::print(out, "perturbations unaudited (a or b equals 1)\n");
    return kExitOk;
  }
  fmt::print(out, "perturbations trials={} passed={} failed={} skipped={} max_dH={:.3g}\n", report.perturbation_trials,
             report.perturbation_trials - report.perturbation_failures, report.perturbation_failures, report.perturbation_skipped,
             report.max_entropy_change);
  return report.perturbation_failures == 0 ? kExitOk : kExitAuditFailure;
}

inline int run_list_models(std::ostream& out) {
  out << "Richards    k, t0, nu        k u (1 + nu u)^-(1+1/nu), u = exp(-k (x - t0))   k > 0, nu > 0\n"
         "            derivative of the generalized logistic (Richards) growth curve; peak at t0\n"
         "Skewnormal  xi, omega, alpha phi(z) Phi(alpha z), z = (x - xi) / omega            omega > 0\n"
         "GenGamma    alpha, d, p      x^(d-1) exp(-(x / alpha)^p)                        alpha > 0, d > 1, p > 0\n"
         "MaxEnt      a, b             exp(-a / x - b / (1 - x))                          a > 0, b > 0\n"
         "            peak at sqrt(a) / (sqrt(a) + sqrt(b))\n"
         "Beta        a, b             x^(a-1) (1 - x)^(b-1)                              a >= 1, b >= 1\n"
         "\nAll curves are scaled so their maximum on [0, 1] equals the fitted amplitude.\n";
  return kExitOk;
}

/// Parses argv and runs one subcommand.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit unimodal time series with maximum entropy and reference model families.", std::string(kToolName)};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitCommand fit_cmd;
  auto* fit_app = app.add_subcommand("fit", "Fit one or all model families to a time,value CSV file");
  fit_app->add_option("--input", fit_cmd.input, "Input CSV with time,value rows")->required();
  fit_app->add_option("--model", fit_cmd.model, "Model family, or 'all'")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "richards", "skewnormal", "gengamma", "maxent", "beta"}, CLI::ignore_case));
  fit_app->add_option("--out", fit_cmd.out, "Write the fit document(s) as JSON to this path");
  fit_app->add_option("--plot", fit_cmd.plot, "Write an SVG plot of data and fits to this path");
  fit_app->add_option("--starts", fit_cmd.starts, "Optimizer starts per family")->capture_default_str()->check(CLI::PositiveNumber);
  fit_app->add_option("--seed", fit_cmd.seed, "Seed for the start design")->capture_default_str();
  fit_app->add_option("--padding", fit_cmd.padding, "Fraction of the unit interval left empty at each end")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.49));

  BenchCommand bench_cmd;
  auto* bench_app = app.add_subcommand("bench", "Cross-fit every family on synthetic series from every family");
  bench_app->add_option("--trials", bench_cmd.trials, "Trials per table cell")->capture_default_str()->check(CLI::PositiveNumber);
  bench_app->add_option("--grid", bench_cmd.grid, "Points per synthetic series")->capture_default_str()->check(CLI::Range(8, 1000000));
  bench_app->add_option("--noise", bench_cmd.noise, "Gaussian noise standard deviation")->capture_default_str()->check(CLI::NonNegativeNumber);
  bench_app->add_option("--seed", bench_cmd.seed, "Benchmark seed")->capture_default_str();
  bench_app->add_option("--out", bench_cmd.out, "Write the 25-row CSV table to this path");

  AuditCommand audit_cmd;
  auto* audit_app = app.add_subcommand("audit", "Check entropy maximality of a MaxEnt or Beta shape numerically");
  audit_app->add_option("--model", audit_cmd.model, "maxent or beta")->required();
  audit_app->add_option("--a", audit_cmd.a, "First exponent")->required();
  audit_app->add_option("--b", audit_cmd.b, "Second exponent")->required();
  audit_app->add_option("--perturbations", audit_cmd.perturbations, "Random constraint-preserving perturbations")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  audit_app->add_option("--seed", audit_cmd.seed, "Perturbation seed")->capture_default_str();

  auto* list_app = app.add_subcommand("list-models", "Describe the five model families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit_app->parsed()) {
      for (char& c : fit_cmd.model) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return run_fit(fit_cmd, out, err);
    }
    if (bench_app->parsed()) return run_bench(bench_cmd, out, err);
    if (audit_app->parsed()) return run_audit(audit_cmd, out, err);
    if (list_app->parsed()) return run_list_models(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace unimodal
