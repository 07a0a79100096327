// Command-line front end: run the built-in demo problem, probe configured
// operators, and solve configured periodic BVPs, emitting traces and reports.
//
// Exit codes: 0 success; 2 probe mismatch or failed solve hypothesis;
// 3 non-convergence; 4 I/O or configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>

#include "cofix/config.hpp"
#include "cofix/errors.hpp"
#include "cofix/iteration.hpp"
#include "cofix/periodic_bvp.hpp"
#include "cofix/probes.hpp"
#include "cofix/real_line.hpp"
#include "cofix/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHypothesis = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

constexpr const char* kBranchConvention =
    "branch convention: lower branch means x0 <= F(x0,y0) and y0 >= F(y0,x0); "
    "upper branch is the reversed pair";

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 20240915;
  bool seed_given = false;  // --seed on the command line beats the config key
  int grid_n = 0;           // 0 = take from config / default
};

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw cofix::DiagnosticError("cannot create output directory: " + dir);
  if (!std::filesystem::is_directory(dir))
    throw cofix::DiagnosticError("output path is not a directory: " + dir);
}

std::string joined(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

nlohmann::json solve_summary(const cofix::SolveResult<double>& result) {
  return {{"status", cofix::to_string(result.status)},
          {"branch", cofix::to_string(result.branch)},
          {"iterations", result.iterations},
          {"bound", result.bound},
          {"residual", result.residual},
          {"final", {{"first", result.final.first}, {"second", result.final.second}}}};
}

int run_example1(const CommonOptions& opts) {
  prepare_out_dir(opts.out_dir);
  std::cout << kBranchConvention << "\n";

  const auto space = cofix::make_real_space();
  const auto map = cofix::make_linear_map(1.0 / 5.0, -3.0 / 5.0);

  const auto sampler = cofix::make_real_sampler(opts.seed);
  const auto comparison = cofix::compare_conditions(map, space, sampler, 10000);

  cofix::IterationConfig config;
  config.contraction_k = 0.8;
  config.tolerance = opts.tolerance;
  config.max_iterations = opts.max_iterations;
  const auto result = cofix::solve(map, space, cofix::ProductPoint<double>{-3.0, 3.0}, config);

  nlohmann::json report{
      {"command", "example1"},
      {"branch_convention", kBranchConvention},
      {"map", {{"coef_x", 0.2}, {"coef_y", -0.6}}},
      {"probes",
       {{"symmetric", cofix::contraction_report_to_json(comparison.symmetric,
                                                        [](double x) { return x; })},
        {"componentwise", cofix::contraction_report_to_json(comparison.componentwise,
                                                            [](double x) { return x; })},
        {"verdict", cofix::to_string(comparison.verdict)}}},
      {"solve", solve_summary(result)},
      {"settings",
       {{"tolerance", opts.tolerance},
        {"max_iterations", opts.max_iterations},
        {"seed", opts.seed}}},
  };
  if (result.converged())
    report["uniqueness"] = cofix::uniqueness_report_to_json(
        cofix::uniqueness_report(map, space, result, opts.tolerance));

  cofix::write_text_file(joined(opts.out_dir, "trace.csv"), cofix::trace_to_csv(result.trace.steps));
  cofix::write_text_file(joined(opts.out_dir, "trace.json"),
                         cofix::trace_to_json(result.trace.steps).dump(2) + "\n");
  cofix::write_text_file(joined(opts.out_dir, "report.json"), report.dump(2) + "\n");

  const bool probes_ok = std::abs(comparison.symmetric.k_hat - 0.8) <= 1e-9 &&
                         std::abs(comparison.componentwise.k_hat - 1.2) <= 1e-9;
  if (!probes_ok) {
    std::cerr << "probe mismatch: symmetric k_hat = " << comparison.symmetric.k_hat
              << ", componentwise k_hat = " << comparison.componentwise.k_hat << "\n";
    return kExitHypothesis;
  }
  const double final_distance =
      cofix::product_distance(space, result.final, cofix::ProductPoint<double>{0.0, 0.0});
  if (!result.converged() || final_distance > 10.0 * opts.tolerance) {
    std::cerr << "did not converge to (0, 0): status " << cofix::to_string(result.status)
              << ", distance " << final_distance << "\n";
    return kExitNoConvergence;
  }
  std::cout << "converged to (" << result.final.first << ", " << result.final.second << ") in "
            << result.iterations << " iterations; symmetric k_hat = "
            << comparison.symmetric.k_hat
            << ", componentwise k_hat = " << comparison.componentwise.k_hat << "\n";
  return kExitOk;
}

cofix::CoupledMap<double> map_from_config(const cofix::FlatConfig& config, nlohmann::json& meta) {
  const std::string name = config.text_or("operator", "example1");
  meta["operator"] = name;
  if (name == "example1") return cofix::make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  if (name == "linear") {
    const double cx = config.number("coef_x");
    const double cy = config.number("coef_y");
    meta["coef_x"] = cx;
    meta["coef_y"] = cy;
    return cofix::make_linear_map(cx, cy);
  }
  if (name == "constant") {
    const double value = config.number("value");
    meta["value"] = value;
    return cofix::make_constant_map(value);
  }
  throw cofix::DiagnosticError("unknown operator family: " + name);
}

int run_probe(const CommonOptions& opts) {
  const auto config = cofix::FlatConfig::parse_file(opts.config_path);
  config.require_known({"operator", "coef_x", "coef_y", "value", "samples", "range", "seed"});
  prepare_out_dir(opts.out_dir);

  nlohmann::json meta;
  const auto map = map_from_config(config, meta);
  const int samples = static_cast<int>(config.integer_or("samples", 10000));
  if (samples < 1) throw cofix::DiagnosticError("samples must be at least 1");
  cofix::RealSamplerOptions sampler_options;
  sampler_options.range = config.number_or("range", 10.0);
  const std::uint64_t seed =
      opts.seed_given ? opts.seed
                      : static_cast<std::uint64_t>(config.integer_or("seed", opts.seed));

  const auto space = cofix::make_real_space();
  const auto comparison =
      cofix::compare_conditions(map, space, cofix::make_real_sampler(seed, sampler_options), samples);
  const auto violations = cofix::probe_mixed_monotone(
      map, space, cofix::make_real_sampler(seed + 1, sampler_options), samples);

  nlohmann::json report{
      {"command", "probe"},
      {"map", meta},
      {"mixed_monotone",
       {{"samples", samples}, {"violations", violations.size()}, {"ok", violations.empty()}}},
      {"probes",
       {{"symmetric", cofix::contraction_report_to_json(comparison.symmetric,
                                                        [](double x) { return x; })},
        {"componentwise", cofix::contraction_report_to_json(comparison.componentwise,
                                                            [](double x) { return x; })},
        {"verdict", cofix::to_string(comparison.verdict)}}},
      {"settings", {{"samples", samples}, {"seed", seed}, {"range", sampler_options.range}}},
  };
  cofix::write_text_file(joined(opts.out_dir, "report.json"), report.dump(2) + "\n");
  std::cout << "probe verdict: " << cofix::to_string(comparison.verdict)
            << " (symmetric k_hat = " << comparison.symmetric.k_hat
            << ", componentwise k_hat = " << comparison.componentwise.k_hat << ")\n";
  return kExitOk;
}

cofix::bvp::BvpSpec bvp_spec_from_config(const cofix::FlatConfig& config,
                                         const CommonOptions& opts, nlohmann::json& meta) {
  cofix::bvp::BvpSpec spec;
  spec.lambda1 = config.number("lambda1");
  spec.lambda2 = config.number("lambda2");
  spec.mu1 = config.number("mu1");
  spec.mu2 = config.number("mu2");
  spec.period = config.number("T");
  spec.grid_n = opts.grid_n > 0 ? opts.grid_n : static_cast<int>(config.integer_or("grid_n", 256));

  const double f_slope = config.number("f_slope");
  const double g_slope = config.number("g_slope");
  const std::string forcing = config.text_or("forcing", "cos");
  const double amplitude = config.number_or("forcing_amplitude", 1.0);
  const double period = spec.period;

  spec.f = [f_slope](double, double u) { return f_slope * u; };
  if (forcing == "cos")
    spec.g = [g_slope, amplitude, period](double t, double u) {
      return g_slope * u + amplitude * std::cos(2.0 * M_PI * t / period);
    };
  else if (forcing == "sin")
    spec.g = [g_slope, amplitude, period](double t, double u) {
      return g_slope * u + amplitude * std::sin(2.0 * M_PI * t / period);
    };
  else if (forcing == "const")
    spec.g = [g_slope, amplitude](double, double u) { return g_slope * u + amplitude; };
  else
    throw cofix::DiagnosticError("unknown forcing (expected cos, sin or const): " + forcing);

  meta = {{"lambda1", spec.lambda1}, {"lambda2", spec.lambda2}, {"mu1", spec.mu1},
          {"mu2", spec.mu2},         {"T", spec.period},        {"grid_n", spec.grid_n},
          {"f_slope", f_slope},      {"g_slope", g_slope},      {"forcing", forcing},
          {"forcing_amplitude", amplitude}};
  return spec;
}

nlohmann::json hypotheses_json(const cofix::bvp::SignConditionReport& signs,
                               const cofix::bvp::AssumptionReport& assumption,
                               const cofix::bvp::LowerUpperReport* lower_upper) {
  nlohmann::json j{
      {"separation",
       {{"lhs", signs.separation_lhs}, {"rhs", signs.separation_rhs}, {"ok", signs.separation_ok}}},
      {"smallness",
       {{"lhs", signs.smallness_lhs}, {"rhs", signs.smallness_rhs}, {"ok", signs.smallness_ok}}},
      {"assumption",
       {{"violations", assumption.violations.size()},
        {"contraction", assumption.contraction},
        {"ratio_ok", assumption.ratio_ok}}},
  };
  if (signs.kernels_checked)
    j["kernel_signs"] = {{"g1_min", signs.g1_min},
                         {"g2_max", signs.g2_max},
                         {"g1_nonnegative", signs.g1_nonnegative},
                         {"g2_nonpositive", signs.g2_nonpositive}};
  if (lower_upper) {
    j["lower_upper"] = {{"ok", lower_upper->ok()},
                        {"alpha_min_margin", lower_upper->alpha_min_margin},
                        {"beta_min_margin", lower_upper->beta_min_margin},
                        {"slack", lower_upper->slack},
                        {"violations", lower_upper->violations.size()}};
    if (lower_upper->sufficient_relation_applicable)
      j["lower_upper"]["sufficient_endpoint_ratio"] = {
          {"value", lower_upper->sufficient_ratio},
          {"holds", lower_upper->sufficient_relation_holds}};
  }
  return j;
}

int run_bvp(const CommonOptions& opts) {
  const auto config = cofix::FlatConfig::parse_file(opts.config_path);
  config.require_known({"lambda1", "lambda2", "mu1", "mu2", "T", "grid_n", "f_slope", "g_slope",
                        "forcing", "forcing_amplitude", "alpha_const", "beta_const"});
  prepare_out_dir(opts.out_dir);
  std::cout << kBranchConvention << "\n";

  nlohmann::json meta;
  const auto spec = bvp_spec_from_config(config, opts, meta);
  cofix::bvp::validate(spec);
  const double alpha_const = config.number("alpha_const");
  const double beta_const = config.number("beta_const");
  cofix::bvp::GridFunction alpha =
      cofix::bvp::GridFunction::Constant(spec.grid_n + 1, alpha_const);
  cofix::bvp::GridFunction beta = cofix::bvp::GridFunction::Constant(spec.grid_n + 1, beta_const);

  nlohmann::json report{{"command", "bvp"},
                        {"branch_convention", kBranchConvention},
                        {"problem", meta},
                        {"contraction",
                         {{"summed", cofix::bvp::bvp_contraction_k(spec)},
                          {"max_based", cofix::bvp::bvp_contraction_k_maxbased(spec)}}},
                        {"settings",
                         {{"tolerance", opts.tolerance},
                          {"max_iterations", opts.max_iterations},
                          {"alpha_const", alpha_const},
                          {"beta_const", beta_const}}}};

  try {
    const auto result =
        cofix::bvp::solve_bvp(spec, alpha, beta, opts.tolerance, opts.max_iterations);
    report["hypotheses"] = hypotheses_json(result.signs, result.assumption, &result.lower_upper);
    report["solve"] = {{"status", cofix::to_string(result.solve.status)},
                       {"branch", cofix::to_string(result.solve.branch)},
                       {"iterations", result.solve.iterations},
                       {"bound", result.solve.bound},
                       {"residual", result.solve.residual}};
    report["residuals"] = {{"sup_u_minus_v", result.sup_u_minus_v},
                           {"ode_residual", result.ode_residual},
                           {"periodicity_gap", result.periodicity_gap}};

    cofix::write_text_file(joined(opts.out_dir, "solution.csv"),
                           cofix::bvp::grid_to_csv(spec, result.u));
    cofix::write_text_file(joined(opts.out_dir, "trace.csv"),
                           cofix::trace_to_csv(result.solve.trace.steps));
    cofix::write_text_file(joined(opts.out_dir, "trace.json"),
                           cofix::trace_to_json(result.solve.trace.steps).dump(2) + "\n");
    cofix::write_text_file(joined(opts.out_dir, "report.json"), report.dump(2) + "\n");

    if (!result.solve.converged()) {
      std::cerr << "iteration stopped: " << cofix::to_string(result.solve.status) << "\n";
      return kExitNoConvergence;
    }
    std::cout << "converged in " << result.solve.iterations
              << " iterations; sup|u - v| = " << result.sup_u_minus_v
              << ", ode residual = " << result.ode_residual << "\n";
    return kExitOk;
  } catch (const cofix::PreconditionFailed& e) {
    report["precondition_failed"] = e.what();
    report["hypotheses"] =
        hypotheses_json(cofix::bvp::check_sign_conditions(spec),
                        [&] {
                          cofix::bvp::AssumptionReport r;
                          r.contraction = cofix::bvp::bvp_contraction_k(spec);
                          r.ratio_ok = r.contraction < 1.0;
                          return r;
                        }(),
                        nullptr);
    cofix::write_text_file(joined(opts.out_dir, "report.json"), report.dump(2) + "\n");
    std::cerr << "hypothesis gate: " << e.what() << "\n";
    return kExitHypothesis;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled fixed-point solver for mixed monotone operators"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&opts](CLI::App* cmd, bool with_config) {
    if (with_config)
      cmd->add_option("--config", opts.config_path, "flat key = value config file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--tol", opts.tolerance, "target bound on the product distance");
    cmd->add_option("--max-iter", opts.max_iterations, "iteration budget");
    cmd->add_option("--seed", opts.seed, "sampler seed");
    cmd->add_option("--grid", opts.grid_n, "grid subintervals (bvp only)");
  };

  CLI::App* example1 = app.add_subcommand(
      "example1", "solve the built-in linear demo operator and probe its contraction constants");
  add_common(example1, false);
  CLI::App* probe =
      app.add_subcommand("probe", "estimate contraction constants for a configured operator");
  add_common(probe, true);
  CLI::App* bvp = app.add_subcommand("bvp", "solve a configured periodic boundary value problem");
  add_common(bvp, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitIo;
  }

  try {
    if (example1->parsed()) return run_example1(opts);
    if (probe->parsed()) {
      opts.seed_given = probe->count("--seed") > 0;
      return run_probe(opts);
    }
    if (bvp->parsed()) return run_bvp(opts);
  } catch (const cofix::PreconditionFailed& e) {
    std::cerr << "hypothesis gate: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const cofix::DiagnosticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cofix::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
