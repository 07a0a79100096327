#include "cofix/periodic_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "cofix/errors.hpp"

namespace cofix::bvp {
namespace {

struct KernelProfiles {
  // Values of the two exponential modes at x_m = m * h, m = 0..grid_n.
  // gq: e^{tau1 x} / (1 - e^{tau1 T}) with tau1 = -(l1 + l2)
  // gp: e^{tau2 x} / (1 - e^{tau2 T}) with tau2 = l2 - l1
  Eigen::VectorXd gq;
  Eigen::VectorXd gp;
};

KernelProfiles kernel_profiles(const BvpSpec& spec) {
  const double tau1 = -(spec.lambda1 + spec.lambda2);
  const double tau2 = spec.lambda2 - spec.lambda1;
  const double d1 = 1.0 - std::exp(tau1 * spec.period);
  const double d2 = 1.0 - std::exp(tau2 * spec.period);
  if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
    throw SingularKernel("kernel denominator 1 - e^{tau T} vanishes; lambda1 and lambda2 "
                         "must differ and the rates must be nonzero");
  const int n = spec.grid_n;
  const double h = spec.step();
  KernelProfiles p;
  p.gq.resize(n + 1);
  p.gp.resize(n + 1);
  for (int m = 0; m <= n; ++m) {
    const double x = m * h;
    p.gq[m] = std::exp(tau1 * x) / d1;
    p.gp[m] = std::exp(tau2 * x) / d2;
  }
  return p;
}

}  // namespace

Eigen::VectorXd BvpSpec::nodes() const {
  Eigen::VectorXd t(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) t[i] = i * period / grid_n;
  return t;
}

void validate(const BvpSpec& spec) {
  if (!(spec.lambda1 > 0.0 && spec.lambda2 > 0.0 && spec.mu1 >= 0.0 && spec.mu2 >= 0.0))
    throw InvalidParameter("lambda1, lambda2 must be positive and mu1, mu2 nonnegative");
  if (!(spec.period > 0.0)) throw InvalidParameter("period must be positive");
  if (spec.grid_n < 2) throw InvalidParameter("grid_n must be at least 2");
  if (!spec.f || !spec.g) throw InvalidParameter("both f and g must be supplied");
}

KernelTable kernel_tables(const BvpSpec& spec) {
  const KernelProfiles p = kernel_profiles(spec);
  const int n = spec.grid_n;

  // Both kernels are functions of (t - s) mod period; entry (i, j) reads the
  // profile at m = (i - j) mod grid_n, except that i = j stays at m = 0 (the
  // s <= t branch) and (i, j) = (n, 0) keeps the full argument m = n.
  KernelTable table;
  table.g1.resize(n + 1, n + 1);
  table.g2.resize(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      int m = i - j;
      if (m < 0) m += n;
      table.g1(i, j) = 0.5 * (p.gp[m] + p.gq[m]);
      table.g2(i, j) = 0.5 * (p.gp[m] - p.gq[m]);
    }
  }
  table.g1_wrap = 0.5 * (p.gp[n] + p.gq[n]);
  table.g2_wrap = 0.5 * (p.gp[n] - p.gq[n]);
  return table;
}

SignConditionReport check_sign_conditions(const BvpSpec& spec) {
  SignConditionReport report;
  report.separation_lhs = std::log((2.0 * std::exp(1.0) - 1.0) / std::exp(1.0));
  report.separation_rhs = (spec.lambda2 - spec.lambda1) * spec.period;
  report.smallness_lhs = (spec.lambda1 + spec.lambda2) * spec.period;
  report.smallness_rhs = 1.0;
  report.separation_ok = report.separation_lhs <= report.separation_rhs;
  report.smallness_ok = report.smallness_lhs <= report.smallness_rhs;

  if (report.conditions_ok()) {
    const KernelTable table = kernel_tables(spec);
    report.kernels_checked = true;
    report.g1_min = table.g1.minCoeff();
    report.g2_max = table.g2.maxCoeff();
    report.g1_nonnegative = report.g1_min >= -1e-12;
    report.g2_nonpositive = report.g2_max <= 1e-12;
  }
  return report;
}

AssumptionReport check_slope_conditions(const BvpSpec& spec, const std::vector<double>& u_grid) {
  validate(spec);
  if (u_grid.size() < 2) throw InvalidParameter("u_grid needs at least 2 values");
  if (!std::is_sorted(u_grid.begin(), u_grid.end()))
    throw InvalidParameter("u_grid must be ascending");

  AssumptionReport report;
  report.contraction = bvp_contraction_k(spec);
  report.ratio_ok = report.contraction < 1.0;

  const Eigen::VectorXd t = spec.nodes();
  for (int i = 0; i < t.size(); ++i) {
    for (std::size_t a = 0; a + 1 < u_grid.size(); ++a) {
      for (std::size_t b = a + 1; b < u_grid.size(); ++b) {
        const double v = u_grid[a], u = u_grid[b];
        const double du = u - v;
        ++report.pairs_checked;
        const double fdiff = (spec.f(t[i], u) + spec.lambda1 * u) -
                             (spec.f(t[i], v) + spec.lambda1 * v);
        const double gdiff = (spec.g(t[i], u) - spec.lambda2 * u) -
                             (spec.g(t[i], v) - spec.lambda2 * v);
        const double eps = 1e-12 * std::max({1.0, std::abs(fdiff), std::abs(gdiff),
                                             spec.mu1 * du, spec.mu2 * du});
        if (fdiff < -eps)
          report.violations.push_back({"f + lambda1*id nondecreasing", t[i], u, v, fdiff, 0.0});
        if (fdiff > spec.mu1 * du + eps)
          report.violations.push_back(
              {"f + lambda1*id Lipschitz(mu1)", t[i], u, v, fdiff, spec.mu1 * du});
        if (gdiff > eps)
          report.violations.push_back({"g - lambda2*id nonincreasing", t[i], u, v, gdiff, 0.0});
        if (gdiff < -spec.mu2 * du - eps)
          report.violations.push_back(
              {"g - lambda2*id Lipschitz(mu2)", t[i], u, v, gdiff, -spec.mu2 * du});
      }
    }
  }
  return report;
}

GridFunction apply_A(const GridFunction& u, const GridFunction& v, const BvpSpec& spec,
                     const KernelTable& kernels) {
  const int n = spec.grid_n;
  if (u.size() != n + 1 || v.size() != n + 1)
    throw InvalidParameter("grid functions do not match the spec grid");
  if (kernels.g1.rows() != n + 1)
    throw InvalidParameter("kernel table does not match the spec grid");

  const double h = spec.step();
  const Eigen::VectorXd t = spec.nodes();

  Eigen::VectorXd b1(n + 1), b2(n + 1);
  for (int j = 0; j <= n; ++j) {
    b1[j] = spec.f(t[j], u[j]) + spec.g(t[j], v[j]) + spec.lambda1 * u[j] - spec.lambda2 * v[j];
    b2[j] = spec.f(t[j], v[j]) + spec.g(t[j], u[j]) + spec.lambda1 * v[j] - spec.lambda2 * u[j];
    if (!std::isfinite(b1[j]) || !std::isfinite(b2[j])) {
      std::ostringstream msg;
      msg << "non-finite integrand at node " << j << " (t = " << t[j] << ")";
      throw DiagnosticError(msg.str());
    }
  }

  // Composite trapezoid with endpoint half-weights, plus the diagonal
  // correction: the cell just above the diagonal belongs to the t < s branch,
  // whose one-sided value at s = t is the wrap entry, not the tabulated one.
  Eigen::VectorXd w1 = b1, w2 = b2;
  w1[0] *= 0.5; w1[n] *= 0.5;
  w2[0] *= 0.5; w2[n] *= 0.5;
  GridFunction out = h * (kernels.g1 * w1 + kernels.g2 * w2);
  const double c1 = 0.5 * h * (kernels.g1_wrap - kernels.g1(0, 0));
  const double c2 = 0.5 * h * (kernels.g2_wrap - kernels.g2(0, 0));
  for (int i = 0; i < n; ++i) out[i] += c1 * b1[i] + c2 * b2[i];
  return out;
}

namespace {

// Central differences inside; one-sided stencils at the ends (fourth order
// when the grid allows, so endpoint noise stays below the h^2 slack used by
// the inequality checks).
Eigen::VectorXd derivative(const GridFunction& w, double h) {
  const int n = static_cast<int>(w.size()) - 1;
  Eigen::VectorXd d(n + 1);
  for (int i = 1; i < n; ++i) d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
  if (n >= 4) {
    d[0] = (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h);
    d[n] = (25.0 * w[n] - 48.0 * w[n - 1] + 36.0 * w[n - 2] - 16.0 * w[n - 3] + 3.0 * w[n - 4]) /
           (12.0 * h);
  } else {
    d[0] = (w[1] - w[0]) / h;
    d[n] = (w[n] - w[n - 1]) / h;
  }
  return d;
}

// Periodic central differences, for functions that close up: the stencil at
// node 0 reaches back to u(t_{n-1}) through the period.
Eigen::VectorXd derivative_periodic(const GridFunction& w, double h) {
  const int n = static_cast<int>(w.size()) - 1;
  Eigen::VectorXd d(n + 1);
  for (int i = 1; i < n; ++i) d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
  d[0] = (w[1] - w[n - 1]) / (2.0 * h);
  d[n] = d[0];
  return d;
}

}  // namespace

LowerUpperReport check_lower_upper(const GridFunction& alpha, const GridFunction& beta,
                                   const BvpSpec& spec) {
  validate(spec);
  const int n = spec.grid_n;
  if (alpha.size() != n + 1 || beta.size() != n + 1)
    throw InvalidParameter("alpha/beta do not match the spec grid");

  const double h = spec.step();
  const Eigen::VectorXd t = spec.nodes();
  const Eigen::VectorXd da = derivative(alpha, h);
  const Eigen::VectorXd db = derivative(beta, h);

  LowerUpperReport report;
  const double scale = std::max({1.0, alpha.cwiseAbs().maxCoeff(), beta.cwiseAbs().maxCoeff()});
  report.slack = 10.0 * h * h * scale;

  double worst_a = std::numeric_limits<double>::infinity();
  double worst_b = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double rhs_a = spec.f(t[i], alpha[i]) + spec.g(t[i], beta[i]);
    const double rhs_b = spec.f(t[i], beta[i]) + spec.g(t[i], alpha[i]);
    const double margin_a = rhs_a - da[i];  // want alpha' <= f + g
    const double margin_b = db[i] - rhs_b;  // want beta' >= f + g
    worst_a = std::min(worst_a, margin_a);
    worst_b = std::min(worst_b, margin_b);
    if (margin_a < -report.slack)
      report.violations.push_back({"alpha' <= f(t,alpha) + g(t,beta)", i, margin_a});
    if (margin_b < -report.slack)
      report.violations.push_back({"beta' >= f(t,beta) + g(t,alpha)", i, margin_b});
  }
  report.alpha_min_margin = worst_a;
  report.beta_min_margin = worst_b;

  // Endpoint and balance inequalities take no discretization slack, only a
  // roundoff guard: equality cases (periodic alpha, beta) must not flip on
  // the last ulp of the endpoint evaluations.
  const double roundoff = 1e-12 * scale;
  const double a_gap = alpha[n] - alpha[0];  // alpha(T) - alpha(0) >= 0 required
  const double b_gap = beta[0] - beta[n];    // beta(0) - beta(T) >= 0 required
  report.endpoints_ok = alpha[0] <= alpha[n] + roundoff && beta[0] >= beta[n] - roundoff;
  if (!report.endpoints_ok)
    report.violations.push_back({"alpha(0) <= alpha(T) and beta(0) >= beta(T)", -1,
                                 std::min(a_gap, b_gap)});

  const double balance_a =
      a_gap / spec.period - (spec.lambda1 * a_gap + spec.lambda2 * b_gap);
  const double balance_b =
      b_gap / spec.period - (spec.lambda1 * b_gap + spec.lambda2 * a_gap);
  report.balance_alpha_ok = balance_a >= -roundoff;
  report.balance_beta_ok = balance_b >= -roundoff;

  if (std::abs(a_gap) > roundoff) {
    report.sufficient_relation_applicable = true;
    report.sufficient_ratio = b_gap / a_gap;
    report.sufficient_relation_holds =
        spec.period * (spec.lambda1 + spec.lambda2) < report.sufficient_ratio &&
        report.sufficient_ratio < 1.0;
  }
  if (!report.balance_alpha_ok)
    report.violations.push_back(
        {"l1 (a(T)-a(0)) + l2 (b(0)-b(T)) <= (a(T)-a(0))/T", -1, balance_a});
  if (!report.balance_beta_ok)
    report.violations.push_back(
        {"l1 (b(0)-b(T)) + l2 (a(T)-a(0)) <= (b(0)-b(T))/T", -1, balance_b});
  return report;
}

double bvp_contraction_k(const BvpSpec& spec) {
  return (spec.mu1 + spec.mu2) / (spec.lambda1 + spec.lambda2);
}

double bvp_contraction_k_maxbased(const BvpSpec& spec) {
  return 2.0 * std::max(spec.mu1, spec.mu2) / (spec.lambda1 + spec.lambda2);
}

OrderedMetricSpace<GridFunction> make_grid_space() {
  OrderedMetricSpace<GridFunction> space;
  space.distance = [](const GridFunction& a, const GridFunction& b) {
    return (a - b).cwiseAbs().maxCoeff();
  };
  space.leq = [](const GridFunction& a, const GridFunction& b) {
    return (a.array() <= b.array()).all();
  };
  space.bound_oracle = [](const GridFunction& a, const GridFunction& b) {
    return std::optional<PairBound<GridFunction>>{{a.cwiseMax(b), BoundKind::Upper}};
  };
  space.every_pair_bounded_in_x = true;
  space.every_pair_bounded_in_x2 = true;
  return space;
}

CoupledMap<GridFunction> make_coupled_operator(const BvpSpec& spec, const KernelTable& kernels) {
  return {[spec, kernels](const GridFunction& u, const GridFunction& v) {
    return apply_A(u, v, spec, kernels);
  }};
}

BvpResult solve_bvp(const BvpSpec& spec, const GridFunction& alpha, const GridFunction& beta,
                    double tolerance, int max_iterations) {
  validate(spec);
  BvpResult result;

  result.signs = check_sign_conditions(spec);
  if (!result.signs.separation_ok) {
    std::ostringstream msg;
    msg << "kernel separation condition ln((2e-1)/e) <= (lambda2-lambda1)*T fails: "
        << result.signs.separation_lhs << " > " << result.signs.separation_rhs;
    throw PreconditionFailed(msg.str());
  }
  if (!result.signs.smallness_ok) {
    std::ostringstream msg;
    msg << "kernel smallness condition (lambda1+lambda2)*T <= 1 fails: "
        << result.signs.smallness_lhs << " > 1";
    throw PreconditionFailed(msg.str());
  }

  const double lo = std::min(alpha.minCoeff(), beta.minCoeff());
  const double hi = std::max(alpha.maxCoeff(), beta.maxCoeff());
  const double pad = 0.1 * std::max(1.0, hi - lo);
  std::vector<double> probe_grid;
  const int probe_points = 21;
  for (int i = 0; i < probe_points; ++i)
    probe_grid.push_back(lo - pad + (hi - lo + 2 * pad) * i / (probe_points - 1));
  result.assumption = check_slope_conditions(spec, probe_grid);
  if (!result.assumption.slopes_ok()) {
    std::ostringstream msg;
    msg << "slope condition violated: " << result.assumption.violations.front().inequality
        << " at t = " << result.assumption.violations.front().t;
    throw PreconditionFailed(msg.str());
  }
  if (!result.assumption.ratio_ok) {
    std::ostringstream msg;
    msg << "contraction ratio (mu1+mu2)/(lambda1+lambda2) = " << result.assumption.contraction
        << " is not < 1";
    throw PreconditionFailed(msg.str());
  }

  result.lower_upper = check_lower_upper(alpha, beta, spec);
  if (!result.lower_upper.ok()) {
    std::ostringstream msg;
    msg << "coupled lower-upper conditions violated: "
        << result.lower_upper.violations.front().check;
    throw PreconditionFailed(msg.str());
  }

  const KernelTable kernels = kernel_tables(spec);
  const auto space = make_grid_space();
  const auto op = make_coupled_operator(spec, kernels);

  IterationConfig config;
  config.contraction_k = bvp_contraction_k(spec);
  config.tolerance = tolerance;
  config.max_iterations = max_iterations;
  result.solve = solve(op, space, ProductPoint<GridFunction>{alpha, beta}, config);

  result.u = result.solve.final.first;
  result.v = result.solve.final.second;
  result.sup_u_minus_v = (result.u - result.v).cwiseAbs().maxCoeff();
  result.periodicity_gap = std::abs(result.u[0] - result.u[spec.grid_n]);

  const Eigen::VectorXd t = spec.nodes();
  const Eigen::VectorXd du = derivative_periodic(result.u, spec.step());
  double residual = 0.0;
  for (int i = 0; i <= spec.grid_n; ++i)
    residual = std::max(residual,
                        std::abs(du[i] - spec.f(t[i], result.u[i]) - spec.g(t[i], result.u[i])));
  result.ode_residual = residual;
  return result;
}

Sampler<GridFunction> make_grid_sampler(std::uint64_t seed, const BvpSpec& spec,
                                        GridSamplerOptions options) {
  const int n = spec.grid_n;
  const double period = spec.period;
  auto engine = std::make_shared<std::mt19937_64>(seed);

  auto draw_values = [engine, n, amp = options.amplitude]() {
    std::uniform_real_distribution<double> dist(-amp, amp);
    GridFunction w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = dist(*engine);
    return w;
  };
  // Nonnegative offsets of three shapes: constant, node-wise random, and a
  // smooth raised sinusoid. Constant offsets hit the kernels' mean mode,
  // which is where the contraction ratio peaks. Offset scales are floored
  // away from zero so sampled operator differences stay above float noise.
  auto draw_offset = [engine, n, period, amp = options.amplitude]() {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> shape(0, 2);
    const auto scale_draw = [&] { return amp * (0.05 + 0.95 * unit(*engine)); };
    GridFunction w(n + 1);
    switch (shape(*engine)) {
      case 0: w.setConstant(scale_draw()); break;
      case 1:
        for (int i = 0; i <= n; ++i) w[i] = amp * unit(*engine);
        break;
      default: {
        const double scale = scale_draw();
        const int waves = 1 + static_cast<int>(3 * unit(*engine));
        const double phase = 2.0 * M_PI * unit(*engine);
        for (int i = 0; i <= n; ++i) {
          const double t = i * period / n;
          w[i] = scale * 0.5 * (1.0 + std::sin(2.0 * M_PI * waves * t / period + phase));
        }
        break;
      }
    }
    return w;
  };

  Sampler<GridFunction> sampler;
  sampler.seed = seed;
  sampler.draw_point = draw_values;
  sampler.draw_comparable_pair = [draw_values, draw_offset]() {
    const GridFunction u = draw_values();
    const GridFunction y = draw_values();
    return ComparablePair<GridFunction>{{u + draw_offset(), y}, {u, y + draw_offset()}};
  };
  return sampler;
}

std::string grid_to_csv(const BvpSpec& spec, const GridFunction& u) {
  const Eigen::VectorXd t = spec.nodes();
  std::ostringstream out;
  out << "t,value\n";
  out.precision(17);
  for (int i = 0; i < u.size(); ++i) out << t[i] << "," << u[i] << "\n";
  return out.str();
}

GridFunction grid_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<double> values;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;  // header row is optional
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DiagnosticError("grid CSV row lacks a comma: " + line);
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DiagnosticError("grid CSV row has a malformed value: " + line);
    }
  }
  if (values.size() < 3) throw DiagnosticError("grid CSV holds fewer than 3 rows");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

}  // namespace cofix::bvp
