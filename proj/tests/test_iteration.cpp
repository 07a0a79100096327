#include <array>
#include <cmath>
#include <doctest.h>
#include <vector>

#include "cofix/iteration.hpp"
#include "cofix/real_line.hpp"

using namespace cofix;

namespace {

// Independent closed-form orbit for F(x,y) = (x - 3y)/5 from (-3, 3): the
// lift decouples into s = x + y scaling by -2/5 and d = x - y scaling by 4/5,
// so x_n = -3 (4/5)^n and y_n = 3 (4/5)^n.
struct DemoOrbit {
  double x(int n) const { return -3.0 * std::pow(0.8, n); }
  double y(int n) const { return 3.0 * std::pow(0.8, n); }
  double d2_to_fixed_point(int n) const { return 3.0 * std::pow(0.8, n); }
};

IterationConfig demo_config(double tol = 1e-8) {
  IterationConfig config;
  config.contraction_k = 0.8;
  config.tolerance = tol;
  return config;
}

// A two-dimensional componentwise-ordered space, for incomparable starts.
struct Vec2 {
  double a, b;
};
OrderedMetricSpace<Vec2> make_vec2_space() {
  OrderedMetricSpace<Vec2> space;
  space.distance = [](const Vec2& p, const Vec2& q) {
    return std::max(std::abs(p.a - q.a), std::abs(p.b - q.b));
  };
  space.leq = [](const Vec2& p, const Vec2& q) { return p.a <= q.a && p.b <= q.b; };
  return space;
}

}  // namespace

TEST_SUITE_BEGIN("iteration");

TEST_CASE("a priori bound") {
  CHECK(a_priori_bound(0.8, 0.6, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(a_priori_bound(0.0, 123.0, 1) == 0.0);
  CHECK(a_priori_bound(0.0, 5.0, 0) == 5.0);
  CHECK(a_priori_bound(0.5, 1.0, 3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(a_priori_bound(1.0, 1.0, 1), InvalidParameter);
  CHECK_THROWS_AS(a_priori_bound(-0.1, 1.0, 1), InvalidParameter);
  CHECK_THROWS_AS(a_priori_bound(0.5, -1.0, 1), InvalidParameter);
  CHECK_THROWS_AS(a_priori_bound(0.5, 1.0, -1), InvalidParameter);
}

TEST_CASE("a posteriori bound") {
  CHECK(a_posteriori_bound(0.8, 0.1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(a_posteriori_bound(0.0, 5.0) == 0.0);
  CHECK(a_posteriori_bound(0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(a_posteriori_bound(1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(a_posteriori_bound(0.5, -1.0), InvalidParameter);
}

TEST_CASE("check_initial classifies the starting pair") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  CHECK(check_initial(demo, space, -3.0, 3.0) == InitialBranch::LowerBranch);
  CHECK(check_initial(demo, space, 0.0, 0.0) == InitialBranch::LowerBranch);  // equality counts
  CHECK(check_initial(demo, space, 3.0, -3.0) == InitialBranch::UpperBranch);

  const CoupledMap<double> shift{[](double x, double) { return x + 1.0; }};
  CHECK(check_initial(shift, space, 0.0, 0.0) == InitialBranch::Neither);
}

TEST_CASE("solve reproduces the closed-form orbit of the demo map") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  const auto result = solve(demo, space, {-3.0, 3.0}, demo_config());

  REQUIRE(result.converged());
  CHECK(result.branch == InitialBranch::LowerBranch);
  CHECK(result.bound <= 1e-8);
  CHECK(std::abs(result.final.first) <= 1e-8);
  CHECK(std::abs(result.final.second) <= 1e-8);
  CHECK(result.residual <= 1e-8);

  const DemoOrbit orbit;
  REQUIRE(result.trace.iterates.size() == static_cast<std::size_t>(result.iterations) + 1);
  for (int n = 0; n <= result.iterations && n <= 40; ++n) {
    CHECK(result.trace.iterates[n].first == doctest::Approx(orbit.x(n)).epsilon(1e-12));
    CHECK(result.trace.iterates[n].second == doctest::Approx(orbit.y(n)).epsilon(1e-12));
  }
}

TEST_CASE("geometric decay and monotone orbit on the lower branch") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  const auto result = solve(demo, space, {-3.0, 3.0}, demo_config(1e-10));

  REQUIRE(result.converged());
  const auto& steps = result.trace.steps;
  REQUIRE(steps.size() >= 10);
  for (std::size_t n = 1; n < steps.size(); ++n)
    CHECK(steps[n].d2_step <= 0.8 * steps[n - 1].d2_step + 1e-12);
  for (const auto& s : steps) CHECK(s.monotone_ok);
  for (std::size_t n = 0; n + 1 < result.trace.iterates.size(); ++n)
    CHECK(product_leq(space, result.trace.iterates[n], result.trace.iterates[n + 1]));
}

TEST_CASE("constant map converges in one step with k = 0") {
  const auto space = make_real_space();
  const auto result = solve(make_constant_map(2.5), space, {40.0, -7.0}, demo_config());
  // k defaults to 0 in demo_config? No: demo_config sets 0.8; build explicit config.
  IterationConfig config;
  config.contraction_k = 0.0;
  config.tolerance = 1e-12;
  const auto exact = solve(make_constant_map(2.5), space, {40.0, -7.0}, config);
  REQUIRE(exact.converged());
  CHECK(exact.iterations == 1);
  CHECK(exact.final.first == 2.5);
  CHECK(exact.final.second == 2.5);
  CHECK(result.converged());  // with k = 0.8 it still converges, just not in one step
}

TEST_CASE("doubling map is flagged as non-contractive") {
  const auto space = make_real_space();
  const CoupledMap<double> doubling{[](double x, double) { return 2.0 * x; }};
  IterationConfig config;
  config.contraction_k = 0.9;
  config.tolerance = 1e-10;
  const auto result = solve(doubling, space, {1.0, 0.0}, config);
  CHECK(result.status == SolveStatus::NonContractiveStep);
  CHECK_FALSE(result.converged());
}

TEST_CASE("incomparable iterates abort with OrderViolation") {
  const auto space = make_real_space();
  const CoupledMap<double> shift{[](double x, double) { return x + 1.0; }};
  IterationConfig config;
  config.contraction_k = 0.5;
  config.tolerance = 1e-10;
  const auto result = solve(shift, space, {0.0, 0.0}, config);
  CHECK(result.branch == InitialBranch::Neither);
  CHECK(result.status == SolveStatus::OrderViolation);
}

TEST_CASE("stopping rules: a priori and step size also converge") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  for (StoppingRule rule : {StoppingRule::APriori, StoppingRule::StepSize}) {
    IterationConfig config = demo_config(1e-9);
    config.stopping_rule = rule;
    const auto result = solve(demo, space, {-3.0, 3.0}, config);
    REQUIRE(result.converged());
    CHECK(result.bound <= 1e-9);
  }
}

TEST_CASE("invalid configs are rejected") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  IterationConfig config;
  config.contraction_k = 1.0;
  CHECK_THROWS_AS(solve(demo, space, {-3.0, 3.0}, config), InvalidParameter);
  config.contraction_k = 0.5;
  config.tolerance = 0.0;
  CHECK_THROWS_AS(solve(demo, space, {-3.0, 3.0}, config), InvalidParameter);
  config.tolerance = 1e-10;
  config.max_iterations = 0;
  CHECK_THROWS_AS(solve(demo, space, {-3.0, 3.0}, config), InvalidParameter);
}

TEST_CASE("swapping the start coordinates swaps the orbit and keeps the trace") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  const auto lower = solve(demo, space, {-3.0, 3.0}, demo_config());
  const auto upper = solve(demo, space, {3.0, -3.0}, demo_config());

  REQUIRE(lower.converged());
  REQUIRE(upper.converged());
  CHECK(upper.branch == InitialBranch::UpperBranch);
  REQUIRE(lower.trace.steps.size() == upper.trace.steps.size());
  for (std::size_t n = 0; n < lower.trace.steps.size(); ++n) {
    CHECK(lower.trace.steps[n].d2_step == upper.trace.steps[n].d2_step);
    CHECK(lower.trace.steps[n].bound == upper.trace.steps[n].bound);
    CHECK(lower.trace.steps[n].monotone_ok == upper.trace.steps[n].monotone_ok);
  }
  for (std::size_t n = 0; n < lower.trace.iterates.size(); ++n) {
    CHECK(lower.trace.iterates[n].first == upper.trace.iterates[n].second);
    CHECK(lower.trace.iterates[n].second == upper.trace.iterates[n].first);
  }
}

TEST_CASE("uniqueness report on the totally ordered line") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  const auto result = solve(demo, space, {-3.0, 3.0}, demo_config(1e-10));
  REQUIRE(result.converged());

  const auto report = uniqueness_report(demo, space, result, 1e-10);
  CHECK(report.unique_in_product.status == HypothesisStatus::Satisfied);
  CHECK(report.bound_in_x.status == HypothesisStatus::Satisfied);
  CHECK(report.initial_comparable.status == HypothesisStatus::Satisfied);
  CHECK(report.components_checked);
  CHECK(report.components_equal);
  CHECK(report.component_distance <= 1e-9);
  CHECK(report.fixed_point_residual <= 1e-9);

  const auto already_fixed = solve(demo, space, {0.0, 0.0}, demo_config());
  REQUIRE(already_fixed.converged());
  const auto trivial = uniqueness_report(demo, space, already_fixed, 1e-10);
  CHECK(trivial.components_equal);
  CHECK(trivial.component_distance == 0.0);
}

TEST_CASE("uniqueness report without capabilities says not verifiable") {
  const auto space = make_vec2_space();
  const CoupledMap<Vec2> settle{[](const Vec2&, const Vec2&) { return Vec2{1.0, 1.0}; }};
  IterationConfig config;
  config.contraction_k = 0.0;  // constant map: exact after one step
  config.tolerance = 1e-12;
  // Start at an incomparable pair: (0, 2) vs (2, 0).
  const auto result = solve(settle, space, {Vec2{0.0, 2.0}, Vec2{2.0, 0.0}}, config);
  REQUIRE(result.converged());
  const auto report = uniqueness_report(settle, space, result, 1e-12);
  CHECK(report.unique_in_product.status == HypothesisStatus::NotVerifiable);
  CHECK(report.bound_in_x.status == HypothesisStatus::NotVerifiable);
  CHECK(report.initial_comparable.status == HypothesisStatus::NotVerifiable);
  CHECK_FALSE(report.components_checked);

  CHECK_THROWS_AS(
      uniqueness_report(settle, space,
                        [&] {
                          auto r = result;
                          r.status = SolveStatus::MaxIterations;
                          return r;
                        }(),
                        1e-12),
      InvalidParameter);
}

TEST_SUITE_END();
