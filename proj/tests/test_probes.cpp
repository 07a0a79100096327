#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <vector>

#include "cofix/probes.hpp"
#include "cofix/real_line.hpp"

using namespace cofix;

namespace {

// Brute-force suprema over a dense grid of comparable pairs: the independent
// oracle for the sampled estimates. Pairs are (x, y) >= (u, v) with
// x = u + dx, v = y + dv, dx, dv >= 0.
struct BruteForce {
  double symmetric = 0.0;
  double componentwise = 0.0;
};

BruteForce brute_force_k(const CoupledMap<double>& f, double span, int n) {
  BruteForce out;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      const double dx = span * a / n;
      const double dv = span * b / n;
      const double denom = dx + dv;
      if (denom == 0.0) continue;
      // The ratios of linear/constant maps depend only on the offsets, so a
      // single base point suffices for the oracle.
      const double u = -1.0, y = 0.5;
      const double x = u + dx, v = y + dv;
      const double fwd = std::abs(f(x, y) - f(u, v));
      const double swp = std::abs(f(v, u) - f(y, x));
      out.symmetric = std::max(out.symmetric, (fwd + swp) / denom);
      out.componentwise = std::max(out.componentwise, 2.0 * std::max(fwd, swp) / denom);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("probes");

TEST_CASE("sampler is deterministic and emits comparable pairs") {
  const auto space = make_real_space();
  auto a = make_real_sampler(42);
  auto b = make_real_sampler(42);
  for (int i = 0; i < 50; ++i) {
    const auto pa = a.draw_comparable_pair();
    const auto pb = b.draw_comparable_pair();
    CHECK(pa.upper.first == pb.upper.first);
    CHECK(pa.upper.second == pb.upper.second);
    CHECK(pa.lower.first == pb.lower.first);
    CHECK(pa.lower.second == pb.lower.second);
    CHECK(product_leq(space, pa.lower, pa.upper));
  }
}

TEST_CASE("symmetric estimate on the demo map is exactly 4/5") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);

  const auto oracle = brute_force_k(demo, 5.0, 80);
  CHECK(oracle.symmetric == doctest::Approx(0.8).epsilon(1e-12));

  const auto report = estimate_k_symmetric(demo, space, make_real_sampler(1), 10000);
  CHECK(report.condition == ContractionCondition::SymmetricSum);
  CHECK(report.k_hat == doctest::Approx(0.8).epsilon(1.25e-12));
  CHECK(report.spread() < 1e-12);  // the ratio is constant across pairs
  CHECK(report.samples_used + report.samples_skipped == 10000);
  CHECK(report.samples_used > 9000);
  CHECK(report.k_hat <= 0.8 + 1e-12);  // never exceeds the analytic supremum
}

TEST_CASE("componentwise estimate on the demo map reaches 6/5") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);

  const auto oracle = brute_force_k(demo, 5.0, 80);
  CHECK(oracle.componentwise == doctest::Approx(1.2).epsilon(1e-12));

  const auto report = estimate_k_componentwise(demo, space, make_real_sampler(2), 10000);
  CHECK(report.k_hat == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(report.k_hat <= 1.2 + 1e-12);
}

TEST_CASE("constant and coordinate maps hit their known constants") {
  const auto space = make_real_space();

  const auto constant = estimate_k_symmetric(make_constant_map(3.0), space,
                                             make_real_sampler(3), 2000);
  CHECK(constant.k_hat == 0.0);
  const auto constant2 = estimate_k_componentwise(make_constant_map(3.0), space,
                                                  make_real_sampler(3), 2000);
  CHECK(constant2.k_hat == 0.0);

  // F(x, y) = x: the symmetric ratio is identically 1.
  const auto identity = estimate_k_symmetric(make_linear_map(1.0, 0.0), space,
                                             make_real_sampler(4), 2000);
  CHECK(identity.k_hat == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(identity.k_hat <= 1.0 + 1e-12);
  CHECK(identity.spread() < 1e-12);
}

TEST_CASE("averaging map: sampled estimate matches the brute-force supremum") {
  const auto space = make_real_space();
  const auto average = make_linear_map(0.25, 0.25);  // F(x,y) = (x + y)/4, not mixed monotone

  const auto oracle = brute_force_k(average, 5.0, 200);
  CHECK(oracle.componentwise == doctest::Approx(0.5).epsilon(1e-12));

  const auto report = estimate_k_componentwise(average, space, make_real_sampler(5), 10000);
  CHECK(report.k_hat == doctest::Approx(oracle.componentwise).epsilon(1e-12));
  CHECK(report.k_hat <= oracle.componentwise + 1e-12);
}

TEST_CASE("mixed monotonicity probe") {
  const auto space = make_real_space();
  CHECK(probe_mixed_monotone(make_linear_map(1.0 / 5.0, -3.0 / 5.0), space,
                             make_real_sampler(6), 2000)
            .empty());
  CHECK(probe_mixed_monotone(make_constant_map(-1.0), space, make_real_sampler(7), 2000).empty());

  // F(x, y) = y is increasing in its second argument: violations expected.
  const auto violations =
      probe_mixed_monotone(make_linear_map(0.0, 1.0), space, make_real_sampler(8), 2000);
  CHECK_FALSE(violations.empty());
  bool second_arg = false;
  for (const auto& v : violations) second_arg |= !v.first_argument;
  CHECK(second_arg);
}

TEST_CASE("compare_conditions separates the two conditions on shared samples") {
  const auto space = make_real_space();

  const auto demo = compare_conditions(make_linear_map(1.0 / 5.0, -3.0 / 5.0), space,
                                       make_real_sampler(9), 10000);
  CHECK(demo.verdict == ConditionVerdict::SymmetricOnly);
  CHECK(demo.symmetric.k_hat < 1.0);
  CHECK(demo.componentwise.k_hat >= 1.2 - 1e-9);

  const auto constant =
      compare_conditions(make_constant_map(0.0), space, make_real_sampler(10), 2000);
  CHECK(constant.verdict == ConditionVerdict::Both);

  const auto coordinate =
      compare_conditions(make_linear_map(1.0, 0.0), space, make_real_sampler(11), 2000);
  CHECK(coordinate.verdict == ConditionVerdict::Neither);
}

TEST_CASE("per-sample dominance: symmetric ratio never exceeds the componentwise value") {
  const auto space = make_real_space();
  for (auto map : {make_linear_map(1.0 / 5.0, -3.0 / 5.0), make_linear_map(0.3, 0.7),
                   make_linear_map(-0.2, 0.4)}) {
    const auto sampler = make_real_sampler(12);
    std::vector<ComparablePair<double>> pairs;
    for (int i = 0; i < 2000; ++i) pairs.push_back(sampler.draw_comparable_pair());
    for (const auto& r : contraction_ratios(map, space, pairs)) {
      if (r.denom == 0.0) continue;
      CHECK(r.symmetric <= 2.0 * std::max(r.forward, r.swapped) + 1e-13);
    }
  }
}

TEST_CASE("estimates are scale equivariant") {
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  auto space = make_real_space();
  const auto base = estimate_k_symmetric(demo, space, make_real_sampler(13), 4000);

  auto scaled4 = make_real_space();
  scaled4.distance = [](double a, double b) { return 4.0 * std::abs(a - b); };
  const auto by4 = estimate_k_symmetric(demo, scaled4, make_real_sampler(13), 4000);
  CHECK(by4.k_hat == base.k_hat);  // power-of-two scaling is exact

  auto scaled3 = make_real_space();
  scaled3.distance = [](double a, double b) { return 3.0 * std::abs(a - b); };
  const auto by3 = estimate_k_symmetric(demo, scaled3, make_real_sampler(13), 4000);
  CHECK(by3.k_hat == doctest::Approx(base.k_hat).epsilon(1e-12));
}

TEST_CASE("identical seeds give identical reports") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  const auto a = estimate_k_componentwise(demo, space, make_real_sampler(99), 5000);
  const auto b = estimate_k_componentwise(demo, space, make_real_sampler(99), 5000);
  CHECK(a.k_hat == b.k_hat);
  CHECK(a.ratio_min == b.ratio_min);
  CHECK(a.samples_used == b.samples_used);
  CHECK(a.witness.upper.first == b.witness.upper.first);
  CHECK(a.witness.lower.second == b.witness.lower.second);
}

TEST_CASE("degenerate samplers are rejected") {
  const auto space = make_real_space();
  const auto demo = make_linear_map(1.0 / 5.0, -3.0 / 5.0);
  Sampler<double> stuck;
  stuck.seed = 0;
  stuck.draw_point = [] { return 1.0; };
  stuck.draw_comparable_pair = [] { return ComparablePair<double>{{1.0, 1.0}, {1.0, 1.0}}; };
  CHECK_THROWS_AS(estimate_k_symmetric(demo, space, stuck, 100), DegenerateSample);
  CHECK_THROWS_AS(estimate_k_symmetric(demo, space, stuck, 0), InvalidParameter);
}

TEST_SUITE_END();
