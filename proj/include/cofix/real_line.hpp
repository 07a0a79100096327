#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>

#include "cofix/probes.hpp"
#include "cofix/product_space.hpp"

namespace cofix {

/// The real line with |x - y| and the usual total order. Every pair is
/// bounded (max/min), so all uniqueness hypotheses are declared satisfied.
inline OrderedMetricSpace<double> make_real_space() {
  OrderedMetricSpace<double> space;
  space.distance = [](double a, double b) { return std::abs(a - b); };
  space.leq = [](double a, double b) { return a <= b; };
  space.bound_oracle = [](double a, double b) {
    return std::optional<PairBound<double>>{{std::max(a, b), BoundKind::Upper}};
  };
  space.every_pair_bounded_in_x = true;
  space.every_pair_bounded_in_x2 = true;
  return space;
}

/// F(x, y) = cx * x + cy * y. Mixed monotone when cx >= 0 and cy <= 0.
inline CoupledMap<double> make_linear_map(double coef_x, double coef_y) {
  return {[coef_x, coef_y](double x, double y) { return coef_x * x + coef_y * y; }};
}

inline CoupledMap<double> make_constant_map(double value) {
  return {[value](double, double) { return value; }};
}

struct RealSamplerOptions {
  double range = 10.0;                  // base points drawn from [-range, range]
  double zero_offset_probability = 0.25;  // chance that an offset is exactly 0
};

/// Comparable pairs on the real line are built constructively: draw (u, y),
/// then nonnegative offsets dx, dv and set x = u + dx, v = y + dv, so
/// x >= u and y <= v by construction. Offsets are exactly zero with positive
/// probability so the probes also exercise the single-coordinate edge of the
/// contraction conditions; a pair with both offsets zero is degenerate and
/// gets skipped by the estimators.
inline Sampler<double> make_real_sampler(std::uint64_t seed, RealSamplerOptions options = {}) {
  auto engine = std::make_shared<std::mt19937_64>(seed);
  auto uniform = [engine](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(*engine);
  };
  auto offset = [engine, uniform, options]() {
    if (std::bernoulli_distribution(options.zero_offset_probability)(*engine)) return 0.0;
    return uniform(0.0, options.range);
  };

  Sampler<double> sampler;
  sampler.seed = seed;
  sampler.draw_point = [uniform, options]() { return uniform(-options.range, options.range); };
  sampler.draw_comparable_pair = [uniform, offset, options]() {
    const double u = uniform(-options.range, options.range);
    const double y = uniform(-options.range, options.range);
    const double x = u + offset();
    const double v = y + offset();
    return ComparablePair<double>{{x, y}, {u, v}};
  };
  return sampler;
}

}  // namespace cofix
