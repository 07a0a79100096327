#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cofix/product_space.hpp"

namespace cofix {

/// A pair of product points with lower <= upper in the product order.
template <class Point>
struct ComparablePair {
  ProductPoint<Point> upper;  // Y = (x, y)
  ProductPoint<Point> lower;  // V = (u, v), with u <= x and y <= v
};

/// Source of sample points and comparable pairs for a space. Implementations
/// must be deterministic under a fixed seed; both closures usually share one
/// seeded engine, so the draw order is part of the reproducible stream.
template <class Point>
struct Sampler {
  std::function<Point()> draw_point;
  std::function<ComparablePair<Point>()> draw_comparable_pair;
  std::uint64_t seed = 0;
};

enum class ContractionCondition {
  SymmetricSum,   // d(F(x,y),F(u,v)) + d(F(y,x),F(v,u)) <= k [d(x,u) + d(y,v)]
  Componentwise,  // d(F(x,y),F(u,v)) <= k/2 [d(x,u) + d(y,v)]
};

inline const char* to_string(ContractionCondition c) {
  return c == ContractionCondition::SymmetricSum ? "symmetric_sum" : "componentwise";
}

/// Empirical contraction estimate: the supremum of observed per-pair
/// admissible constants, with the pair that attained it. Sampling falsifies
/// or estimates; it never proves.
template <class Point>
struct ContractionReport {
  ContractionCondition condition = ContractionCondition::SymmetricSum;
  double k_hat = 0.0;
  ComparablePair<Point> witness{};
  int samples_used = 0;
  int samples_skipped = 0;  // pairs with zero denominator (condition vacuous there)
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  std::uint64_t seed = 0;

  double spread() const { return samples_used > 0 ? ratio_max - ratio_min : 0.0; }
};

/// Per-pair contraction data shared by both estimators: the denominator
/// d(x,u) + d(y,v), the symmetric-sum ratio, and the two one-sided ratios
/// (the evaluation at the pair and at its coordinate swap, which is itself a
/// comparable pair with the same denominator).
template <class Point>
struct PairRatios {
  ComparablePair<Point> pair;
  double denom = 0.0;
  double symmetric = 0.0;
  double forward = 0.0;
  double swapped = 0.0;
};

template <class Point>
std::vector<PairRatios<Point>> contraction_ratios(const CoupledMap<Point>& f,
                                                  const OrderedMetricSpace<Point>& space,
                                                  const std::vector<ComparablePair<Point>>& pairs) {
  std::vector<PairRatios<Point>> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const Point& x = pair.upper.first;
    const Point& y = pair.upper.second;
    const Point& u = pair.lower.first;
    const Point& v = pair.lower.second;
    const double denom =
        detail::checked_distance(space, x, u) + detail::checked_distance(space, y, v);
    PairRatios<Point> r;
    r.pair = pair;
    r.denom = denom;
    if (denom > 0.0) {
      const double d_fwd = detail::checked_distance(space, f(x, y), f(u, v));
      const double d_swp = detail::checked_distance(space, f(v, u), f(y, x));
      r.forward = d_fwd / denom;
      r.swapped = d_swp / denom;
      r.symmetric = (d_fwd + d_swp) / denom;
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {

template <class Point>
std::vector<ComparablePair<Point>> draw_pairs(const Sampler<Point>& sampler, int n) {
  if (n < 1) throw InvalidParameter("sample count must be at least 1");
  std::vector<ComparablePair<Point>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pairs.push_back(sampler.draw_comparable_pair());
  return pairs;
}

// Reduce the recorded ratio list deterministically (first maximizer wins).
template <class Point, class Extract>
ContractionReport<Point> reduce_ratios(const std::vector<PairRatios<Point>>& ratios,
                                       ContractionCondition condition, std::uint64_t seed,
                                       Extract&& extract) {
  ContractionReport<Point> report;
  report.condition = condition;
  report.seed = seed;
  for (const auto& r : ratios) {
    if (!(r.denom > 0.0)) {
      ++report.samples_skipped;
      continue;
    }
    const double value = extract(r);
    ++report.samples_used;
    report.ratio_min = std::min(report.ratio_min, value);
    if (value > report.ratio_max) {
      report.ratio_max = value;
      report.witness = r.pair;
    }
  }
  if (report.samples_used == 0)
    throw DegenerateSample("all sampled pairs have zero separation; no ratio can be formed");
  report.k_hat = report.ratio_max;
  return report;
}

}  // namespace detail

/// Estimates the smallest k admissible in the symmetric-sum condition over n
/// sampled comparable pairs. Zero-denominator pairs are skipped (the
/// condition is vacuous at distance 0); if every pair degenerates the probe
/// throws DegenerateSample.
template <class Point>
ContractionReport<Point> estimate_k_symmetric(const CoupledMap<Point>& f,
                                              const OrderedMetricSpace<Point>& space,
                                              const Sampler<Point>& sampler, int n) {
  const auto ratios = contraction_ratios(f, space, detail::draw_pairs(sampler, n));
  return detail::reduce_ratios(ratios, ContractionCondition::SymmetricSum, sampler.seed,
                               [](const PairRatios<Point>& r) { return r.symmetric; });
}

/// Estimates the smallest k admissible in the componentwise condition
/// d(F(x,y),F(u,v)) <= k/2 [d(x,u)+d(y,v)], i.e. twice the largest one-sided
/// ratio. Both orientations of each sampled pair are evaluated, since the
/// coordinate swap is a comparable pair with the same denominator.
template <class Point>
ContractionReport<Point> estimate_k_componentwise(const CoupledMap<Point>& f,
                                                  const OrderedMetricSpace<Point>& space,
                                                  const Sampler<Point>& sampler, int n) {
  const auto ratios = contraction_ratios(f, space, detail::draw_pairs(sampler, n));
  return detail::reduce_ratios(ratios, ContractionCondition::Componentwise, sampler.seed,
                               [](const PairRatios<Point>& r) {
                                 return 2.0 * std::max(r.forward, r.swapped);
                               });
}

enum class ConditionVerdict { Both, SymmetricOnly, ComponentwiseOnly, Neither };

inline const char* to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::Both: return "both";
    case ConditionVerdict::SymmetricOnly: return "symmetric_only";
    case ConditionVerdict::ComponentwiseOnly: return "componentwise_only";
    default: return "neither";
  }
}

template <class Point>
struct ConditionComparison {
  ContractionReport<Point> symmetric;
  ContractionReport<Point> componentwise;
  ConditionVerdict verdict = ConditionVerdict::Neither;
};

/// Evaluates both contraction conditions on one shared set of sampled pairs
/// and reports which is satisfiable with k < 1. The symmetric condition is
/// the weaker one: per sample its ratio never exceeds the componentwise
/// estimate taken on the same pairs.
template <class Point>
ConditionComparison<Point> compare_conditions(const CoupledMap<Point>& f,
                                              const OrderedMetricSpace<Point>& space,
                                              const Sampler<Point>& sampler, int n) {
  const auto ratios = contraction_ratios(f, space, detail::draw_pairs(sampler, n));
  ConditionComparison<Point> cmp;
  cmp.symmetric = detail::reduce_ratios(ratios, ContractionCondition::SymmetricSum, sampler.seed,
                                        [](const PairRatios<Point>& r) { return r.symmetric; });
  cmp.componentwise =
      detail::reduce_ratios(ratios, ContractionCondition::Componentwise, sampler.seed,
                            [](const PairRatios<Point>& r) {
                              return 2.0 * std::max(r.forward, r.swapped);
                            });
  const bool sym_ok = cmp.symmetric.k_hat < 1.0;
  const bool comp_ok = cmp.componentwise.k_hat < 1.0;
  cmp.verdict = sym_ok && comp_ok  ? ConditionVerdict::Both
                : sym_ok           ? ConditionVerdict::SymmetricOnly
                : comp_ok          ? ConditionVerdict::ComponentwiseOnly
                                   : ConditionVerdict::Neither;
  return cmp;
}

/// A witness that F failed the mixed monotone property on a sampled input.
template <class Point>
struct MonotonicityViolation {
  bool first_argument = true;  // true: not nondecreasing in x; false: not nonincreasing in y
  Point lo{}, hi{};            // the ordered pair fed to the varying argument
  Point other{};               // the fixed other argument
  Point f_lo{}, f_hi{};        // the two evaluations that compared wrongly
};

/// Samples n ordered triples per argument and checks that F is nondecreasing
/// in its first argument and nonincreasing in its second. Returns all
/// violating witnesses; an empty list means the property survived sampling.
template <class Point>
std::vector<MonotonicityViolation<Point>> probe_mixed_monotone(
    const CoupledMap<Point>& f, const OrderedMetricSpace<Point>& space,
    const Sampler<Point>& sampler, int n) {
  if (n < 1) throw InvalidParameter("sample count must be at least 1");
  std::vector<MonotonicityViolation<Point>> violations;
  for (int i = 0; i < n; ++i) {
    const ComparablePair<Point> pair = sampler.draw_comparable_pair();
    const Point& x_lo = pair.lower.first;   // u <= x
    const Point& x_hi = pair.upper.first;
    const Point& y_lo = pair.upper.second;  // y <= v
    const Point& y_hi = pair.lower.second;

    Point at_x_lo = f(x_lo, y_lo);
    Point at_x_hi = f(x_hi, y_lo);
    if (!space.leq(at_x_lo, at_x_hi))
      violations.push_back({true, x_lo, x_hi, y_lo, std::move(at_x_lo), at_x_hi});

    Point at_y_hi = f(x_hi, y_hi);
    if (!space.leq(at_y_hi, at_x_hi))  // want F(x, y_hi) <= F(x, y_lo)
      violations.push_back({false, y_lo, y_hi, x_hi, std::move(at_x_hi), std::move(at_y_hi)});
  }
  return violations;
}

}  // namespace cofix
