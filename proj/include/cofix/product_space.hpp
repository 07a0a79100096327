#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cofix/errors.hpp"

namespace cofix {

enum class BoundKind { Upper, Lower };

template <class Point>
struct PairBound {
  Point point;
  BoundKind kind;
};

/// Descriptor of an ordered metric space (X, d, <=).
///
/// The space is supplied as callables so any point representation can be
/// plugged in; the library assumes nothing beyond what is declared here.
/// distance and leq must be reentrant. The capability flags feed the
/// uniqueness / equal-components hypothesis reports and are declarations by
/// the caller, not something the library proves.
template <class Point>
struct OrderedMetricSpace {
  std::function<double(const Point&, const Point&)> distance;
  std::function<bool(const Point&, const Point&)> leq;
  // Optional: a point declared to bound the pair {a, b} from above or below.
  std::function<std::optional<PairBound<Point>>(const Point&, const Point&)> bound_oracle;
  bool every_pair_bounded_in_x = false;
  bool every_pair_bounded_in_x2 = false;
};

/// An element Z = (x, y) of the product space X^2.
template <class Point>
struct ProductPoint {
  Point first;
  Point second;
};

/// The operator F : X x X -> X under study. eval must be deterministic:
/// repeated evaluation at equal inputs yields outputs at distance 0.
template <class Point>
struct CoupledMap {
  std::function<Point(const Point&, const Point&)> eval;

  Point operator()(const Point& x, const Point& y) const { return eval(x, y); }
};

namespace detail {

template <class Point>
double checked_distance(const OrderedMetricSpace<Point>& space, const Point& a, const Point& b) {
  const double d = space.distance(a, b);
  if (!std::isfinite(d)) throw DiagnosticError("user distance returned a non-finite value");
  if (d < 0.0) throw DiagnosticError("user distance returned a negative value");
  return d;
}

}  // namespace detail

/// Product metric d2(Y, V) = [d(Y.first, V.first) + d(Y.second, V.second)] / 2.
template <class Point>
double product_distance(const OrderedMetricSpace<Point>& space, const ProductPoint<Point>& y,
                        const ProductPoint<Point>& v) {
  return 0.5 * (detail::checked_distance(space, y.first, v.first) +
                detail::checked_distance(space, y.second, v.second));
}

/// Product order: V = (u, v) precedes Y = (x, y) iff u <= x and y <= v.
template <class Point>
bool product_leq(const OrderedMetricSpace<Point>& space, const ProductPoint<Point>& v,
                 const ProductPoint<Point>& y) {
  return space.leq(v.first, y.first) && space.leq(y.second, v.second);
}

/// Lift of F to the one-variable operator T(x, y) = (F(x,y), F(y,x)) on X^2.
/// Z is a fixed point of the lift exactly when (Z.first, Z.second) is a
/// coupled fixed point of F: F(x,y) = x and F(y,x) = y.
template <class Point>
class LiftedOperator {
 public:
  explicit LiftedOperator(CoupledMap<Point> map) : map_(std::move(map)) {}

  ProductPoint<Point> operator()(const ProductPoint<Point>& z) const {
    return {map_(z.first, z.second), map_(z.second, z.first)};
  }

  const CoupledMap<Point>& map() const { return map_; }

 private:
  CoupledMap<Point> map_;
};

template <class Point>
LiftedOperator<Point> lift(CoupledMap<Point> map) {
  return LiftedOperator<Point>(std::move(map));
}

// ---------------------------------------------------------------------------
// Sampling-based axiom checks for user-supplied spaces. Violations are report
// entries, never exceptions: a broken space is a finding, not a crash.

enum class AxiomKind {
  Identity,       // d(x, x) != 0
  NonFinite,      // d produced NaN/inf
  Nonnegativity,  // d(x, y) < 0
  Symmetry,       // d(x, y) != d(y, x)
  Triangle,       // d(x, z) > d(x, y) + d(y, z)
  Reflexivity,    // not (x <= x)
  Transitivity,   // x <= y, y <= z but not x <= z
  Antisymmetry,   // x <= y and y <= x but d(x, y) > 0
  BoundWitness,   // bound_oracle declared a bound that does not bound
};

struct AxiomViolation {
  AxiomKind kind;
  std::size_t i = 0, j = 0, k = 0;  // sample indices involved (k for triples only)
  double lhs = 0.0, rhs = 0.0;      // the two sides of the failed comparison
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;

  bool ok() const { return violations.empty(); }
};

/// Checks identity, nonnegativity, symmetry and the triangle inequality over
/// all pairs/triples drawn from the sample. An empty report means no
/// violation was found on this sample, not a proof.
template <class Point>
AxiomReport verify_metric_axioms(const OrderedMetricSpace<Point>& space,
                                 const std::vector<Point>& sample, double tol = 0.0) {
  if (sample.empty()) throw InvalidParameter("verify_metric_axioms requires a nonempty sample");
  AxiomReport report;
  const std::size_t n = sample.size();
  auto dist = [&](std::size_t a, std::size_t b) { return space.distance(sample[a], sample[b]); };

  for (std::size_t i = 0; i < n; ++i) {
    const double dii = dist(i, i);
    if (!std::isfinite(dii)) {
      report.violations.push_back({AxiomKind::NonFinite, i, i, 0, dii, 0.0});
    } else if (std::abs(dii) > tol) {
      report.violations.push_back({AxiomKind::Identity, i, i, 0, dii, 0.0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = dist(i, j), dji = dist(j, i);
      ++report.pairs_checked;
      if (!std::isfinite(dij) || !std::isfinite(dji)) {
        report.violations.push_back({AxiomKind::NonFinite, i, j, 0, dij, dji});
        continue;
      }
      if (dij < -tol) report.violations.push_back({AxiomKind::Nonnegativity, i, j, 0, dij, 0.0});
      if (std::abs(dij - dji) > tol)
        report.violations.push_back({AxiomKind::Symmetry, i, j, 0, dij, dji});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const double lhs = dist(i, k), rhs = dist(i, j) + dist(j, k);
        ++report.triples_checked;
        if (std::isfinite(lhs) && std::isfinite(rhs) && lhs > rhs + tol)
          report.violations.push_back({AxiomKind::Triangle, i, j, k, lhs, rhs});
      }
    }
  }
  return report;
}

/// Checks reflexivity, transitivity, antisymmetry-up-to-distance-0, and (when
/// a bound oracle is present) that declared bounds actually bound.
template <class Point>
AxiomReport verify_order_axioms(const OrderedMetricSpace<Point>& space,
                                const std::vector<Point>& sample, double tol = 0.0) {
  if (sample.empty()) throw InvalidParameter("verify_order_axioms requires a nonempty sample");
  AxiomReport report;
  const std::size_t n = sample.size();
  auto le = [&](std::size_t a, std::size_t b) { return space.leq(sample[a], sample[b]); };

  for (std::size_t i = 0; i < n; ++i)
    if (!le(i, i)) report.violations.push_back({AxiomKind::Reflexivity, i, i, 0, 0.0, 0.0});

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ++report.pairs_checked;
      if (le(i, j) && le(j, i)) {
        const double d = space.distance(sample[i], sample[j]);
        if (!(d <= tol)) report.violations.push_back({AxiomKind::Antisymmetry, i, j, 0, d, tol});
      }
      if (space.bound_oracle) {
        if (auto bound = space.bound_oracle(sample[i], sample[j])) {
          const bool ok = bound->kind == BoundKind::Upper
                              ? space.leq(sample[i], bound->point) && space.leq(sample[j], bound->point)
                              : space.leq(bound->point, sample[i]) && space.leq(bound->point, sample[j]);
          if (!ok) report.violations.push_back({AxiomKind::BoundWitness, i, j, 0, 0.0, 0.0});
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        ++report.triples_checked;
        if (le(i, j) && le(j, k) && !le(i, k))
          report.violations.push_back({AxiomKind::Transitivity, i, j, k, 0.0, 0.0});
      }
  return report;
}

}  // namespace cofix
