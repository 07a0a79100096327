#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cofix/product_space.hpp"

namespace cofix {

enum class StoppingRule { APriori, APosteriori, StepSize };

enum class InitialBranch { LowerBranch, UpperBranch, Neither };

enum class SolveStatus { Converged, MaxIterations, NonContractiveStep, OrderViolation };

/// A priori bound k^n / (1 - k) * d1 on the distance from iterate n to the
/// fixed point, where d1 is the first step distance d2(Z_1, Z_0).
inline double a_priori_bound(double k, double d1, long n) {
  if (!(k >= 0.0 && k < 1.0)) throw InvalidParameter("contraction constant must lie in [0, 1)");
  if (!(d1 >= 0.0)) throw InvalidParameter("first step distance must be nonnegative");
  if (n < 0) throw InvalidParameter("iteration index must be nonnegative");
  return std::pow(k, static_cast<double>(n)) / (1.0 - k) * d1;
}

/// A posteriori bound k / (1 - k) * d2(Z_{n+1}, Z_n) on the distance from the
/// latest iterate to the fixed point (geometric tail of the step distances).
inline double a_posteriori_bound(double k, double last_step) {
  if (!(k >= 0.0 && k < 1.0)) throw InvalidParameter("contraction constant must lie in [0, 1)");
  if (!(last_step >= 0.0)) throw InvalidParameter("step distance must be nonnegative");
  return k / (1.0 - k) * last_step;
}

struct IterationConfig {
  double contraction_k = 0.0;   // declared or probe-estimated, in [0, 1)
  double tolerance = 1e-10;     // target bound on d2 to the fixed point
  int max_iterations = 10000;
  StoppingRule stopping_rule = StoppingRule::APosteriori;
  // Consecutive expanding steps tolerated before the run is declared
  // non-contractive. Steps below tolerance/100 are not counted, so float
  // noise at convergence cannot trip the watchdog.
  int noncontractive_window = 3;
  bool store_iterates = true;
};

struct TraceStep {
  int n = 0;                // step index: this records Z_n -> Z_{n+1}
  double d2_step = 0.0;     // d2(Z_{n+1}, Z_n)
  double bound = 0.0;       // error bound for Z_{n+1} under the active stopping rule
  bool monotone_ok = true;  // Z_n, Z_{n+1} ordered the way the branch predicts
};

template <class Point>
struct IterationTrace {
  std::vector<ProductPoint<Point>> iterates;  // Z_0 .. Z_N when store_iterates is set
  std::vector<TraceStep> steps;
};

template <class Point>
struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  InitialBranch branch = InitialBranch::Neither;
  ProductPoint<Point> initial{};
  ProductPoint<Point> final{};
  IterationTrace<Point> trace;
  double bound = std::numeric_limits<double>::infinity();     // bound at termination
  double residual = std::numeric_limits<double>::infinity();  // d2(T(final), final), set on convergence
  int iterations = 0;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// Classifies the starting pair: LowerBranch when x0 <= F(x0,y0) and
/// y0 >= F(y0,x0) (the orbit ascends in the product order), UpperBranch for
/// the reversed pair, Neither otherwise. Equality qualifies for LowerBranch.
template <class Point>
InitialBranch check_initial(const CoupledMap<Point>& f, const OrderedMetricSpace<Point>& space,
                            const Point& x0, const Point& y0) {
  const Point fx = f(x0, y0);
  const Point fy = f(y0, x0);
  if (space.leq(x0, fx) && space.leq(fy, y0)) return InitialBranch::LowerBranch;
  if (space.leq(fx, x0) && space.leq(y0, fy)) return InitialBranch::UpperBranch;
  return InitialBranch::Neither;
}

inline const char* to_string(InitialBranch b) {
  switch (b) {
    case InitialBranch::LowerBranch: return "lower";
    case InitialBranch::UpperBranch: return "upper";
    default: return "neither";
  }
}

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NonContractiveStep: return "non_contractive_step";
    default: return "order_violation";
  }
}

/// Picard iteration Z_{n+1} = T(Z_n) for the lifted operator, with
/// monotone-sequence tracking and error-bound-driven stopping.
///
/// A Neither start is tolerated (the branch is recorded and per-step order
/// checks continue); the run aborts with OrderViolation only if successive
/// iterates become incomparable while the step distance still exceeds the
/// tolerance, since past that point no contraction estimate applies.
template <class Point>
SolveResult<Point> solve(const CoupledMap<Point>& f, const OrderedMetricSpace<Point>& space,
                         const ProductPoint<Point>& z0, const IterationConfig& config) {
  if (!(config.contraction_k >= 0.0 && config.contraction_k < 1.0))
    throw InvalidParameter("contraction constant must lie in [0, 1)");
  if (!(config.tolerance > 0.0)) throw InvalidParameter("tolerance must be positive");
  if (config.max_iterations < 1) throw InvalidParameter("max_iterations must be positive");

  SolveResult<Point> result;
  result.initial = z0;
  result.branch = check_initial(f, space, z0.first, z0.second);

  const auto op = lift(f);
  const double k = config.contraction_k;
  ProductPoint<Point> current = z0;
  if (config.store_iterates) result.trace.iterates.push_back(current);

  double first_step = 0.0;
  double prev_step = -1.0;
  int expanding_run = 0;

  for (int n = 0; n < config.max_iterations; ++n) {
    ProductPoint<Point> next = op(current);
    const double step = product_distance(space, next, current);
    if (n == 0) first_step = step;

    const bool ascending = product_leq(space, current, next);
    const bool descending = product_leq(space, next, current);
    bool monotone_ok = false;
    switch (result.branch) {
      case InitialBranch::LowerBranch: monotone_ok = ascending; break;
      case InitialBranch::UpperBranch: monotone_ok = descending; break;
      case InitialBranch::Neither: monotone_ok = ascending || descending; break;
    }

    double bound = 0.0;
    switch (config.stopping_rule) {
      case StoppingRule::APriori: bound = a_priori_bound(k, first_step, n + 1); break;
      case StoppingRule::APosteriori: bound = a_posteriori_bound(k, step); break;
      case StoppingRule::StepSize: bound = step; break;
    }

    result.trace.steps.push_back({n, step, bound, monotone_ok});
    if (config.store_iterates) result.trace.iterates.push_back(next);
    current = std::move(next);
    result.iterations = n + 1;
    result.bound = bound;

    if (bound <= config.tolerance) {
      result.status = SolveStatus::Converged;
      result.final = current;
      result.residual = product_distance(space, op(current), current);
      return result;
    }
    if (!ascending && !descending && step > config.tolerance) {
      result.status = SolveStatus::OrderViolation;
      result.final = current;
      return result;
    }
    if (prev_step >= 0.0 && step > prev_step && step > 0.01 * config.tolerance) {
      if (++expanding_run >= config.noncontractive_window) {
        result.status = SolveStatus::NonContractiveStep;
        result.final = current;
        return result;
      }
    } else {
      expanding_run = 0;
    }
    prev_step = step;
  }

  result.status = SolveStatus::MaxIterations;
  result.final = current;
  return result;
}

// ---------------------------------------------------------------------------
// Uniqueness / equal-components hypothesis report.

enum class HypothesisStatus { Satisfied, NotVerifiable };

struct HypothesisCheck {
  std::string name;
  HypothesisStatus status = HypothesisStatus::NotVerifiable;
  std::string detail;
};

template <class Point>
struct UniquenessReport {
  // Every pair in X^2 has a comparable companion: the coupled fixed point is unique.
  HypothesisCheck unique_in_product;
  // Every pair in X has an upper or lower bound: the components coincide.
  HypothesisCheck bound_in_x;
  // The starting pair x0, y0 is comparable: the components coincide.
  HypothesisCheck initial_comparable;

  bool components_checked = false;
  bool components_equal = false;
  double component_distance = std::numeric_limits<double>::infinity();
  double fixed_point_residual = std::numeric_limits<double>::infinity();

  bool equal_components_expected() const {
    return bound_in_x.status == HypothesisStatus::Satisfied ||
           initial_comparable.status == HypothesisStatus::Satisfied;
  }
};

/// Reports which uniqueness / equal-components hypotheses hold for the space
/// and the run, and verifies their numeric consequences on the result. The
/// statuses are Satisfied / NotVerifiable: capability flags are declarations,
/// and a missing flag or oracle is reported, never treated as a failure.
template <class Point>
UniquenessReport<Point> uniqueness_report(const CoupledMap<Point>& f,
                                          const OrderedMetricSpace<Point>& space,
                                          const SolveResult<Point>& result, double tolerance) {
  if (!result.converged())
    throw InvalidParameter("uniqueness_report requires a converged solve result");

  UniquenessReport<Point> report;
  report.unique_in_product.name = "every pair in X^2 admits a comparable companion";
  report.bound_in_x.name = "every pair in X has an upper or lower bound";
  report.initial_comparable.name = "x0 and y0 are comparable";

  if (space.every_pair_bounded_in_x2) {
    report.unique_in_product.status = HypothesisStatus::Satisfied;
    report.unique_in_product.detail = "declared by the space; coupled fixed point is unique";
  } else {
    report.unique_in_product.detail = "not declared by the space; uniqueness not verifiable";
  }

  if (space.every_pair_bounded_in_x) {
    report.bound_in_x.status = HypothesisStatus::Satisfied;
    report.bound_in_x.detail = "declared by the space";
  } else {
    report.bound_in_x.detail = "not declared by the space";
  }

  const Point& x0 = result.initial.first;
  const Point& y0 = result.initial.second;
  if (space.leq(x0, y0) || space.leq(y0, x0)) {
    report.initial_comparable.status = HypothesisStatus::Satisfied;
    report.initial_comparable.detail = "verified on the starting pair";
  } else {
    report.initial_comparable.detail = "starting pair is incomparable";
  }

  if (report.equal_components_expected()) {
    report.components_checked = true;
    report.component_distance = space.distance(result.final.first, result.final.second);
    report.components_equal = report.component_distance <= 10.0 * tolerance;
    if (report.components_equal) {
      const Point image = f(result.final.first, result.final.first);
      report.fixed_point_residual = space.distance(image, result.final.first);
    }
  }
  return report;
}

}  // namespace cofix
