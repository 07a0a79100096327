#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cofix/iteration.hpp"
#include "cofix/probes.hpp"
#include "cofix/product_space.hpp"

namespace cofix::bvp {

/// Real-valued function on the uniform grid t_i = i * period / grid_n,
/// i = 0..grid_n. Both endpoints are stored; solutions close periodically.
using GridFunction = Eigen::VectorXd;

/// The periodic problem u' = f(t, u) + g(t, u) on [0, period] with
/// u(0) = u(period), split so that f + lambda1 * id is nondecreasing with
/// Lipschitz constant mu1 and g - lambda2 * id is nonincreasing with
/// constant mu2.
struct BvpSpec {
  std::function<double(double, double)> f;  // f(t, u)
  std::function<double(double, double)> g;  // g(t, u)
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double period = 0.0;
  int grid_n = 256;

  double step() const { return period / grid_n; }
  Eigen::VectorXd nodes() const;
};

void validate(const BvpSpec& spec);  // throws InvalidParameter

/// Tabulated integral kernels, entry (i, j) = G_k(t_i, s_j). Both kernels
/// depend on t and s only through (t - s) mod period; the diagonal s = t
/// carries the s <= t branch. g1 jumps by exactly 1 across the diagonal, so
/// the one-sided value of the t < s branch as s -> t+ (argument = period) is
/// stored separately for quadrature that splits at the diagonal; g2 is
/// continuous there.
struct KernelTable {
  Eigen::MatrixXd g1;
  Eigen::MatrixXd g2;
  double g1_wrap = 0.0;  // t < s branch value at s -> t+
  double g2_wrap = 0.0;
};

/// Builds both kernel tables. Throws SingularKernel when a denominator
/// 1 - e^{tau * period} falls below 1e-12 in magnitude (lambda1 == lambda2
/// zeroes the second one).
KernelTable kernel_tables(const BvpSpec& spec);

/// The two parameter inequalities gating the solve:
/// ln((2e-1)/e) <= (lambda2 - lambda1) * period  and
/// (lambda1 + lambda2) * period <= 1. When both hold the tabulated kernel
/// signs are also recorded as a cross-check (see the kernel notes in the
/// README: G2 <= 0 holds, global G1 >= 0 does not).
struct SignConditionReport {
  double separation_lhs = 0.0;  // ln((2e-1)/e)
  double separation_rhs = 0.0;  // (lambda2 - lambda1) * period
  double smallness_lhs = 0.0;   // (lambda1 + lambda2) * period
  double smallness_rhs = 1.0;
  bool separation_ok = false;
  bool smallness_ok = false;

  bool kernels_checked = false;
  double g1_min = 0.0;
  double g2_max = 0.0;
  bool g1_nonnegative = false;
  bool g2_nonpositive = false;

  double separation_margin() const { return separation_rhs - separation_lhs; }
  double smallness_margin() const { return smallness_rhs - smallness_lhs; }
  bool conditions_ok() const { return separation_ok && smallness_ok; }
};

SignConditionReport check_sign_conditions(const BvpSpec& spec);

/// One failed instance of the slope conditions on f or g.
struct SlopeViolation {
  std::string inequality;  // which bound failed
  double t = 0.0, u = 0.0, v = 0.0;
  double lhs = 0.0, rhs = 0.0;
};

struct AssumptionReport {
  std::vector<SlopeViolation> violations;
  double contraction = 0.0;  // (mu1 + mu2) / (lambda1 + lambda2)
  bool ratio_ok = false;     // contraction < 1
  std::size_t pairs_checked = 0;

  bool slopes_ok() const { return violations.empty(); }
  bool ok() const { return slopes_ok() && ratio_ok; }
};

/// Checks, over every grid node t_i and every ordered value pair v <= u from
/// u_grid, that 0 <= [f(t,u)+l1 u] - [f(t,v)+l1 v] <= mu1 (u - v) and
/// -mu2 (u - v) <= [g(t,u)-l2 u] - [g(t,v)-l2 v] <= 0, and that the induced
/// contraction ratio is < 1. u_grid must be ascending with >= 2 values.
AssumptionReport check_slope_conditions(const BvpSpec& spec, const std::vector<double>& u_grid);

/// The integral operator of the reformulated problem:
///   A[u,v](t) = INT G1(t,s) [f(s,u)+g(s,v)+l1 u-l2 v]
///             + G2(t,s) [f(s,v)+g(s,u)+l1 v-l2 u] ds.
/// Composite trapezoidal quadrature, split at the diagonal so each smooth
/// kernel piece is integrated with its own one-sided value. Throws
/// DiagnosticError (naming the node) on a non-finite integrand.
GridFunction apply_A(const GridFunction& u, const GridFunction& v, const BvpSpec& spec,
                     const KernelTable& kernels);

struct LowerUpperViolation {
  std::string check;
  int node = -1;       // grid index, -1 for endpoint conditions
  double margin = 0.0; // negative = violated by this much
};

struct LowerUpperReport {
  std::vector<LowerUpperViolation> violations;
  double alpha_min_margin = 0.0;  // worst slack of alpha' <= f(t,alpha) + g(t,beta)
  double beta_min_margin = 0.0;   // worst slack of beta' >= f(t,beta) + g(t,alpha)
  bool endpoints_ok = false;      // alpha(0) <= alpha(T), beta(0) >= beta(T)
  bool balance_alpha_ok = false;  // l1 (a(T)-a(0)) + l2 (b(0)-b(T)) <= (a(T)-a(0))/T
  bool balance_beta_ok = false;   // l1 (b(0)-b(T)) + l2 (a(T)-a(0)) <= (b(0)-b(T))/T
  double slack = 0.0;             // discretization slack used on the differential inequalities

  // Informational only: the sufficient endpoint relation
  // T (l1 + l2) < (b(0) - b(T)) / (a(T) - a(0)) < 1, defined when the alpha
  // gap is nonzero. The balance inequalities above are the operative checks.
  bool sufficient_relation_applicable = false;
  bool sufficient_relation_holds = false;
  double sufficient_ratio = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Verifies that (alpha, beta) is a coupled lower-upper pair: the two
/// differential inequalities at every node (derivatives by finite
/// differences, one-sided at the endpoints, with O(h^2) slack), the endpoint
/// inequalities, and the two endpoint balance inequalities, the latter
/// directly on grid values with only a roundoff guard.
LowerUpperReport check_lower_upper(const GridFunction& alpha, const GridFunction& beta,
                                   const BvpSpec& spec);

/// Contraction factor (mu1 + mu2) / (lambda1 + lambda2) of the integral
/// operator on comparable pairs.
double bvp_contraction_k(const BvpSpec& spec);

/// The coarser factor 2 max(mu1, mu2) / (lambda1 + lambda2) required by the
/// one-sided halved condition; reported for comparison only.
double bvp_contraction_k_maxbased(const BvpSpec& spec);

struct BvpResult {
  GridFunction u;
  GridFunction v;
  SolveResult<GridFunction> solve;
  double sup_u_minus_v = 0.0;
  double ode_residual = 0.0;      // max_i |u'(t_i) - f(t_i,u_i) - g(t_i,u_i)|, periodic stencil
  double periodicity_gap = 0.0;   // |u(0) - u(period)|
  SignConditionReport signs;
  AssumptionReport assumption;
  LowerUpperReport lower_upper;
};

/// Full pipeline: hypothesis gates, then the coupled fixed-point iteration of
/// apply_A on the grid-function space from Z0 = (alpha, beta). Throws
/// PreconditionFailed naming the violated hypothesis. The assumption check
/// probes a value grid spanning [min(alpha), max(beta)], padded by 10%.
BvpResult solve_bvp(const BvpSpec& spec, const GridFunction& alpha, const GridFunction& beta,
                    double tolerance, int max_iterations = 10000);

/// Grid functions with the max-node distance (the grid stand-in for the sup
/// metric) and the pointwise order; pointwise max serves as bound oracle.
OrderedMetricSpace<GridFunction> make_grid_space();

/// The integral operator as a CoupledMap over grid functions.
CoupledMap<GridFunction> make_coupled_operator(const BvpSpec& spec, const KernelTable& kernels);

struct GridSamplerOptions {
  double amplitude = 2.0;  // base values drawn from [-amplitude, amplitude]
};

/// Sampler over grid functions: base points are node-wise uniform draws;
/// comparable pairs add nonnegative offsets of mixed shapes (constant,
/// node-wise random, smooth oscillatory) so probes see both rough and smooth
/// perturbations.
Sampler<GridFunction> make_grid_sampler(std::uint64_t seed, const BvpSpec& spec,
                                        GridSamplerOptions options = {});

/// Two-column CSV (t, value) for a grid function.
std::string grid_to_csv(const BvpSpec& spec, const GridFunction& u);
GridFunction grid_from_csv(const std::string& csv);

}  // namespace cofix::bvp
