#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tnnflow/embedding.hpp"
#include "tnnflow/rng.hpp"
#include "tnnflow/totpos.hpp"

namespace tnnflow {

/// Diagonal contractive flow p_k -> exp(t delta_k) p_k in chart coordinates.
struct FlowSpec {
  Eigen::VectorXd deltas;  ///< delta_k = mu_k - mu_0, all negative
  double logC = 0.0;       ///< min_k (-delta_k)
  double radius = 0.0;     ///< ball radius used for crossings; 0 when unset

  std::size_t dim() const { return static_cast<std::size_t>(deltas.size()); }

  /// Throws DomainError unless every delta is negative (logC is recomputed).
  static FlowSpec from_deltas(Eigen::VectorXd deltas);
  static FlowSpec from_chart(const Chart& chart);
};

ChartPoint flow(const FlowSpec& spec, double t, const ChartPoint& p);

struct AxiomResult {
  std::string id;
  std::string description;
  bool pass = true;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  ///< smallest slack observed; negative on failure
  double estimate = 0.0;      ///< Lipschitz estimate for continuity, unused otherwise
  std::vector<double> witness_t;
  Eigen::VectorXd witness_p;  ///< first counterexample, or the worst sample on success
};

struct AxiomReport {
  std::vector<AxiomResult> axioms;
  bool pass() const;
};

/// Draws a nonzero chart point. The default draws a uniform direction with norm in (0, 10].
using PointSampler = std::function<ChartPoint(Rng&)>;
PointSampler default_point_sampler(std::size_t dim, double max_norm = 10.0);

/// Sampled checks of continuity, the semigroup law, and strict contraction with the C^-t bound.
AxiomReport verify_axioms(const FlowSpec& spec, const PointSampler& sampler, std::size_t count, Rng& rng);

struct Crossing {
  double t = 0.0;
  ChartPoint q;
  int iterations = 0;
};

struct CrossingOptions {
  double tol = 1e-12;         ///< relative tolerance on |f(t, p)| - r
  int max_iterations = 200;
  double initial_step = 1.0;  ///< first bracket step; doubled until the sign changes
};

/// The unique time at which the trajectory of p meets the sphere of radius r.
Crossing sphere_crossing(const FlowSpec& spec, const ChartPoint& p, double r, const CrossingOptions& opts = {});

/// Both sides of the chart identity phi(f(t, p)) = exp(t tau) phi(p).
struct FlowCommutation {
  FlagPoint flowed;        ///< exp(t tau) applied to the flag
  ChartPoint group_side;   ///< chart of the flowed flag
  ChartPoint chart_side;   ///< chart of the flag, then flowed in the chart
  double discrepancy = 0;  ///< max-abs difference divided by max(1, |chart_side|)
};

FlowCommutation flow_on_flag(double t, const FlagPoint& flag, const RepModule& rep, const Chart& chart);
FlowCommutation flow_on_flag(double t, const GroupElement& g, const RepModule& rep, const Chart& chart);

struct Convergence {
  double T = 0.0;          ///< first time with |f(T, p)| < tol
  ChartPoint reached;      ///< f(T, p)
  FlagPoint reached_flag;  ///< the flag at f(T, p)
  FlagPoint limit_flag;    ///< the fixed point: the top eigenline mapped back to a flag
  double bound = 0.0;      ///< analytic bound ln(|p| / tol) / logC
};

Convergence converge(const FlowSpec& spec, const RepModule& rep, const Chart& chart, const ChartPoint& p, double tol);

/// Draws a TNN flag on the boundary (some factorization parameter zero, point not interior).
using FlagSampler = std::function<FlagPoint(Rng&)>;
FlagSampler boundary_flag_sampler(std::size_t n, const IndexSet& j);

/// Exact membership of a rational flag in the strictly positive part, where certified:
/// SL3 complete flags and minuscule lines.
bool certified_interior(const RepModule& rep, const FlagPoint& flag);

struct InvarianceSample {
  std::size_t index = 0;
  bool interior = false;
  double min_coordinate = 0.0;  ///< smallest oracle coordinate after flowing
  std::string detail;
};

struct InvarianceReport {
  std::size_t n = 0;
  IndexSet j;
  double t = 0.0;
  double tol = 0.0;
  std::string oracle;
  std::size_t interior = 0;
  std::vector<InvarianceSample> failures;  ///< witnesses of non-interior samples
  std::size_t count = 0;
  bool pass() const { return count > 0 && interior == count; }
};

/// Flows boundary samples in the chart and tests the images for strict positivity.
/// Only SL3 complete flags and minuscule modules have a certified oracle.
InvarianceReport invariance_check(const RepModule& rep, const Chart& chart, const FlagSampler& sampler, double t,
                                  std::size_t count, Rng& rng, double tol = 1e-9);

/// Strict positivity of a float flag under the certified oracle, with its smallest coordinate.
bool interior_by_oracle(const RepModule& rep, const FlagPoint& flag, double tol, double* min_coordinate = nullptr);

}  // namespace tnnflow
