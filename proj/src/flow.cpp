#include "tnnflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tnnflow/error.hpp"

namespace tnnflow {

FlowSpec FlowSpec::from_deltas(Eigen::VectorXd deltas) {
  if (deltas.size() == 0) throw DomainError("flow needs at least one coordinate");
  for (Eigen::Index k = 0; k < deltas.size(); ++k)
    if (!(deltas(k) < 0.0)) throw DomainError("flow rates must be negative, got " + to_decimal_string(deltas(k)));
  FlowSpec s;
  s.logC = (-deltas).minCoeff();
  s.deltas = std::move(deltas);
  return s;
}

FlowSpec FlowSpec::from_chart(const Chart& chart) {
  const auto n = static_cast<Eigen::Index>(chart.N);
  return from_deltas(chart.mu.tail(n).array() - chart.mu(0));
}

ChartPoint flow(const FlowSpec& spec, double t, const ChartPoint& p) {
  if (p.coords.size() != spec.deltas.size()) throw DomainError("flow: dimension mismatch");
  ChartPoint out;
  out.coords = (spec.deltas.array() * t).exp() * p.coords.array();
  out.overflow = p.overflow || !out.coords.allFinite();
  return out;
}

bool AxiomReport::pass() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass; });
}

PointSampler default_point_sampler(std::size_t dim, double max_norm) {
  return [dim, max_norm](Rng& rng) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    do {
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    } while (v.norm() == 0.0);
    return ChartPoint{v * (max_norm * rng.uniform_open_low() / v.norm())};
  };
}

namespace {

void record(AxiomResult& a, double margin, std::vector<double> ts, const Eigen::VectorXd& p) {
  ++a.samples;
  const bool first = a.samples == 1;
  if (margin < 0.0) {
    if (a.violations == 0) {
      a.witness_t = std::move(ts);
      a.witness_p = p;
    }
    ++a.violations;
    a.pass = false;
  } else if (a.violations == 0 && (first || margin < a.worst_margin)) {
    a.witness_t = std::move(ts);
    a.witness_p = p;
  }
  if (first || margin < a.worst_margin) a.worst_margin = margin;
}

}  // namespace

AxiomReport verify_axioms(const FlowSpec& spec, const PointSampler& sampler, std::size_t count, Rng& rng) {
  if (count == 0) throw DomainError("verify_axioms: count must be positive");
  constexpr double kBox = 5.0;
  const double rate = spec.deltas.cwiseAbs().maxCoeff();

  AxiomResult cont;
  cont.id = "continuity";
  cont.description = "sampled Lipschitz estimate on |t| <= 5 against the analytic constant";
  AxiomResult semi;
  semi.id = "semigroup";
  semi.description = "f(t1 + t2, p) = f(t1, f(t2, p)) within 1e-12 relative";
  AxiomResult contr;
  contr.id = "contraction";
  contr.description = "|f(t, p)| < |p| and |f(t, p)| <= exp(-t logC) |p| + 1e-12 for t in (0, 5]";

  for (std::size_t s = 0; s < count; ++s) {
    const ChartPoint p = sampler(rng);

    // (1) Difference quotient between nearby samples against the Lipschitz constant of the box.
    {
      const double t = rng.uniform(-kBox, kBox);
      const double h = 1e-6 * rng.uniform_open_low();
      Eigen::VectorXd dp(p.coords.size());
      for (Eigen::Index i = 0; i < dp.size(); ++i) dp(i) = rng.normal();
      dp *= h / dp.norm();
      const double dt = h * rng.uniform(-1.0, 1.0);
      const ChartPoint a = flow(spec, t, p);
      const ChartPoint b = flow(spec, t + dt, ChartPoint{p.coords + dp});
      const double q = (a.coords - b.coords).norm() / (std::abs(dt) + dp.norm());
      const double radius = p.norm() + h;
      const double lip = std::exp(rate * (kBox + h)) * (1.0 + rate * radius);
      cont.estimate = std::max(cont.estimate, q);
      record(cont, lip * (1.0 + 1e-6) - q, {t, dt}, p.coords);
    }
    // (2) Semigroup law.
    {
      const double t1 = rng.uniform(-kBox, kBox);
      const double t2 = rng.uniform(-kBox, kBox);
      const ChartPoint lhs = flow(spec, t1 + t2, p);
      const ChartPoint rhs = flow(spec, t1, flow(spec, t2, p));
      const double scale = std::max(lhs.norm(), std::numeric_limits<double>::min());
      const double rel = (lhs.coords - rhs.coords).norm() / scale;
      record(semi, 1e-12 - rel, {t1, t2}, p.coords);
    }
    // (3) Strict decrease and the exponential bound.
    {
      const double t = kBox * rng.uniform_open_low();
      const double before = p.norm();
      const double after = flow(spec, t, p).norm();
      const double bound = std::exp(-t * spec.logC) * before + 1e-12;
      const double margin = after < before ? bound - after : -1.0;
      record(contr, margin, {t}, p.coords);
    }
  }
  return AxiomReport{{cont, semi, contr}};
}

Crossing sphere_crossing(const FlowSpec& spec, const ChartPoint& p, double r, const CrossingOptions& opts) {
  if (!(p.norm() > 0.0)) throw DomainError("sphere_crossing: the fixed point never meets a sphere");
  if (!(r > 0.0)) throw DomainError("sphere_crossing: radius must be positive");
  if (!(opts.initial_step > 0.0)) throw DomainError("sphere_crossing: initial step must be positive");

  auto gap = [&](double t) { return flow(spec, t, p).norm() - r; };
  const double accept = opts.tol * r;

  Crossing out;
  const double g0 = gap(0.0);
  if (std::abs(g0) <= accept) {
    out.q = p;
    return out;
  }
  // The norm decreases in t, so move forward when outside the sphere and backward inside.
  const double dir = g0 > 0.0 ? 1.0 : -1.0;
  double lo = 0.0;
  double hi = dir * opts.initial_step;
  while ((gap(hi) > 0.0) == (g0 > 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || std::abs(hi) > 1e300) throw Error("sphere_crossing: bracket expansion diverged");
  }
  double mid = 0.5 * (lo + hi);
  for (out.iterations = 1; out.iterations <= opts.max_iterations; ++out.iterations) {
    mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (std::abs(g) <= accept || mid == lo || mid == hi) break;
    if ((g > 0.0) == (g0 > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  out.t = mid;
  out.q = flow(spec, mid, p);
  return out;
}

namespace {

double chart_gap(const ChartPoint& a, const ChartPoint& b) {
  return (a.coords - b.coords).cwiseAbs().maxCoeff() / std::max(1.0, b.coords.cwiseAbs().maxCoeff());
}

FlowCommutation commute(double t, const Eigen::MatrixXd& rep_matrix, const IndexSet& j, const RepModule& rep,
                        const Chart& chart) {
  const Pinning pin = build_pinning(rep.n);
  const FlowSpec spec = FlowSpec::from_chart(chart);
  const Eigen::MatrixXd moved = exp_tau_matrix(pin, t) * rep_matrix;
  FlowCommutation out{flag_of(moved, j), {}, {}, 0.0};
  out.group_side = chart_coords(chart, psi(rep, moved));
  out.chart_side = flow(spec, t, chart_coords(chart, psi(rep, rep_matrix)));
  out.discrepancy = chart_gap(out.group_side, out.chart_side);
  return out;
}

}  // namespace

FlowCommutation flow_on_flag(double t, const FlagPoint& flag, const RepModule& rep, const Chart& chart) {
  if (flag.n() != rep.n || flag.parabolic() != rep.parabolic())
    throw DomainError("flow_on_flag: flag and module disagree on (n, J)");
  return commute(t, flag.to_float(), flag.parabolic(), rep, chart);
}

FlowCommutation flow_on_flag(double t, const GroupElement& g, const RepModule& rep, const Chart& chart) {
  if (g.size() != rep.n) throw DomainError("flow_on_flag: group element and module disagree on n");
  return commute(t, g.to_float(), rep.parabolic(), rep, chart);
}

Convergence converge(const FlowSpec& spec, const RepModule& rep, const Chart& chart, const ChartPoint& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("converge: tol must be positive");
  const ChartPoint origin{Eigen::VectorXd::Zero(p.coords.size())};
  FlagPoint limit = line_to_flag(rep, chart_line(chart, origin));
  double T = 0.0;
  double bound = 0.0;
  if (p.norm() >= tol) {
    bound = std::log(p.norm() / tol) / spec.logC;
    T = sphere_crossing(spec, p, tol).t;
    // The crossing sits on the sphere; step just past it.
    double step = std::max(std::abs(T), 1.0) * 1e-15;
    while (flow(spec, T, p).norm() >= tol) {
      T += step;
      step *= 2.0;
    }
  }
  const ChartPoint reached = flow(spec, T, p);
  return Convergence{T, reached, line_to_flag(rep, chart_line(chart, reached)), std::move(limit), bound};
}

namespace {

bool is_sl3_complete(const RepModule& rep) { return rep.n == 3 && rep.parabolic().empty(); }

}  // namespace

bool certified_interior(const RepModule& rep, const FlagPoint& flag) {
  if (is_sl3_complete(rep)) return sl3_membership(sl3_coords_exact(flag)).kind == Membership::PositivePart;
  if (rep.is_minuscule()) {
    const RatVector line = psi_exact(rep, flag.exact());
    return std::all_of(line.begin(), line.end(), [](const Rational& x) { return sgn(x) > 0; });
  }
  throw DomainError("no certified positivity oracle for " + rep.weight.to_string() + " of SL(" +
                    std::to_string(rep.n) + ")");
}

bool interior_by_oracle(const RepModule& rep, const FlagPoint& flag, double tol, double* min_coordinate) {
  double lowest = 0.0;
  bool interior = false;
  if (is_sl3_complete(rep)) {
    const Sl3Coords c = sl3_coords(flag);
    lowest = std::min(*std::min_element(c.v.begin(), c.v.end()), *std::min_element(c.w.begin(), c.w.end()));
    interior = sl3_membership(c, tol).kind == Membership::PositivePart;
  } else if (rep.is_minuscule()) {
    const Eigen::VectorXd line = psi(rep, flag).normalized().vec;
    lowest = line.minCoeff();
    interior = lowest > tol;
  } else {
    throw DomainError("no certified positivity oracle for " + rep.weight.to_string() + " of SL(" +
                      std::to_string(rep.n) + ")");
  }
  if (min_coordinate) *min_coordinate = lowest;
  return interior;
}

FlagSampler boundary_flag_sampler(std::size_t n, const IndexSet& j) {
  const RepModule rep = build_rep(lambda_for(n, j));
  const Pinning pin = build_pinning(n);
  return [rep, pin, j](Rng& rng) {
    SamplingOptions opts;
    opts.zero_prob = 0.5;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const FactorizationParams params = random_factorization(rep.n, rng, opts);
      if (params.all_positive()) continue;
      const FlagPoint flag = flag_of(sample_positive(pin, params, Side::Group).exact(), j);
      if (!certified_interior(rep, flag)) return flag;
    }
    throw Error("boundary_flag_sampler: no boundary point found");
  };
}

InvarianceReport invariance_check(const RepModule& rep, const Chart& chart, const FlagSampler& sampler, double t,
                                  std::size_t count, Rng& rng, double tol) {
  InvarianceReport report;
  report.n = rep.n;
  report.j = rep.parabolic();
  report.t = t;
  report.tol = tol;
  report.count = count;
  report.oracle = is_sl3_complete(rep) ? "sl3-membership" : "minuscule-coordinates";
  const FlowSpec spec = FlowSpec::from_chart(chart);
  for (std::size_t s = 0; s < count; ++s) {
    const FlagPoint start = sampler(rng);
    const ChartPoint p = flow(spec, t, chart_coords(chart, psi(rep, start)));
    const FlagPoint image = line_to_flag(rep, chart_line(chart, p));
    InvarianceSample sample{s, false, 0.0, ""};
    sample.interior = interior_by_oracle(rep, image, tol, &sample.min_coordinate);
    if (sample.interior) {
      ++report.interior;
    } else {
      sample.detail = "smallest coordinate " + to_decimal_string(sample.min_coordinate);
      report.failures.push_back(std::move(sample));
    }
  }
  return report;
}

}  // namespace tnnflow
