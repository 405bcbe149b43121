#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tnnflow/error.hpp"
#include "tnnflow/flow.hpp"

using namespace tnnflow;

namespace {

const double kFixedOuter = 1.0 / (2.0 + std::sqrt(2.0));
const double kFixedMiddle = std::sqrt(2.0) / (2.0 + std::sqrt(2.0));

FlowSpec one_dim(double delta) {
  Eigen::VectorXd d(1);
  d << delta;
  return FlowSpec::from_deltas(d);
}

ChartPoint point(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return ChartPoint{v};
}

struct Setup {
  RepModule rep;
  Chart chart;
  FlowSpec spec;
  explicit Setup(std::size_t n, const IndexSet& j)
      : rep(build_rep(lambda_for(n, j))), chart(eigenchart(rep)), spec(FlowSpec::from_chart(chart)) {}
};

}  // namespace

TEST_CASE("flow formula") {
  const FlowSpec s = one_dim(-1.0);
  CHECK(flow(s, 2.0, point({3.0})).coords(0) == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-15));
  const Setup adj(3, {});
  Rng rng(1);
  const ChartPoint p = default_point_sampler(adj.spec.dim())(rng);
  CHECK(flow(adj.spec, 0.0, p).coords == p.coords);
  const ChartPoint zero{Eigen::VectorXd::Zero(7)};
  CHECK(flow(adj.spec, 3.0, zero).norm() == 0.0);
  CHECK(flow(adj.spec, -2.0, zero).norm() == 0.0);
  CHECK(flow(adj.spec, -1e4, point({1, 1, 1, 1, 1, 1, 1})).overflow);
  CHECK_FALSE(flow(adj.spec, -1.0, point({1, 1, 1, 1, 1, 1, 1})).overflow);
}

TEST_CASE("flow spec from the SL3 adjoint chart") {
  const Setup adj(3, {});
  CHECK(adj.spec.dim() == 7);
  // Top eigenvalues of tau on the adjoint module are 2 sqrt2 and sqrt2.
  CHECK(adj.spec.logC == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(adj.spec.logC == doctest::Approx(adj.chart.mu(0) - adj.chart.mu(1)).epsilon(1e-15));
  for (Eigen::Index k = 0; k < 7; ++k) CHECK(adj.spec.deltas(k) < 0.0);
  CHECK_THROWS_AS(one_dim(0.0), DomainError);
  CHECK_THROWS_AS(one_dim(0.5), DomainError);
}

TEST_CASE("axioms hold on the SL3 adjoint chart") {
  const Setup adj(3, {});
  Rng rng(2024);
  const AxiomReport r = verify_axioms(adj.spec, default_point_sampler(7), 1000, rng);
  REQUIRE(r.axioms.size() == 3);
  for (const auto& a : r.axioms) {
    CAPTURE(a.id);
    CHECK(a.pass);
    CHECK(a.samples == 1000);
    CHECK(a.violations == 0);
    CHECK(a.worst_margin >= 0.0);
  }
  CHECK(r.pass());
  CHECK(r.axioms[0].estimate > 0.0);
}

TEST_CASE("a neutral direction breaks contraction") {
  FlowSpec s;
  s.deltas = Eigen::Vector3d(-1.0, 0.0, -2.0);
  s.logC = 0.0;
  Rng rng(5);
  // Points on the neutral axis keep their norm.
  const PointSampler axis = [](Rng& g) { return point({0.0, 1.0 + g.uniform(), 0.0}); };
  const AxiomReport r = verify_axioms(s, axis, 50, rng);
  CHECK(r.axioms[1].pass);
  CHECK_FALSE(r.axioms[2].pass);
  CHECK(r.axioms[2].violations == 50);
  REQUIRE(r.axioms[2].witness_t.size() == 1);
  CHECK(r.axioms[2].witness_t[0] > 0.0);
  CHECK(r.axioms[2].witness_p.norm() > 0.0);
  CHECK_FALSE(r.pass());
}

TEST_CASE("semigroup at zero times is exact") {
  const Setup adj(3, {});
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const ChartPoint p = default_point_sampler(7)(rng);
    CHECK(flow(adj.spec, 0.0, flow(adj.spec, 0.0, p)).coords == p.coords);
  }
}

TEST_CASE("sphere crossing") {
  const FlowSpec s = one_dim(-1.0);
  const Crossing c = sphere_crossing(s, point({1.0}), std::exp(-2.0));
  CHECK(c.t == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(std::abs(c.q.norm() - std::exp(-2.0)) <= 1e-12 * std::exp(-2.0));

  // Inside the sphere the crossing lies in the past.
  const Crossing back = sphere_crossing(s, point({0.5}), 4.0);
  CHECK(back.t == doctest::Approx(-std::log(8.0)).epsilon(1e-11));

  const Setup adj(3, {});
  Rng rng(31);
  for (int k = 0; k < 50; ++k) {
    const ChartPoint p = default_point_sampler(7)(rng);
    const double r = std::exp(rng.uniform(-8.0, 3.0));
    const Crossing a = sphere_crossing(adj.spec, p, r);
    CHECK(std::abs(a.q.norm() - r) <= 1e-12 * r);
    CHECK(std::abs(sphere_crossing(adj.spec, a.q, r).t) <= 1e-10);
    CHECK(sphere_crossing(adj.spec, p, p.norm()).t == 0.0);
    for (double step : {0.01, 0.3, 7.0}) {
      CrossingOptions opts;
      opts.initial_step = step;
      CHECK(sphere_crossing(adj.spec, p, r, opts).t == doctest::Approx(a.t).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(sphere_crossing(adj.spec, ChartPoint{Eigen::VectorXd::Zero(7)}, 1.0), DomainError);
  CHECK_THROWS_AS(sphere_crossing(adj.spec, point({1, 0, 0, 0, 0, 0, 0}), 0.0), DomainError);
}

TEST_CASE("norm along a trajectory is strictly decreasing") {
  const Setup adj(3, {});
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const ChartPoint p = default_point_sampler(7)(rng);
    double prev = flow(adj.spec, -3.0, p).norm();
    for (double t = -2.9; t <= 5.0; t += 0.1) {
      const double now = flow(adj.spec, t, p).norm();
      CHECK(now < prev);
      prev = now;
    }
  }
}

TEST_CASE("flow commutes with the group action") {
  const Setup adj(3, {});
  const Pinning pin = build_pinning(3);
  FactorizationParams fp;
  fp.word = standard_word_w0(3);
  fp.t = {1, 1, 1};
  const GroupElement g = sample_positive(pin, fp, Side::Lower);
  const FlowCommutation c = flow_on_flag(1.0, g, adj.rep, adj.chart);
  CHECK(c.discrepancy < 1e-8);

  // Independent group side: series exponential instead of the spectral one.
  const Eigen::MatrixXd moved = oracle::expm_series(pin.tau().to_double()) * g.to_float();
  const ChartPoint ref = chart_coords(adj.chart, psi(adj.rep, moved));
  CHECK((ref.coords - c.chart_side.coords).cwiseAbs().maxCoeff() < 1e-8);

  const FlowCommutation zero = flow_on_flag(0.0, flag_of(g, {}), adj.rep, adj.chart);
  CHECK(zero.discrepancy < 1e-12);
  CHECK(flag_distance(zero.flowed, flag_of(g, {})) < 1e-12);

  CHECK_THROWS_AS(flow_on_flag(1.0, flag_of(g, {2}), adj.rep, adj.chart), DomainError);
}

TEST_CASE("commutation on random TNN flags") {
  Rng rng(100);
  for (auto [n, j] : {std::pair<std::size_t, IndexSet>{3, {}}, {3, {2}}, {3, {1}}, {4, {2}}, {4, {}}, {4, {1, 3}}}) {
    const Setup s(n, j);
    const Pinning pin = build_pinning(n);
    SamplingOptions opts;
    opts.zero_prob = 0.2;
    for (int k = 0; k < 20; ++k) {
      const FlagPoint f = flag_of(sample_positive(pin, random_factorization(n, rng, opts), Side::Group).exact(), j);
      for (double t : {0.1, 1.0}) CHECK(flow_on_flag(t, f, s.rep, s.chart).discrepancy < 1e-8);
    }
  }
}

TEST_CASE("projective plane: boundary points move inside") {
  const Setup p2(3, {2});
  const Pinning pin = build_pinning(3);
  // v = (1,0,0): the identity flag.
  const FlagPoint e1 = flag_of(RatMatrix::identity(3), {2});
  const FlowCommutation c = flow_on_flag(0.5, e1, p2.rep, p2.chart);
  const Eigen::VectorXd line = chart_line(p2.chart, c.chart_side).vec;
  CHECK(line.minCoeff() > 0.0);
  // Closed form of the first column of exp(t tau) for n = 3.
  const double r2 = std::sqrt(2.0);
  const double ch = std::cosh(r2 * 0.5), sh = std::sinh(r2 * 0.5);
  Eigen::Vector3d col((ch + 1) / 2, sh / r2, (ch - 1) / 2);
  col.normalize();
  CHECK((line - col).cwiseAbs().maxCoeff() < 1e-10);

  // v = (0,0,1), t = 1: third column of exp(tau).
  RatMatrix swap(3, 3);
  swap(2, 0) = 1;
  swap(1, 1) = -1;
  swap(0, 2) = 1;
  const FlagPoint e3 = flag_of(swap, {2});
  const Eigen::VectorXd moved = exp_tau_matrix(pin, 1.0) * e3.to_float().col(0);
  CHECK(moved.minCoeff() > 0.0);
  const FlowCommutation c3 = flow_on_flag(1.0, e3, p2.rep, p2.chart);
  CHECK(chart_line(p2.chart, c3.chart_side).vec.minCoeff() > 0.0);
  CHECK(c3.discrepancy < 1e-8);
}

TEST_CASE("convergence to the fixed point") {
  const Setup adj(3, {});
  const Pinning pin = build_pinning(3);
  Rng rng(11);
  SamplingOptions opts;
  opts.zero_prob = 0.3;
  for (int k = 0; k < 20; ++k) {
    const FlagPoint f = flag_of(sample_positive(pin, random_factorization(3, rng, opts), Side::Group).exact(), {});
    const ChartPoint p = chart_coords(adj.chart, psi(adj.rep, f));
    const Convergence cv = converge(adj.spec, adj.rep, adj.chart, p, 1e-9);
    CHECK(cv.reached.norm() < 1e-9);
    CHECK(cv.T <= cv.bound * (1 + 1e-12) + 1e-12);
    for (const FlagPoint* g : {&cv.reached_flag, &cv.limit_flag}) {
      const Sl3Coords c = sl3_coords(*g);
      for (int i : {0, 2}) {
        CHECK(std::abs(c.v[i] - kFixedOuter) < 1e-8);
        CHECK(std::abs(c.w[i] - kFixedOuter) < 1e-8);
      }
      CHECK(std::abs(c.v[1] - kFixedMiddle) < 1e-8);
      CHECK(std::abs(c.w[1] - kFixedMiddle) < 1e-8);
    }
  }
  const Convergence still = converge(adj.spec, adj.rep, adj.chart, ChartPoint{Eigen::VectorXd::Zero(7)}, 1e-9);
  CHECK(still.T == 0.0);

  // Analytic bound for arbitrary chart points of norm at most 10.
  for (int k = 0; k < 100; ++k) {
    const ChartPoint p = default_point_sampler(7)(rng);
    const double T = converge(adj.spec, adj.rep, adj.chart, p, 1e-9).T;
    CHECK(T <= std::log(10.0 / 1e-9) / adj.spec.logC);
  }
}

TEST_CASE("fixed point equals the top eigenline of tau") {
  // The Perron vector of tau on C^3 is (1, sqrt2, 1) / 2; the fixed flag is its span and
  // the plane orthogonal to its image under the sign flip.
  const Pinning pin = build_pinning(3);
  const Eigen::MatrixXd t = pin.tau().to_double();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const Eigen::Vector3d top = es.eigenvectors().col(2);
  const double s = top.sum();
  CHECK(top(0) / s == doctest::Approx(kFixedOuter).epsilon(1e-12));
  CHECK(top(1) / s == doctest::Approx(kFixedMiddle).epsilon(1e-12));
}

TEST_CASE("invariance: boundary samples flow into the positive part") {
  for (auto [n, j] : {std::pair<std::size_t, IndexSet>{3, {}}, {3, {2}}, {3, {1}}, {4, {1, 3}}, {4, {2, 3}}}) {
    CAPTURE(n);
    CAPTURE(format_index_set(j));
    const Setup s(n, j);
    Rng rng(600 + n);
    const FlagSampler sampler = boundary_flag_sampler(n, j);
    const InvarianceReport r = invariance_check(s.rep, s.chart, sampler, 0.1, 40, rng);
    CHECK(r.pass());
    CHECK(r.interior == 40);
    Rng again(600 + n);
    const InvarianceReport control = invariance_check(s.rep, s.chart, sampler, 0.0, 40, again);
    CHECK(control.interior == 0);
    CHECK(control.failures.size() == 40);
    CHECK_FALSE(control.pass());
  }
}

TEST_CASE("boundary sampler stays on the boundary of the nonnegative part") {
  Rng rng(8);
  const RepModule rep = build_rep(lambda_for(3, {}));
  const FlagSampler sampler = boundary_flag_sampler(3, {});
  for (int k = 0; k < 50; ++k) {
    const FlagPoint f = sampler(rng);
    CHECK(sl3_membership(sl3_coords_exact(f)).kind == Membership::NonnegativeBoundary);
    CHECK_FALSE(certified_interior(rep, f));
  }
  CHECK_THROWS_AS(certified_interior(build_rep(lambda_for(4, {2})), flag_of(RatMatrix::identity(4), {2})),
                  DomainError);
}
