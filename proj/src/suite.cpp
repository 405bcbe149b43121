#include "tnnflow/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "tnnflow/error.hpp"
#include "tnnflow/report.hpp"

namespace tnnflow {

using nlohmann::json;
using report::decimal;

void RunConfig::validate() const {
  if (n < 2) throw DomainError("--n must be at least 2");
  for (auto i : j)
    if (i < 1 || i >= n) throw DomainError("J must be a subset of 1.." + std::to_string(n - 1));
  if (count == 0 || axiom_count == 0) throw DomainError("sample counts must be positive");
  for (double tol : {float_tol, bisect_tol, vanish_tol})
    if (!(tol > 0.0)) throw DomainError("tolerances must be positive");
  if (radius && !(*radius > 0.0)) throw DomainError("--radius must be positive");
  if (t && !std::isfinite(*t)) throw DomainError("--t must be finite");
}

json RunConfig::to_json() const {
  json out{{"n", n},
           {"J", j},
           {"seed", std::to_string(seed)},
           {"seed_source", seed_source},
           {"count", count},
           {"axiom_count", axiom_count},
           {"tol_float", decimal(float_tol)},
           {"tol_bisect", decimal(bisect_tol)},
           {"tol_vanish", decimal(vanish_tol)},
           {"positive", positive}};
  out["t"] = t ? decimal(*t) : json(nullptr);
  out["radius"] = radius ? decimal(*radius) : json(nullptr);
  return out;
}

namespace {

// Short form for human-readable summaries; JSON keeps 17 significant digits.
std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string matrix_text(const RatMatrix& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += r ? ",[" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? "," : "") + to_fraction_string(m(r, c));
    s += "]";
  }
  return s + "]";
}

struct Setup {
  RepModule rep;
  Chart chart;
  FlowSpec spec;
  Setup(std::size_t n, const IndexSet& j)
      : rep(build_rep(lambda_for(n, j))), chart(eigenchart(rep)), spec(FlowSpec::from_chart(chart)) {}
};

json check(const std::string& id, const std::string& description, bool pass, json details) {
  return json{{"id", id}, {"description", description}, {"pass", pass}, {"details", std::move(details)}};
}

FlagPoint random_tnn_flag(std::size_t n, const IndexSet& j, Rng& rng, double zero_prob) {
  SamplingOptions opts;
  opts.zero_prob = zero_prob;
  return flag_of(sample_positive(build_pinning(n), random_factorization(n, rng, opts), Side::Group).exact(), j);
}

json check_fixed_point(Rng rng) {
  const Setup s(3, {});
  const Sl3Coords target = fixed_point_coords();
  double worst = 0.0, max_t = 0.0;
  bool within_bound = true;
  for (int k = 0; k < 20; ++k) {
    const FlagPoint f = random_tnn_flag(3, {}, rng, 0.3);
    const Convergence cv = converge(s.spec, s.rep, s.chart, chart_coords(s.chart, psi(s.rep, f)), 1e-9);
    const Sl3Coords c = sl3_coords(cv.reached_flag);
    for (int i = 0; i < 3; ++i) worst = std::max({worst, std::abs(c.v[i] - target.v[i]), std::abs(c.w[i] - target.w[i])});
    max_t = std::max(max_t, cv.T);
    if (cv.T > cv.bound * (1 + 1e-12) + 1e-12) within_bound = false;
  }
  return check("fixed_point", "20 TNN SL3 flags converge (tol 1e-9) to v = w = (1, sqrt2, 1)/(2 + sqrt2) within 1e-8",
               worst <= 1e-8 && within_bound,
               json{{"worst_error", decimal(worst)}, {"max_T", decimal(max_t)}, {"T_within_analytic_bound", within_bound}});
}

json check_axioms(const RunConfig& cfg, Rng rng) {
  const Setup s(3, {});
  const AxiomReport r = verify_axioms(s.spec, default_point_sampler(s.spec.dim()), cfg.axiom_count, rng);
  json details = report::to_json(r);
  details["logC"] = decimal(s.spec.logC);
  details["logC_from_eigenchart"] = decimal(s.chart.mu(0) - s.chart.mu(1));
  return check("axioms", "continuity, semigroup law and contraction bound in the SL3 adjoint chart", r.pass(), details);
}

json check_commutation(const RunConfig& cfg, Rng rng) {
  json cases = json::array();
  bool pass = true;
  for (const auto& [n, j] : std::vector<std::pair<std::size_t, IndexSet>>{{3, {}}, {3, {2}}, {4, {2}}}) {
    const Setup s(n, j);
    double worst = 0.0;
    for (std::size_t k = 0; k < cfg.count; ++k) {
      const FlagPoint f = random_tnn_flag(n, j, rng, 0.2);
      for (double t : {0.1, 1.0}) worst = std::max(worst, flow_on_flag(t, f, s.rep, s.chart).discrepancy);
    }
    pass = pass && worst <= 1e-8;
    cases.push_back(json{{"n", n}, {"J", j}, {"worst_discrepancy", decimal(worst)}, {"samples", cfg.count}});
  }
  return check("commutation", "chart of exp(t tau) P equals the flowed chart of P within 1e-8 (t = 0.1, 1)", pass,
               json{{"cases", cases}});
}

json check_invariance(const RunConfig& cfg, Rng rng) {
  json cases = json::array();
  bool pass = true;
  const double t = cfg.t.value_or(0.1);
  for (const auto& [n, j] :
       std::vector<std::pair<std::size_t, IndexSet>>{{3, {}}, {3, {2}}, {3, {1}}, {4, {1, 3}}, {4, {2, 3}}}) {
    const Setup s(n, j);
    const FlagSampler sampler = boundary_flag_sampler(n, j);
    Rng control_rng = rng;
    const InvarianceReport r = invariance_check(s.rep, s.chart, sampler, t, cfg.count, rng, cfg.vanish_tol);
    const InvarianceReport control = invariance_check(s.rep, s.chart, sampler, 0.0, cfg.count, control_rng, cfg.vanish_tol);
    pass = pass && r.pass() && !control.pass();
    json c = report::to_json(r);
    c["control_t0_interior"] = control.interior;
    c["control_fails"] = !control.pass();
    cases.push_back(c);
  }
  return check("invariance", "boundary samples flowed for t > 0 are strictly interior; t = 0 control is not", pass,
               json{{"cases", cases}});
}

json check_crossing(const RunConfig& cfg, Rng rng) {
  const Setup s(3, {});
  const FlagSampler sampler = boundary_flag_sampler(3, {});
  std::vector<ChartPoint> points;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg.count; ++k) {
    points.push_back(chart_coords(s.chart, psi(s.rep, sampler(rng))));
    smallest = std::min(smallest, points.back().norm());
  }
  const double r = cfg.radius.value_or(1e-2 * smallest);
  CrossingOptions opts;
  opts.tol = cfg.bisect_tol;
  bool pass = true;
  double worst_radius = 0.0, worst_restart = 0.0;
  for (const auto& p : points) {
    const Crossing c = sphere_crossing(s.spec, p, r, opts);
    worst_radius = std::max(worst_radius, std::abs(c.q.norm() - r) / r);
    if (!(c.t > 0.0)) pass = false;
    CrossingOptions other = opts;
    other.initial_step = 0.37;
    worst_restart = std::max(worst_restart, std::abs(sphere_crossing(s.spec, p, r, other).t - c.t));
  }
  pass = pass && worst_radius <= cfg.bisect_tol && worst_restart <= 1e-10;
  return check("ball_crossing", "boundary trajectories meet the sphere of radius r once, at t > 0", pass,
               json{{"radius", decimal(r)},
                    {"radius_source", cfg.radius ? "config" : "1e-2 x smallest boundary chart norm"},
                    {"smallest_boundary_norm", decimal(smallest)},
                    {"worst_relative_radius_error", decimal(worst_radius)},
                    {"worst_bracket_dependence", decimal(worst_restart)}});
}

json check_exp_tau_tp() {
  const GroupElement g = rationalize_unimodular(exp_tau_matrix(build_pinning(3), 1.0));
  const Positivity p = is_tnn_matrix(g);
  Rational smallest = 0;
  bool first = true;
  for (const auto& m : all_minors(g.exact()))
    if (first || m.value < smallest) {
      smallest = m.value;
      first = false;
    }
  return check("exp_tau_positive", "rationalized exp(tau) for n = 3 is totally positive (all minors)",
               p == Positivity::TotallyPositive,
               json{{"classification", to_string(p)}, {"smallest_minor", decimal(to_double(smallest))}});
}

json check_representations() {
  json cases = json::array();
  bool pass = true;
  for (const Weight& w : {Weight{{1, 1}}, Weight{{1, 0, 1}}}) {
    const RepModule rep = build_rep(w);
    const Chart chart = eigenchart(rep);
    const std::string bad = representation_identity_failure(rep);
    const bool ok = rep.dim == weyl_dimension(w) && bad.empty() && chart.mu(0) > chart.mu(1);
    pass = pass && ok;
    cases.push_back(json{{"n", rep.n},
                         {"weight", w.to_string()},
                         {"dim", rep.dim},
                         {"weyl_dimension", weyl_dimension(w)},
                         {"identities", bad.empty() ? "ok" : bad},
                         {"mu0", decimal(chart.mu(0))},
                         {"mu1", decimal(chart.mu(1))}});
  }
  return check("representations", "module dimensions match the Weyl formula and mu_0 > mu_1", pass,
               json{{"cases", cases}});
}

// Bruhat order on S3 by the tableau criterion, counted by length difference.
std::vector<std::size_t> bruhat_f_vector() {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto length = [](const std::vector<int>& w) {
    std::size_t l = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b) l += w[a] > w[b];
    return l;
  };
  auto leq = [](const std::vector<int>& v, const std::vector<int>& w) {
    for (std::size_t k = 1; k < v.size(); ++k) {
      std::vector<int> a(v.begin(), v.begin() + static_cast<long>(k)), b(w.begin(), w.begin() + static_cast<long>(k));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t i = 0; i < k; ++i)
        if (a[i] > b[i]) return false;
    }
    return true;
  };
  std::vector<std::size_t> f(4, 0);
  for (const auto& v : perms)
    for (const auto& w : perms)
      if (leq(v, w)) ++f[length(w) - length(v)];
  return f;
}

const std::set<std::string> kFigureVertices{"12,13", "23,13", "13,12", "13,23", "12,23", "23,12"};

json check_cells(const RunConfig& cfg) {
  CensusOptions opts;
  opts.seed = cfg.seed;
  Census c = census(opts);
  face_poset(c);
  const PosetCheck pc = check_poset(c);
  std::set<std::string> vertices;
  for (const auto& cell : c.cells)
    if (auto l = cell.label.figure1_label()) vertices.insert(*l);
  const auto f = c.f_vector();
  const auto oracle = bruhat_f_vector();
  const bool pass = c.cells.size() == 19 && f == oracle && vertices == kFigureVertices && pc.pass() && c.warnings.empty();
  return check("cells", "SL3 census: 19 cells, f-vector equals Bruhat interval counts, Figure 1 vertices, Euler 2",
               pass,
               json{{"cells", c.cells.size()},
                    {"f_vector", f},
                    {"bruhat_f_vector", oracle},
                    {"vertex_labels", vertices},
                    {"relations", c.relations.size()},
                    {"euler", pc.euler},
                    {"poset_problems", pc.problems},
                    {"warnings", c.warnings}});
}

json check_folding(const RunConfig& cfg, Rng rng) {
  const Folding f = build_folding(4);
  Rng control_rng = rng.split(1);
  const FoldingReport r = fixed_locus_flow_check(f, {}, {0.1, 1.0, 5.0}, cfg.count, rng, true, cfg.float_tol);
  const FoldingReport control = fixed_locus_flow_check(f, {}, {0.1}, cfg.count, control_rng, false, cfg.float_tol);
  json details = report::to_json(r);
  details["control_exact_fixed"] = control.exact_fixed;
  details["control_fails"] = !control.pass();
  return check("folding", "sigma-fixed TNN flags (n = 4) stay sigma-fixed under exp(t tau), t = 0.1, 1, 5",
               r.pass() && !control.pass(), details);
}

std::string summary_of(const json& checks) {
  std::ostringstream s;
  for (const auto& c : checks)
    s << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["id"].get<std::string>() << ": "
      << c["description"].get<std::string>() << "\n";
  return s.str();
}

}  // namespace

CommandResult run_pinning(const RunConfig& cfg) {
  const Pinning p = build_pinning(cfg.n);
  std::ostringstream s;
  for (std::size_t i = 0; i < p.rank(); ++i) {
    s << "e" << i + 1 << " = " << matrix_text(p.e[i]) << "\n";
    s << "f" << i + 1 << " = " << matrix_text(p.f[i]) << "\n";
    s << "h" << i + 1 << " = " << matrix_text(p.h[i]) << "\n";
  }
  s << "tau = " << matrix_text(p.tau()) << "\n";
  return {json{{"command", "pinning"}, {"config", cfg.to_json()}, {"pinning", report::to_json(p)}}, s.str(), true};
}

CommandResult run_sample(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const Pinning pin = build_pinning(cfg.n);
  SamplingOptions opts;
  opts.zero_prob = cfg.positive ? 0.0 : 0.3;
  json samples = json::array();
  std::ostringstream s;
  bool pass = true;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const FactorizationParams fp = random_factorization(cfg.n, rng, opts);
    const GroupElement g = sample_positive(pin, fp, Side::Group);
    const Positivity kind = is_tnn_matrix(g);
    json minors = json::array();
    Rational smallest = 0;
    bool first = true;
    for (const auto& m : all_minors(g.exact())) {
      std::vector<std::size_t> rows(m.rows), cols(m.cols);
      for (auto& r : rows) ++r;
      for (auto& c : cols) ++c;
      minors.push_back(json{{"rows", rows}, {"cols", cols}, {"value", to_fraction_string(m.value)}});
      if (first || m.value < smallest) smallest = m.value;
      first = false;
    }
    const bool ok = cfg.positive ? kind == Positivity::TotallyPositive : kind != Positivity::Neither;
    pass = pass && ok;
    samples.push_back(json{{"params", report::to_json(fp)},
                           {"matrix", report::fractions(g.exact())},
                           {"classification", to_string(kind)},
                           {"minors", minors}});
    s << "sample " << k << ": " << to_string(kind) << " (" << minors.size()
      << " minors, smallest = " << brief(to_double(smallest)) << ")\n";
  }
  return {json{{"command", "sample"}, {"config", cfg.to_json()}, {"samples", samples}, {"pass", pass}}, s.str(), pass};
}

CommandResult run_embed(const RunConfig& cfg) {
  const Setup s(cfg.n, cfg.j);
  std::ostringstream out;
  out << "lambda = " << s.rep.weight.to_string() << "\n";
  out << "dim=" << s.rep.dim << "\n";
  out << "weyl dimension=" << weyl_dimension(s.rep.weight) << "\n";
  out << "eigenvalues:";
  for (Eigen::Index k = 0; k < s.chart.mu.size(); ++k) out << " " << brief(s.chart.mu(k));
  out << "\nspectral gap mu0 - mu1 = " << brief(s.chart.spectral_gap()) << "\n";
  out << "logC = " << brief(s.spec.logC) << "\n";
  return {json{{"command", "embed"},
               {"config", cfg.to_json()},
               {"module", report::to_json(s.rep)},
               {"chart", report::to_json(s.chart)},
               {"flow", report::to_json(s.spec)}},
          out.str(), true};
}

CommandResult run_flow(const RunConfig& cfg, const json& input) {
  RunConfig eff = cfg;
  if (input.contains("n")) eff.n = input.at("n").get<std::size_t>();
  if (input.contains("J")) {
    const json& jj = input.at("J");
    eff.j = jj.is_string() ? parse_index_set(jj.get<std::string>(), eff.n) : jj.get<IndexSet>();
  }
  eff.validate();
  const double t = eff.t.value_or(1.0);
  const Setup s(eff.n, eff.j);
  json out{{"command", "flow"}, {"config", eff.to_json()}, {"t", decimal(t)}};
  std::ostringstream text;
  if (input.contains("chart_point")) {
    const ChartPoint p{report::parse_decimals(input.at("chart_point"))};
    if (static_cast<std::size_t>(p.coords.size()) != s.chart.N)
      throw DomainError("chart point has " + std::to_string(p.coords.size()) + " coordinates, expected " +
                        std::to_string(s.chart.N));
    const ChartPoint q = flow(s.spec, t, p);
    out["input"] = "chart_point";
    out["chart_point"] = report::decimals(q.coords);
    out["overflow"] = q.overflow;
    if (!q.overflow) out["flag"] = report::to_json(line_to_flag(s.rep, chart_line(s.chart, q)));
    text << "flowed norm " << brief(p.norm()) << " -> " << brief(q.norm()) << "\n";
  } else if (input.contains("matrix")) {
    const RatMatrix m = report::parse_fractions(input.at("matrix"));
    if (m.rows() != eff.n || m.cols() != eff.n) throw DomainError("matrix must be n x n");
    const FlagPoint f = flag_of(m, eff.j);
    const FlowCommutation c = flow_on_flag(t, f, s.rep, s.chart);
    out["input"] = "matrix";
    out["flag"] = report::to_json(c.flowed);
    out["chart_point"] = report::decimals(c.chart_side.coords);
    out["group_side"] = report::decimals(c.group_side.coords);
    out["discrepancy"] = decimal(c.discrepancy);
    text << "chart norm after flow " << brief(c.chart_side.norm()) << ", path discrepancy "
         << brief(c.discrepancy) << "\n";
  } else {
    throw DomainError("flow input needs a \"chart_point\" or a \"matrix\" entry");
  }
  return {out, text.str(), true};
}

CommandResult run_verify(const RunConfig& cfg) {
  const Rng master(cfg.seed);
  json checks = json::array();
  checks.push_back(check_fixed_point(master.split(0)));
  checks.push_back(check_axioms(cfg, master.split(1)));
  checks.push_back(check_commutation(cfg, master.split(2)));
  checks.push_back(check_invariance(cfg, master.split(3)));
  checks.push_back(check_crossing(cfg, master.split(4)));
  checks.push_back(check_exp_tau_tp());
  checks.push_back(check_representations());
  checks.push_back(check_cells(cfg));
  checks.push_back(check_folding(cfg, master.split(5)));
  const bool pass = std::all_of(checks.begin(), checks.end(), [](const json& c) { return c["pass"].get<bool>(); });
  return {json{{"command", "verify"}, {"config", cfg.to_json()}, {"checks", checks}, {"pass", pass}}, summary_of(checks),
          pass};
}

CommandResult run_cells(const RunConfig& cfg) {
  if (cfg.n != 3) throw DomainError("the cell census is implemented for SL3 complete flags only (--n 3)");
  CensusOptions opts;
  opts.seed = cfg.seed;
  Census c = census(opts);
  face_poset(c);
  const PosetCheck pc = check_poset(c);
  const auto f = c.f_vector();
  std::ostringstream s;
  s << c.cells.size() << " cells: f = (" << f[0] << ", " << f[1] << ", " << f[2] << ", " << f[3] << ")\n";
  for (const auto& p : pc.problems) s << "poset: " << p << "\n";
  for (const auto& w : c.warnings) s << "warning: " << w << "\n";
  json doc = json::parse(figure_export(c, FigureFormat::Json));
  doc["command"] = "cells";
  doc["config"] = cfg.to_json();
  doc["poset_check"] = json{{"pass", pc.pass()}, {"euler", pc.euler}, {"problems", pc.problems}};
  return {doc, s.str(), pc.pass() && c.warnings.empty()};
}

CommandResult run_fold(const RunConfig& cfg) {
  const Folding f = build_folding(cfg.n);
  Rng rng(cfg.seed);
  const std::vector<double> times = cfg.t ? std::vector<double>{*cfg.t} : std::vector<double>{0.1, 1.0, 5.0};
  const FoldingReport r = fixed_locus_flow_check(f, cfg.j, times, cfg.count, rng, true, cfg.float_tol);
  std::ostringstream s;
  s << "n=" << r.n << " J={" << format_index_set(r.j) << "}: " << r.exact_fixed << "/" << r.count
    << " exactly sigma-fixed";
  for (std::size_t k = 0; k < times.size(); ++k)
    s << ", t=" << brief(times[k]) << ": " << r.flow_fixed[k] << "/" << r.count;
  s << "; worst deviation " << brief(r.worst_deviation) << "\n";
  return {json{{"command", "fold"}, {"config", cfg.to_json()}, {"report", report::to_json(r)}}, s.str(), r.pass()};
}

std::string run_figure(const RunConfig& cfg) {
  CensusOptions opts;
  opts.seed = cfg.seed;
  Census c = census(opts);
  face_poset(c);
  const std::string fmt = cfg.format == "text" ? "svg" : cfg.format;
  return figure_export(c, parse_figure_format(fmt));
}

}  // namespace tnnflow
