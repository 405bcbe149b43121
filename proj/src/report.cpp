#include "tnnflow/report.hpp"

#include "tnnflow/error.hpp"

namespace tnnflow::report {

json decimal(double x) { return to_decimal_string(x); }

json decimals(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(decimal(v(i)));
  return out;
}

json decimals(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(decimals(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

json fractions(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_fraction_string(x));
  return out;
}

json fractions(const RatMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_fraction_string(m(r, c)));
    out.push_back(row);
  }
  return out;
}

namespace {

Rational entry(const json& x) {
  if (x.is_string()) return parse_fraction(x.get<std::string>());
  if (x.is_number_integer()) return Rational(x.get<long>());
  if (x.is_number()) return rational_from_double(x.get<double>());
  throw DomainError("expected a number or a fraction string");
}

}  // namespace

RatMatrix parse_fractions(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw DomainError("expected a matrix as an array of rows");
  RatMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw DomainError("ragged matrix rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = entry(rows[r][c]);
  }
  return m;
}

Eigen::VectorXd parse_decimals(const json& values) {
  if (!values.is_array()) throw DomainError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const json& x = values[i];
    v(static_cast<Eigen::Index>(i)) = x.is_string() ? std::stod(x.get<std::string>()) : x.get<double>();
  }
  return v;
}

json to_json(const Pinning& p) {
  json out{{"n", p.n}, {"tau", fractions(p.tau())}};
  for (const char* key : {"e", "f", "h"}) out[key] = json::array();
  for (std::size_t i = 0; i < p.rank(); ++i) {
    out["e"].push_back(fractions(p.e[i]));
    out["f"].push_back(fractions(p.f[i]));
    out["h"].push_back(fractions(p.h[i]));
  }
  return out;
}

json to_json(const FactorizationParams& f) {
  return json{{"word", f.word.letters}, {"t", fractions(f.t)}, {"t_lower", fractions(f.t_lower)}, {"torus", fractions(f.torus)}};
}

json to_json(const FlagPoint& f) {
  json out{{"n", f.n()}, {"J", f.parabolic()}};
  if (f.field() == Field::Rational) {
    out["field"] = "rational";
    out["canonical"] = fractions(f.exact());
  } else {
    out["field"] = "float";
    out["canonical"] = decimals(f.to_float());
  }
  return out;
}

json to_json(const RepModule& rep) {
  json out{{"n", rep.n},
           {"weight", rep.weight.to_string()},
           {"coeffs", rep.weight.coeffs},
           {"J", rep.parabolic()},
           {"dim", rep.dim},
           {"labels", rep.labels},
           {"highest_index", rep.highest_index},
           {"tensor_factors", rep.factors},
           {"minuscule", rep.is_minuscule()}};
  for (const char* key : {"E", "F", "H"}) out[key] = json::array();
  for (std::size_t i = 0; i + 1 < rep.n; ++i) {
    out["E"].push_back(fractions(rep.E[i]));
    out["F"].push_back(fractions(rep.F[i]));
    out["H"].push_back(fractions(rep.H[i]));
  }
  return out;
}

json to_json(const Chart& chart) {
  return json{{"N", chart.N},
              {"mu", decimals(chart.mu)},
              {"spectral_gap", decimal(chart.spectral_gap())},
              {"eigenvectors", decimals(chart.V)},
              {"to_ortho", decimals(chart.to_ortho)}};
}

json to_json(const FlowSpec& spec) {
  json out{{"deltas", decimals(spec.deltas)}, {"logC", decimal(spec.logC)}};
  out["radius"] = spec.radius > 0 ? decimal(spec.radius) : json(nullptr);
  return out;
}

json to_json(const AxiomReport& r) {
  json axioms = json::array();
  for (const auto& a : r.axioms) {
    json j{{"id", a.id},
           {"description", a.description},
           {"pass", a.pass},
           {"samples", a.samples},
           {"violations", a.violations},
           {"worst_margin", decimal(a.worst_margin)},
           {"witness_t", json::array()},
           {"witness_p", decimals(a.witness_p)}};
    for (double t : a.witness_t) j["witness_t"].push_back(decimal(t));
    if (a.id == "continuity") j["lipschitz_estimate"] = decimal(a.estimate);
    axioms.push_back(j);
  }
  return json{{"pass", r.pass()}, {"axioms", axioms}};
}

json to_json(const InvarianceReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back(json{{"index", f.index}, {"min_coordinate", decimal(f.min_coordinate)}, {"detail", f.detail}});
  return json{{"n", r.n},          {"J", r.j},           {"t", decimal(r.t)}, {"tol", decimal(r.tol)},
              {"oracle", r.oracle}, {"count", r.count},   {"interior", r.interior},
              {"pass", r.pass()},   {"failures", failures}};
}

json to_json(const FoldingReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    json dev = json::array();
    for (double d : f.flow_deviation) dev.push_back(decimal(d));
    failures.push_back(json{{"index", f.index}, {"exact_fixed", f.exact_fixed}, {"flow_deviation", dev}});
  }
  json times = json::array();
  for (double t : r.times) times.push_back(decimal(t));
  return json{{"n", r.n},
              {"J", r.j},
              {"symmetric", r.symmetric},
              {"times", times},
              {"tol", decimal(r.tol)},
              {"count", r.count},
              {"exact_fixed", r.exact_fixed},
              {"flow_fixed", r.flow_fixed},
              {"worst_deviation", decimal(r.worst_deviation)},
              {"pass", r.pass()},
              {"realization", r.realization},
              {"failures", failures}};
}

json to_json(const Convergence& c) {
  return json{{"T", decimal(c.T)},
              {"bound", decimal(c.bound)},
              {"reached", decimals(c.reached.coords)},
              {"reached_flag", to_json(c.reached_flag)},
              {"limit_flag", to_json(c.limit_flag)}};
}

}  // namespace tnnflow::report
