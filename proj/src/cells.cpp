#include "tnnflow/cells.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "tnnflow/chevalley.hpp"
#include "tnnflow/error.hpp"
#include "tnnflow/rng.hpp"

namespace tnnflow {

namespace {

constexpr std::array<const char*, 6> kCoordNames{"v1", "v2", "v3", "w1", "w2", "w3"};
constexpr std::array<int, 3> kSign{1, -1, 1};

template <class S>
std::uint8_t zero_bits(const Sl3CoordsT<S>& c, const std::function<bool(const S&)>& is_zero) {
  std::uint8_t z = 0;
  for (int i = 0; i < 3; ++i) {
    if (is_zero(c.v[i])) z |= static_cast<std::uint8_t>(1u << i);
    if (is_zero(c.w[i])) z |= static_cast<std::uint8_t>(1u << (i + 3));
  }
  return z;
}

// Jacobian of (sum v - 1, sum w - 1, v1 w1 - v2 w2 + v3 w3) in the nonzero coordinates.
template <class S>
std::vector<std::vector<S>> support_jacobian(const Sl3CoordsT<S>& c, std::uint8_t zeros) {
  std::vector<std::vector<S>> rows(3);
  for (int k = 0; k < 6; ++k) {
    if (zeros & (1u << k)) continue;
    const int i = k % 3;
    const bool is_v = k < 3;
    rows[0].push_back(S(is_v ? 1 : 0));
    rows[1].push_back(S(is_v ? 0 : 1));
    rows[2].push_back(S(kSign[i]) * (is_v ? c.w[i] : c.v[i]));
  }
  return rows;
}

}  // namespace

std::string format_zero_set(std::uint8_t zeros) {
  std::string out = "{";
  bool first = true;
  for (int k = 0; k < 6; ++k)
    if (zeros & (1u << k)) {
      if (!first) out += ",";
      out += kCoordNames[k];
      first = false;
    }
  return out + "}";
}

std::uint8_t parse_zero_set(const std::string& text) {
  std::string body = text;
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
  std::uint8_t z = 0;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto it = std::find(kCoordNames.begin(), kCoordNames.end(), tok);
    if (it == kCoordNames.end()) throw DomainError("unknown coordinate '" + tok + "'");
    z |= static_cast<std::uint8_t>(1u << (it - kCoordNames.begin()));
  }
  return z;
}

std::string CellLabel::to_string() const { return format_zero_set(zeros); }

std::optional<std::string> CellLabel::figure1_label() const {
  if (dim != 0 || std::popcount(static_cast<unsigned>(zeros & 7u)) != 2 || std::popcount(static_cast<unsigned>(zeros >> 3)) != 2)
    return std::nullopt;
  std::string out;
  for (int k = 0; k < 6; ++k) {
    if (k == 3) out += ",";
    if (zeros & (1u << k)) out += static_cast<char>('1' + k % 3);
  }
  return out;
}

CellLabel label_of(const ExactSl3Coords& c) {
  const MembershipResult m = sl3_membership(c);
  if (m.kind == Membership::Outside) throw DomainError("label_of: point is outside the nonnegative part (" + m.diagnostic + ")");
  const std::uint8_t z = zero_bits<Rational>(c, [](const Rational& x) { return sgn(x) == 0; });
  const auto rows = support_jacobian(c, z);
  RatMatrix jac(3, rows[0].size());
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k) jac(r, k) = rows[r][k];
  const auto free = static_cast<int>(rows[0].size());
  return CellLabel{z, free - static_cast<int>(rank(jac))};
}

CellLabel label_of(const Sl3Coords& c, double tol) {
  const MembershipResult m = sl3_membership(c, tol);
  if (m.kind == Membership::Outside) throw DomainError("label_of: point is outside the nonnegative part (" + m.diagnostic + ")");
  const std::uint8_t z = zero_bits<double>(c, [tol](const double& x) { return std::abs(x) <= tol; });
  const auto rows = support_jacobian(c, z);
  Eigen::MatrixXd jac(3, static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k) jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][k];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  svd.setThreshold(tol);
  return CellLabel{z, static_cast<int>(rows[0].size()) - static_cast<int>(svd.rank())};
}

std::vector<std::size_t> Census::f_vector() const {
  std::vector<std::size_t> f(4, 0);
  for (const auto& c : cells)
    if (c.label.dim >= 0 && c.label.dim <= 3) ++f[static_cast<std::size_t>(c.label.dim)];
  return f;
}

std::optional<std::size_t> Census::find(std::uint8_t zeros) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].label.zeros == zeros) return i;
  return std::nullopt;
}

namespace {

// Signed simple reflection: e_i -> e_{i+1}, e_{i+1} -> -e_i.
RatMatrix sdot(std::size_t i) {
  RatMatrix m = RatMatrix::identity(3);
  m(i - 1, i - 1) = 0;
  m(i, i) = 0;
  m(i - 1, i) = -1;
  m(i, i - 1) = 1;
  return m;
}

// Rotation-like block [[r0, -r1], [r1, r0]] on coordinates j, j+1 (homogeneous in (r0 : r1)).
RatMatrix rotor(std::size_t j, const Rational& r0, const Rational& r1) {
  RatMatrix m = RatMatrix::identity(3);
  m(j - 1, j - 1) = r0;
  m(j, j) = r0;
  m(j - 1, j) = -r1;
  m(j, j - 1) = r1;
  return m;
}

// Permutations of S3 as reduced words in the signed reflections.
const std::vector<std::vector<std::size_t>> kPermWords{{}, {1}, {2}, {1, 2}, {2, 1}, {1, 2, 1}};

std::string word_name(const std::vector<std::size_t>& w) {
  if (w.empty()) return "e";
  std::string s;
  for (auto i : w) s += "s" + std::to_string(i);
  return s;
}

struct Recipe {
  // y-word(t) x-word(s) applied to a base point: a permutation w, or an anchor s_i R_j(r0 : r1).
  // params = (t1, t2, t3, s1, s2, s3, r0, r1).
  std::size_t perm = 0;
  bool anchor = false;
  std::size_t anchor_i = 0;
  std::array<Rational, 8> params;

  RatMatrix matrix() const {
    static const Pinning pin = build_pinning(3);
    static const std::vector<std::size_t> word{1, 2, 1};
    RatMatrix g = RatMatrix::identity(3);
    for (std::size_t k = 0; k < 3; ++k) g = g * one_param(pin, OneParamKind::Y, word[k], params[k]).exact();
    for (std::size_t k = 0; k < 3; ++k) g = g * one_param(pin, OneParamKind::X, word[k], params[3 + k]).exact();
    if (anchor) return g * sdot(anchor_i) * rotor(3 - anchor_i, params[6], params[7]);
    for (auto i : kPermWords[perm]) g = g * sdot(i);
    return g;
  }

  std::size_t arity() const { return anchor ? 8 : 6; }

  std::string describe() const {
    std::string s = "y(";
    for (std::size_t k = 0; k < 3; ++k) s += (k ? "," : "") + to_fraction_string(params[k]);
    s += ") x(";
    for (std::size_t k = 3; k < 6; ++k) s += (k > 3 ? "," : "") + to_fraction_string(params[k]);
    s += ") ";
    if (anchor)
      s += "s" + std::to_string(anchor_i) + " R" + std::to_string(3 - anchor_i) + "(" + to_fraction_string(params[6]) +
           ":" + to_fraction_string(params[7]) + ")";
    else
      s += word_name(kPermWords[perm]);
    return s;
  }
};

ExactSl3Coords coords_of(const Recipe& r) { return sl3_coords_exact(flag_of(r.matrix(), {})); }

double coord_distance(const ExactSl3Coords& a, const ExactSl3Coords& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i) {
    d = std::max(d, std::abs(to_double(a.v[i] - b.v[i])));
    d = std::max(d, std::abs(to_double(a.w[i] - b.w[i])));
  }
  return d;
}

// Bases: the six permutations, then for each anchor the shapes (1:0), (1:r), (0:1).
struct Base {
  bool anchor;
  std::size_t index;
  int shape;
};

std::vector<Base> bases(const CensusOptions& opts) {
  std::vector<Base> out;
  for (std::size_t p = 0; p < kPermWords.size(); ++p) out.push_back(Base{false, p, 0});
  if (opts.anchors && !opts.positive_only)
    for (std::size_t i : {1, 2})
      for (int shape = 0; shape < 3; ++shape) out.push_back(Base{true, i, shape});
  return out;
}

std::vector<Recipe> recipes(const CensusOptions& opts, std::size_t& total, std::size_t& sampled) {
  Rng rng(opts.seed);
  std::vector<Recipe> out;
  const std::vector<Base> bs = bases(opts);
  total = (kPermWords.size() + (opts.anchors ? 6 : 0)) * 64;
  sampled = 0;
  for (const Base& b : bs)
    for (unsigned pattern = 0; pattern < 64; ++pattern) {
      if (opts.positive_only && pattern != 63) continue;
      ++sampled;
      for (std::size_t d = 0; d < opts.draws; ++d) {
        Recipe r;
        r.anchor = b.anchor;
        if (b.anchor)
          r.anchor_i = b.index;
        else
          r.perm = b.index;
        for (std::size_t k = 0; k < 6; ++k)
          r.params[k] = (pattern & (1u << k)) ? rational_round(rng.log_uniform(-2.0, 2.0), 10) : Rational(0);
        if (b.anchor) {
          r.params[6] = b.shape == 2 ? Rational(0) : Rational(1);
          r.params[7] = b.shape == 0 ? Rational(0)
                        : b.shape == 1 ? rational_round(rng.log_uniform(-2.0, 2.0), 10)
                                       : Rational(1);
        }
        out.push_back(r);
      }
    }
  return out;
}

}  // namespace

Census census(const CensusOptions& opts) {
  if (opts.draws == 0) throw DomainError("census: at least one draw per pattern is required");
  Census out;
  out.options = opts;
  std::map<std::uint8_t, CellWitness> found;
  std::map<std::uint8_t, std::set<int>> dims;
  for (const Recipe& r : recipes(opts, out.patterns_total, out.patterns_sampled)) {
    ++out.samples;
    const ExactSl3Coords c = coords_of(r);
    if (sl3_membership(c).kind == Membership::Outside) {
      out.warnings.push_back("sample outside the nonnegative part: " + r.describe());
      continue;
    }
    const CellLabel label = label_of(c);
    dims[label.zeros].insert(label.dim);
    found.try_emplace(label.zeros, CellWitness{label, c, r.describe()});
  }
  for (auto& [z, w] : found) {
    if (dims[z].size() > 1) out.warnings.push_back("inconsistent dimension estimates for " + format_zero_set(z));
    out.cells.push_back(w);
  }
  std::sort(out.cells.begin(), out.cells.end(), [](const CellWitness& a, const CellWitness& b) {
    return std::pair(a.label.dim, a.label.zeros) < std::pair(b.label.dim, b.label.zeros);
  });
  if (out.patterns_sampled < out.patterns_total)
    out.warnings.push_back("undersampled: " + std::to_string(out.patterns_sampled) + " of " +
                           std::to_string(out.patterns_total) + " parameter patterns");
  return out;
}

void face_poset(Census& c) {
  const std::size_t m = c.cells.size();
  std::vector<std::vector<bool>> seen(m, std::vector<bool>(m, false));
  const Rational eps(1, 1L << 30);

  std::size_t total = 0, sampled = 0;
  CensusOptions opts = c.options;
  opts.draws = 1;
  for (const Recipe& r : recipes(opts, total, sampled)) {
    std::vector<std::size_t> live;
    for (std::size_t k = 0; k < r.arity(); ++k)
      if (sgn(r.params[k]) != 0) live.push_back(k);
    const std::size_t subsets = std::size_t{1} << live.size();
    for (std::size_t s = 1; s < subsets; ++s) {
      // (r0 : r1) is homogeneous, so both may not shrink together.
      Recipe near = r, limit = r;
      for (std::size_t b = 0; b < live.size(); ++b)
        if (s & (std::size_t{1} << b)) {
          near.params[live[b]] *= eps;
          limit.params[live[b]] = 0;
        }
      if (r.anchor && sgn(limit.params[6]) == 0 && sgn(limit.params[7]) == 0) continue;
      const ExactSl3Coords cn = coords_of(near), cl = coords_of(limit);
      if (sl3_membership(cn).kind == Membership::Outside || sl3_membership(cl).kind == Membership::Outside) continue;
      const auto up = c.find(label_of(cn).zeros), low = c.find(label_of(cl).zeros);
      if (!up || !low || *up == *low) continue;
      if (coord_distance(cn, cl) > 1e-6) {
        c.warnings.push_back("limit did not converge: " + r.describe());
        continue;
      }
      seen[*low][*up] = true;
    }
  }
  // Transitive closure of the observed limits.
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (seen[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (seen[k][j]) seen[i][j] = true;

  c.relations.clear();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const auto za = c.cells[a].label.zeros, zb = c.cells[b].label.zeros;
      const bool contains = a != b && (za & zb) == zb;
      if (contains) c.relations.push_back(CellRelation{a, b, seen[a][b]});
      else if (seen[a][b])
        c.warnings.push_back("limit " + format_zero_set(za) + " -> " + format_zero_set(zb) + " contradicts containment");
    }
}

PosetCheck check_poset(const Census& c) {
  PosetCheck out;
  const std::size_t m = c.cells.size();
  std::vector<std::vector<bool>> below(m, std::vector<bool>(m, false));
  for (const auto& r : c.relations) {
    below[r.lower][r.upper] = true;
    if (!r.verified) {
      out.all_verified = false;
      out.problems.push_back("unverified relation " + c.cells[r.lower].label.to_string() + " < " +
                             c.cells[r.upper].label.to_string());
    }
    if (c.cells[r.lower].label.dim >= c.cells[r.upper].label.dim) {
      out.graded = false;
      out.problems.push_back("relation does not raise dimension: " + c.cells[r.lower].label.to_string());
    }
  }
  auto dim = [&](std::size_t i) { return c.cells[i].label.dim; };
  // Maximal chains: every cover relation raises dimension by exactly one, and minimal/maximal
  // elements sit in dimensions 0 and 3.
  for (std::size_t a = 0; a < m; ++a) {
    bool has_lower = false, has_upper = false;
    for (std::size_t b = 0; b < m; ++b) {
      if (below[b][a]) has_lower = true;
      if (below[a][b]) has_upper = true;
      if (!below[a][b]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < m; ++k)
        if (below[a][k] && below[k][b]) cover = false;
      if (cover && dim(b) != dim(a) + 1) out.chains_length_3 = false;
    }
    if ((!has_lower && dim(a) != 0) || (!has_upper && dim(a) != 3)) out.chains_length_3 = false;
  }
  if (!out.chains_length_3) out.problems.push_back("a maximal chain does not have length 3");

  long vertices = 0, edges = 0, faces = 0;
  for (std::size_t a = 0; a < m; ++a) {
    if (dim(a) == 0) ++vertices;
    if (dim(a) == 1) {
      ++edges;
      long v = 0;
      for (std::size_t b = 0; b < m; ++b)
        if (below[b][a] && dim(b) == 0) ++v;
      if (v != 2) {
        out.edges_have_two_vertices = false;
        out.problems.push_back("edge " + c.cells[a].label.to_string() + " has " + std::to_string(v) + " vertices");
      }
    }
    if (dim(a) == 2) {
      ++faces;
      // Boundary must be a single cycle: every boundary vertex in exactly two boundary edges,
      // and the boundary graph connected.
      std::vector<std::size_t> bv, be;
      for (std::size_t b = 0; b < m; ++b)
        if (below[b][a]) (dim(b) == 0 ? bv : be).push_back(b);
      bool ok = !bv.empty() && bv.size() == be.size();
      for (auto v : bv) {
        long deg = 0;
        for (auto e : be)
          if (below[v][e]) ++deg;
        if (deg != 2) ok = false;
      }
      if (ok) {
        std::set<std::size_t> reached{bv.front()};
        for (bool grew = true; grew;) {
          grew = false;
          for (auto e : be) {
            std::vector<std::size_t> ends;
            for (auto v : bv)
              if (below[v][e]) ends.push_back(v);
            if (ends.size() == 2 && (reached.count(ends[0]) != reached.count(ends[1]))) {
              reached.insert(ends.begin(), ends.end());
              grew = true;
            }
          }
        }
        ok = reached.size() == bv.size();
      }
      if (!ok) {
        out.faces_are_cycles = false;
        out.problems.push_back("boundary of " + c.cells[a].label.to_string() + " is not a cycle");
      }
    }
  }
  out.euler = vertices - edges + faces;
  if (out.euler != 2) out.problems.push_back("boundary Euler characteristic " + std::to_string(out.euler));
  return out;
}

Sl3Coords fixed_point_coords() {
  const double r2 = std::sqrt(2.0);
  const double outer = 1.0 / (2.0 + r2), middle = r2 / (2.0 + r2);
  return Sl3Coords{{outer, middle, outer}, {outer, middle, outer}};
}

FigureFormat parse_figure_format(const std::string& name) {
  if (name == "json") return FigureFormat::Json;
  if (name == "svg") return FigureFormat::Svg;
  throw DomainError("unknown figure format '" + name + "' (expected json or svg)");
}

namespace {

using nlohmann::json;

json coords_json(const std::array<Rational, 3>& a) {
  json out = json::array();
  for (const auto& x : a) out.push_back(to_fraction_string(x));
  return out;
}

std::string figure_json(const Census& c) {
  json doc;
  doc["cells"] = json::array();
  for (const auto& cell : c.cells) {
    json z = json::array();
    for (int k = 0; k < 6; ++k)
      if (cell.label.zeros & (1u << k)) z.push_back(kCoordNames[k]);
    json j{{"zeros", z},
           {"dim", cell.label.dim},
           {"witness_v", coords_json(cell.coords.v)},
           {"witness_w", coords_json(cell.coords.w)},
           {"source", cell.source}};
    if (auto f = cell.label.figure1_label()) j["figure1_label"] = *f;
    doc["cells"].push_back(j);
  }
  doc["relations"] = json::array();
  for (const auto& r : c.relations) doc["relations"].push_back(json{r.lower, r.upper, r.verified});
  const Sl3Coords fp = fixed_point_coords();
  json fv = json::array(), fw = json::array();
  for (int i = 0; i < 3; ++i) {
    fv.push_back(to_decimal_string(fp.v[i]));
    fw.push_back(to_decimal_string(fp.w[i]));
  }
  doc["fixed_point"] = json{{"v", fv}, {"w", fw}, {"exact", "v = w = (1, sqrt2, 1) / (2 + sqrt2)"}};
  const auto f = c.f_vector();
  doc["f_vector"] = f;
  doc["meta"] = json{{"seed", std::to_string(c.options.seed)},
                     {"draws", c.options.draws},
                     {"anchors", c.options.anchors},
                     {"positive_only", c.options.positive_only},
                     {"tol", to_decimal_string(1e-9)},
                     {"patterns_total", c.patterns_total},
                     {"patterns_sampled", c.patterns_sampled},
                     {"samples", c.samples},
                     {"warnings", c.warnings}};
  return doc.dump(2) + "\n";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Schematic layout of Figure 1 (units of the ball radius, y up). The equator "base" carries the
// hexagon of vertices; two meridians each carry one more edge over a pole.
struct Ellipse {
  double rx, ry;
};
constexpr Ellipse kBase{1.0, 1.0 / 3.0};
constexpr Ellipse kMeridian1{1.0 / 3.0, 1.0};
constexpr Ellipse kMeridian2{0.2, 1.0};

struct VertexPlace {
  const char* label;
  double x, y;
};

std::vector<VertexPlace> figure_places() {
  const double a = std::sqrt(0.1);                                  // equator meets first meridian
  const double bx = std::sqrt(1.0 / 28.0), by = std::sqrt(3.0 / 28.0);  // equator meets second meridian
  return {{"12,13", a, a},   {"13,12", -a, -a},    {"23,13", -bx, by},
          {"13,23", bx, -by}, {"12,23", 1.0, 0.0}, {"23,12", -1.0, 0.0}};
}

double angle_on(const Ellipse& e, double x, double y) { return std::atan2(y / e.ry, x / e.rx); }

// Sampled arc from angle a0 to a1 (radians, counterclockwise when a1 > a0).
std::string arc_path(const Ellipse& e, double a0, double a1, double cx, double cy, double scale) {
  std::ostringstream d;
  const int steps = 24;
  for (int k = 0; k <= steps; ++k) {
    const double a = a0 + (a1 - a0) * k / steps;
    d << (k ? " L " : "M ") << fmt(cx + scale * e.rx * std::cos(a)) << " " << fmt(cy - scale * e.ry * std::sin(a));
  }
  return d.str();
}

std::string figure_svg(const Census& c) {
  std::vector<std::size_t> verts, edges;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    if (c.cells[i].label.dim == 0) verts.push_back(i);
    if (c.cells[i].label.dim == 1) edges.push_back(i);
  }
  auto below = [&](std::size_t a, std::size_t b) {
    return std::any_of(c.relations.begin(), c.relations.end(),
                       [&](const CellRelation& r) { return r.lower == a && r.upper == b; });
  };
  const auto places = figure_places();
  auto place_of = [&](std::size_t cell) -> std::optional<VertexPlace> {
    const auto l = c.cells[cell].label.figure1_label();
    for (const auto& p : places)
      if (l && *l == p.label) return p;
    return std::nullopt;
  };

  const double cx = 300, cy = 230, scale = 180;
  constexpr double kPi = 3.14159265358979323846;
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"460\" viewBox=\"0 0 600 460\">\n"
    << "  <title>Nonnegative part of the SL3 complete flag variety</title>\n"
    << "  <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(scale)
    << "\" fill=\"#eeeeee\" fill-opacity=\"0.5\" stroke=\"#999999\"/>\n";

  const std::string back = "fill=\"none\" stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"7 5\"";
  const std::string front = "fill=\"none\" stroke=\"black\" stroke-width=\"2\"";
  for (auto e : edges) {
    std::vector<VertexPlace> ends;
    for (auto v : verts)
      if (below(v, e))
        if (auto p = place_of(v)) ends.push_back(*p);
    s << "  <g class=\"edge\" data-cell=\"" << c.cells[e].label.to_string() << "\">\n";
    if (ends.size() != 2) {
      s << "  </g>\n";
      continue;
    }
    const VertexPlace p = ends[0], q = ends[1];
    const bool on_base = std::abs(p.x * p.x + 9 * p.y * p.y - 1) < 1e-9 && std::abs(q.x * q.x + 9 * q.y * q.y - 1) < 1e-9;
    const bool meridian1 = std::abs(9 * p.x * p.x + p.y * p.y - 1) < 1e-9 && std::abs(9 * q.x * q.x + q.y * q.y - 1) < 1e-9;
    const bool meridian2 = std::abs(25 * p.x * p.x + p.y * p.y - 1) < 1e-9 && std::abs(25 * q.x * q.x + q.y * q.y - 1) < 1e-9;
    if (meridian1 || meridian2) {
      // Over the pole: the upper endpoint's side is hidden for the first meridian, the left side
      // for the second, as in the drawing of the paper.
      const Ellipse& m = meridian1 ? kMeridian1 : kMeridian2;
      const VertexPlace& top = p.y > 0 ? p : q;
      const VertexPlace& bottom = p.y > 0 ? q : p;
      double a0 = angle_on(m, top.x, top.y), a1 = angle_on(m, bottom.x, bottom.y);
      if (meridian1) {
        if (a1 < a0) a1 += 2 * kPi;
        s << "    <path d=\"" << arc_path(m, a0, kPi / 2, cx, cy, scale) << "\" " << back << "/>\n"
          << "    <path d=\"" << arc_path(m, kPi / 2, a1, cx, cy, scale) << "\" " << front << "/>\n";
      } else {
        if (a1 < 0) a1 += 2 * kPi;
        s << "    <path d=\"" << arc_path(m, a0, 1.5 * kPi, cx, cy, scale) << "\" " << back << "/>\n"
          << "    <path d=\"" << arc_path(m, 1.5 * kPi, a1, cx, cy, scale) << "\" " << front << "/>\n";
      }
    } else if (on_base) {
      double a0 = angle_on(kBase, p.x, p.y), a1 = angle_on(kBase, q.x, q.y);
      if (a1 - a0 > kPi) a1 -= 2 * kPi;
      if (a0 - a1 > kPi) a1 += 2 * kPi;
      const bool hidden = p.y + q.y > 1e-12;
      s << "    <path d=\"" << arc_path(kBase, a0, a1, cx, cy, scale) << "\" " << (hidden ? back : front) << "/>\n";
    } else {
      s << "    <path d=\"M " << fmt(cx + scale * p.x) << " " << fmt(cy - scale * p.y) << " L " << fmt(cx + scale * q.x)
        << " " << fmt(cy - scale * q.y) << "\" " << back << "/>\n";
    }
    s << "  </g>\n";
  }

  const std::array<std::pair<const char*, double>, 4> faces{
      {{"v1=0", 45.0}, {"w3=0", -45.0}, {"v3=0", -135.0}, {"w1=0", 135.0}}};
  for (const auto& [text, deg] : faces) {
    const double a = deg * kPi / 180.0;
    s << "  <text class=\"face-label\" x=\"" << fmt(cx + 1.12 * scale * std::cos(a)) << "\" y=\""
      << fmt(cy - 1.12 * scale * std::sin(a)) << "\" font-size=\"15\" text-anchor=\"middle\">" << text << "</text>\n";
  }
  const Sl3Coords fp = fixed_point_coords();
  s << "  <circle class=\"fixed-point\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"3\" fill=\"#cc0000\">"
    << "<title>p0: v = w = (" << to_decimal_string(fp.v[0]) << ", " << to_decimal_string(fp.v[1]) << ", "
    << to_decimal_string(fp.v[2]) << ")</title></circle>\n";
  for (auto v : verts) {
    const auto p = place_of(v);
    if (!p) continue;
    const double x = cx + scale * p->x, y = cy - scale * p->y;
    const double lx = x + (p->x >= 0 ? 10 : -10), ly = y + (p->y > 0 ? -10 : 20);
    s << "  <circle class=\"vertex\" cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"4.5\"/>\n"
      << "  <text class=\"vertex-label\" x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" font-size=\"16\" text-anchor=\""
      << (p->x >= 0 ? "start" : "end") << "\">" << p->label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace

std::string figure_export(const Census& c, FigureFormat format) {
  return format == FigureFormat::Json ? figure_json(c) : figure_svg(c);
}

Census census_from_json(const std::string& text) {
  Census out;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("cells")) {
      CellWitness w;
      for (const auto& z : j.at("zeros")) w.label.zeros |= parse_zero_set(z.get<std::string>());
      w.label.dim = j.at("dim").get<int>();
      for (int i = 0; i < 3; ++i) {
        w.coords.v[i] = parse_fraction(j.at("witness_v").at(i).get<std::string>());
        w.coords.w[i] = parse_fraction(j.at("witness_w").at(i).get<std::string>());
      }
      w.source = j.value("source", "");
      out.cells.push_back(std::move(w));
    }
    for (const auto& r : doc.at("relations"))
      out.relations.push_back(CellRelation{r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(), r.at(2).get<bool>()});
    const json& meta = doc.at("meta");
    out.options.seed = std::stoull(meta.at("seed").get<std::string>());
    out.options.draws = meta.at("draws").get<std::size_t>();
    out.options.anchors = meta.at("anchors").get<bool>();
    out.options.positive_only = meta.at("positive_only").get<bool>();
    out.patterns_total = meta.at("patterns_total").get<std::size_t>();
    out.patterns_sampled = meta.at("patterns_sampled").get<std::size_t>();
    out.samples = meta.at("samples").get<std::size_t>();
    out.warnings = meta.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed census document: ") + e.what());
  }
  for (const auto& r : out.relations)
    if (r.lower >= out.cells.size() || r.upper >= out.cells.size()) throw Error("census document: relation index out of range");
  return out;
}

}  // namespace tnnflow
