#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "tnnflow/cells.hpp"
#include "tnnflow/chevalley.hpp"
#include "tnnflow/error.hpp"

using namespace tnnflow;

namespace {

// Closure order on Bruhat intervals of S3: [v', w'] <= [v, w] iff v <= v' <= w' <= w.
std::size_t interval_relation_count() {
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b)
      if (oracle::bruhat_leq(perms[a], perms[b])) cells.emplace_back(a, b);
  std::size_t count = 0;
  for (const auto& [v1, w1] : cells)
    for (const auto& [v2, w2] : cells)
      if (std::pair(v1, w1) != std::pair(v2, w2) && oracle::bruhat_leq(perms[v2], perms[v1]) &&
          oracle::bruhat_leq(perms[w1], perms[w2]))
        ++count;
  return count;
}

const Census& full() {
  static const Census c = [] {
    Census c = census();
    face_poset(c);
    return c;
  }();
  return c;
}

}  // namespace

TEST_CASE("zero set notation") {
  CHECK(format_zero_set(0) == "{}");
  CHECK(parse_zero_set("{v1,v3,w2}") == (1 | 4 | 16));
  CHECK(format_zero_set(parse_zero_set("{v2,w1,w3}")) == "{v2,w1,w3}");
  CHECK_THROWS_AS(parse_zero_set("{v4}"), DomainError);
  CHECK(CellLabel{parse_zero_set("{v1,v2,w1,w3}"), 0}.figure1_label() == "12,13");
  CHECK_FALSE(CellLabel{parse_zero_set("{v1}"), 2}.figure1_label());
}

TEST_CASE("labels of explicit points") {
  const Sl3Coords interior{{0.25, 0.5, 0.25}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  CHECK(label_of(interior) == CellLabel{0, 3});
  CHECK(label_of(fixed_point_coords()) == CellLabel{0, 3});

  const Pinning pin = build_pinning(3);
  const ExactSl3Coords y1 = sl3_coords_exact(flag_of(one_param(pin, OneParamKind::Y, 1, 1).exact(), {}));
  CHECK(y1.v == std::array<Rational, 3>{Rational(1, 2), Rational(1, 2), 0});
  CHECK(y1.w == std::array<Rational, 3>{0, 0, 1});
  const CellLabel l = label_of(y1);
  CHECK(l.to_string() == "{v3,w1,w2}");
  CHECK(l.dim == 1);
  CHECK(label_of(to_float(y1)) == l);

  const ExactSl3Coords id = sl3_coords_exact(flag_of(RatMatrix::identity(3), {}));
  CHECK(label_of(id).figure1_label() == "23,12");

  const Sl3Coords outside{{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}};
  CHECK_THROWS_AS(label_of(outside), DomainError);
}

TEST_CASE("census finds the 19 cells of Figure 1") {
  const Census& c = full();
  CHECK(c.cells.size() == 19);
  CHECK(c.warnings.empty());
  const auto oracle_f = oracle::bruhat_interval_counts(3);
  CHECK(oracle_f == std::vector<std::size_t>{6, 8, 4, 1});
  CHECK(c.f_vector() == oracle_f);

  std::set<std::string> vertex_labels;
  for (const auto& cell : c.cells)
    if (cell.label.dim == 0) vertex_labels.insert(cell.label.figure1_label().value_or("?"));
  CHECK(vertex_labels == std::set<std::string>{"12,13", "23,13", "13,12", "13,23", "12,23", "23,12"});

  // The 2-cells are cut out by a single vanishing coordinate.
  std::set<std::string> faces;
  for (const auto& cell : c.cells)
    if (cell.label.dim == 2) faces.insert(cell.label.to_string());
  CHECK(faces == std::set<std::string>{"{v1}", "{v3}", "{w1}", "{w3}"});

  // Witnesses realize their labels exactly.
  for (const auto& cell : c.cells) {
    CHECK(label_of(cell.coords) == cell.label);
    CHECK(sl3_membership(cell.coords).kind != Membership::Outside);
  }
}

TEST_CASE("census without edge anchors misses two edges") {
  CensusOptions opts;
  opts.anchors = false;
  const Census c = census(opts);
  CHECK(c.cells.size() == 17);
  CHECK_FALSE(c.find(parse_zero_set("{v1,v3,w2}")));
  CHECK_FALSE(c.find(parse_zero_set("{v2,w1,w3}")));
}

TEST_CASE("census restricted to positive parameters") {
  CensusOptions opts;
  opts.positive_only = true;
  const Census c = census(opts);
  REQUIRE(c.cells.size() == 1);
  CHECK(c.cells[0].label == CellLabel{0, 3});
  CHECK(std::any_of(c.warnings.begin(), c.warnings.end(),
                    [](const std::string& w) { return w.find("undersampled") != std::string::npos; }));
  CHECK_THROWS_AS(census(CensusOptions{0, 0, false, true}), DomainError);
}

TEST_CASE("census is stable across seeds") {
  CensusOptions a, b;
  a.seed = 1;
  b.seed = 99;
  b.draws = 3;
  const Census ca = census(a), cb = census(b);
  REQUIRE(ca.cells.size() == cb.cells.size());
  for (std::size_t i = 0; i < ca.cells.size(); ++i) CHECK(ca.cells[i].label == cb.cells[i].label);
}

TEST_CASE("face poset") {
  const Census& c = full();
  CHECK(c.relations.size() == interval_relation_count());
  const PosetCheck p = check_poset(c);
  for (const auto& s : p.problems) MESSAGE(s);
  CHECK(p.graded);
  CHECK(p.chains_length_3);
  CHECK(p.edges_have_two_vertices);
  CHECK(p.faces_are_cycles);
  CHECK(p.all_verified);
  CHECK(p.euler == 2);
  CHECK(p.pass());

  const std::size_t top = *c.find(0);
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    if (c.cells[i].label.dim == 0)
      CHECK(std::any_of(c.relations.begin(), c.relations.end(),
                        [&](const CellRelation& r) { return r.lower == i && r.upper == top; }));
}

TEST_CASE("a dropped relation is detected") {
  Census c = full();
  c.relations.front().verified = false;
  CHECK_FALSE(check_poset(c).pass());
  Census d = full();
  d.relations.erase(std::remove_if(d.relations.begin(), d.relations.end(),
                                   [&](const CellRelation& r) { return d.cells[r.upper].label.dim == 1; }),
                    d.relations.end());
  const PosetCheck p = check_poset(d);
  CHECK_FALSE(p.edges_have_two_vertices);
}

TEST_CASE("every cell flows into the big cell") {
  const Census& c = full();
  const Pinning pin = build_pinning(3);
  for (double t : {0.1, 1.0}) {
    const Eigen::MatrixXd g = exp_tau_matrix(pin, t);
    for (const auto& cell : c.cells) {
      // Rebuild a representative from the coordinates: v spans V1, V2 = ker of (w1, -w2, w3).
      Eigen::Vector3d v(to_double(cell.coords.v[0]), to_double(cell.coords.v[1]), to_double(cell.coords.v[2]));
      Eigen::Vector3d nrm(to_double(cell.coords.w[0]), -to_double(cell.coords.w[1]), to_double(cell.coords.w[2]));
      Eigen::Vector3d u = nrm.cross(v);
      Eigen::Matrix3d m;
      m << v, u, v.cross(u);
      const CellLabel moved = label_of(sl3_coords(flag_of(Eigen::MatrixXd(g * m), {})));
      CHECK(moved == CellLabel{0, 3});
    }
  }
}

TEST_CASE("figure export") {
  const Census& c = full();
  const std::string doc = figure_export(c, FigureFormat::Json);
  CHECK(doc.find("0.29289321881345") != std::string::npos);
  CHECK(doc.find("0.41421356237309") != std::string::npos);
  const Census back = census_from_json(doc);
  REQUIRE(back.cells.size() == c.cells.size());
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    CHECK(back.cells[i].label == c.cells[i].label);
    CHECK(back.cells[i].coords.v == c.cells[i].coords.v);
    CHECK(back.cells[i].coords.w == c.cells[i].coords.w);
  }
  CHECK(back.relations.size() == c.relations.size());
  CHECK(figure_export(back, FigureFormat::Json) == doc);

  const std::string svg = figure_export(c, FigureFormat::Svg);
  std::size_t labels = 0;
  for (auto pos = svg.find("class=\"vertex-label\""); pos != std::string::npos;
       pos = svg.find("class=\"vertex-label\"", pos + 1))
    ++labels;
  CHECK(labels == 6);
  for (const char* l : {"12,13", "23,13", "13,12", "13,23", "12,23", "23,12"})
    CHECK(svg.find(std::string(">") + l + "<") != std::string::npos);
  std::size_t edges = 0;
  for (auto pos = svg.find("class=\"edge"); pos != std::string::npos; pos = svg.find("class=\"edge", pos + 1)) ++edges;
  CHECK(edges == 8);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);

  CHECK_THROWS_AS(parse_figure_format("png"), DomainError);
  CHECK_THROWS_AS(census_from_json("{\"cells\": 3}"), Error);
}
