#include <doctest.h>

#include "tnnflow/error.hpp"
#include "tnnflow/totpos.hpp"

using namespace tnnflow;

namespace {

RatMatrix rat(std::initializer_list<std::initializer_list<long>> rows) {
  RatMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

FactorizationParams uniform_params(std::size_t n, const Rational& value) {
  FactorizationParams fp;
  fp.word = standard_word_w0(n);
  fp.t.assign(fp.word.length(), value);
  return fp;
}

RatMatrix random_upper_unimodular(std::size_t n, Rng& rng) {
  RatMatrix u = RatMatrix::identity(n);
  Rational prod = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) u(i, j) = rational_round(rng.uniform(-3, 3), 6);
    if (i + 1 < n) {
      u(i, i) = rational_round(rng.log_uniform(-1, 1), 6) * (rng.coin() ? 1 : -1);
      prod *= u(i, i);
    }
  }
  u(n - 1, n - 1) = 1 / prod;
  return u;
}

}  // namespace

TEST_CASE("staircase reduced words") {
  CHECK(standard_word_w0(2).letters == std::vector<std::size_t>{1});
  CHECK(standard_word_w0(3).letters == std::vector<std::size_t>{1, 2, 1});
  CHECK(standard_word_w0(4).length() == 6);
  CHECK(standard_word_w0(5).length() == 10);
  // s1 s2 s1 reverses (1, 2, 3)
  CHECK(word_permutation(3, {1, 2, 1}) == std::vector<std::size_t>{2, 1, 0});
  CHECK_FALSE(is_reduced_word_for_w0(3, {1, 2, 2}));
  CHECK_FALSE(is_reduced_word_for_w0(3, {1, 2}));
  CHECK(is_reduced_word_for_w0(4, {2, 1, 3, 2, 1, 3}));
}

TEST_CASE("factorized samples") {
  const Pinning p = build_pinning(3);
  const auto lower = sample_positive(p, uniform_params(3, 1), Side::Lower);
  CHECK(lower.exact() == rat({{1, 0, 0}, {2, 1, 0}, {1, 1, 1}}));
  for (std::size_t n = 2; n <= 4; ++n)
    for (auto side : {Side::Upper, Side::Lower, Side::Group})
      CHECK(sample_positive(build_pinning(n), uniform_params(n, 0), side).exact() == RatMatrix::identity(n));

  auto fp = uniform_params(3, 1);
  fp.torus = {1, 1};
  const auto g = sample_positive(p, fp, Side::Group);
  const auto minors = all_minors(g.exact());
  CHECK(minors.size() == 9 + 9 + 1);
  for (const auto& m : minors) CHECK(sgn(m.value) > 0);
  CHECK(is_tnn_matrix(g) == Positivity::TotallyPositive);
}

TEST_CASE("factorization parameters are validated") {
  const Pinning p = build_pinning(3);
  auto fp = uniform_params(3, 1);
  fp.t[1] = -1;
  CHECK_THROWS_AS(sample_positive(p, fp, Side::Lower), DomainError);
  fp = uniform_params(3, 1);
  fp.torus = {1, 0};
  CHECK_THROWS_AS(sample_positive(p, fp, Side::Group), DomainError);
  fp = uniform_params(3, 1);
  fp.t.pop_back();
  CHECK_THROWS_AS(sample_positive(p, fp, Side::Upper), DomainError);
}

TEST_CASE("all-minors classification") {
  CHECK(is_tnn_matrix(GroupElement::identity(3)) == Positivity::TotallyNonnegative);
  CHECK(is_tnn_matrix(GroupElement(rat({{1, 0, 0}, {2, 1, 0}, {1, 1, 1}}))) == Positivity::TotallyNonnegative);
  CHECK(is_tnn_matrix(GroupElement(rat({{1, -1}, {0, 1}}))) == Positivity::Neither);
  // [[2,1],[1,1]]: entries and det positive.
  CHECK(is_tnn_matrix(GroupElement(rat({{2, 1}, {1, 1}}))) == Positivity::TotallyPositive);
  CHECK_THROWS_AS(is_tnn_matrix(GroupElement(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)))), DomainError);
}

TEST_CASE("rationalized exp_tau(1) is totally positive") {
  const Pinning p = build_pinning(3);
  const RatMatrix approx = RatMatrix::from_double(exp_tau_matrix(p, 1.0));
  // The exact image of the float matrix has det within rounding of 1; rescale the
  // last row so the group element is exactly unimodular (changes entries by ~1e-16).
  RatMatrix m = approx;
  const Rational d = determinant(m);
  CHECK(abs(d - 1) < Rational(1, 1000000000000L));
  for (std::size_t j = 0; j < 3; ++j) m(2, j) /= d;
  CHECK(is_tnn_matrix(GroupElement(m)) == Positivity::TotallyPositive);
}

TEST_CASE("positivity of random factorizations") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const Pinning p = build_pinning(n);
    const auto fp = random_factorization(n, rng);
    REQUIRE(fp.all_positive());
    const auto lower = sample_positive(p, fp, Side::Lower).exact();
    for (const auto& m : all_minors(lower)) CHECK(sgn(m.value) >= 0);
    // Bottom-left corner minors of a strictly positive lower factor are positive.
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t q = 0; q < k; ++q) {
        rows.push_back(n - k + q);
        cols.push_back(q);
      }
      CHECK(sgn(determinant(submatrix(lower, rows, cols))) > 0);
    }
    CHECK(is_tnn_matrix(sample_positive(p, fp, Side::Group)) == Positivity::TotallyPositive);
  }
}

TEST_CASE("zeroing parameters stays in the closure") {
  Rng rng(99);
  SamplingOptions opts;
  opts.zero_prob = 0.4;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto fp = random_factorization(n, rng, opts);
    for (auto side : {Side::Upper, Side::Lower, Side::Group})
      CHECK(is_tnn_matrix(sample_positive(build_pinning(n), fp, side)) != Positivity::Neither);
  }
}

TEST_CASE("flag canonical forms") {
  const auto id = flag_of(RatMatrix::identity(3), {});
  CHECK(id.exact() == RatMatrix::identity(3));

  const auto f = flag_of(rat({{1, 0, 0}, {2, 1, 0}, {1, 1, 1}}), {});
  const auto c = sl3_coords_exact(f);
  CHECK(c.v == std::array<Rational, 3>{Rational(1, 4), Rational(1, 2), Rational(1, 4)});
  CHECK(c.w == std::array<Rational, 3>{Rational(1, 3), Rational(1, 3), Rational(1, 3)});

  const auto y1 = flag_of(rat({{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}), {});
  const auto c1 = sl3_coords_exact(y1);
  CHECK(c1.v == std::array<Rational, 3>{Rational(1, 2), Rational(1, 2), 0});
  CHECK(c1.w == std::array<Rational, 3>{0, 0, 1});

  CHECK(column_blocks(4, {2}) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 3}, {3, 4}});
  CHECK(column_blocks(3, {}).size() == 3);
  CHECK(column_blocks(3, {1, 2}).size() == 1);
}

TEST_CASE("flag_of is constant on cosets and factors through the complete flag") {
  Rng rng(5);
  SamplingOptions opts;
  opts.zero_prob = 0.3;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const Pinning p = build_pinning(n);
    const RatMatrix g = sample_positive(p, random_factorization(n, rng, opts), Side::Group).exact();
    const RatMatrix u = random_upper_unimodular(n, rng);
    for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
      IndexSet j;
      for (std::size_t i = 1; i < n; ++i)
        if (mask >> (i - 1) & 1) j.push_back(i);
      const FlagPoint a = flag_of(g, j);
      CHECK(flag_of(g * u, j) == a);
      CHECK(flag_of(flag_of(g, {}).exact(), j) == a);
    }
  }
}

TEST_CASE("parabolic coset invariance under y_j for j in J") {
  const Pinning p = build_pinning(4);
  Rng rng(8);
  const RatMatrix g = sample_positive(p, random_factorization(4, rng), Side::Lower).exact();
  const IndexSet j{2};
  const RatMatrix y2 = one_param(p, OneParamKind::Y, 2, Rational(7, 3)).exact();
  const RatMatrix y1 = one_param(p, OneParamKind::Y, 1, Rational(7, 3)).exact();
  CHECK(flag_of(g * y2, j) == flag_of(g, j));
  CHECK_FALSE(flag_of(g * y1, j) == flag_of(g, j));
}

TEST_CASE("float canonical forms agree with exact ones") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const RatMatrix g = sample_positive(build_pinning(4), random_factorization(4, rng), Side::Group).exact();
    for (const IndexSet& j : {IndexSet{}, IndexSet{2}, IndexSet{1, 3}}) {
      const auto exact = flag_of(g, j);
      const double scale = std::max(1.0, exact.to_float().cwiseAbs().maxCoeff());
      CHECK(flag_distance(exact, flag_of(g.to_double(), j)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("SL3 membership") {
  ExactSl3Coords interior{{Rational(1, 4), Rational(1, 2), Rational(1, 4)}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  CHECK(sl3_membership(interior).kind == Membership::PositivePart);
  ExactSl3Coords boundary{{Rational(1, 2), Rational(1, 2), 0}, {0, 0, 1}};
  CHECK(sl3_membership(boundary).kind == Membership::NonnegativeBoundary);
  ExactSl3Coords outside{{1, 0, 0}, {1, 0, 0}};
  const auto r = sl3_membership(outside);
  CHECK(r.kind == Membership::Outside);
  CHECK(r.diagnostic.find("v1 w1") != std::string::npos);

  CHECK(sl3_membership(to_float(interior)).kind == Membership::PositivePart);
  CHECK(sl3_membership(to_float(boundary)).kind == Membership::NonnegativeBoundary);
  CHECK(sl3_membership(Sl3Coords{{0.5, 0.5, 0.0}, {0.0, 0.0, 1.0 + 1e-6}}).kind == Membership::Outside);
  CHECK(sl3_membership(Sl3Coords{{1.2, -0.2, 0.0}, {0.0, 0.0, 1.0}}).kind == Membership::Outside);
}

TEST_CASE("SL3 consistency of factorized flags") {
  Rng rng(31);
  const Pinning p = build_pinning(3);
  for (int trial = 0; trial < 200; ++trial) {
    SamplingOptions opts;
    opts.zero_prob = trial % 2 ? 0.4 : 0.0;
    const auto fp = random_factorization(3, rng, opts);
    const auto flag = flag_of(sample_positive(p, fp, Side::Lower), {});
    const auto m = sl3_membership(sl3_coords_exact(flag));
    CHECK(m.kind != Membership::Outside);
    if (fp.all_positive()) CHECK(m.kind == Membership::PositivePart);
  }
}

TEST_CASE("index set parsing") {
  CHECK(parse_index_set("", 3).empty());
  CHECK(parse_index_set("2", 3) == IndexSet{2});
  CHECK(parse_index_set("3, 1", 4) == IndexSet{1, 3});
  CHECK_THROWS_AS(parse_index_set("3", 3), DomainError);
  CHECK_THROWS_AS(parse_index_set("x", 3), DomainError);
  CHECK(format_index_set({1, 3}) == "1,3");
}
