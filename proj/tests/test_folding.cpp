#include <doctest.h>

#include "tnnflow/error.hpp"
#include "tnnflow/folding.hpp"

using namespace tnnflow;

namespace {

RatMatrix random_invertible(std::size_t n, Rng& rng) {
  const Pinning p = build_pinning(n);
  RatMatrix g = RatMatrix::identity(n);
  for (int k = 0; k < 8; ++k) {
    const auto kind = static_cast<OneParamKind>(rng.below(3));
    const std::size_t i = 1 + rng.below(n - 1);
    Rational t = rational_round(rng.uniform(-2.0, 2.0), 6);
    if (kind == OneParamKind::Coweight && sgn(t) == 0) t = 1;
    g = g * one_param(p, kind, i, t).exact();
  }
  return g;
}

}  // namespace

TEST_CASE("sigma on one-parameter subgroups for n = 4") {
  const Folding f = build_folding(4);
  CHECK(f.sigma == std::vector<std::size_t>{3, 2, 1});
  const Pinning p = build_pinning(4);
  for (const Rational& t : {Rational(1), Rational(-3, 7), Rational(5)}) {
    CHECK(f.apply(one_param(p, OneParamKind::X, 2, t).exact()) == one_param(p, OneParamKind::X, 2, t).exact());
    CHECK(f.apply(one_param(p, OneParamKind::X, 1, t).exact()) == one_param(p, OneParamKind::X, 3, t).exact());
    CHECK(f.apply(one_param(p, OneParamKind::Y, 3, t).exact()) == one_param(p, OneParamKind::Y, 1, t).exact());
  }
  // Independent float evaluation of S (x_1(t)^T)^-1 S^-1.
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s(0, 3) = 1;
  s(1, 2) = -1;
  s(2, 1) = 1;
  s(3, 0) = -1;
  Eigen::Matrix4d x1 = Eigen::Matrix4d::Identity();
  x1(0, 1) = 0.75;
  const Eigen::Matrix4d img = s * x1.transpose().inverse() * s.inverse();
  Eigen::Matrix4d x3 = Eigen::Matrix4d::Identity();
  x3(2, 3) = 0.75;
  CHECK((img - x3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sigma fixes tau and permutes the torus") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const Folding f = build_folding(n);
    const Pinning p = build_pinning(n);
    CHECK(f.apply_lie(p.tau()) == p.tau());
    for (std::size_t i = 1; i < n; ++i)
      CHECK(f.apply(one_param(p, OneParamKind::Coweight, i, Rational(3, 2)).exact()) ==
            one_param(p, OneParamKind::Coweight, n - i, Rational(3, 2)).exact());
  }
  CHECK_THROWS_AS(build_folding(1), DomainError);
}

TEST_CASE("sigma is an involutive automorphism") {
  Rng rng(41);
  for (std::size_t n : {2, 3, 4, 5}) {
    const Folding f = build_folding(n);
    for (int k = 0; k < 25; ++k) {
      const RatMatrix g = random_invertible(n, rng), h = random_invertible(n, rng);
      CHECK(f.apply(f.apply(g)) == g);
      CHECK(f.apply(g * h) == f.apply(g) * f.apply(h));
    }
  }
}

TEST_CASE("folded reduced words") {
  const Folding f4 = build_folding(4);
  const FoldedWord w4 = folded_word(f4);
  CHECK(w4.word.letters == std::vector<std::size_t>{2, 1, 3, 2, 1, 3});
  CHECK(folded_word(build_folding(3)).word.letters == std::vector<std::size_t>{1, 2, 1});
  for (std::size_t n = 2; n <= 7; ++n) {
    const FoldedWord w = folded_word(build_folding(n));
    CHECK(is_reduced_word_for_w0(n, w.word.letters));
  }
  Rng rng(2);
  const Pinning p = build_pinning(5);
  const Folding f5 = build_folding(5);
  const FoldedWord w5 = folded_word(f5);
  for (int k = 0; k < 10; ++k) {
    const FactorizationParams fp = symmetric_factorization(f5, w5, rng);
    const RatMatrix g = sample_positive(p, fp, Side::Group).exact();
    CHECK(f5.apply(g) == g);
    CHECK(is_tnn_matrix(GroupElement(g)) == Positivity::TotallyPositive);
  }
}

TEST_CASE("sigma on flags: float path matches exact") {
  Rng rng(6);
  for (auto [n, j] : {std::pair<std::size_t, IndexSet>{4, {}}, {4, {2}}, {4, {1, 3}}, {3, {}}, {5, {1, 4}}}) {
    const Folding f = build_folding(n);
    const Pinning p = build_pinning(n);
    for (int k = 0; k < 10; ++k) {
      // Moderate parameters keep the float canonical form well conditioned.
      SamplingOptions opts;
      opts.log_lo = -1.0;
      opts.log_hi = 1.0;
      const RatMatrix g = sample_positive(p, random_factorization(n, rng, opts), Side::Group).exact();
      const FlagPoint exact = flag_of(g, j);
      const FlagPoint viaqr = sigma_flag(f, FlagPoint(n, j, exact.to_float()));
      const FlagPoint ref = sigma_flag(f, exact);
      CHECK(flag_subspace_distance(viaqr, ref) < 1e-10);
      CHECK(sigma_flag(f, ref) == exact);
    }
  }
  CHECK_THROWS_AS(sigma_flag(build_folding(4), flag_of(RatMatrix::identity(4), {1})), DomainError);
}

TEST_CASE("fixed locus is preserved by the flow") {
  const Folding f = build_folding(4);
  Rng rng(4);
  const FoldingReport r = fixed_locus_flow_check(f, {}, {0.1, 1.0, 5.0}, 100, rng);
  CHECK(r.count == 100);
  CHECK(r.exact_fixed == 100);
  CHECK(r.flow_fixed == std::vector<std::size_t>{100, 100, 100});
  CHECK(r.worst_deviation <= 1e-10);
  CHECK(r.pass());

  Rng zero(4);
  const FoldingReport at0 = fixed_locus_flow_check(f, {}, {0.0}, 20, zero);
  CHECK(at0.pass());
  CHECK(at0.worst_deviation < 1e-12);

  for (const IndexSet& j : {IndexSet{2}, IndexSet{1, 3}}) {
    Rng g(9);
    CHECK(fixed_locus_flow_check(f, j, {0.1, 1.0}, 30, g).pass());
  }
  for (std::size_t n : {3, 5}) {
    Rng g(10);
    CHECK(fixed_locus_flow_check(build_folding(n), {}, {0.1, 1.0}, 30, g).pass());
  }
  Rng bad(1);
  CHECK_THROWS_AS(fixed_locus_flow_check(f, {1}, {0.1}, 1, bad), DomainError);
}

TEST_CASE("asymmetric parameters are not fixed") {
  const Folding f = build_folding(4);
  Rng rng(4);
  const FoldingReport r = fixed_locus_flow_check(f, {}, {0.1, 1.0, 5.0}, 100, rng, false);
  CHECK(r.exact_fixed == 0);
  CHECK(r.failures.size() == 100);
  CHECK_FALSE(r.pass());
}
