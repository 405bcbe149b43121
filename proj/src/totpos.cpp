#include "tnnflow/totpos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tnnflow/error.hpp"

namespace tnnflow {

IndexSet parse_index_set(const std::string& text, std::size_t n) {
  IndexSet out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    if (token.empty()) continue;
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(token, &pos);
    } catch (const std::exception&) {
      throw DomainError("malformed index '" + token + "'");
    }
    if (pos != token.size()) throw DomainError("malformed index '" + token + "'");
    if (v < 1 || static_cast<std::size_t>(v) >= n) {
      throw DomainError("index " + token + " outside 1.." + std::to_string(n - 1));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_index_set(const IndexSet& j) {
  std::string s;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(j[k]);
  }
  return s;
}

std::vector<std::size_t> word_permutation(std::size_t n, const std::vector<std::size_t>& letters) {
  // Compose as permutation matrices: columns of P_{s_i1} ... P_{s_il}.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i : letters) {
    if (i < 1 || i >= n) throw DomainError("word letter out of range");
    std::swap(perm[i - 1], perm[i]);
  }
  return perm;
}

bool is_reduced_word_for_w0(std::size_t n, const std::vector<std::size_t>& letters) {
  if (letters.size() != n * (n - 1) / 2) return false;
  const auto perm = word_permutation(n, letters);
  for (std::size_t k = 0; k < n; ++k)
    if (perm[k] != n - 1 - k) return false;
  return true;
}

ReducedWord standard_word_w0(std::size_t n) {
  if (n < 2) throw DomainError("standard_word_w0: n must be at least 2");
  ReducedWord w{n, {}};
  for (std::size_t top = 1; top < n; ++top)
    for (std::size_t i = top; i >= 1; --i) w.letters.push_back(i);
  if (!is_reduced_word_for_w0(n, w.letters)) throw Error("staircase word failed w0 validation");
  return w;
}

void FactorizationParams::validate() const {
  if (!is_reduced_word_for_w0(word.n, word.letters)) throw DomainError("factorization word is not reduced for w0");
  auto check = [&](const RatVector& v, const char* what) {
    if (v.size() != word.length()) throw DomainError(std::string(what) + " has the wrong length");
    for (const auto& x : v)
      if (sgn(x) < 0) throw DomainError(std::string(what) + " has a negative entry");
  };
  check(t, "t");
  if (!t_lower.empty()) check(t_lower, "t_lower");
  if (!torus.empty()) {
    if (torus.size() != word.n - 1) throw DomainError("torus has the wrong length");
    for (const auto& x : torus)
      if (sgn(x) <= 0) throw DomainError("torus entries must be positive");
  }
}

bool FactorizationParams::all_positive() const {
  auto pos = [](const RatVector& v) { return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) > 0; }); };
  return pos(t) && pos(t_lower);
}

namespace {

RatMatrix word_product(const Pinning& p, const ReducedWord& w, const RatVector& t, OneParamKind kind) {
  RatMatrix g = RatMatrix::identity(p.n);
  for (std::size_t k = 0; k < w.length(); ++k) g = g * one_param(p, kind, w.letters[k], t[k]).exact();
  return g;
}

}  // namespace

GroupElement sample_positive(const Pinning& p, const FactorizationParams& params, Side side) {
  params.validate();
  if (params.word.n != p.n) throw DomainError("sample_positive: word and pinning disagree on n");
  switch (side) {
    case Side::Upper:
      return GroupElement(word_product(p, params.word, params.t, OneParamKind::X));
    case Side::Lower:
      return GroupElement(word_product(p, params.word, params.t, OneParamKind::Y));
    case Side::Group: {
      RatMatrix g = word_product(p, params.word, params.t, OneParamKind::X);
      for (std::size_t i = 0; i < params.torus.size(); ++i)
        g = g * one_param(p, OneParamKind::Coweight, i + 1, params.torus[i]).exact();
      const RatVector& lower = params.t_lower.empty() ? params.t : params.t_lower;
      return GroupElement(g * word_product(p, params.word, lower, OneParamKind::Y));
    }
  }
  throw DomainError("sample_positive: unknown side");
}

FactorizationParams random_factorization(std::size_t n, Rng& rng, const SamplingOptions& opts) {
  FactorizationParams fp;
  fp.word = standard_word_w0(n);
  auto draw = [&]() -> Rational {
    const double x = rng.log_uniform(opts.log_lo, opts.log_hi);
    if (opts.zero_prob > 0 && rng.coin(opts.zero_prob)) return 0;
    return rational_round(x, opts.bits);
  };
  for (std::size_t k = 0; k < fp.word.length(); ++k) fp.t.push_back(draw());
  for (std::size_t k = 0; k < fp.word.length(); ++k) fp.t_lower.push_back(draw());
  for (std::size_t k = 0; k + 1 < n; ++k) fp.torus.push_back(rational_round(rng.log_uniform(opts.log_lo, opts.log_hi), opts.bits));
  return fp;
}

std::string to_string(Positivity p) {
  switch (p) {
    case Positivity::TotallyPositive: return "TotallyPositive";
    case Positivity::TotallyNonnegative: return "TotallyNonnegative";
    case Positivity::Neither: return "Neither";
  }
  return "?";
}

std::vector<Minor> all_minors(const RatMatrix& m) {
  std::vector<Minor> out;
  const std::size_t kmax = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= kmax; ++k)
    for (const auto& rows : k_subsets(m.rows(), k))
      for (const auto& cols : k_subsets(m.cols(), k))
        out.push_back({rows, cols, determinant(submatrix(m, rows, cols))});
  return out;
}

Positivity is_tnn_matrix(const GroupElement& g) {
  if (g.field() != Field::Rational) throw DomainError("is_tnn_matrix requires exact rational entries");
  bool positive = true;
  for (const auto& minor : all_minors(g.exact())) {
    const int s = sgn(minor.value);
    if (s < 0) return Positivity::Neither;
    if (s == 0) positive = false;
  }
  return positive ? Positivity::TotallyPositive : Positivity::TotallyNonnegative;
}

// ---------------------------------------------------------------------------
// Canonical flag representatives

std::vector<std::pair<std::size_t, std::size_t>> column_blocks(std::size_t n, const IndexSet& j) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t start = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::binary_search(j.begin(), j.end(), k)) continue;
    blocks.emplace_back(start, k);
    start = k;
  }
  blocks.emplace_back(start, n);
  return blocks;
}

namespace {

template <class S>
using Columns = std::vector<std::vector<S>>;

// Zero test and pivot preference differ between exact and float entries.
struct ExactOps {
  bool zero(const Rational& x) const { return sgn(x) == 0; }
  double weight(const Rational& x) const { return sgn(x) == 0 ? 0.0 : 1.0; }
};

struct FloatOps {
  double tol;
  bool zero(double x) const { return std::abs(x) <= tol; }
  double weight(double x) const { return std::abs(x); }
};

template <class S, class Ops>
Columns<S> canonicalize(Columns<S> cols, std::size_t n, const IndexSet& j, const Ops& ops) {
  struct Pivot {
    std::size_t row;
    std::size_t col;
  };
  std::vector<Pivot> pivots;
  Columns<S> out;
  out.reserve(cols.size());
  for (const auto& [a, b] : column_blocks(n, j)) {
    Columns<S> block(cols.begin() + static_cast<std::ptrdiff_t>(a), cols.begin() + static_cast<std::ptrdiff_t>(b));
    for (auto& c : block) {
      for (const auto& pv : pivots) {
        const S factor = c[pv.row];
        if (ops.zero(factor)) continue;
        for (std::size_t r = 0; r < n; ++r) c[r] -= factor * out[pv.col][r];
        c[pv.row] = S(0);
      }
    }
    std::vector<bool> used(block.size(), false);
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> chosen_rows;
    for (std::size_t r = n; r-- > 0 && chosen.size() < block.size();) {
      std::size_t best = block.size();
      double best_w = 0.0;
      for (std::size_t k = 0; k < block.size(); ++k) {
        if (used[k] || ops.zero(block[k][r])) continue;
        const double w = ops.weight(block[k][r]);
        if (best == block.size() || w > best_w) {
          best = k;
          best_w = w;
        }
      }
      if (best == block.size()) continue;
      used[best] = true;
      const S inv = S(1) / block[best][r];
      for (auto& x : block[best]) x *= inv;
      block[best][r] = S(1);
      for (std::size_t k = 0; k < block.size(); ++k) {
        if (k == best) continue;
        const S factor = block[k][r];
        if (ops.zero(factor)) {
          block[k][r] = S(0);
          continue;
        }
        for (std::size_t q = 0; q < n; ++q) block[k][q] -= factor * block[best][q];
        block[k][r] = S(0);
      }
      chosen.push_back(best);
      chosen_rows.push_back(r);
    }
    if (chosen.size() != block.size()) throw DomainError("flag_of: matrix columns are linearly dependent");
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      pivots.push_back({chosen_rows[k], out.size()});
      out.push_back(block[chosen[k]]);
    }
  }
  // Clean residual float noise below the pivots of earlier columns.
  for (const auto& pv : pivots)
    for (std::size_t c = 0; c < out.size(); ++c)
      if (c != pv.col && ops.zero(out[c][pv.row])) out[c][pv.row] = S(0);
  return out;
}

void check_parabolic(std::size_t n, const IndexSet& j) {
  for (std::size_t k : j)
    if (k < 1 || k >= n) throw DomainError("parabolic index outside 1..n-1");
  if (!std::is_sorted(j.begin(), j.end())) throw DomainError("parabolic index set must be sorted");
}

}  // namespace

FlagPoint flag_of(const RatMatrix& g, const IndexSet& j) {
  const std::size_t n = g.rows();
  if (g.cols() != n) throw DomainError("flag_of: matrix must be square");
  check_parabolic(n, j);
  Columns<Rational> cols(n);
  for (std::size_t c = 0; c < n; ++c) cols[c] = g.column(c);
  cols = canonicalize(std::move(cols), n, j, ExactOps{});
  RatMatrix m(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  return FlagPoint(n, j, std::move(m));
}

FlagPoint flag_of(const Eigen::MatrixXd& g, const IndexSet& j, double tol) {
  const auto n = static_cast<std::size_t>(g.rows());
  if (static_cast<std::size_t>(g.cols()) != n) throw DomainError("flag_of: matrix must be square");
  check_parabolic(n, j);
  Columns<double> cols(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    const double scale = g.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff();
    if (scale == 0.0) throw DomainError("flag_of: zero column");
    for (std::size_t r = 0; r < n; ++r) cols[c][r] = g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) / scale;
  }
  cols = canonicalize(std::move(cols), n, j, FloatOps{tol});
  Eigen::MatrixXd m(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  return FlagPoint(n, j, std::move(m));
}

FlagPoint flag_of(const GroupElement& g, const IndexSet& j, double tol) {
  if (g.field() == Field::Rational) return flag_of(g.exact(), j);
  return flag_of(g.to_float(), j, tol);
}

const RatMatrix& FlagPoint::exact() const {
  if (const auto* r = std::get_if<RatMatrix>(&canon_)) return *r;
  throw DomainError("exact canonical form requested from a float flag");
}

Eigen::MatrixXd FlagPoint::to_float() const {
  if (const auto* r = std::get_if<RatMatrix>(&canon_)) return r->to_double();
  return std::get<Eigen::MatrixXd>(canon_);
}

bool operator==(const FlagPoint& a, const FlagPoint& b) {
  return a.n_ == b.n_ && a.j_ == b.j_ && a.field() == Field::Rational && b.field() == Field::Rational &&
         a.exact() == b.exact();
}

double flag_distance(const FlagPoint& a, const FlagPoint& b) {
  if (a.n() != b.n() || a.parabolic() != b.parabolic()) throw DomainError("flag_distance: incompatible flags");
  return (a.to_float() - b.to_float()).cwiseAbs().maxCoeff();
}

std::vector<Eigen::MatrixXd> flag_projectors(const Eigen::MatrixXd& rep, const IndexSet& j) {
  const auto n = static_cast<std::size_t>(rep.rows());
  check_parabolic(n, j);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rep);
  const Eigen::MatrixXd q = qr.householderQ();
  std::vector<Eigen::MatrixXd> out;
  for (const auto& [start, end] : column_blocks(n, j)) {
    (void)start;
    if (end == n) break;
    const auto k = static_cast<Eigen::Index>(end);
    out.push_back(q.leftCols(k) * q.leftCols(k).transpose());
  }
  return out;
}

double subspace_distance(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b) {
  if (a.size() != b.size()) throw DomainError("subspace_distance: flags of different types");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return d;
}

double flag_subspace_distance(const FlagPoint& a, const FlagPoint& b) {
  if (a.n() != b.n() || a.parabolic() != b.parabolic()) throw DomainError("flag_distance: incompatible flags");
  return subspace_distance(flag_projectors(a.to_float(), a.parabolic()), flag_projectors(b.to_float(), b.parabolic()));
}

// ---------------------------------------------------------------------------
// SL3 coordinates

namespace {

template <class S, class IsZero>
std::array<S, 3> normalize_sum(std::array<S, 3> a, IsZero is_zero) {
  S sum = a[0] + a[1] + a[2];
  if (is_zero(sum)) {
    for (const auto& x : a)
      if (!is_zero(x)) {
        sum = x;
        break;
      }
  }
  if (is_zero(sum)) return a;
  for (auto& x : a) x /= sum;
  return a;
}

template <class S, class IsZero>
Sl3CoordsT<S> coords_from_columns(const std::array<S, 3>& c1, const std::array<S, 3>& c2, IsZero is_zero) {
  const std::array<S, 3> cross{c1[1] * c2[2] - c1[2] * c2[1], c1[2] * c2[0] - c1[0] * c2[2],
                               c1[0] * c2[1] - c1[1] * c2[0]};
  return {normalize_sum(c1, is_zero), normalize_sum(std::array<S, 3>{cross[0], -cross[1], cross[2]}, is_zero)};
}

void require_sl3(const FlagPoint& f) {
  if (f.n() != 3 || !f.parabolic().empty()) throw DomainError("SL3 coordinates need a complete flag with n = 3");
}

}  // namespace

Sl3Coords sl3_coords(const FlagPoint& f) {
  require_sl3(f);
  const Eigen::MatrixXd m = f.to_float();
  const std::array<double, 3> c1{m(0, 0), m(1, 0), m(2, 0)};
  const std::array<double, 3> c2{m(0, 1), m(1, 1), m(2, 1)};
  return coords_from_columns(c1, c2, [](double x) { return x == 0.0; });
}

ExactSl3Coords sl3_coords_exact(const FlagPoint& f) {
  require_sl3(f);
  const RatMatrix& m = f.exact();
  const std::array<Rational, 3> c1{m(0, 0), m(1, 0), m(2, 0)};
  const std::array<Rational, 3> c2{m(0, 1), m(1, 1), m(2, 1)};
  return coords_from_columns(c1, c2, [](const Rational& x) { return sgn(x) == 0; });
}

Sl3Coords to_float(const ExactSl3Coords& c) {
  Sl3Coords out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out.v[k] = c.v[k].get_d();
    out.w[k] = c.w[k].get_d();
  }
  return out;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::PositivePart: return "PositivePart";
    case Membership::NonnegativeBoundary: return "NonnegativeBoundary";
    case Membership::Outside: return "Outside";
  }
  return "?";
}

namespace {

template <class S, class Cmp>
MembershipResult classify(const Sl3CoordsT<S>& c, const S& sum_v_err, const S& sum_w_err, const S& ortho, Cmp within,
                          double tol) {
  if (!within(sum_v_err)) return {Membership::Outside, "v1 + v2 + v3 != 1"};
  if (!within(sum_w_err)) return {Membership::Outside, "w1 + w2 + w3 != 1"};
  if (!within(ortho)) return {Membership::Outside, "v1 w1 - v2 w2 + v3 w3 != 0"};
  bool all_positive = true;
  for (const auto* arr : {&c.v, &c.w})
    for (const auto& x : *arr) {
      if (x < S(-tol)) return {Membership::Outside, "negative coordinate"};
      if (!(x > S(tol))) all_positive = false;
    }
  return {all_positive ? Membership::PositivePart : Membership::NonnegativeBoundary, ""};
}

}  // namespace

MembershipResult sl3_membership(const Sl3Coords& c, double tol) {
  const double sv = c.v[0] + c.v[1] + c.v[2] - 1.0;
  const double sw = c.w[0] + c.w[1] + c.w[2] - 1.0;
  const double q = c.v[0] * c.w[0] - c.v[1] * c.w[1] + c.v[2] * c.w[2];
  for (const auto* arr : {&c.v, &c.w})
    for (double x : *arr)
      if (!std::isfinite(x)) return {Membership::Outside, "non-finite coordinate"};
  return classify<double>(c, sv, sw, q, [tol](double x) { return std::abs(x) <= tol; }, tol);
}

MembershipResult sl3_membership(const ExactSl3Coords& c) {
  const Rational sv = c.v[0] + c.v[1] + c.v[2] - 1;
  const Rational sw = c.w[0] + c.w[1] + c.w[2] - 1;
  const Rational q = c.v[0] * c.w[0] - c.v[1] * c.w[1] + c.v[2] * c.w[2];
  return classify<Rational>(c, sv, sw, q, [](const Rational& x) { return sgn(x) == 0; }, 0.0);
}

}  // namespace tnnflow
