#include "tnnflow/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "tnnflow/error.hpp"

namespace tnnflow {

IndexSet Weight::support() const {
  IndexSet s;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] > 0) s.push_back(i + 1);
  return s;
}

bool Weight::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](unsigned c) { return c == 0; });
}

std::string Weight::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (coeffs[i] > 1) s += std::to_string(coeffs[i]);
    s += "w" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

IndexSet complement(std::size_t n, const IndexSet& s) {
  IndexSet out;
  for (std::size_t i = 1; i < n; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
  return out;
}

Weight lambda_for(std::size_t n, const IndexSet& j) {
  if (n < 2) throw DomainError("lambda_for: n must be at least 2");
  Weight w{std::vector<unsigned>(n - 1, 1)};
  for (std::size_t k : j) {
    if (k < 1 || k >= n) throw DomainError("lambda_for: J is not a subset of I");
    w.coeffs[k - 1] = 0;
  }
  return w;
}

namespace {

struct WedgeOps {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<RatMatrix> E, F, H;
};

std::string subset_label(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(s[k] + 1);
  }
  return out + "}";
}

// e_i sends basis vector i+1 to i (0-based: i <- i+1). On a sorted subset the
// replacement keeps the order since i and i+1 are adjacent, so all signs are +.
WedgeOps wedge_ops(std::size_t n, std::size_t k) {
  WedgeOps w;
  w.subsets = k_subsets(n, k);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < w.subsets.size(); ++a) index[w.subsets[a]] = a;
  const std::size_t d = w.subsets.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    RatMatrix e(d, d), f(d, d), h(d, d);
    for (std::size_t a = 0; a < d; ++a) {
      const auto& s = w.subsets[a];
      const bool has_i = std::binary_search(s.begin(), s.end(), i);
      const bool has_next = std::binary_search(s.begin(), s.end(), i + 1);
      h(a, a) = Rational(static_cast<long>(has_i) - static_cast<long>(has_next));
      if (has_next && !has_i) {
        auto t = s;
        std::replace(t.begin(), t.end(), i + 1, i);
        e(index.at(t), a) = 1;
      }
      if (has_i && !has_next) {
        auto t = s;
        std::replace(t.begin(), t.end(), i, i + 1);
        f(index.at(t), a) = 1;
      }
    }
    w.E.push_back(std::move(e));
    w.F.push_back(std::move(f));
    w.H.push_back(std::move(h));
  }
  return w;
}

// Sum over tensor factors of I (x) ... (x) X_f (x) ... (x) I.
RatMatrix tensor_derivation(const std::vector<const RatMatrix*>& ops, const std::vector<std::size_t>& dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  RatMatrix sum(total, total);
  for (std::size_t f = 0; f < ops.size(); ++f) {
    RatMatrix term = RatMatrix::identity(1);
    for (std::size_t g = 0; g < ops.size(); ++g) term = kron(term, g == f ? *ops[g] : RatMatrix::identity(dims[g]));
    sum += term;
  }
  return sum;
}

class EchelonSpace {
 public:
  explicit EchelonSpace(std::size_t dim) : dim_(dim) {}

  RatVector reduce(RatVector v) const {
    for (std::size_t k = 0; k < vecs_.size(); ++k) {
      const Rational c = v[pivots_[k]];
      if (sgn(c) == 0) continue;
      for (std::size_t r = 0; r < dim_; ++r)
        if (sgn(vecs_[k][r]) != 0) v[r] -= c * vecs_[k][r];
    }
    return v;
  }

  bool insert(const RatVector& raw) {
    RatVector v = reduce(raw);
    std::size_t p = 0;
    while (p < dim_ && sgn(v[p]) == 0) ++p;
    if (p == dim_) return false;
    const Rational s = v[p];
    for (auto& x : v) x /= s;
    for (auto& u : vecs_) {
      const Rational c = u[p];
      if (sgn(c) == 0) continue;
      for (std::size_t r = 0; r < dim_; ++r)
        if (sgn(v[r]) != 0) u[r] -= c * v[r];
    }
    vecs_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t size() const { return vecs_.size(); }
  const std::vector<RatVector>& vectors() const { return vecs_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  std::size_t dim_;
  std::vector<RatVector> vecs_;
  std::vector<std::size_t> pivots_;
};

std::vector<std::size_t> factor_degrees(const Weight& lambda) {
  std::vector<std::size_t> f;
  for (std::size_t i = 0; i < lambda.coeffs.size(); ++i)
    for (unsigned c = 0; c < lambda.coeffs[i]; ++c) f.push_back(i + 1);
  return f;
}

std::vector<std::size_t> factor_dims(std::size_t n, const std::vector<std::size_t>& degrees) {
  std::vector<std::size_t> dims;
  for (auto k : degrees) dims.push_back(k_subsets(n, k).size());
  return dims;
}

// Restriction of an ambient operator to the module, checking invariance.
RatMatrix restrict_to_module(const RepModule& rep, const RatMatrix& ambient_op) {
  RatMatrix m(rep.dim, rep.dim);
  for (std::size_t j = 0; j < rep.dim; ++j) {
    const RatVector image = ambient_op.apply(rep.basis.column(j));
    const RatVector c = rep.coords_of(image);
    for (std::size_t i = 0; i < rep.dim; ++i) m(i, j) = c[i];
  }
  if (!(rep.basis * m == ambient_op * rep.basis)) throw Error("module is not invariant under an ambient operator");
  return m;
}

RepModule assemble(std::size_t n, const Weight& lambda, const std::vector<std::size_t>& degrees) {
  const auto dims = factor_dims(n, degrees);
  std::vector<WedgeOps> wedges;
  for (auto k : degrees) wedges.push_back(wedge_ops(n, k));

  RepModule rep;
  rep.n = n;
  rep.weight = lambda;
  rep.factors = degrees;
  rep.ambient_dim = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());

  std::vector<RatMatrix> amb_e, amb_f, amb_h;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<const RatMatrix*> es, fs, hs;
    for (const auto& w : wedges) {
      es.push_back(&w.E[i]);
      fs.push_back(&w.F[i]);
      hs.push_back(&w.H[i]);
    }
    amb_e.push_back(tensor_derivation(es, dims));
    amb_f.push_back(tensor_derivation(fs, dims));
    amb_h.push_back(tensor_derivation(hs, dims));
  }

  // Highest weight vector: every factor at its first subset {1..k}, i.e. ambient index 0.
  RatVector top(rep.ambient_dim);
  top[0] = 1;
  EchelonSpace space(rep.ambient_dim);
  space.insert(top);
  std::deque<RatVector> queue{top};
  while (!queue.empty()) {
    const RatVector u = std::move(queue.front());
    queue.pop_front();
    for (const auto& f : amb_f) {
      RatVector w = f.apply(u);
      if (space.insert(w)) queue.push_back(std::move(w));
    }
  }

  std::vector<std::size_t> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return space.pivots()[a] < space.pivots()[b]; });
  rep.dim = space.size();
  rep.basis = RatMatrix(rep.ambient_dim, rep.dim);
  for (std::size_t j = 0; j < rep.dim; ++j) {
    const auto& v = space.vectors()[order[j]];
    for (std::size_t r = 0; r < rep.ambient_dim; ++r) rep.basis(r, j) = v[r];
    rep.pivots.push_back(space.pivots()[order[j]]);
  }
  rep.highest_index = 0;

  for (std::size_t j = 0; j < rep.dim; ++j) {
    std::size_t a = rep.pivots[j];
    std::vector<std::size_t> parts(dims.size());
    for (std::size_t f = dims.size(); f-- > 0;) {
      parts[f] = a % dims[f];
      a /= dims[f];
    }
    std::string label;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (f) label += 'x';
      label += subset_label(wedges[f].subsets[parts[f]]);
    }
    rep.labels.push_back(label);
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    rep.E.push_back(restrict_to_module(rep, amb_e[i]));
    rep.F.push_back(restrict_to_module(rep, amb_f[i]));
    rep.H.push_back(restrict_to_module(rep, amb_h[i]));
  }
  return rep;
}

}  // namespace

RatMatrix RepModule::tau() const {
  RatMatrix t(dim, dim);
  for (std::size_t i = 0; i < E.size(); ++i) t += E[i] + F[i];
  return t;
}

RatVector RepModule::coords_of(const RatVector& ambient) const {
  if (ambient.size() != ambient_dim) throw DomainError("coords_of: ambient size mismatch");
  RatVector c(dim);
  for (std::size_t j = 0; j < dim; ++j) c[j] = ambient[pivots[j]];
  return c;
}

Eigen::VectorXd RepModule::coords_of(const Eigen::VectorXd& ambient) const {
  if (static_cast<std::size_t>(ambient.size()) != ambient_dim) throw DomainError("coords_of: ambient size mismatch");
  Eigen::VectorXd c(dim);
  for (std::size_t j = 0; j < dim; ++j) c(static_cast<Eigen::Index>(j)) = ambient(static_cast<Eigen::Index>(pivots[j]));
  return c;
}

Eigen::VectorXd RepModule::to_ambient(const Eigen::VectorXd& coords) const { return basis.to_double() * coords; }

RepModule fundamental_rep(std::size_t n, std::size_t k) {
  if (n < 2) throw DomainError("fundamental_rep: n must be at least 2");
  if (k < 1 || k >= n) throw DomainError("fundamental_rep: k must lie in 1..n-1");
  Weight w{std::vector<unsigned>(n - 1, 0)};
  w.coeffs[k - 1] = 1;
  return assemble(n, w, {k});
}

RepModule build_rep(const Weight& lambda) {
  if (lambda.coeffs.empty()) throw DomainError("build_rep: weight has no coefficients");
  if (lambda.is_zero()) throw DomainError("build_rep: the zero weight is rejected");
  return assemble(lambda.n(), lambda, factor_degrees(lambda));
}

// ---------------------------------------------------------------------------
// Group action

RatMatrix rho(const RepModule& rep, OneParamKind kind, std::size_t i, const Rational& t) {
  if (i < 1 || i >= rep.n) throw DomainError("rho: index out of range");
  switch (kind) {
    case OneParamKind::X: return exp_nilpotent(rep.E[i - 1], t);
    case OneParamKind::Y: return exp_nilpotent(rep.F[i - 1], t);
    case OneParamKind::Coweight: {
      if (sgn(t) == 0) throw DomainError("rho: coweight parameter must be nonzero");
      RatMatrix m(rep.dim, rep.dim);
      for (std::size_t a = 0; a < rep.dim; ++a) {
        const long e = rep.H[i - 1](a, a).get_num().get_si();
        Rational v = 1;
        const Rational base = e >= 0 ? t : Rational(1 / t);
        for (long k = 0; k < std::labs(e); ++k) v *= base;
        m(a, a) = v;
      }
      return m;
    }
  }
  throw DomainError("rho: unknown kind");
}

RatMatrix rho(const RepModule& rep, const FactorizationParams& params, Side side) {
  params.validate();
  if (params.word.n != rep.n) throw DomainError("rho: parameters and module disagree on n");
  auto word = [&](const RatVector& t, OneParamKind kind) {
    RatMatrix m = RatMatrix::identity(rep.dim);
    for (std::size_t k = 0; k < params.word.length(); ++k) {
      if (sgn(t[k]) == 0) continue;
      m = m * rho(rep, kind, params.word.letters[k], t[k]);
    }
    return m;
  };
  switch (side) {
    case Side::Upper: return word(params.t, OneParamKind::X);
    case Side::Lower: return word(params.t, OneParamKind::Y);
    case Side::Group: {
      RatMatrix m = word(params.t, OneParamKind::X);
      for (std::size_t i = 0; i < params.torus.size(); ++i) m = m * rho(rep, OneParamKind::Coweight, i + 1, params.torus[i]);
      return m * word(params.t_lower.empty() ? params.t : params.t_lower, OneParamKind::Y);
    }
  }
  throw DomainError("rho: unknown side");
}

namespace {

template <class Matrix, class Det>
auto compound_column_vector(const Matrix& g, std::size_t n, std::size_t k, Det det) {
  // Minors of the first k columns, rows running over k-subsets in lex order.
  std::vector<std::size_t> cols(k);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<decltype(det(g, cols, cols))> out;
  for (const auto& rows : k_subsets(n, k)) out.push_back(det(g, rows, cols));
  return out;
}

RatMatrix compound(const RatMatrix& g, std::size_t k) {
  const auto subsets = k_subsets(g.rows(), k);
  RatMatrix c(subsets.size(), subsets.size());
  for (std::size_t a = 0; a < subsets.size(); ++a)
    for (std::size_t b = 0; b < subsets.size(); ++b) c(a, b) = determinant(submatrix(g, subsets[a], subsets[b]));
  return c;
}

RatVector exact_top_image(const RepModule& rep, const RatMatrix& g) {
  auto det = [](const RatMatrix& m, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    return determinant(submatrix(m, r, c));
  };
  RatVector amb{Rational(1)};
  for (auto k : rep.factors) {
    const auto piece = compound_column_vector(g, rep.n, k, det);
    amb = kron(amb, piece);
  }
  return amb;
}

Eigen::VectorXd float_top_image(const RepModule& rep, const Eigen::MatrixXd& g) {
  auto det = [](const Eigen::MatrixXd& m, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    Eigen::MatrixXd s(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            m(static_cast<Eigen::Index>(r[i]), static_cast<Eigen::Index>(c[j]));
    return determinant(s);
  };
  Eigen::VectorXd amb = Eigen::VectorXd::Ones(1);
  for (auto k : rep.factors) {
    const auto piece = compound_column_vector(g, rep.n, k, det);
    amb = kron(amb, Eigen::Map<const Eigen::VectorXd>(piece.data(), static_cast<Eigen::Index>(piece.size())).eval());
  }
  return amb;
}

}  // namespace

RatMatrix rho(const RepModule& rep, const RatMatrix& g) {
  if (g.rows() != rep.n || g.cols() != rep.n) throw DomainError("rho: matrix size does not match the module");
  RatMatrix amb = RatMatrix::identity(1);
  for (auto k : rep.factors) amb = kron(amb, compound(g, k));
  return restrict_to_module(rep, amb);
}

RatVector psi_exact(const RepModule& rep, const RatMatrix& g) {
  if (g.rows() != rep.n || g.cols() != rep.n) throw DomainError("psi: matrix size does not match the module");
  const RatVector amb = exact_top_image(rep, g);
  RatVector c = rep.coords_of(amb);
  if (rep.basis.apply(c) != amb) throw Error("psi: image of the highest weight line left the module");
  return normalize_first_nonzero(std::move(c));
}

RatVector psi_exact(const RepModule& rep, const FactorizationParams& params, Side side) {
  const RatMatrix m = rho(rep, params, side);
  return normalize_first_nonzero(m.column(rep.highest_index));
}

LineCoords to_line(const RatVector& exact) {
  Eigen::VectorXd v(exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) v(static_cast<Eigen::Index>(i)) = exact[i].get_d();
  return LineCoords{v, LineCoords::Normalization::FirstNonzero};
}

LineCoords psi(const RepModule& rep, const Eigen::MatrixXd& g) {
  if (static_cast<std::size_t>(g.rows()) != rep.n || static_cast<std::size_t>(g.cols()) != rep.n)
    throw DomainError("psi: matrix size does not match the module");
  return LineCoords{rep.coords_of(float_top_image(rep, g)), LineCoords::Normalization::UnitNorm}.normalized();
}

LineCoords psi(const RepModule& rep, const GroupElement& g) {
  if (g.field() == Field::Rational) return to_line(psi_exact(rep, g.exact()));
  return psi(rep, g.to_float());
}

LineCoords psi(const RepModule& rep, const FlagPoint& flag) {
  if (flag.field() == Field::Rational) return to_line(psi_exact(rep, flag.exact()));
  return psi(rep, flag.to_float());
}

LineCoords LineCoords::normalized() const {
  const double nrm = vec.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DomainError("line representative must be a nonzero finite vector");
  Eigen::Index arg = 0;
  vec.cwiseAbs().maxCoeff(&arg);
  const double sign = vec(arg) < 0 ? -1.0 : 1.0;
  return LineCoords{vec * (sign / nrm), Normalization::UnitNorm};
}

// ---------------------------------------------------------------------------
// Inverse embedding

namespace {

// Subspace with the given (decomposable) Plücker vector, as n x k columns.
Eigen::MatrixXd subspace_from_pluecker(const Eigen::VectorXd& p, std::size_t n, std::size_t k) {
  const auto subsets = k_subsets(n, k);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < subsets.size(); ++a) index[subsets[a]] = a;
  Eigen::Index best = 0;
  p.cwiseAbs().maxCoeff(&best);
  const auto& star = subsets[static_cast<std::size_t>(best)];
  const double pivot = p(best);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> s = star;
      s[j] = i;
      if (std::count(s.begin(), s.end(), i) > 1) continue;
      // Sign of the permutation sorting s.
      int sign = 1;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          if (s[a] > s[b]) sign = -sign;
      std::sort(s.begin(), s.end());
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sign * p(static_cast<Eigen::Index>(index.at(s))) / pivot;
    }
  }
  return u;
}

// Splits a rank-one tensor into its factors (each up to scale).
std::vector<Eigen::VectorXd> split_rank_one(const Eigen::VectorXd& a, const std::vector<std::size_t>& dims) {
  Eigen::Index arg = 0;
  a.cwiseAbs().maxCoeff(&arg);
  std::vector<std::size_t> idx(dims.size());
  std::size_t rest = static_cast<std::size_t>(arg);
  for (std::size_t f = dims.size(); f-- > 0;) {
    idx[f] = rest % dims[f];
    rest /= dims[f];
  }
  std::vector<Eigen::VectorXd> out;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dims[f]));
    for (std::size_t x = 0; x < dims[f]; ++x) {
      std::size_t flat = 0;
      for (std::size_t g = 0; g < dims.size(); ++g) flat = flat * dims[g] + (g == f ? x : idx[g]);
      v(static_cast<Eigen::Index>(x)) = a(static_cast<Eigen::Index>(flat));
    }
    out.push_back(v);
  }
  return out;
}

// Orthonormal directions of `candidates` orthogonal to the columns of `current`.
Eigen::MatrixXd extend_basis(const Eigen::MatrixXd& current, const Eigen::MatrixXd& candidates, Eigen::Index count) {
  Eigen::MatrixXd proj = candidates;
  if (current.cols() > 0) {
    const Eigen::MatrixXd q = current.householderQr().householderQ() * Eigen::MatrixXd::Identity(current.rows(), current.cols());
    proj -= q * (q.transpose() * candidates);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

}  // namespace

FlagPoint line_to_flag(const RepModule& rep, const LineCoords& line, double tol) {
  if (static_cast<std::size_t>(line.vec.size()) != rep.dim) throw DomainError("line_to_flag: dimension mismatch");
  const auto dims = factor_dims(rep.n, rep.factors);
  const auto parts = split_rank_one(rep.to_ambient(line.vec), dims);
  const auto n = static_cast<Eigen::Index>(rep.n);
  Eigen::MatrixXd g(n, 0);
  std::size_t have = 0;
  for (std::size_t f = 0; f < rep.factors.size(); ++f) {
    const std::size_t k = rep.factors[f];
    if (k <= have) continue;  // repeated degree
    const Eigen::MatrixXd sub = subspace_from_pluecker(parts[f], rep.n, k);
    const Eigen::MatrixXd extra = extend_basis(g, sub, static_cast<Eigen::Index>(k - have));
    Eigen::MatrixXd next(n, g.cols() + extra.cols());
    next << g, extra;
    g = next;
    have = k;
  }
  if (have < rep.n) {
    const Eigen::MatrixXd extra = extend_basis(g, Eigen::MatrixXd::Identity(n, n), n - static_cast<Eigen::Index>(have));
    Eigen::MatrixXd next(n, n);
    next << g, extra;
    g = next;
  }
  return flag_of(g, rep.parabolic(), tol);
}

// ---------------------------------------------------------------------------
// Eigenbasis chart

Chart eigenchart(const RepModule& rep) {
  if (rep.dim < 2) throw DomainError("eigenchart: module must have dimension at least 2");
  const Eigen::MatrixXd b = rep.basis.to_double();
  const Eigen::MatrixXd gram = b.transpose() * b;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("eigenchart: Gram matrix is not positive definite");
  Chart chart;
  chart.to_ortho = llt.matrixU();
  chart.from_ortho = chart.to_ortho.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  Eigen::MatrixXd sym = chart.to_ortho * rep.tau().to_double() * chart.from_ortho;
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error("eigenchart: eigensolver failed");
  const Eigen::Index d = sym.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) { return es.eigenvalues()(a) > es.eigenvalues()(c); });
  chart.V.resize(d, d);
  chart.mu.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    chart.V.col(k) = v;
    chart.mu(k) = es.eigenvalues()(order[static_cast<std::size_t>(k)]);
  }
  chart.N = static_cast<std::size_t>(d - 1);
  if (chart.spectral_gap() < kMinSpectralGap) {
    throw SpectralGapError("eigenchart: top eigenvalue of tau is not simple (gap " +
                           std::to_string(chart.spectral_gap()) + ")");
  }
  return chart;
}

ChartPoint chart_coords(const Chart& chart, const LineCoords& line) {
  if (line.vec.size() != chart.V.rows()) throw DomainError("chart_coords: dimension mismatch");
  const Eigen::VectorXd y = chart.to_ortho * line.vec;
  const Eigen::VectorXd c = chart.V.transpose() * y;
  if (!(std::abs(c(0)) > 1e-13 * y.norm())) {
    throw ChartOverflow("chart_coords: line is orthogonal to the top eigenvector");
  }
  return ChartPoint{c.tail(static_cast<Eigen::Index>(chart.N)) / c(0), false};
}

LineCoords chart_line(const Chart& chart, const ChartPoint& p) {
  if (static_cast<std::size_t>(p.coords.size()) != chart.N) throw DomainError("chart_line: dimension mismatch");
  if (!p.coords.allFinite()) throw DomainError("chart_line: non-finite chart point");
  const Eigen::VectorXd y = chart.V.col(0) + chart.V.rightCols(static_cast<Eigen::Index>(chart.N)) * p.coords;
  return LineCoords{chart.from_ortho * y, LineCoords::Normalization::UnitNorm}.normalized();
}

std::size_t weyl_dimension(const Weight& lambda) {
  // prod_{i<j} (sum_{k=i}^{j-1} (c_k + 1)) / (j - i), accumulated exactly.
  const std::size_t n = lambda.n();
  Rational d = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      long s = 0;
      for (std::size_t k = i; k < j; ++k) s += static_cast<long>(lambda.coeffs[k]) + 1;
      d *= Rational(s, static_cast<long>(j - i));
    }
  return static_cast<std::size_t>(d.get_num().get_ui());
}

std::string representation_identity_failure(const RepModule& rep) {
  const std::size_t r = rep.n - 1;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const std::string ij = std::to_string(i + 1) + "," + std::to_string(j + 1);
      const RatMatrix c = commutator(rep.E[i], rep.F[j]);
      if (i == j ? !(c == rep.H[i]) : !c.is_zero()) return "[E_i, F_j] for i,j = " + ij;
      const long a = i == j ? 2 : (i + 1 == j || j + 1 == i ? -1 : 0);
      if (!(commutator(rep.H[i], rep.E[j]) == Rational(a) * rep.E[j])) return "[H_i, E_j] for i,j = " + ij;
      if (!(commutator(rep.H[i], rep.F[j]) == Rational(-a) * rep.F[j])) return "[H_i, F_j] for i,j = " + ij;
    }
  return "";
}

}  // namespace tnnflow

