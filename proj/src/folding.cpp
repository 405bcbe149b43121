#include "tnnflow/folding.hpp"

#include <algorithm>
#include <cmath>

#include "tnnflow/error.hpp"

namespace tnnflow {

RatMatrix Folding::apply(const RatMatrix& g) const {
  const auto inv = inverse(g.transpose());
  if (!inv) throw DomainError("sigma: matrix is singular");
  return S * *inv * S_inv;
}

Eigen::MatrixXd Folding::apply(const Eigen::MatrixXd& g) const {
  return S.to_double() * g.transpose().partialPivLu().inverse() * S_inv.to_double();
}

RatMatrix Folding::apply_lie(const RatMatrix& x) const { return Rational(-1) * (S * x.transpose() * S_inv); }

bool Folding::is_stable(const IndexSet& j) const {
  return std::all_of(j.begin(), j.end(), [&](std::size_t i) { return std::find(j.begin(), j.end(), sigma_of(i)) != j.end(); });
}

Folding build_folding(std::size_t n) {
  if (n < 2) throw DomainError("folding needs n >= 2");
  Folding f;
  f.n = n;
  for (std::size_t i = 1; i < n; ++i) f.sigma.push_back(n - i);
  f.S = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) f.S(i, n - 1 - i) = i % 2 == 0 ? 1 : -1;
  f.S_inv = *inverse(f.S);

  const Pinning p = build_pinning(n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t s = f.sigma_of(i);
    if (!(f.apply_lie(p.e[i - 1]) == p.e[s - 1]) || !(f.apply_lie(p.f[i - 1]) == p.f[s - 1]))
      throw Error("folding: S does not map the pinning of node " + std::to_string(i) + " to node " + std::to_string(s));
    for (const Rational& t : {Rational(1), Rational(2, 3)}) {
      if (!(f.apply(one_param(p, OneParamKind::X, i, t).exact()) == one_param(p, OneParamKind::X, s, t).exact()) ||
          !(f.apply(one_param(p, OneParamKind::Y, i, t).exact()) == one_param(p, OneParamKind::Y, s, t).exact()))
        throw Error("folding: sigma(x_i(t)) != x_sigma(i)(t) for i = " + std::to_string(i));
    }
  }
  return f;
}

namespace {

// Column j of the image is S q_{n+1-j}: the trailing columns of Q span V_m^perp.
Eigen::MatrixXd sigma_representative(const Folding& f, const Eigen::MatrixXd& rep) {
  const auto n = static_cast<Eigen::Index>(f.n);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rep);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd rev(n, n);
  for (Eigen::Index j = 0; j < n; ++j) rev.col(j) = q.col(n - 1 - j);
  return f.S.to_double() * rev;
}

// Exact Gram-Schmidt without normalization: g U with U unipotent upper triangular, so the
// flag is unchanged while the float columns become orthogonal.
Eigen::MatrixXd orthogonal_representative(const RatMatrix& g) {
  const std::size_t n = g.rows();
  std::vector<RatVector> w;
  for (std::size_t j = 0; j < n; ++j) {
    RatVector v = g.column(j);
    for (const auto& u : w) {
      Rational num = 0, den = 0;
      for (std::size_t r = 0; r < n; ++r) {
        num += v[r] * u[r];
        den += u[r] * u[r];
      }
      const Rational c = num / den;
      for (std::size_t r = 0; r < n; ++r) v[r] -= c * u[r];
    }
    w.push_back(std::move(v));
  }
  Eigen::MatrixXd out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = to_double(w[j][r]);
    out.col(static_cast<Eigen::Index>(j)).normalize();
  }
  return out;
}

}  // namespace

FlagPoint sigma_flag(const Folding& f, const FlagPoint& p) {
  const std::size_t n = f.n;
  if (p.n() != n) throw DomainError("sigma_flag: size mismatch");
  if (!f.is_stable(p.parabolic())) throw DomainError("sigma_flag: J is not sigma-stable");
  if (p.field() == Field::Rational) return flag_of(f.apply(p.exact()), p.parabolic());
  return flag_of(sigma_representative(f, p.to_float()), p.parabolic());
}

FoldedWord folded_word(const Folding& f) {
  const std::size_t n = f.n;
  FoldedWord out;
  out.word.n = n;
  for (std::size_t r = 0; r < n / 2; ++r)
    for (std::size_t i = n / 2; i >= 1; --i) {
      const std::size_t s = f.sigma_of(i);
      std::vector<std::size_t> letters;
      std::vector<long> weights;
      if (s == i) {
        letters = {i};
        weights = {1};
      } else if (s == i + 1) {
        letters = {i, i + 1, i};
        weights = {1, 2, 1};
      } else {
        letters = {i, s};
        weights = {1, 1};
      }
      std::vector<std::size_t> group;
      for (auto l : letters) {
        group.push_back(out.word.letters.size());
        out.word.letters.push_back(l);
      }
      out.groups.push_back(std::move(group));
      out.weights.push_back(std::move(weights));
    }
  if (!is_reduced_word_for_w0(n, out.word.letters)) throw Error("folded word is not a reduced word for w0");
  return out;
}

FactorizationParams symmetric_factorization(const Folding& f, const FoldedWord& w, Rng& rng, double zero_prob) {
  FactorizationParams fp;
  fp.word = w.word;
  fp.t.assign(w.word.length(), Rational(0));
  fp.t_lower.assign(w.word.length(), Rational(0));
  for (auto* target : {&fp.t, &fp.t_lower})
    for (std::size_t g = 0; g < w.groups.size(); ++g) {
      const Rational a = rng.coin(zero_prob) ? Rational(0) : rational_round(rng.log_uniform(-2.0, 2.0), 12);
      for (std::size_t k = 0; k < w.groups[g].size(); ++k) (*target)[w.groups[g][k]] = a * w.weights[g][k];
    }
  // Torus parameters constant on sigma-orbits.
  fp.torus.assign(f.n - 1, Rational(1));
  for (std::size_t i = 1; i < f.n; ++i) {
    if (f.sigma_of(i) < i) {
      fp.torus[i - 1] = fp.torus[f.sigma_of(i) - 1];
      continue;
    }
    fp.torus[i - 1] = rational_round(rng.log_uniform(-1.0, 1.0), 12);
  }
  return fp;
}

bool FoldingReport::pass() const {
  if (count == 0 || exact_fixed != count) return false;
  return std::all_of(flow_fixed.begin(), flow_fixed.end(), [&](std::size_t k) { return k == count; });
}

FoldingReport fixed_locus_flow_check(const Folding& f, const IndexSet& j, const std::vector<double>& times,
                                     std::size_t count, Rng& rng, bool symmetric, double tol) {
  if (!f.is_stable(j)) throw DomainError("J = " + format_index_set(j) + " is not sigma-stable");
  FoldingReport r;
  r.n = f.n;
  r.j = j;
  r.symmetric = symmetric;
  r.times = times;
  r.tol = tol;
  r.count = count;
  r.flow_fixed.assign(times.size(), 0);
  r.realization = "sigma(g) = S (g^T)^-1 S^-1, S antidiagonal with signs +1, -1, +1, ...";

  const Pinning pin = build_pinning(f.n);
  const FoldedWord word = folded_word(f);
  for (std::size_t s = 0; s < count; ++s) {
    FactorizationParams fp = symmetric_factorization(f, word, rng, 0.2);
    if (!symmetric) {
      // Independent draws break the symmetry with probability one.
      for (auto* v : {&fp.t, &fp.t_lower})
        for (auto& x : *v) x = rational_round(rng.log_uniform(-2.0, 2.0), 12);
    }
    const RatMatrix g = sample_positive(pin, fp, Side::Group).exact();
    const FlagPoint p = flag_of(g, j);
    FoldingSample sample{s, sigma_flag(f, p) == p, {}};
    const Eigen::MatrixXd ortho = orthogonal_representative(g);
    bool ok = sample.exact_fixed;
    if (sample.exact_fixed) ++r.exact_fixed;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Eigen::MatrixXd moved = exp_tau_matrix(pin, times[k]) * ortho;
      const double dev =
          subspace_distance(flag_projectors(sigma_representative(f, moved), j), flag_projectors(moved, j));
      sample.flow_deviation.push_back(dev);
      r.worst_deviation = std::max(r.worst_deviation, dev);
      if (dev <= tol)
        ++r.flow_fixed[k];
      else
        ok = false;
    }
    if (!ok) r.failures.push_back(std::move(sample));
  }
  return r;
}

}  // namespace tnnflow
