#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "tnnflow/chevalley.hpp"
#include "tnnflow/rng.hpp"
#include "tnnflow/totpos.hpp"

namespace tnnflow {

/// The diagram involution i -> n - i of SL(n) and its realization on the group,
/// sigma(g) = S (g^T)^{-1} S^{-1} with S antidiagonal, S(i, n-1-i) = (-1)^i.
struct Folding {
  std::size_t n = 0;
  std::vector<std::size_t> sigma;  ///< sigma[i-1] = n - i
  RatMatrix S;
  RatMatrix S_inv;

  std::size_t sigma_of(std::size_t i) const { return sigma.at(i - 1); }
  /// sigma on group elements (any invertible matrix).
  RatMatrix apply(const RatMatrix& g) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& g) const;
  /// Differential on the Lie algebra: X -> -S X^T S^{-1}.
  RatMatrix apply_lie(const RatMatrix& x) const;
  bool is_stable(const IndexSet& j) const;
};

/// Builds S and verifies sigma(x_i(t)) = x_{n-i}(t), sigma(y_i(t)) = y_{n-i}(t) and
/// sigma(e_i) = e_{n-i} exactly; throws Error if the sign pattern does not fix the pinning.
Folding build_folding(std::size_t n);

/// sigma on flags: V_k -> S (V_{n-k})^perp. Exact for rational flags, QR based for float ones.
FlagPoint sigma_flag(const Folding& f, const FlagPoint& p);

/// Groups of letters of a sigma-compatible reduced word for w0: commuting pairs (i, n-i) share
/// a parameter and the middle triple (k, k+1, k) of odd n carries (a, 2a, a).
struct FoldedWord {
  ReducedWord word;
  std::vector<std::vector<std::size_t>> groups;  ///< positions in word.letters
  std::vector<std::vector<long>> weights;        ///< parameter multiple of each position
};

/// The folded Coxeter element raised to floor(n/2), checked to be reduced for w0.
FoldedWord folded_word(const Folding& f);

/// Factorization parameters constant along each group (one positive value per group).
FactorizationParams symmetric_factorization(const Folding& f, const FoldedWord& w, Rng& rng, double zero_prob = 0.0);

struct FoldingSample {
  std::size_t index = 0;
  bool exact_fixed = false;
  std::vector<double> flow_deviation;  ///< one per flow time, as a subspace distance
};

struct FoldingReport {
  std::size_t n = 0;
  IndexSet j;
  bool symmetric = true;
  std::vector<double> times;
  double tol = 1e-10;
  std::size_t count = 0;
  std::size_t exact_fixed = 0;
  std::vector<std::size_t> flow_fixed;  ///< per time
  double worst_deviation = 0.0;
  std::vector<FoldingSample> failures;
  std::string realization;

  bool pass() const;
};

/// (a) sigma(P) = P exactly and (b) sigma(exp(t tau) P) = exp(t tau) P within tol for sampled
/// sigma-fixed TNN flags. With symmetric = false the parameters are drawn independently
/// (a negative control).
FoldingReport fixed_locus_flow_check(const Folding& f, const IndexSet& j, const std::vector<double>& times,
                                     std::size_t count, Rng& rng, bool symmetric = true, double tol = 1e-10);

}  // namespace tnnflow
