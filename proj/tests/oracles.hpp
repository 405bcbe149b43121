#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace tnnflow::oracle {

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Weyl dimension formula for SL(n), lambda = sum c_i omega_i:
/// prod_{i<j} (sum_{k=i}^{j-1} (c_k + 1)) / (j - i).
inline long weyl_dimension(const std::vector<unsigned>& c) {
  const std::size_t n = c.size() + 1;
  double num = 1.0, den = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0;
      for (std::size_t k = i; k < j; ++k) s += c[k] + 1.0;
      num *= s;
      den *= static_cast<double>(j - i);
    }
  return std::lround(num / den);
}

inline std::size_t inversions(const std::vector<int>& w) {
  std::size_t inv = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] > w[j]) ++inv;
  return inv;
}

/// Bruhat order on S_n by the tableau criterion: v <= w iff for every k the
/// sorted first k values of v are dominated entrywise by those of w.
inline bool bruhat_leq(const std::vector<int>& v, const std::vector<int>& w) {
  for (std::size_t k = 1; k <= v.size(); ++k) {
    std::vector<int> a(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<int> b(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < k; ++i)
      if (a[i] > b[i]) return false;
  }
  return true;
}

/// Number of Bruhat intervals [v, w] in S_n, bucketed by l(w) - l(v).
inline std::vector<std::size_t> bruhat_interval_counts(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::size_t> counts(static_cast<std::size_t>(n * (n - 1) / 2 + 1), 0);
  for (const auto& v : perms)
    for (const auto& w : perms)
      if (bruhat_leq(v, w)) ++counts[inversions(w) - inversions(v)];
  return counts;
}

/// Dominant eigenvalue by power iteration on a shifted matrix (A + shift I).
inline double power_iteration_top(const Eigen::MatrixXd& a, double shift, int iters = 20000) {
  const Eigen::MatrixXd m = a + shift * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows());
  for (int k = 0; k < iters; ++k) {
    v = m * v;
    v /= v.norm();
  }
  return v.dot(a * v) / v.dot(v);
}

/// Cross product.
inline Eigen::Vector3d cross(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.cross(b); }

}  // namespace tnnflow::oracle
