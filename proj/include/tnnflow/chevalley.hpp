#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <variant>
#include <vector>

#include "tnnflow/matrix.hpp"

namespace tnnflow {

/// Chevalley data of SL(n): e_i, f_i, h_i for i = 1, ..., n-1 (stored 0-based).
struct Pinning {
  std::size_t n = 0;
  std::vector<RatMatrix> e;
  std::vector<RatMatrix> f;
  std::vector<RatMatrix> h;

  std::size_t rank() const { return n - 1; }
  /// tau = sum_i (e_i + f_i).
  RatMatrix tau() const;
};

Pinning build_pinning(std::size_t n);

enum class Field { Rational, Float };

/// An element of SL(n) over exact rationals or binary64.
///
/// The determinant is checked on construction: exactly for rational
/// entries, within 1e-12 relative for float entries.
class GroupElement {
 public:
  explicit GroupElement(RatMatrix m);
  explicit GroupElement(Eigen::MatrixXd m);

  static GroupElement identity(std::size_t n);

  Field field() const { return std::holds_alternative<RatMatrix>(m_) ? Field::Rational : Field::Float; }
  std::size_t size() const;

  /// Throws DomainError in float mode.
  const RatMatrix& exact() const;
  Eigen::MatrixXd to_float() const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  std::variant<RatMatrix, Eigen::MatrixXd> m_;
};

enum class OneParamKind { X, Y, Coweight };

/// x_i(t) = I + t e_i, y_i(t) = I + t f_i, or the coweight alpha_i^vee(t).
/// `i` is 1-based, as in the usual index set I = {1, ..., n-1}.
GroupElement one_param(const Pinning& p, OneParamKind kind, std::size_t i, const Rational& t);

/// exp(t tau) through the spectral decomposition of the symmetric matrix tau.
GroupElement exp_tau(const Pinning& p, double t);

/// exp(t tau) as a plain matrix (no determinant check), for use on large |t|.
Eigen::MatrixXd exp_tau_matrix(const Pinning& p, double t);

/// The exact rational image of a float matrix, last row divided by the determinant so the
/// result is exactly unimodular. Throws DomainError if the determinant is not within 1e-8 of 1.
GroupElement rationalize_unimodular(const Eigen::MatrixXd& m);

}  // namespace tnnflow
