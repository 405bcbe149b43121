#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tnnflow/rational.hpp"

namespace tnnflow {

/// Dense row-major matrix over exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);
  static RatMatrix diagonal(std::span<const Rational> d);
  /// Exact image of a float matrix (every binary64 is a dyadic rational).
  static RatMatrix from_double(const Eigen::MatrixXd& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatMatrix transpose() const;
  bool is_zero() const;
  bool is_diagonal() const;
  Eigen::MatrixXd to_double() const;

  RatVector column(std::size_t c) const;
  RatVector apply(std::span<const Rational> v) const;

  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const Rational& s);

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
  friend RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b);
RatMatrix kron(const RatMatrix& a, const RatMatrix& b);
RatMatrix submatrix(const RatMatrix& m, std::span<const std::size_t> rows,
                    std::span<const std::size_t> cols);

Rational determinant(RatMatrix m);
std::size_t rank(RatMatrix m);
std::optional<RatMatrix> inverse(const RatMatrix& m);

/// exp(t N) for nilpotent N, summed exactly until the powers vanish.
RatMatrix exp_nilpotent(const RatMatrix& nilpotent, const Rational& t);

/// Kronecker product of vectors, first factor most significant.
RatVector kron(std::span<const Rational> a, std::span<const Rational> b);
Eigen::VectorXd kron(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Scales so that the first nonzero entry is 1. Zero vectors are returned unchanged.
RatVector normalize_first_nonzero(RatVector v);

/// Determinant of a small float matrix by partial-pivot elimination.
double determinant(const Eigen::MatrixXd& m);

/// Sorted k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k);

}  // namespace tnnflow
