#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "tnnflow/chevalley.hpp"
#include "tnnflow/matrix.hpp"
#include "tnnflow/totpos.hpp"

namespace tnnflow {

/// Dominant weight lambda = sum_i c_i omega_i of SL(n).
struct Weight {
  std::vector<unsigned> coeffs;  ///< c_1, ..., c_{n-1}

  std::size_t n() const { return coeffs.size() + 1; }
  IndexSet support() const;
  bool is_zero() const;
  std::string to_string() const;
};

/// The minimal weight with support I \ J: c_i = 1 off J, 0 on J.
Weight lambda_for(std::size_t n, const IndexSet& j);

/// Complement I \ S of an index set.
IndexSet complement(std::size_t n, const IndexSet& s);

/// A highest weight module realized inside a tensor product of wedge powers.
///
/// Basis vectors are the columns of `basis` (ambient coordinates), in reduced
/// echelon form: each has a 1 at its own pivot and 0 at the other pivots, and
/// the columns are sorted by pivot. For a fundamental weight the basis is the
/// wedge basis itself.
struct RepModule {
  std::size_t n = 0;
  Weight weight;
  std::size_t dim = 0;
  std::vector<std::string> labels;
  std::vector<RatMatrix> E, F, H;
  std::size_t highest_index = 0;

  std::vector<std::size_t> factors;  ///< wedge degree of each tensor factor
  std::size_t ambient_dim = 0;
  RatMatrix basis;                   ///< ambient_dim x dim
  std::vector<std::size_t> pivots;

  /// tau = sum_i (E_i + F_i) in the module basis.
  RatMatrix tau() const;
  /// Module coordinates of an ambient vector that lies in the module (read at the pivots).
  RatVector coords_of(const RatVector& ambient) const;
  Eigen::VectorXd coords_of(const Eigen::VectorXd& ambient) const;
  Eigen::VectorXd to_ambient(const Eigen::VectorXd& coords) const;
  /// Parabolic set J with supp(lambda) = I \ J.
  IndexSet parabolic() const { return complement(n, weight.support()); }
  bool is_minuscule() const { return factors.size() == 1; }
};

/// Weyl dimension formula for SL(n).
std::size_t weyl_dimension(const Weight& lambda);

/// Exact check of [E_i, F_j] = delta_ij H_i, [H_i, E_j] = a_ij E_j, [H_i, F_j] = -a_ij F_j.
/// Returns an empty string on success, otherwise the first failing identity.
std::string representation_identity_failure(const RepModule& rep);

/// Lambda^k(R^n) with the wedge basis of k-subsets in lexicographic order.
RepModule fundamental_rep(std::size_t n, std::size_t k);

/// Cartan component of the tensor product of wedge powers, found by closing
/// the highest weight vector under all F_i with exact row reduction.
RepModule build_rep(const Weight& lambda);

/// Exact action of x_i(t), y_i(t) or alpha_i^vee(t) on the module.
RatMatrix rho(const RepModule& rep, OneParamKind kind, std::size_t i, const Rational& t);
/// Exact action of a factorized group element, built factor by factor.
RatMatrix rho(const RepModule& rep, const FactorizationParams& params, Side side);
/// Exact action of an arbitrary rational matrix via its compound matrices.
RatMatrix rho(const RepModule& rep, const RatMatrix& g);

/// A line in the module, as a representative vector in module coordinates.
struct LineCoords {
  enum class Normalization { FirstNonzero, UnitNorm };
  Eigen::VectorXd vec;
  Normalization normalization = Normalization::UnitNorm;

  /// Unit norm, sign chosen so the entry of largest magnitude is positive.
  LineCoords normalized() const;
};

/// g applied to the highest weight line, exactly, first nonzero coordinate scaled to 1.
RatVector psi_exact(const RepModule& rep, const RatMatrix& g);
RatVector psi_exact(const RepModule& rep, const FactorizationParams& params, Side side);
/// Float path: compound-matrix action of g (or of the flag representative).
LineCoords psi(const RepModule& rep, const GroupElement& g);
LineCoords psi(const RepModule& rep, const Eigen::MatrixXd& g);
LineCoords psi(const RepModule& rep, const FlagPoint& flag);
LineCoords to_line(const RatVector& exact);

/// Inverse of psi on its image: the flag whose embedding is the given line.
FlagPoint line_to_flag(const RepModule& rep, const LineCoords& line, double tol = 1e-12);

/// Eigenbasis chart of the tau action, eigenvalues sorted descending.
struct Chart {
  Eigen::MatrixXd V;           ///< orthogonal, columns v_0..v_N in orthonormal coordinates
  Eigen::VectorXd mu;          ///< mu_0 > mu_1 >= ... >= mu_N
  Eigen::MatrixXd to_ortho;    ///< module coordinates -> orthonormal coordinates
  Eigen::MatrixXd from_ortho;  ///< inverse of to_ortho
  std::size_t N = 0;

  double spectral_gap() const { return mu(0) - mu(1); }
};

/// Minimum separation mu_0 - mu_1 accepted by eigenchart.
inline constexpr double kMinSpectralGap = 1e-8;

Chart eigenchart(const RepModule& rep);

struct ChartPoint {
  Eigen::VectorXd coords;
  bool overflow = false;  ///< set when a flow produced non-finite coordinates

  double norm() const { return coords.norm(); }
};

ChartPoint chart_coords(const Chart& chart, const LineCoords& line);
LineCoords chart_line(const Chart& chart, const ChartPoint& p);

}  // namespace tnnflow
