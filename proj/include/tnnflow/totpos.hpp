#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "tnnflow/chevalley.hpp"
#include "tnnflow/matrix.hpp"
#include "tnnflow/rng.hpp"

namespace tnnflow {

/// Subset of I = {1, ..., n-1}, sorted, 1-based.
using IndexSet = std::vector<std::size_t>;

IndexSet parse_index_set(const std::string& text, std::size_t n);
std::string format_index_set(const IndexSet& j);

struct ReducedWord {
  std::size_t n = 0;
  std::vector<std::size_t> letters;  // 1-based

  std::size_t length() const { return letters.size(); }
};

/// Product s_{i1} ... s_{il} as a permutation in one-line notation (0-based images).
std::vector<std::size_t> word_permutation(std::size_t n, const std::vector<std::size_t>& letters);
bool is_reduced_word_for_w0(std::size_t n, const std::vector<std::size_t>& letters);

/// The staircase word (1, 2,1, 3,2,1, ...), validated against the longest permutation.
ReducedWord standard_word_w0(std::size_t n);

struct FactorizationParams {
  ReducedWord word;
  RatVector t;        ///< parameters of the unipotent factor(s)
  RatVector t_lower;  ///< lower factor of a group sample; empty reuses t
  RatVector torus;    ///< n-1 positive coweight parameters; empty means identity

  /// Throws DomainError on negative parameters, nonpositive torus entries or size mismatch.
  void validate() const;
  bool all_positive() const;
};

enum class Side { Upper, Lower, Group };

/// Upper: x_{i1}(t1)...x_{il}(tl); Lower: the y analogue; Group: upper * torus * lower.
GroupElement sample_positive(const Pinning& p, const FactorizationParams& params, Side side);

struct SamplingOptions {
  double log_lo = -3.0;
  double log_hi = 3.0;
  int bits = 20;           ///< parameters are rounded to multiples of 2^-bits
  double zero_prob = 0.0;  ///< chance that each parameter is set to exactly 0
};

/// Log-uniform parameters on [e^log_lo, e^log_hi] along the staircase word.
FactorizationParams random_factorization(std::size_t n, Rng& rng, const SamplingOptions& opts = {});

enum class Positivity { TotallyPositive, TotallyNonnegative, Neither };
std::string to_string(Positivity p);

struct Minor {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  Rational value;
};

/// Every square minor of every size, rows and columns in lexicographic order.
std::vector<Minor> all_minors(const RatMatrix& m);

/// Classification by exhaustive minor enumeration. Rejects float-mode input.
Positivity is_tnn_matrix(const GroupElement& g);

/// A point of the partial flag variety G/P_J, stored as a canonical representative.
///
/// The canonical form is obtained by column elimination: within each block of
/// columns delimited by I \ J, every column has a pivot (its last nonzero
/// entry) equal to 1 and is zero on the pivot rows of all other columns of the
/// block and of earlier blocks. Columns in a block are ordered by decreasing
/// pivot row.
class FlagPoint {
 public:
  FlagPoint(std::size_t n, IndexSet j, RatMatrix canon) : n_(n), j_(std::move(j)), canon_(std::move(canon)) {}
  FlagPoint(std::size_t n, IndexSet j, Eigen::MatrixXd canon) : n_(n), j_(std::move(j)), canon_(std::move(canon)) {}

  std::size_t n() const { return n_; }
  const IndexSet& parabolic() const { return j_; }
  Field field() const { return std::holds_alternative<RatMatrix>(canon_) ? Field::Rational : Field::Float; }
  const RatMatrix& exact() const;
  Eigen::MatrixXd to_float() const;

  /// Exact equality of rational canonical forms.
  friend bool operator==(const FlagPoint& a, const FlagPoint& b);

 private:
  std::size_t n_;
  IndexSet j_;
  std::variant<RatMatrix, Eigen::MatrixXd> canon_;
};

/// Column blocks [start, end) cut at the positions k in I \ J.
std::vector<std::pair<std::size_t, std::size_t>> column_blocks(std::size_t n, const IndexSet& j);

FlagPoint flag_of(const GroupElement& g, const IndexSet& j, double tol = 1e-12);
FlagPoint flag_of(const RatMatrix& g, const IndexSet& j);
FlagPoint flag_of(const Eigen::MatrixXd& g, const IndexSet& j, double tol = 1e-12);

/// Max-abs difference of canonical forms (both converted to float).
double flag_distance(const FlagPoint& a, const FlagPoint& b);

/// Orthogonal projectors onto the subspaces V_k, k in I \ J, spanned by leading columns of rep.
std::vector<Eigen::MatrixXd> flag_projectors(const Eigen::MatrixXd& rep, const IndexSet& j);
/// Largest max-abs difference of corresponding projectors; a metric on G/P_J.
double subspace_distance(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b);
double flag_subspace_distance(const FlagPoint& a, const FlagPoint& b);

template <class Scalar>
struct Sl3CoordsT {
  std::array<Scalar, 3> v;
  std::array<Scalar, 3> w;
};
using Sl3Coords = Sl3CoordsT<double>;
using ExactSl3Coords = Sl3CoordsT<Rational>;

/// v spans V1, (w1, -w2, w3) is normal to V2; both normalized to coordinate sum 1
/// (or to first nonzero entry 1 when the sum vanishes).
Sl3Coords sl3_coords(const FlagPoint& f);
ExactSl3Coords sl3_coords_exact(const FlagPoint& f);
Sl3Coords to_float(const ExactSl3Coords& c);

enum class Membership { PositivePart, NonnegativeBoundary, Outside };
std::string to_string(Membership m);

struct MembershipResult {
  Membership kind;
  std::string diagnostic;  ///< empty unless a constraint failed
};

MembershipResult sl3_membership(const Sl3Coords& c, double tol = 1e-10);
MembershipResult sl3_membership(const ExactSl3Coords& c);

}  // namespace tnnflow
