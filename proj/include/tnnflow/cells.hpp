#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tnnflow/totpos.hpp"

namespace tnnflow {

/// A cell of the nonnegative SL3 complete flag variety, named by its vanishing coordinates.
///
/// Bits 0..2 of `zeros` stand for v1, v2, v3 and bits 3..5 for w1, w2, w3.
struct CellLabel {
  std::uint8_t zeros = 0;
  int dim = 0;

  /// "{}" or e.g. "{v1,v3,w2}".
  std::string to_string() const;
  /// Vertex name "ab,cd" meaning v_a = v_b = w_c = w_d = 0; empty for cells of positive dimension.
  std::optional<std::string> figure1_label() const;

  friend bool operator==(const CellLabel&, const CellLabel&) = default;
};

std::uint8_t parse_zero_set(const std::string& text);
std::string format_zero_set(std::uint8_t zeros);

/// Label of a point of the nonnegative part; the dimension is the local dimension of
/// {sum v = 1, sum w = 1, v1 w1 - v2 w2 + v3 w3 = 0} on the support of the point.
CellLabel label_of(const Sl3Coords& c, double tol = 1e-9);
CellLabel label_of(const ExactSl3Coords& c);

/// One realizing point of a cell and the recipe that produced it.
struct CellWitness {
  CellLabel label;
  ExactSl3Coords coords;
  std::string source;
};

struct CensusOptions {
  std::uint64_t seed = 0;
  std::size_t draws = 2;       ///< random parameter draws per zero pattern
  bool positive_only = false;  ///< use only the all-positive pattern and no edge anchors
  bool anchors = true;         ///< include the two one-parameter edge families
};

struct CellRelation {
  std::size_t lower = 0;  ///< index into cells
  std::size_t upper = 0;
  bool verified = false;  ///< seen as a limit of a sampled sequence
};

struct Census {
  std::vector<CellWitness> cells;  ///< sorted by (dim, zeros)
  std::vector<CellRelation> relations;
  std::size_t patterns_total = 0;
  std::size_t patterns_sampled = 0;
  std::size_t samples = 0;
  std::vector<std::string> warnings;  ///< undersampling, Outside samples, inconsistent dimensions
  CensusOptions options;

  std::vector<std::size_t> f_vector() const;
  std::optional<std::size_t> find(std::uint8_t zeros) const;
};

/// Sweeps G>=0 orbits y(t) x(s) w through every zero pattern of (t, s) and every permutation
/// w, plus edge anchors s_i R_j(r0 : r1), and labels each exactly.
Census census(const CensusOptions& opts = {});

/// Closure order: A <= B iff zeros(A) contains zeros(B). Each relation is additionally
/// checked against limits of sampled sequences (parameters sent to 0).
void face_poset(Census& c);

struct PosetCheck {
  bool graded = true;          ///< A < B implies dim A < dim B
  bool chains_length_3 = true;
  bool edges_have_two_vertices = true;
  bool faces_are_cycles = true;
  bool all_verified = true;
  long euler = 0;              ///< V - E + F over the boundary
  std::vector<std::string> problems;
  bool pass() const {
    return graded && chains_length_3 && edges_have_two_vertices && faces_are_cycles && all_verified && euler == 2;
  }
};

PosetCheck check_poset(const Census& c);

/// Fixed point of the tau flow: v = w = (1, sqrt2, 1) / (2 + sqrt2).
Sl3Coords fixed_point_coords();

enum class FigureFormat { Json, Svg };
FigureFormat parse_figure_format(const std::string& name);

std::string figure_export(const Census& c, FigureFormat format);
/// Reads back the JSON document of figure_export.
Census census_from_json(const std::string& text);

}  // namespace tnnflow
