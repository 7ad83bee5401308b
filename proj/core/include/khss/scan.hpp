// Reduced Khovanov complexes by scanning the diagram one crossing at a time.
//
// The diagram is cut open at the basepoint edge, crossings are glued onto a
// growing tangle, closed loops are delooped and every isomorphism between
// objects is cancelled by Gaussian elimination. Morphisms live in the dotted
// cobordism category with x^2 = 0, and dots on the sheet through the cut point
// vanish, which is the reduced theory.
//
// Marked crossings keep a tag per object recording which local smoothing the
// object came from. Elimination never cancels across different tags, so every
// convex set of tags (a face of the marked cube) is itself a simplified
// complex, and projections, inclusions and saddle blocks between faces are
// read off directly.
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "khss/complex.hpp"
#include "khss/diagram.hpp"
#include "khss/field.hpp"
#include "khss/rational.hpp"

namespace khss {

struct ScanMark {
  std::size_t crossing = 0;
  // Adds a second copy of the 1-smoothing placed below the 0-smoothing, so the
  // face {2, 0} is the complex of the diagram with this crossing changed.
  bool with_change = false;
};

// Tag values of a marked crossing.
inline constexpr int kTagSmoothing0 = 0;
inline constexpr int kTagSmoothing1 = 1;
inline constexpr int kTagChanged1 = 2;

struct ScanGenerator {
  // Raw gradings: h = number of 1-smoothings, q = h + (#1 - #x) over loops,
  // with the changed-crossing copy placed at (-1, -1).
  int h = 0;
  int q = 0;
  std::uint32_t tags = 0;  // two bits per marked crossing

  [[nodiscard]] int tag(std::size_t mark) const { return static_cast<int>((tags >> (2 * mark)) & 3u); }
};

struct ScanStats {
  std::size_t peak_objects = 0;
  std::size_t peak_width = 0;  // boundary points of the partial tangle
  std::size_t cancellations = 0;
};

struct ScanComplex {
  Field field = Field::rationals();
  std::vector<ScanMark> marks;
  std::vector<ScanGenerator> gens;
  // diff[g]: (target generator, coefficient), sorted by target. Only entries
  // between different tags survive the elimination.
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> diff;
  ScanStats stats;
};

// Throws DiagramError for invalid diagrams and std::invalid_argument for bad
// marks (out of range, repeated, more than 16).
ScanComplex scan_complex(const PlanarDiagram& d, const Field& field, const std::vector<ScanMark>& marks = {});

// Shift from raw (h, q) to (i, j) for the diagram d itself:
// (-n_minus, n_plus - 2 n_minus - 1).
Bidegree scan_offset(const PlanarDiagram& d);

// Bit t of allowed[m] keeps tag t of mark m. Each set must be a face: one
// tag, {0, 1} (the diagram itself) or {2, 0} (the changed crossing). All three
// tags together do not form a complex.
using FaceTags = std::vector<std::uint8_t>;

inline constexpr std::uint8_t kFaceSmoothing0 = 1u << kTagSmoothing0;
inline constexpr std::uint8_t kFaceSmoothing1 = 1u << kTagSmoothing1;
inline constexpr std::uint8_t kFaceWhole = kFaceSmoothing0 | kFaceSmoothing1;
inline constexpr std::uint8_t kFaceChanged = kFaceSmoothing0 | (1u << kTagChanged1);

struct ScanFace {
  ChainComplex complex;
  std::vector<std::uint32_t> ids;  // scan generator of each face generator
};

// The subquotient complex on the selected tags, graded by raw (h, q) plus
// offset. Throws std::invalid_argument for a malformed selection.
ScanFace scan_face(const ScanComplex& sc, const FaceTags& allowed, Bidegree offset);

}  // namespace khss
