// Bigraded homology tables, the Jones polynomial and delta gradings.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "khss/cube.hpp"
#include "khss/diagram.hpp"
#include "khss/field.hpp"

namespace khss {

class DimTable {
 public:
  DimTable() = default;
  DimTable(Field field, std::string label) : field_(field), label_(std::move(label)) {}

  [[nodiscard]] const Field& field() const { return field_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Sorted by (i, j); only positive dimensions are stored.
  [[nodiscard]] const std::map<std::pair<int, int>, std::size_t>& cells() const { return cells_; }
  [[nodiscard]] std::size_t dim(int i, int j) const;
  void set(int i, int j, std::size_t dim);
  [[nodiscard]] std::size_t total() const;
  [[nodiscard]] bool empty() const { return cells_.empty(); }

  [[nodiscard]] DimTable shifted(int di, int dj) const;
  // Table of the mirror image: (i, j) -> (-i, -j - 2) in the subcomplex
  // normalization where the unknot sits at (0, -1).
  [[nodiscard]] DimTable mirrored() const;

  // Same cells regardless of field or label.
  [[nodiscard]] bool same_cells(const DimTable& other) const { return cells_ == other.cells_; }

 private:
  Field field_ = Field::rationals();
  std::string label_;
  std::map<std::pair<int, int>, std::size_t> cells_;
};

// Integer Laurent polynomial, exponent -> coefficient, zero terms dropped.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(std::map<int, std::int64_t> coeffs);

  [[nodiscard]] const std::map<int, std::int64_t>& coeffs() const { return coeffs_; }
  void add(int exponent, std::int64_t c);
  [[nodiscard]] std::int64_t coeff(int exponent) const;
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  // Evaluation at +1 or -1 (exact, no overflow for the sizes handled here).
  [[nodiscard]] std::int64_t at_one() const;
  [[nodiscard]] std::int64_t at_minus_one() const;
  [[nodiscard]] std::int64_t abs_coefficient_sum() const;
  [[nodiscard]] int min_exponent() const;
  [[nodiscard]] int max_exponent() const;
  [[nodiscard]] std::string to_string(const std::string& var) const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  std::map<int, std::int64_t> coeffs_;
};

struct DeltaProfile {
  std::map<int, std::size_t> ranks;  // delta = j - 2i
  bool thin = false;
};

// Per-cell dimension dim C - rank d_out - rank d_in, independently per j-column.
DimTable bigraded_homology(const BigradedComplex& c);

// scan: crossing-by-crossing simplification (fast, default).
// cube: the full resolution cube (reference, exponential in the crossings).
enum class Engine { scan, cube };

DimTable khovanov_homology(const PlanarDiagram& d, const Field& field, const std::string& label = "",
                           Engine engine = Engine::scan);

// sum (-1)^i q^j dim; over GF(p) this is still the Jones polynomial because the
// Euler characteristic of a complex does not depend on the field.
LaurentPoly jones_polynomial(const DimTable& t);

// |V(-1)| where the Jones variable is q^2, i.e. the Euler characteristic
// evaluated at q = sqrt(-1). Equals the determinant for knots.
std::int64_t jones_abs_at_minus_one(const DimTable& t);

DeltaProfile delta_profile(const DimTable& t);

// "t^0 q^8 + t^2 q^12 + ..." with multiplicities as coefficients.
std::string poincare_string(const DimTable& t);

}  // namespace khss
