// Rank windows for the two Floer targets of the Khovanov page: instanton
// knot homology over Q (km) and Heegaard-Floer homology of the branched
// double cover over GF(2) (os). Only bounds are computed, never the groups.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "khss/diagram.hpp"
#include "khss/field.hpp"
#include "khss/homology.hpp"

namespace khss {

class FloerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Theory { km, os };

std::string to_string(Theory t);
Theory parse_theory(const std::string& text);
// Q for km, GF(2) for os.
Field default_field(Theory t);

struct Bound {
  int value = 0;
  // alexander_sum, determinant, thin, t22n-lemma, triangle, khovanov or user.
  std::string provenance;
};

// Admissible ranks lower, lower + 2, ..., upper.
struct RankWindow {
  Theory theory = Theory::km;
  Bound lower;
  Bound upper;
  std::vector<std::string> remarks;

  [[nodiscard]] bool empty() const { return lower.value > upper.value; }
  [[nodiscard]] bool collapsed() const { return lower.value == upper.value; }
  [[nodiscard]] bool contains(int rank) const;
  [[nodiscard]] std::vector<int> admissible() const;
};

// Raises the lower bound to `value` (rounded up to the parity of the upper
// bound) when that improves it. Returns true on a change.
bool raise_lower(RankWindow& w, int value, const std::string& provenance);
bool lower_upper(RankWindow& w, int value, const std::string& provenance);

// The 2-braid closure of sigma_1^(2n) as built by torus(2,2n), or its mirror.
bool is_t22n_diagram(const PlanarDiagram& d, int* n = nullptr);

// `table` must be the Khovanov table of d over default_field(theory).
// km: knots get the Alexander coefficient sum, T(2,2n) links the lemma value
// 2n; any other link throws FloerError. os: the determinant |V(-1)|. A thin
// knot collapses both windows.
RankWindow floer_rank_window(const PlanarDiagram& d, Theory theory, const DimTable& table);
RankWindow floer_rank_window(const PlanarDiagram& d, Theory theory);

// Corners X0, X1, X2 of an exact triangle. Each corner gets
// rank X >= lower(Y) - upper(Z) and rank X <= upper(Y) + upper(Z), iterated to
// a fixpoint. Throws FloerError when a window becomes empty.
std::array<RankWindow, 3> triangle_rank_bound(std::array<RankWindow, 3> corners);

}  // namespace khss
