// Alexander polynomial by Fox calculus on the Wirtinger presentation, and
// the determinant and coefficient sum derived from it.
#pragma once

#include <cstdint>

#include "khss/diagram.hpp"
#include "khss/homology.hpp"

namespace khss {

// Conway-normalised: symmetric under t -> 1/t with value 1 at t = 1.
// Throws DiagramError for links.
LaurentPoly alexander_polynomial(const PlanarDiagram& d);

struct AlexanderInvariants {
  LaurentPoly delta;
  std::int64_t determinant = 0;    // |Delta(-1)|
  std::int64_t coeff_abs_sum = 0;  // sum of |coefficients|
};

AlexanderInvariants alexander_invariants(const PlanarDiagram& d);

// True when |V(-1)| from a Khovanov table equals the determinant.
bool determinant_matches(const AlexanderInvariants& a, const DimTable& khovanov);

}  // namespace khss
