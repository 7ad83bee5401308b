// Knots used across the test suites.
#pragma once

#include <string>
#include <vector>

namespace corpus {

inline const std::vector<std::string>& knots() {
  static const std::vector<std::string> k = {
      "unknot",
      "torus(2,3)",
      "mirror(torus(2,3))",
      "braid(1,-2,1,-2)",
      "torus(2,5)",
      "pd([[1,4,2,5],[3,8,4,9],[5,10,6,1],[9,6,10,7],[7,2,8,3]])",
      "torus(3,4)",
      "torus(3,5)",
      "torus(4,5)",
      "pretzel(-2,3,5)",
      "pretzel(-2,3,7)",
      "pretzel(-3,5,7)",
      "pretzel(-3,4,7)",
      "pretzel(-2,5,7)",
      "pretzel(-3,3,5)",
      "pretzel(3,3,3)",
  };
  return k;
}

// Knots small enough for the full resolution cube and the state sum.
inline const std::vector<std::string>& small_knots() {
  static const std::vector<std::string> k = {
      "unknot",
      "torus(2,3)",
      "mirror(torus(2,3))",
      "braid(1,-2,1,-2)",
      "torus(2,5)",
      "pd([[1,4,2,5],[3,8,4,9],[5,10,6,1],[9,6,10,7],[7,2,8,3]])",
      "torus(3,4)",
      "pretzel(-2,3,5)",
      "pretzel(3,3,3)",
      "braid(1,1,1,-2,1,-2)",
  };
  return k;
}

}  // namespace corpus
