// Planar knot and link diagrams in PD form.
//
// A crossing (a,b,c,d) lists its four edges counterclockwise starting from
// the incoming under-strand, so the under-strand runs a -> c. The crossing is
// positive when the over-strand runs d -> b. Edges are labelled 1..2n.
// Closed components without crossings are counted in free_loops; the empty
// diagram with one free loop is the unknot.
#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace khss {

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Crossing = std::array<int, 4>;

struct PlanarDiagram {
  std::vector<Crossing> crossings;
  std::vector<int> signs;
  // 0 means the basepoint sits on the first free loop.
  int basepoint_edge = 0;
  int free_loops = 0;

  [[nodiscard]] std::size_t size() const { return crossings.size(); }
  [[nodiscard]] int n_edges() const { return 2 * static_cast<int>(crossings.size()); }
  [[nodiscard]] int n_plus() const;
  [[nodiscard]] int n_minus() const;
  [[nodiscard]] int writhe() const { return n_plus() - n_minus(); }

  friend bool operator==(const PlanarDiagram&, const PlanarDiagram&) = default;
};

struct DiagramStats {
  int components = 0;
  int n_plus = 0;
  int n_minus = 0;
  int writhe = 0;
};

PlanarDiagram unknot_diagram();

// Builds a diagram from PD tuples. Edge labels may be any positive integers
// appearing exactly twice; they are compressed to 1..2n preserving order.
// Orientation comes from the incoming-under convention; components that never
// pass under are oriented from their smallest edge.
PlanarDiagram diagram_from_pd(const std::vector<Crossing>& tuples, int free_loops = 0);

// Closure of a braid word: k > 0 is sigma_k, k < 0 its inverse. Strands that
// no letter touches become free loops. strands = 0 means max |k| + 1.
PlanarDiagram braid_closure(const std::vector<int>& word, int strands = 0);
PlanarDiagram torus_diagram(int p, int q);
// Twist regions of |p_k| crossings each, joined in the standard pretzel way.
PlanarDiagram pretzel_diagram(const std::vector<int>& twists);

PlanarDiagram mirror(const PlanarDiagram& d);
PlanarDiagram change_crossing(const PlanarDiagram& d, std::size_t c);

struct Resolution {
  PlanarDiagram diagram;
  // edge_map[e] for old edge e (index 0 unused): the new edge label, or
  // -(k+1) when e now lies on free loop k of the new diagram.
  std::vector<int> edge_map;
  // loop_map[k]: index in the new diagram of the old free loop k.
  std::vector<int> loop_map;
};

// r = 0 joins (a,b) and (c,d); r = 1 joins (a,d) and (b,c). For a positive
// crossing the 0-smoothing is the oriented one. The remaining crossings keep
// their relative order.
Resolution resolve_crossing_with_map(const PlanarDiagram& d, std::size_t c, int r);
PlanarDiagram resolve_crossing(const PlanarDiagram& d, std::size_t c, int r);

int component_count(const PlanarDiagram& d);
DiagramStats diagram_stats(const PlanarDiagram& d);

// Number of circles in the complete smoothing v (v[k] in {0,1}).
int vertex_circle_count(const PlanarDiagram& d, const std::vector<int>& v);

// Throws DiagramError when edge labels or orientations are inconsistent.
void validate(const PlanarDiagram& d);

std::string to_pd_string(const PlanarDiagram& d);

// Stable key identifying a diagram exactly (crossings, signs, basepoint, loops).
std::string fingerprint(const PlanarDiagram& d);

}  // namespace khss
