// The reduced Khovanov complex of a diagram, built from its resolution cube.
//
// Gradings (Bar-Natan conventions, reduced by the basepoint subcomplex):
//   i = |v| - n_minus
//   j = |v| + #1 - #x + n_plus - 2 n_minus
// where the basepoint circle always carries x. The unknot sits at (0,-1).
//
// Cube vertices are integers with crossing 0 as the most significant bit, so
// numeric order is lexicographic order on v. A generator is a vertex plus a
// label word: bit t set means the t-th non-basepoint circle carries x.
// Circles of a vertex are numbered by smallest edge, free loops last.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "khss/detail/sparse_elimination.hpp"
#include "khss/diagram.hpp"
#include "khss/field.hpp"
#include "khss/linalg.hpp"

namespace khss {

class CubeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default 20; overridden by the KHSS_MAX_CROSSINGS environment variable.
int crossing_cap();

struct Bidegree {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

struct CubeGenerator {
  std::uint32_t vertex = 0;
  std::uint32_t word = 0;
  friend bool operator==(const CubeGenerator&, const CubeGenerator&) = default;
};

// Ordered basis of one bidegree: vertices ascending, words ascending.
struct CellBasis {
  int i = 0;
  int j = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<std::uint8_t> weights;   // x labels among non-basepoint circles, per vertex
  std::vector<std::uint64_t> offsets;  // offsets.size() == vertices.size() + 1

  [[nodiscard]] std::size_t size() const { return offsets.empty() ? 0 : offsets.back(); }
  // Index of (vertex, word), or -1 if the generator is not in this cell.
  [[nodiscard]] std::int64_t index_of(std::uint32_t vertex, std::uint32_t word) const;
  [[nodiscard]] CubeGenerator at(std::size_t index) const;
};

using SignedRow = detail::SparseVec<std::int8_t>;

class ReducedCube {
 public:
  explicit ReducedCube(PlanarDiagram d, int cap = crossing_cap());

  [[nodiscard]] const PlanarDiagram& diagram() const { return d_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int n_plus() const { return n_plus_; }
  [[nodiscard]] int n_minus() const { return n_minus_; }
  [[nodiscard]] std::uint32_t vertex_count() const { return std::uint32_t{1} << n_; }

  [[nodiscard]] int circles(std::uint32_t v) const { return circle_count_[v]; }
  [[nodiscard]] int traced_circles(std::uint32_t v) const { return traced_count_[v]; }
  [[nodiscard]] int circle_of_edge(std::uint32_t v, int edge) const {
    return circle_of_edge_[static_cast<std::size_t>(v) * static_cast<std::size_t>(2 * n_) + static_cast<std::size_t>(edge - 1)];
  }
  [[nodiscard]] int basepoint_circle(std::uint32_t v) const;
  [[nodiscard]] std::uint32_t crossing_bit(int c) const { return std::uint32_t{1} << (n_ - 1 - c); }

  [[nodiscard]] int homological(std::uint32_t v) const;
  [[nodiscard]] int quantum(std::uint32_t v, std::uint32_t word) const;
  [[nodiscard]] Bidegree bidegree(const CubeGenerator& g) const { return {homological(g.vertex), quantum(g.vertex, g.word)}; }

  [[nodiscard]] std::vector<int> quantum_gradings() const;
  [[nodiscard]] int min_homological() const { return -n_minus_; }
  [[nodiscard]] int max_homological() const { return n_ - n_minus_; }
  [[nodiscard]] std::uint64_t total_generators() const;

  [[nodiscard]] CellBasis cell(int i, int j) const;

  // Rows of the differential (i,j) -> (i+1,j), one per source generator,
  // indexed by target positions in `target`.
  [[nodiscard]] std::vector<SignedRow> differential(const CellBasis& source, const CellBasis& target) const;

  // Image of one generator under the edge map of crossing c (v_c must be 0),
  // as (vertex', word', coefficient) terms. Sign included when `with_sign`.
  void edge_map(const CubeGenerator& g, int c, bool with_sign,
                std::vector<std::pair<CubeGenerator, int>>& out) const;

  // Full label mask (bit per circle id, set = x) of a generator.
  [[nodiscard]] std::uint32_t label_mask(const CubeGenerator& g) const;
  // Inverse of label_mask; the basepoint circle must be set.
  [[nodiscard]] std::uint32_t word_from_mask(std::uint32_t v, std::uint32_t mask) const;

 private:
  PlanarDiagram d_;
  int n_ = 0;
  int n_plus_ = 0;
  int n_minus_ = 0;
  std::vector<std::uint8_t> circle_of_edge_;
  std::vector<std::uint8_t> circle_count_;
  std::vector<std::uint8_t> traced_count_;
  std::vector<std::vector<std::uint32_t>> by_weight_;  // vertices grouped by |v|
};

// Fixed field plus shared cube data. Blocks are produced on demand so that
// only one j-column needs to be resident at a time.
class BigradedComplex {
 public:
  BigradedComplex(std::shared_ptr<const ReducedCube> cube, Field field) : cube_(std::move(cube)), field_(field) {}

  [[nodiscard]] const ReducedCube& cube() const { return *cube_; }
  [[nodiscard]] std::shared_ptr<const ReducedCube> cube_ptr() const { return cube_; }
  [[nodiscard]] const Field& field() const { return field_; }

  // Nonempty cells as (i, j, dimension), sorted.
  [[nodiscard]] std::vector<std::tuple<int, int, std::size_t>> cells() const;
  // Differential block (i,j) -> (i+1,j) as an exact matrix acting on columns:
  // rows index the target cell, columns the source cell.
  [[nodiscard]] ExactMatrix block(int i, int j) const;

  // One line per nonzero entry: "(i,j) row col value", row = source index.
  void dump(std::ostream& os) const;

 private:
  std::shared_ptr<const ReducedCube> cube_;
  Field field_;
};

BigradedComplex build_reduced_complex(const PlanarDiagram& d, const Field& field);

// Circle count of the smoothing v via the cube tables (v[k] for crossing k).
int cube_vertex_circle_count(const ReducedCube& cube, const std::vector<int>& v);

std::uint64_t binomial(int n, int k);

}  // namespace khss
