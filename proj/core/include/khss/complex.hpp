// Finite bigraded chain complexes with explicit bases, their homology with
// chosen cycle representatives, and maps induced on homology by chain maps.
//
// The differential raises i by one and preserves j. Over each j-column the
// differentials are eliminated in order of increasing i; rows cancelled
// against the previous differential are skipped, so the generators that are
// neither pivot rows nor pivot targets form a basis of homology.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "khss/cube.hpp"
#include "khss/field.hpp"
#include "khss/homology.hpp"
#include "khss/linalg.hpp"
#include "khss/rational.hpp"

namespace khss {

using SparseRow = std::vector<std::pair<std::uint32_t, Rational>>;

struct ChainComplex {
  Field field = Field::rationals();
  std::vector<Bidegree> gens;
  // diff[g]: images of generator g, sorted by target; targets sit at (i+1, j).
  std::vector<SparseRow> diff;

  [[nodiscard]] std::size_t size() const { return gens.size(); }
};

// Throws std::logic_error on a misgraded entry, an out-of-range target, or
// (when check_square) d o d != 0.
void check_complex(const ChainComplex& c, bool check_square = true);

// Explicit complex of the reduced cube; practical up to about a dozen crossings.
ChainComplex cube_chain_complex(const PlanarDiagram& d, const Field& field);

DimTable homology_table(const ChainComplex& c);

class HomologyModel {
 public:
  HomologyModel(ChainComplex c, std::string key);

  [[nodiscard]] const ChainComplex& complex() const;
  [[nodiscard]] const std::string& key() const;
  [[nodiscard]] const DimTable& table() const;
  [[nodiscard]] std::size_t dim(int i, int j) const { return table().dim(i, j); }

  // A cycle representing basis class k of H^{i,j}.
  [[nodiscard]] SparseRow representative(int i, int j, std::size_t k) const;
  // Coordinates of the class of a cycle supported in bidegree (i, j).
  [[nodiscard]] Vector project(int i, int j, const SparseRow& cycle) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// f[g]: image of source generator g, as (target generator, coefficient).
using ChainMap = std::vector<SparseRow>;

// Linear map between homology groups of bidegree `shift`. Blocks are keyed by
// the source cell; each block has dim(target cell) rows and dim(source cell)
// columns. Missing blocks are zero.
struct HomologyMap {
  Field field = Field::rationals();
  Bidegree shift;
  std::string source;
  std::string target;
  std::map<std::pair<int, int>, ExactMatrix> blocks;

  [[nodiscard]] std::size_t rank() const;
  [[nodiscard]] std::size_t rank_at(int i, int j) const;
  [[nodiscard]] bool is_zero() const { return rank() == 0; }
};

// Throws std::invalid_argument when f does not fit the two complexes, and
// std::logic_error when f is not a chain map of the given bidegree.
HomologyMap induced_map(const HomologyModel& src, const HomologyModel& tgt, const ChainMap& f, Bidegree shift);

// second o first; throws std::invalid_argument unless first.target == second.source.
HomologyMap compose_maps(const HomologyMap& second, const HomologyMap& first);

}  // namespace khss
