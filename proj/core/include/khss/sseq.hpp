// Differential patterns of the spectral sequences that start at the
// Khovanov page, constrained by grading rules, target ranks and marks.
//
// A pattern pairs page generators along admissible arcs, each arc cancelling
// one direction in its source cell against one in its target cell; basis
// changes across pages are not modelled, so the pattern sets are upper bounds
// on what a real filtered complex can do. Cells are (i, j).
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khss/complex.hpp"
#include "khss/floer.hpp"
#include "khss/homology.hpp"
#include "khss/skein.hpp"

namespace khss {

class SSeqError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::pair<int, int>;

// Z/4 grading (j - i - 1) mod 4; a differential lowers it by one.
int z4_class(Cell c);

enum class DeltaRule {
  off,
  drop1,   // delta = j - 2i drops by exactly one step: dj = 2 di - 2
  strict,  // delta drops by at least one step: dj <= 2 di - 2
};

std::string to_string(DeltaRule r);
DeltaRule parse_delta_rule(const std::string& text);

struct ArcRule {
  Theory theory = Theory::km;
  // km pages are a di + b dj with a, b >= 1.
  int a = 1;
  int b = 1;
  DeltaRule delta = DeltaRule::off;

  // km: di >= 1, dj >= 2, dj - di = 3 mod 4. os: di >= 2 plus the delta rule.
  [[nodiscard]] bool admissible(Cell from, Cell to) const;
  [[nodiscard]] int page(Cell from, Cell to) const;
};

enum class MarkKind {
  never_source,   // directions that are infinity-cycles
  never_target,   // directions never hit by a differential
  survivor,       // both at once
  forced_source,  // must emit an arc on the given page
};

std::string to_string(MarkKind k);
MarkKind parse_mark_kind(const std::string& text);

struct Mark {
  MarkKind kind = MarkKind::never_source;
  Cell cell;
  int count = 1;
  int page = 0;               // forced_source only; 0 means any page
  std::optional<Cell> target;  // forced_source only
  std::string provenance;
  bool declared = false;  // rests on an asserted, not computed, map
};

// Counts for the same kind and cell combine by maximum: two maps can witness
// the same subspace, so adding them would overclaim.
class MarkSet {
 public:
  void add(Mark m);
  void merge(const MarkSet& other);

  [[nodiscard]] const std::vector<Mark>& marks() const { return marks_; }
  [[nodiscard]] int count(MarkKind k, Cell c) const;
  // Including survivor marks, which imply both.
  [[nodiscard]] int never_source(Cell c) const;
  [[nodiscard]] int never_target(Cell c) const;
  [[nodiscard]] std::vector<const Mark*> forced_sources() const;
  // Provenance of every declared mark, deduplicated.
  [[nodiscard]] std::vector<std::string> assumptions() const;
  [[nodiscard]] bool empty() const { return marks_.empty(); }

 private:
  std::vector<Mark> marks_;
};

struct SSeqProblem {
  std::string knot;
  DimTable page;
  ArcRule rule;
  MarkSet marks;
  std::vector<int> target_ranks;  // admissible totals of the final page
  std::string target_provenance;
  std::vector<int> z4_targets;  // empty, or the final rank of each class 0..3
  std::string z4_provenance;
  std::size_t cap = 1000000;  // search states before the enumeration refuses
};

struct Arc {
  Cell source;
  Cell target;
  int page = 0;
  int multiplicity = 1;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Pattern {
  std::vector<Arc> arcs;
  DimTable residual;
};

struct Enumeration {
  std::vector<Arc> admissible;
  std::vector<Pattern> patterns;
  // Minimum residual over all patterns, positive entries only.
  std::map<Cell, std::size_t> forced_survivors;
  // Arcs present in every pattern, with their minimum multiplicity.
  std::vector<Arc> forced_arcs;
  std::size_t states = 0;

  [[nodiscard]] bool inconsistent() const { return patterns.empty(); }
  [[nodiscard]] std::size_t forced_survivor_total() const;
};

// Throws SSeqError when a mark exceeds its cell or names an empty cell.
void check_marks(const SSeqProblem& p);

// Arcs passing the rule, the per-class targets and the marks; sorted by
// (source i, source j, target i, target j).
std::vector<Arc> admissible_arcs(const SSeqProblem& p);

// Exhaustive; throws SSeqError once more than p.cap search states are needed.
Enumeration enumerate_patterns(const SSeqProblem& p);

// What is known about one end of a map. A collapsed side has every cell
// marked both ways, certified by a rank window with lower = upper = rank.
struct SideStatus {
  DimTable table;
  MarkSet marks;
  std::string certificate;  // empty when nothing is known

  static SideStatus unknown(DimTable table);
  // Throws SSeqError unless the window is collapsed at the table's rank.
  static SideStatus collapsed(DimTable table, const RankWindow& window);
  static SideStatus known(DimTable table, MarkSet marks, std::string why);

  [[nodiscard]] bool fully_never_source(Cell c) const;
  [[nodiscard]] bool fully_never_target(Cell c) const;
};

struct DerivedMarks {
  MarkSet on_source;
  MarkSet on_target;
};

// Images of infinity-cycles are infinity-cycles, and a class with a
// nonzero image in a cell that holds no boundaries is never a boundary.
// Per block s -> t: never_target(s) += rank when t is fully never_target in
// the target, never_source(t) += rank when s is fully never_source in the
// source.
DerivedMarks derive_marks_exact(const HomologyMap& phi, const SideStatus& source, const SideStatus& target,
                                const std::string& provenance);

// Same rule from asserted one-dimensional components of a cobordism map
// whose bidegree comes from cobordism_order_bound. Every mark is declared.
DerivedMarks derive_marks_declared(const CobordismDescriptor& c, const std::vector<std::pair<Cell, Cell>>& components,
                                   const SideStatus& source, const SideStatus& target);

// For each arc c' -> d' on page r of the target's known pattern with phi
// nonzero c -> c' and d -> d', marks c as a forced source on page r with
// target d. Cells c and c' must be one-dimensional.
MarkSet derive_forced_sources(const HomologyMap& phi, const DimTable& source, const DimTable& target,
                              const Pattern& known);

// Survivor at the homological-degree-0 cell of a positive knot diagram whose
// degree-0 homology is one-dimensional.
std::optional<Mark> positive_knot_survivor(const PlanarDiagram& d, const DimTable& table);

// Marks on Khr(P(-p,q,r)) from chains of skein maps: the lower delta diagonal
// gets never_source marks (images of thin, collapsed knots), the upper one
// never_target marks (injecting into a thin, collapsed knot).
struct PretzelMarks {
  DimTable table;
  MarkSet marks;
  std::vector<std::string> steps;
};
PretzelMarks pretzel_diagonal_marks(int p, int q, int r);

// Arcs that do not lower delta = j - 2i.
std::vector<Arc> delta_preserving_arcs(const std::vector<Arc>& arcs);

}  // namespace khss
