#include "khss/floer.hpp"

#include <cstdlib>

#include "khss/classical.hpp"

namespace khss {

std::string to_string(Theory t) { return t == Theory::km ? "km" : "os"; }

Theory parse_theory(const std::string& text) {
  if (text == "km") return Theory::km;
  if (text == "os") return Theory::os;
  throw FloerError("unknown theory '" + text + "' (expected km or os)");
}

Field default_field(Theory t) { return t == Theory::km ? Field::rationals() : Field::gf2(); }

bool RankWindow::contains(int rank) const {
  return rank >= lower.value && rank <= upper.value && (rank - lower.value) % 2 == 0;
}

std::vector<int> RankWindow::admissible() const {
  std::vector<int> out;
  for (int r = lower.value; r <= upper.value; r += 2) out.push_back(r);
  return out;
}

bool raise_lower(RankWindow& w, int value, const std::string& provenance) {
  if ((w.upper.value - value) % 2 != 0) ++value;
  if (value <= w.lower.value) return false;
  w.lower = {value, provenance};
  return true;
}

bool lower_upper(RankWindow& w, int value, const std::string& provenance) {
  if ((value - w.lower.value) % 2 != 0) --value;
  if (value >= w.upper.value) return false;
  w.upper = {value, provenance};
  return true;
}

bool is_t22n_diagram(const PlanarDiagram& d, int* n) {
  if (d.size() < 2 || d.size() % 2 != 0) return false;
  const int k = static_cast<int>(d.size()) / 2;
  const PlanarDiagram t = torus_diagram(2, 2 * k);
  if (d == t || d == mirror(t)) {
    if (n) *n = k;
    return true;
  }
  return false;
}

RankWindow floer_rank_window(const PlanarDiagram& d, Theory theory, const DimTable& table) {
  if (!(table.field() == default_field(theory))) {
    throw FloerError(to_string(theory) + " windows need the Khovanov table over " + default_field(theory).name());
  }
  RankWindow w;
  w.theory = theory;
  const int total = static_cast<int>(table.total());
  w.upper = {total, "khovanov"};
  const bool knot = component_count(d) == 1;
  if (theory == Theory::km) {
    int n = 0;
    if (knot) {
      w.lower = {static_cast<int>(alexander_invariants(d).coeff_abs_sum), "alexander_sum"};
    } else if (is_t22n_diagram(d, &n)) {
      w.lower = {2 * n, "t22n-lemma"};
    } else {
      throw FloerError("no instanton lower bound for a link other than T(2,2n)");
    }
  } else {
    w.lower = {static_cast<int>(jones_abs_at_minus_one(table)), "determinant"};
  }
  if ((w.upper.value - w.lower.value) % 2 != 0) ++w.lower.value;
  if (knot && delta_profile(table).thin) raise_lower(w, total, "thin");
  if (w.empty()) throw FloerError("lower bound " + std::to_string(w.lower.value) + " exceeds the Khovanov rank");
  if (theory == Theory::km && knot && w.lower.value == 1 && total > 1) {
    w.remarks.push_back("rank 1 would make the knot the unknot (instanton unknot detection); not used as a bound");
  }
  return w;
}

RankWindow floer_rank_window(const PlanarDiagram& d, Theory theory) {
  return floer_rank_window(d, theory, khovanov_homology(d, default_field(theory)));
}

std::array<RankWindow, 3> triangle_rank_bound(std::array<RankWindow, 3> corners) {
  for (const auto& c : corners) {
    if (c.empty()) throw FloerError("triangle corner has an empty window");
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < 3; ++x) {
      const RankWindow& y = corners[(x + 1) % 3];
      const RankWindow& z = corners[(x + 2) % 3];
      RankWindow& w = corners[x];
      changed |= raise_lower(w, y.lower.value - z.upper.value, "triangle");
      changed |= raise_lower(w, z.lower.value - y.upper.value, "triangle");
      changed |= lower_upper(w, y.upper.value + z.upper.value, "triangle");
      if (w.empty()) {
        throw FloerError("triangle bounds leave corner " + std::to_string(x) + " with an empty window");
      }
    }
  }
  return corners;
}

}  // namespace khss
