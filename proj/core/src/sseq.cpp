#include "khss/sseq.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <set>
#include <sstream>

namespace khss {

namespace {

// Cells in messages are written (i, j-i), the coordinates of printed tables.
std::string cell_text(Cell c) { return "(" + std::to_string(c.first) + "," + std::to_string(c.second - c.first) + ")"; }

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

int z4_class(Cell c) { return mod(c.second - c.first - 1, 4); }

std::string to_string(DeltaRule r) {
  switch (r) {
    case DeltaRule::off:
      return "off";
    case DeltaRule::drop1:
      return "drop1";
    case DeltaRule::strict:
      return "strict";
  }
  return "?";
}

DeltaRule parse_delta_rule(const std::string& text) {
  for (DeltaRule r : {DeltaRule::off, DeltaRule::drop1, DeltaRule::strict}) {
    if (to_string(r) == text) return r;
  }
  throw SSeqError("unknown delta rule '" + text + "' (expected off, drop1 or strict)");
}

bool ArcRule::admissible(Cell from, Cell to) const {
  const int di = to.first - from.first;
  const int dj = to.second - from.second;
  bool ok = false;
  if (theory == Theory::km) {
    ok = di >= 1 && dj >= 2 && mod(dj - di, 4) == 3;
  } else {
    ok = di >= 2;
  }
  if (!ok) return false;
  switch (delta) {
    case DeltaRule::off:
      return true;
    case DeltaRule::drop1:
      return dj == 2 * di - 2;
    case DeltaRule::strict:
      return dj <= 2 * di - 2;
  }
  return false;
}

int ArcRule::page(Cell from, Cell to) const {
  const int di = to.first - from.first;
  const int dj = to.second - from.second;
  return theory == Theory::km ? a * di + b * dj : di;
}

std::string to_string(MarkKind k) {
  switch (k) {
    case MarkKind::never_source:
      return "never_source";
    case MarkKind::never_target:
      return "never_target";
    case MarkKind::survivor:
      return "survivor";
    case MarkKind::forced_source:
      return "forced_source";
  }
  return "?";
}

MarkKind parse_mark_kind(const std::string& text) {
  for (MarkKind k : {MarkKind::never_source, MarkKind::never_target, MarkKind::survivor, MarkKind::forced_source}) {
    if (to_string(k) == text) return k;
  }
  throw SSeqError("unknown mark kind '" + text + "'");
}

void MarkSet::add(Mark m) {
  if (m.count < 1) throw SSeqError("mark count must be positive");
  marks_.push_back(std::move(m));
}

void MarkSet::merge(const MarkSet& other) {
  for (const Mark& m : other.marks_) marks_.push_back(m);
}

int MarkSet::count(MarkKind k, Cell c) const {
  int n = 0;
  for (const Mark& m : marks_) {
    if (m.kind == k && m.cell == c) n = std::max(n, m.count);
  }
  return n;
}

int MarkSet::never_source(Cell c) const {
  return std::max(count(MarkKind::never_source, c), count(MarkKind::survivor, c));
}

int MarkSet::never_target(Cell c) const {
  return std::max(count(MarkKind::never_target, c), count(MarkKind::survivor, c));
}

std::vector<const Mark*> MarkSet::forced_sources() const {
  std::vector<const Mark*> out;
  for (const Mark& m : marks_) {
    if (m.kind == MarkKind::forced_source) out.push_back(&m);
  }
  return out;
}

std::vector<std::string> MarkSet::assumptions() const {
  std::vector<std::string> out;
  for (const Mark& m : marks_) {
    if (m.declared && std::find(out.begin(), out.end(), m.provenance) == out.end()) out.push_back(m.provenance);
  }
  return out;
}

std::size_t Enumeration::forced_survivor_total() const {
  std::size_t n = 0;
  for (const auto& [c, k] : forced_survivors) n += k;
  return n;
}

void check_marks(const SSeqProblem& p) {
  for (const Mark& m : p.marks.marks()) {
    const auto dim = static_cast<int>(p.page.dim(m.cell.first, m.cell.second));
    if (dim == 0) throw SSeqError(to_string(m.kind) + " mark on empty cell " + cell_text(m.cell));
    if (m.count > dim) {
      throw SSeqError(to_string(m.kind) + " mark of count " + std::to_string(m.count) + " exceeds dimension " +
                      std::to_string(dim) + " of cell " + cell_text(m.cell));
    }
    if (m.kind == MarkKind::forced_source && m.target && p.page.dim(m.target->first, m.target->second) == 0) {
      throw SSeqError("forced source at " + cell_text(m.cell) + " names empty target " + cell_text(*m.target));
    }
  }
  if (!p.z4_targets.empty() && p.z4_targets.size() != 4) throw SSeqError("z4 targets need one rank per class");
}

namespace {

struct CellState {
  Cell cell;
  int dim = 0;
  int out_cap = 0;
  int in_cap = 0;
  int both_cap = 0;
};

class Search {
 public:
  explicit Search(const SSeqProblem& p) : p_(p) {
    check_marks(p);
    for (const auto& [c, d] : p.page.cells()) {
      CellState s;
      s.cell = c;
      s.dim = static_cast<int>(d);
      s.out_cap = s.dim - p.marks.never_source(c);
      s.in_cap = s.dim - p.marks.never_target(c);
      s.both_cap = s.dim - p.marks.count(MarkKind::survivor, c);
      index_.emplace(c, cells_.size());
      cells_.push_back(s);
      total_ += s.dim;
    }
    min_target_ = p.target_ranks.empty() ? 0 : *std::min_element(p.target_ranks.begin(), p.target_ranks.end());
    removable_.fill(0);
    if (!p.z4_targets.empty()) {
      for (const auto& s : cells_) removable_[z4_class(s.cell)] += s.dim;
      for (int k = 0; k < 4; ++k) removable_[k] -= p.z4_targets[k];
    } else {
      removable_.fill(total_);
    }
    for (const CellState& s : cells_) {
      for (const CellState& t : cells_) {
        if (s.cell == t.cell || !p.rule.admissible(s.cell, t.cell)) continue;
        if (s.out_cap < 1 || t.in_cap < 1 || s.both_cap < 1 || t.both_cap < 1) continue;
        if (total_ - 2 < min_target_) continue;
        const int cs = z4_class(s.cell);
        const int ct = z4_class(t.cell);
        if (cs == ct ? removable_[cs] < 2 : (removable_[cs] < 1 || removable_[ct] < 1)) continue;
        arcs_.push_back({s.cell, t.cell, p.rule.page(s.cell, t.cell), 1});
      }
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) {
      return std::tie(x.source, x.target) < std::tie(y.source, y.target);
    });
    for (const Mark* m : p.marks.forced_sources()) {
      Forced f{m, -1};
      for (std::size_t k = 0; k < arcs_.size(); ++k) {
        if (satisfies(arcs_[k], *m)) f.last = static_cast<int>(k);
      }
      forced_.push_back(f);
    }
  }

  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }

  Enumeration run() {
    Enumeration out;
    out.admissible = arcs_;
    out_.assign(cells_.size(), 0);
    in_.assign(cells_.size(), 0);
    removed_.fill(0);
    chosen_.clear();
    dfs(0, out);
    out.states = states_;
    finish(out);
    return out;
  }

 private:
  struct Forced {
    const Mark* mark;
    int last;  // index of the last arc that can satisfy it, -1 if none
  };

  static bool satisfies(const Arc& a, const Mark& m) {
    return a.source == m.cell && (m.page == 0 || a.page == m.page) && (!m.target || a.target == *m.target);
  }

  bool forced_met(const Forced& f) const {
    for (const Arc& a : chosen_) {
      if (satisfies(a, *f.mark)) return true;
    }
    return false;
  }

  void dfs(std::size_t k, Enumeration& out) {
    if (++states_ > p_.cap) {
      throw SSeqError("pattern enumeration needs more than " + std::to_string(p_.cap) + " search states; refusing");
    }
    const int residual = total_ - 2 * removed_total_;
    if (residual < min_target_) return;
    for (const Forced& f : forced_) {
      if (f.last < static_cast<int>(k) && !forced_met(f)) return;
    }
    if (k == arcs_.size()) {
      record(out);
      return;
    }
    const Arc& a = arcs_[k];
    const std::size_t s = index_.at(a.source);
    const std::size_t t = index_.at(a.target);
    const int cs = z4_class(a.source);
    const int ct = z4_class(a.target);
    int room = std::min(cells_[s].out_cap - out_[s], cells_[t].in_cap - in_[t]);
    room = std::min(room, cells_[s].both_cap - out_[s] - in_[s]);
    room = std::min(room, cells_[t].both_cap - out_[t] - in_[t]);
    dfs(k + 1, out);
    int used = 0;
    while (used < room) {
      if (removed_[cs] + 1 > removable_[cs] || removed_[ct] + (cs == ct ? 2 : 1) > removable_[ct]) break;
      ++used;
      ++removed_[cs];
      ++removed_[ct];
      ++out_[s];
      ++in_[t];
      ++removed_total_;
      chosen_.push_back({a.source, a.target, a.page, used});
      dfs(k + 1, out);
      chosen_.pop_back();
    }
    removed_[cs] -= used;
    removed_[ct] -= used;
    out_[s] -= used;
    in_[t] -= used;
    removed_total_ -= used;
  }

  void record(Enumeration& out) const {
    const int residual = total_ - 2 * removed_total_;
    if (!p_.target_ranks.empty() &&
        std::find(p_.target_ranks.begin(), p_.target_ranks.end(), residual) == p_.target_ranks.end()) {
      return;
    }
    if (!p_.z4_targets.empty()) {
      for (int c = 0; c < 4; ++c) {
        if (removed_[c] != removable_[c]) return;
      }
    }
    for (const Forced& f : forced_) {
      if (!forced_met(f)) return;
    }
    Pattern pat;
    pat.arcs = chosen_;
    pat.residual = DimTable(p_.page.field(), p_.knot);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const int left = cells_[c].dim - out_[c] - in_[c];
      if (left > 0) pat.residual.set(cells_[c].cell.first, cells_[c].cell.second, static_cast<std::size_t>(left));
    }
    out.patterns.push_back(std::move(pat));
  }

  void finish(Enumeration& out) const {
    if (out.patterns.empty()) return;
    for (const CellState& c : cells_) {
      std::size_t low = static_cast<std::size_t>(c.dim);
      for (const Pattern& pat : out.patterns) low = std::min(low, pat.residual.dim(c.cell.first, c.cell.second));
      if (low > 0) out.forced_survivors.emplace(c.cell, low);
    }
    for (const Arc& a : arcs_) {
      int low = -1;
      for (const Pattern& pat : out.patterns) {
        int m = 0;
        for (const Arc& b : pat.arcs) {
          if (b.source == a.source && b.target == a.target) m = b.multiplicity;
        }
        low = low < 0 ? m : std::min(low, m);
      }
      if (low > 0) out.forced_arcs.push_back({a.source, a.target, a.page, low});
    }
  }

  const SSeqProblem& p_;
  std::vector<CellState> cells_;
  std::map<Cell, std::size_t> index_;
  std::vector<Arc> arcs_;
  std::vector<Forced> forced_;
  int total_ = 0;
  int min_target_ = 0;
  std::array<int, 4> removable_{};
  std::array<int, 4> removed_{};
  int removed_total_ = 0;
  std::vector<int> out_;
  std::vector<int> in_;
  std::vector<Arc> chosen_;
  std::size_t states_ = 0;
};

}  // namespace

std::vector<Arc> admissible_arcs(const SSeqProblem& p) { return Search(p).arcs(); }

Enumeration enumerate_patterns(const SSeqProblem& p) { return Search(p).run(); }

SideStatus SideStatus::unknown(DimTable table) {
  SideStatus s;
  s.table = std::move(table);
  return s;
}

SideStatus SideStatus::collapsed(DimTable table, const RankWindow& window) {
  if (!window.collapsed() || window.upper.value != static_cast<int>(table.total())) {
    throw SSeqError("collapse of '" + table.label() + "' is not certified: window is [" +
                    std::to_string(window.lower.value) + ", " + std::to_string(window.upper.value) + "]");
  }
  SideStatus s;
  s.certificate = "collapsed (" + to_string(window.theory) + " window {" + std::to_string(window.lower.value) +
                  "} from " + window.lower.provenance + ")";
  for (const auto& [c, d] : table.cells()) {
    s.marks.add({MarkKind::survivor, c, static_cast<int>(d), 0, std::nullopt, s.certificate, false});
  }
  s.table = std::move(table);
  return s;
}

SideStatus SideStatus::known(DimTable table, MarkSet marks, std::string why) {
  SideStatus s;
  s.table = std::move(table);
  s.marks = std::move(marks);
  s.certificate = std::move(why);
  return s;
}

bool SideStatus::fully_never_source(Cell c) const {
  const auto dim = static_cast<int>(table.dim(c.first, c.second));
  return dim > 0 && marks.never_source(c) >= dim;
}

bool SideStatus::fully_never_target(Cell c) const {
  const auto dim = static_cast<int>(table.dim(c.first, c.second));
  return dim > 0 && marks.never_target(c) >= dim;
}

namespace {

bool is_declared(const MarkSet& m) {
  return std::any_of(m.marks().begin(), m.marks().end(), [](const Mark& x) { return x.declared; });
}

}  // namespace

DerivedMarks derive_marks_exact(const HomologyMap& phi, const SideStatus& source, const SideStatus& target,
                                const std::string& provenance) {
  const bool declared_input = is_declared(source.marks) || is_declared(target.marks);
  DerivedMarks out;
  for (const auto& [s, block] : phi.blocks) {
    const Cell t{s.first + phi.shift.i, s.second + phi.shift.j};
    const int rank = static_cast<int>(matrix_rank(block));
    if (rank == 0) continue;
    if (source.table.dim(s.first, s.second) == 0 || target.table.dim(t.first, t.second) == 0) {
      throw SSeqError("map block " + cell_text(s) + " -> " + cell_text(t) + " does not fit the tables");
    }
    if (target.fully_never_target(t)) {
      out.on_source.add({MarkKind::never_target, s, rank, 0, std::nullopt,
                         provenance + ": nonzero image in " + cell_text(t) + ", " + target.certificate, declared_input});
    }
    if (source.fully_never_source(s)) {
      out.on_target.add({MarkKind::never_source, t, rank, 0, std::nullopt,
                         provenance + ": image of " + cell_text(s) + ", " + source.certificate, declared_input});
    }
  }
  return out;
}

DerivedMarks derive_marks_declared(const CobordismDescriptor& c, const std::vector<std::pair<Cell, Cell>>& components,
                                   const SideStatus& source, const SideStatus& target) {
  const Bidegree shift = cobordism_order_bound(c);
  std::set<std::pair<Cell, Cell>> unique(components.begin(), components.end());
  DerivedMarks out;
  for (const auto& [s, t] : unique) {
    if (t.first - s.first != shift.i || t.second - s.second != shift.j) {
      throw SSeqError("declared component " + cell_text(s) + " -> " + cell_text(t) + " violates the shift (" +
                      std::to_string(shift.i) + "," + std::to_string(shift.j - shift.i) + ")");
    }
    if (source.table.dim(s.first, s.second) == 0) {
      throw SSeqError("declared component starts in empty cell " + cell_text(s));
    }
    if (target.table.dim(t.first, t.second) == 0) {
      throw SSeqError("declared component ends in empty cell " + cell_text(t));
    }
    const std::string why = "declared: " + c.label + " (chi " + std::to_string(c.euler_characteristic) + ", S.S " +
                            std::to_string(c.self_intersection) + ") component " + cell_text(s) + " -> " +
                            cell_text(t);
    if (target.fully_never_target(t)) {
      out.on_source.add({MarkKind::never_target, s, 1, 0, std::nullopt, why + ", " + target.certificate, true});
    }
    if (source.fully_never_source(s)) {
      out.on_target.add({MarkKind::never_source, t, 1, 0, std::nullopt, why + ", " + source.certificate, true});
    }
  }
  return out;
}

MarkSet derive_forced_sources(const HomologyMap& phi, const DimTable& source, const DimTable& target,
                              const Pattern& known) {
  MarkSet out;
  for (const Arc& arc : known.arcs) {
    const Cell c{arc.source.first - phi.shift.i, arc.source.second - phi.shift.j};
    const Cell d{arc.target.first - phi.shift.i, arc.target.second - phi.shift.j};
    auto into_c = phi.blocks.find(c);
    auto into_d = phi.blocks.find(d);
    if (into_c == phi.blocks.end() || into_d == phi.blocks.end()) continue;
    if (matrix_rank(into_c->second) == 0 || matrix_rank(into_d->second) == 0) continue;
    if (source.dim(c.first, c.second) != 1 || target.dim(arc.source.first, arc.source.second) != 1) {
      throw SSeqError("forced source through " + cell_text(c) + " -> " + cell_text(arc.source) +
                      " needs one-dimensional cells");
    }
    out.add({MarkKind::forced_source, c, 1, arc.page, d,
             "commuting square over the known arc " + cell_text(arc.source) + " -> " + cell_text(arc.target) +
                 " on page " + std::to_string(arc.page),
             false});
  }
  return out;
}

std::optional<Mark> positive_knot_survivor(const PlanarDiagram& d, const DimTable& table) {
  if (d.n_minus() != 0 || component_count(d) != 1) return std::nullopt;
  std::optional<Cell> cell;
  std::size_t rank = 0;
  for (const auto& [c, k] : table.cells()) {
    if (c.first != 0) continue;
    rank += k;
    cell = c;
  }
  if (rank != 1) return std::nullopt;
  return Mark{MarkKind::survivor, *cell, 1, 0, std::nullopt, "positive-knot-psi", false};
}

std::vector<Arc> delta_preserving_arcs(const std::vector<Arc>& arcs) {
  std::vector<Arc> out;
  for (const Arc& a : arcs) {
    const int dd = (a.target.second - 2 * a.target.first) - (a.source.second - 2 * a.source.first);
    if (dd >= 0) out.push_back(a);
  }
  return out;
}

namespace {

std::string pretzel_name(int p, int q, int r) {
  return "pretzel(" + std::to_string(-p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
}

class PretzelChain {
 public:
  PretzelMarks lower(int p, int q, int r) { return run(p, q, r, true); }
  PretzelMarks upper(int p, int q, int r) { return run(p, q, r, false); }

 private:
  const DimTable& table(int p, int q, int r) {
    auto key = std::make_tuple(p, q, r);
    auto it = tables_.find(key);
    if (it == tables_.end()) {
      it = tables_.emplace(key, khovanov_homology(pretzel_diagram({-p, q, r}), field_, pretzel_name(p, q, r))).first;
    }
    return it->second;
  }

  void check_face(const MarkedScan& s, const FaceSpec& face, int p, int q, int r) {
    if (!s.model(face).table().same_cells(table(p, q, r))) {
      throw SSeqError("face of " + pretzel_name(p, q, r) + " chain does not have the table of " +
                      pretzel_name(p, q, r));
    }
  }

  SideStatus collapsed_face(const MarkedScan& s, const FaceSpec& face) {
    DimTable t = s.model(face).table();
    return SideStatus::collapsed(t, floer_rank_window(s.face_diagram(face), Theory::km, t));
  }

  PretzelMarks run(int p, int q, int r, bool lower_side) {
    PretzelMarks out;
    out.table = table(p, q, r);
    const bool q_even = q % 2 == 0;
    const bool r_even = r % 2 == 0;
    const std::string name = pretzel_name(p, q, r);
    if (p == std::min(q, r) && !lower_side) {
      const PlanarDiagram d = pretzel_diagram({-p, q, r});
      SideStatus s = SideStatus::collapsed(out.table, floer_rank_window(d, Theory::km, out.table));
      out.marks = s.marks;
      out.steps.push_back(name + " " + s.certificate);
      return out;
    }
    if (q_even || r_even) {
      // Move through the neighbouring all-odd pretzel along the even band.
      const int band_start = q_even ? p : p + q;
      const int step = lower_side ? 1 : -1;
      const int q2 = q_even ? q + step : q;
      const int r2 = r_even ? r + step : r;
      PretzelMarks other = run(p, q2, r2, lower_side);
      out.steps = other.steps;
      if (lower_side) {
        MarkedScan s(pretzel_diagram({-p, q2, r2}), {{static_cast<std::size_t>(band_start), false}}, field_);
        check_face(s, {FaceKind::smoothing0}, p, q, r);
        const HomologyMap phi = s.face_map({FaceKind::whole}, {FaceKind::smoothing0});
        DerivedMarks m = derive_marks_exact(
            phi, SideStatus::known(other.table, other.marks, "lower diagonal of " + pretzel_name(p, q2, r2)),
            SideStatus::unknown(out.table), pretzel_name(p, q2, r2) + " -> " + name);
        out.marks = m.on_target;
      } else {
        MarkedScan s(pretzel_diagram({-p, q, r}), {{static_cast<std::size_t>(band_start), false}}, field_);
        check_face(s, {FaceKind::smoothing0}, p, q2, r2);
        const HomologyMap phi = s.face_map({FaceKind::whole}, {FaceKind::smoothing0});
        DerivedMarks m = derive_marks_exact(
            phi, SideStatus::unknown(out.table),
            SideStatus::known(other.table, other.marks, "upper diagonal of " + pretzel_name(p, q2, r2)),
            name + " -> " + pretzel_name(p, q2, r2));
        out.marks = m.on_source;
      }
      out.steps.push_back(name + ": " + std::to_string(out.marks.marks().size()) + " marks via the even band");
      return out;
    }
    if (lower_side) {
      // Inclusions from P(-1,q,r), thin, through the first band.
      std::vector<ScanMark> marks;
      for (int c = 0; c + 1 < p; ++c) marks.push_back({static_cast<std::size_t>(c), false});
      MarkedScan s(pretzel_diagram({-p, q, r}), marks, field_);
      const FaceSpec from(marks.size(), FaceKind::smoothing1);
      const FaceSpec to(marks.size(), FaceKind::whole);
      check_face(s, from, 1, q, r);
      SideStatus src = collapsed_face(s, from);
      DerivedMarks m = derive_marks_exact(s.face_map(from, to), src, SideStatus::unknown(out.table),
                                          pretzel_name(1, q, r) + " -> " + name);
      out.marks = m.on_target;
      out.steps.push_back(pretzel_name(1, q, r) + " " + src.certificate);
    } else {
      // Inclusions into P(-m,q,r), m = min(q,r), thin, through the first band.
      const int m = std::min(q, r);
      std::vector<ScanMark> marks;
      for (int c = 0; c < m - p; ++c) marks.push_back({static_cast<std::size_t>(c), false});
      MarkedScan s(pretzel_diagram({-m, q, r}), marks, field_);
      const FaceSpec from(marks.size(), FaceKind::smoothing1);
      const FaceSpec to(marks.size(), FaceKind::whole);
      check_face(s, from, p, q, r);
      SideStatus tgt = collapsed_face(s, to);
      DerivedMarks d = derive_marks_exact(s.face_map(from, to), SideStatus::unknown(out.table), tgt,
                                          name + " -> " + pretzel_name(m, q, r));
      out.marks = d.on_source;
      out.steps.push_back(pretzel_name(m, q, r) + " " + tgt.certificate);
    }
    out.steps.push_back(name + ": " + std::to_string(out.marks.marks().size()) +
                        (lower_side ? " never_source" : " never_target") + " marks");
    return out;
  }

  Field field_ = Field::rationals();
  std::map<std::tuple<int, int, int>, DimTable> tables_;
};

}  // namespace

PretzelMarks pretzel_diagonal_marks(int p, int q, int r) {
  if (p < 2 || p >= std::min(q, r)) throw SSeqError("pretzel diagonal marks need 2 <= p < min(q, r)");
  if ((p % 2 == 0) + (q % 2 == 0) + (r % 2 == 0) > 1) throw SSeqError("P(-p,q,r) with two even entries is a link");
  PretzelChain chain;
  PretzelMarks low = chain.lower(p, q, r);
  PretzelMarks up = chain.upper(p, q, r);
  PretzelMarks out;
  out.table = low.table;
  out.marks = low.marks;
  out.marks.merge(up.marks);
  out.steps = low.steps;
  out.steps.insert(out.steps.end(), up.steps.begin(), up.steps.end());
  return out;
}

}  // namespace khss
