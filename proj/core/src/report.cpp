#include "khss/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace khss {

namespace {

using nlohmann::json;

int row_of(Cell c, GridAxes axes) { return axes == GridAxes::plot ? c.second - c.first : c.second - 2 * c.first; }

std::string plot_cell(Cell c) {
  return "(" + std::to_string(c.first) + "," + std::to_string(c.second - c.first) + ")";
}

json cell_json(Cell c) { return json::array({c.first, c.second}); }
Cell cell_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json table_to(const DimTable& t) {
  json cells = json::array();
  for (const auto& [c, d] : t.cells()) cells.push_back(json::array({c.first, c.second, d}));
  return {{"field", t.field().short_name()}, {"label", t.label()}, {"cells", cells}, {"total", t.total()}};
}

DimTable table_from(const json& j) {
  DimTable t(Field::parse(j.at("field").get<std::string>()), j.value("label", std::string()));
  for (const json& c : j.at("cells")) t.set(c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<std::size_t>());
  if (j.contains("total") && j.at("total").get<std::size_t>() != t.total()) {
    throw std::invalid_argument("table total does not match its cells");
  }
  return t;
}

json window_to(const RankWindow& w) {
  return {{"theory", to_string(w.theory)},
          {"lower", {{"value", w.lower.value}, {"provenance", w.lower.provenance}}},
          {"upper", {{"value", w.upper.value}, {"provenance", w.upper.provenance}}},
          {"admissible", w.admissible()},
          {"remarks", w.remarks}};
}

RankWindow window_from(const json& j) {
  RankWindow w;
  w.theory = parse_theory(j.at("theory").get<std::string>());
  w.lower = {j.at("lower").at("value").get<int>(), j.at("lower").at("provenance").get<std::string>()};
  w.upper = {j.at("upper").at("value").get<int>(), j.at("upper").at("provenance").get<std::string>()};
  w.remarks = j.value("remarks", std::vector<std::string>{});
  return w;
}

json arc_to(const Arc& a) {
  return {{"source", cell_json(a.source)}, {"target", cell_json(a.target)}, {"page", a.page},
          {"multiplicity", a.multiplicity}};
}

Arc arc_from(const json& j) {
  return {cell_from(j.at("source")), cell_from(j.at("target")), j.at("page").get<int>(), j.at("multiplicity").get<int>()};
}

json arcs_to(const std::vector<Arc>& arcs) {
  json out = json::array();
  for (const Arc& a : arcs) out.push_back(arc_to(a));
  return out;
}

std::vector<Arc> arcs_from(const json& j) {
  std::vector<Arc> out;
  for (const json& a : j) out.push_back(arc_from(a));
  return out;
}

json mark_to(const Mark& m) {
  json j = {{"kind", to_string(m.kind)}, {"cell", cell_json(m.cell)}, {"count", m.count},
            {"provenance", m.provenance}, {"declared", m.declared}};
  if (m.kind == MarkKind::forced_source) j["page"] = m.page;
  if (m.target) j["target"] = cell_json(*m.target);
  return j;
}

Mark mark_from(const json& j) {
  Mark m;
  m.kind = parse_mark_kind(j.at("kind").get<std::string>());
  m.cell = cell_from(j.at("cell"));
  m.count = j.at("count").get<int>();
  m.page = j.value("page", 0);
  if (j.contains("target")) m.target = cell_from(j.at("target"));
  m.provenance = j.at("provenance").get<std::string>();
  m.declared = j.at("declared").get<bool>();
  return m;
}

json cell_map_to(const std::map<Cell, std::size_t>& m) {
  json out = json::array();
  for (const auto& [c, n] : m) out.push_back(json::array({c.first, c.second, n}));
  return out;
}

std::map<Cell, std::size_t> cell_map_from(const json& j) {
  std::map<Cell, std::size_t> out;
  for (const json& e : j) out[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<std::size_t>();
  return out;
}

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

GridOverlay overlay_of(const MarkSet& marks, std::vector<Arc> arcs) {
  GridOverlay o;
  for (const Mark& m : marks.marks()) o.circled[m.cell] = std::max(o.circled[m.cell], m.count);
  o.arcs = std::move(arcs);
  return o;
}

std::string grid_text(const DimTable& t, const GridOverlay& overlay) {
  std::set<Cell> cells;
  for (const auto& [c, d] : t.cells()) cells.insert(c);
  for (const auto& [c, n] : overlay.circled) cells.insert(c);
  std::ostringstream os;
  if (cells.empty()) return "(empty table)\n";
  int imin = cells.begin()->first, imax = cells.rbegin()->first;
  int rmin = row_of(*cells.begin(), overlay.axes), rmax = rmin;
  for (const Cell& c : cells) {
    rmin = std::min(rmin, row_of(c, overlay.axes));
    rmax = std::max(rmax, row_of(c, overlay.axes));
  }
  std::map<std::pair<int, int>, Cell> at;
  for (const Cell& c : cells) at[{c.first, row_of(c, overlay.axes)}] = c;
  std::size_t w = 3;
  for (int i = imin; i <= imax; ++i) w = std::max(w, std::to_string(i).size() + 1);
  auto pad = [&](const std::string& s) { return std::string(w - s.size(), ' ') + s; };
  os << (overlay.axes == GridAxes::plot ? "j-i" : "  d") << " |";
  for (int i = imin; i <= imax; ++i) os << pad(std::to_string(i) + " ");
  os << "\n----+" << std::string(w * (imax - imin + 1), '-') << "\n";
  for (int r = rmax; r >= rmin; --r) {
    bool any = false;
    for (int i = imin; i <= imax; ++i) any = any || at.count({i, r});
    if (!any && overlay.axes == GridAxes::delta) continue;  // delta has one parity per knot
    std::string label = std::to_string(r);
    os << std::string(label.size() < 3 ? 3 - label.size() : 0, ' ') << label << " |";
    for (int i = imin; i <= imax; ++i) {
      auto it = at.find({i, r});
      if (it == at.end()) {
        os << pad(". ");
        continue;
      }
      const std::size_t d = t.dim(it->second.first, it->second.second);
      const std::string v = d > 9 ? "+" : std::to_string(d);
      os << pad(v + (overlay.circled.count(it->second) ? "o" : " "));
    }
    os << "\n";
  }
  for (const Arc& a : overlay.arcs) {
    os << "  " << plot_cell(a.source) << " -> " << plot_cell(a.target) << " page " << a.page;
    if (a.multiplicity > 1) os << " x" << a.multiplicity;
    os << "\n";
  }
  return os.str();
}

std::string grid_svg(const DimTable& t, const GridOverlay& overlay) {
  std::set<Cell> cells;
  for (const auto& [c, d] : t.cells()) cells.insert(c);
  for (const Arc& a : overlay.arcs) {
    cells.insert(a.source);
    cells.insert(a.target);
  }
  const int s = 36, margin = 40;
  int imin = 0, imax = 0, rmin = 0, rmax = 0;
  if (!cells.empty()) {
    imin = cells.begin()->first;
    imax = cells.rbegin()->first;
    rmin = rmax = row_of(*cells.begin(), overlay.axes);
    for (const Cell& c : cells) {
      rmin = std::min(rmin, row_of(c, overlay.axes));
      rmax = std::max(rmax, row_of(c, overlay.axes));
    }
  }
  const int w = margin + s * (imax - imin + 1) + 10, h = margin + s * (rmax - rmin + 1) + 10;
  auto x = [&](int i) { return margin + s * (i - imin) + s / 2; };
  auto y = [&](int r) { return 10 + s * (rmax - r) + s / 2; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"monospace\" font-size=\"14\">\n";
  os << "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
        "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"#c03020\"/></marker></defs>\n";
  os << "<title>" << svg_escape(t.label()) << "</title>\n";
  for (int i = imin; i <= imax; ++i) {
    os << "<text x=\"" << x(i) << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\" fill=\"#666\">" << i << "</text>\n";
  }
  for (int r = rmin; r <= rmax; ++r) {
    os << "<text x=\"4\" y=\"" << y(r) + 5 << "\" fill=\"#666\">" << r << "</text>\n";
  }
  for (const auto& [c, d] : t.cells()) {
    const int cx = x(c.first), cy = y(row_of(c, overlay.axes));
    os << "<text x=\"" << cx << "\" y=\"" << cy + 5 << "\" text-anchor=\"middle\">" << d << "</text>\n";
    if (overlay.circled.count(c)) {
      os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"12\" fill=\"none\" stroke=\"#2050c0\"/>\n";
    }
  }
  for (const Arc& a : overlay.arcs) {
    const double x0 = x(a.source.first), y0 = y(row_of(a.source, overlay.axes));
    const double x1 = x(a.target.first), y1 = y(row_of(a.target, overlay.axes));
    const double len = std::hypot(x1 - x0, y1 - y0);
    const double k = len > 0 ? 13.0 / len : 0;
    os << "<line x1=\"" << x0 + (x1 - x0) * k << "\" y1=\"" << y0 + (y1 - y0) * k << "\" x2=\"" << x1 - (x1 - x0) * k
       << "\" y2=\"" << y1 - (y1 - y0) * k << "\" stroke=\"#c03020\" marker-end=\"url(#head)\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string table_json(const DimTable& t) { return table_to(t).dump(2); }

DimTable table_from_json(const std::string& text) {
  try {
    return table_from(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed table: ") + e.what());
  }
}

std::string window_json(const RankWindow& w) { return window_to(w).dump(2); }

std::string report_json(const AnalysisReport& r) {
  json j;
  j["knot"] = r.knot;
  j["theory"] = r.theory;
  j["field"] = r.field;
  j["table"] = table_to(r.table);
  json delta = json::array();
  for (const auto& [d, n] : r.delta_ranks) delta.push_back(json::array({d, n}));
  j["delta_ranks"] = delta;
  if (r.classical) {
    json poly = json::array();
    for (const auto& [e, c] : r.classical->delta.coeffs()) poly.push_back(json::array({e, c}));
    j["classical"] = {{"alexander", poly},
                      {"determinant", r.classical->determinant},
                      {"coeff_abs_sum", r.classical->coeff_abs_sum}};
  }
  if (r.window) j["window"] = window_to(*r.window);
  j["target_ranks"] = r.target_ranks;
  j["target_provenance"] = r.target_provenance;
  j["z4_targets"] = r.z4_targets;
  j["z4_provenance"] = r.z4_provenance;
  json marks = json::array();
  for (const Mark& m : r.marks) marks.push_back(mark_to(m));
  j["marks"] = marks;
  j["admissible"] = arcs_to(r.admissible);
  json patterns = json::array();
  for (const Pattern& p : r.patterns) patterns.push_back({{"arcs", arcs_to(p.arcs)}, {"residual", table_to(p.residual)}});
  j["patterns"] = patterns;
  j["forced_survivors"] = cell_map_to(r.forced_survivors);
  j["forced_arcs"] = arcs_to(r.forced_arcs);
  j["states"] = r.states;
  j["assumptions"] = r.assumptions;
  j["notes"] = r.notes;
  return j.dump(2);
}

AnalysisReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    AnalysisReport r;
    r.knot = j.at("knot").get<std::string>();
    r.theory = j.at("theory").get<std::string>();
    r.field = j.at("field").get<std::string>();
    r.table = table_from(j.at("table"));
    for (const json& e : j.at("delta_ranks")) r.delta_ranks[e.at(0).get<int>()] = e.at(1).get<std::size_t>();
    if (j.contains("classical")) {
      AlexanderInvariants a;
      for (const json& e : j.at("classical").at("alexander")) a.delta.add(e.at(0).get<int>(), e.at(1).get<std::int64_t>());
      a.determinant = j.at("classical").at("determinant").get<std::int64_t>();
      a.coeff_abs_sum = j.at("classical").at("coeff_abs_sum").get<std::int64_t>();
      r.classical = a;
    }
    if (j.contains("window")) r.window = window_from(j.at("window"));
    r.target_ranks = j.at("target_ranks").get<std::vector<int>>();
    r.target_provenance = j.at("target_provenance").get<std::string>();
    r.z4_targets = j.at("z4_targets").get<std::vector<int>>();
    r.z4_provenance = j.at("z4_provenance").get<std::string>();
    for (const json& m : j.at("marks")) r.marks.push_back(mark_from(m));
    r.admissible = arcs_from(j.at("admissible"));
    for (const json& p : j.at("patterns")) r.patterns.push_back({arcs_from(p.at("arcs")), table_from(p.at("residual"))});
    r.forced_survivors = cell_map_from(j.at("forced_survivors"));
    r.forced_arcs = arcs_from(j.at("forced_arcs"));
    r.states = j.at("states").get<std::size_t>();
    r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string report_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << r.knot << " (" << r.theory << ", " << r.field << "), rank " << r.table.total() << "\n";
  MarkSet marks;
  for (const Mark& m : r.marks) marks.add(m);
  os << grid_text(r.table, overlay_of(marks));
  if (r.classical) {
    os << "Alexander " << r.classical->delta.to_string("t") << ", det " << r.classical->determinant
       << ", coefficient sum " << r.classical->coeff_abs_sum << "\n";
  }
  if (r.window) {
    os << "window [" << r.window->lower.value << ", " << r.window->upper.value << "] lower: " << r.window->lower.provenance
       << "; upper: " << r.window->upper.provenance << "\n";
    for (const auto& s : r.window->remarks) os << "  remark: " << s << "\n";
  }
  os << "target ranks {";
  for (std::size_t k = 0; k < r.target_ranks.size(); ++k) os << (k ? "," : "") << r.target_ranks[k];
  os << "} (" << r.target_provenance << ")\n";
  if (!r.z4_targets.empty()) {
    os << "per-class targets";
    for (int v : r.z4_targets) os << " " << v;
    os << " (" << r.z4_provenance << ")\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  os << r.marks.size() << " marks, " << r.admissible.size() << " admissible arcs, " << r.patterns.size()
     << " patterns, " << r.states << " search states\n";
  for (std::size_t k = 0; k < r.patterns.size(); ++k) {
    const Pattern& p = r.patterns[k];
    os << "pattern " << k + 1 << " (residual " << p.residual.total() << "):";
    if (p.arcs.empty()) os << " no arcs";
    for (const Arc& a : p.arcs) {
      os << " " << plot_cell(a.source) << "->" << plot_cell(a.target) << " p" << a.page;
      if (a.multiplicity > 1) os << " x" << a.multiplicity;
    }
    os << "\n";
  }
  if (r.patterns.empty()) os << "no pattern is consistent with the constraints\n";
  std::size_t forced = 0;
  for (const auto& [c, n] : r.forced_survivors) forced += n;
  os << "forced survivors: " << forced;
  for (const auto& [c, n] : r.forced_survivors) os << " " << plot_cell(c) << (n > 1 ? "x" + std::to_string(n) : "");
  os << "\n";
  if (!r.forced_arcs.empty()) {
    os << "arcs in every pattern:";
    for (const Arc& a : r.forced_arcs) os << " " << plot_cell(a.source) << "->" << plot_cell(a.target);
    os << "\n";
  }
  for (const auto& a : r.assumptions) os << "assumes: " << a << "\n";
  os << "cells are (i, j-i)\n";
  return os.str();
}

}  // namespace khss
