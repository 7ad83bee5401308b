// khss: Khovanov tables, classical invariants, skein maps, Floer rank
// windows and spectral-sequence pattern enumeration from the command line.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "khss/classical.hpp"
#include "khss/floer.hpp"
#include "khss/homology.hpp"
#include "khss/knot_spec.hpp"
#include "khss/problem.hpp"
#include "khss/report.hpp"
#include "khss/skein.hpp"

namespace {

using nlohmann::json;
using namespace khss;

struct Options {
  std::string knot;
  std::string field;  // empty: the command's default
  std::string format = "text";
  std::string out;
  bool delta_axes = false;
  std::string engine = "scan";
  std::string theory = "km";
  std::size_t crossing = 0;
  std::vector<std::string> marks;  // "k" or "k:c" (with a changed copy)
  std::vector<std::string> path;
  std::string problem;
  int pattern = 0;  // 0: overlay the admissible arcs
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Field field_or(const Options& o, Field fallback) { return o.field.empty() ? fallback : Field::parse(o.field); }

json parse(const std::string& text) { return json::parse(text); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json map_json(const HomologyMap& m) {
  json blocks = json::array();
  for (const auto& [cell, b] : m.blocks) {
    json rows = json::array();
    for (const auto& row : b.to_dense()) {
      json r = json::array();
      for (const auto& v : row) r.push_back(v.to_string());
      rows.push_back(r);
    }
    blocks.push_back({{"source", json::array({cell.first, cell.second})},
                      {"target", json::array({cell.first + m.shift.i, cell.second + m.shift.j})},
                      {"rank", m.rank_at(cell.first, cell.second)},
                      {"matrix", rows}});
  }
  return {{"shift", json::array({m.shift.i, m.shift.j})}, {"rank", m.rank()}, {"blocks", blocks}};
}

std::string map_text(const std::string& name, const HomologyMap& m) {
  std::ostringstream os;
  os << name << ": rank " << m.rank() << ", shift (" << m.shift.i << "," << m.shift.j << ")\n";
  for (const auto& [cell, b] : m.blocks) {
    const std::size_t r = m.rank_at(cell.first, cell.second);
    if (r == 0) continue;
    os << "  (" << cell.first << "," << cell.second - cell.first << ") -> (" << cell.first + m.shift.i << ","
       << cell.second + m.shift.j - cell.first - m.shift.i << ") rank " << r << "\n";
  }
  return os.str();
}

std::string table_output(const DimTable& t, const Options& o) {
  GridOverlay overlay;
  overlay.axes = o.delta_axes ? GridAxes::delta : GridAxes::plot;
  if (o.format == "json") return table_json(t) + "\n";
  if (o.format == "svg") return grid_svg(t, overlay);
  if (o.format == "grid") return grid_text(t, overlay);
  std::ostringstream os;
  os << t.label() << " over " << t.field().name() << ", rank " << t.total() << "\n" << poincare_string(t) << "\n";
  const DeltaProfile dp = delta_profile(t);
  os << "delta ranks:";
  for (const auto& [d, n] : dp.ranks) os << " " << d << ":" << n;
  os << (dp.thin ? " (thin)" : "") << "\n";
  return os.str();
}

std::string run_khr(const Options& o) {
  const PlanarDiagram d = parse_knot_spec(o.knot);
  const Engine e = o.engine == "cube" ? Engine::cube : Engine::scan;
  return table_output(khovanov_homology(d, field_or(o, Field::rationals()), o.knot, e), o);
}

std::string run_jones(const Options& o) {
  const DimTable t = khovanov_homology(parse_knot_spec(o.knot), field_or(o, Field::gf2()), o.knot);
  const LaurentPoly v = jones_polynomial(t);
  if (o.format == "json") {
    json c = json::array();
    for (const auto& [e, k] : v.coeffs()) c.push_back(json::array({e, k}));
    return dump({{"knot", o.knot}, {"variable", "q"}, {"coefficients", c}, {"abs_at_sqrt_minus_one", jones_abs_at_minus_one(t)}});
  }
  return v.to_string("q") + "\n";
}

std::string run_alexander(const Options& o) {
  const AlexanderInvariants a = alexander_invariants(parse_knot_spec(o.knot));
  json coeffs = json::array();
  if (!a.delta.is_zero()) {
    for (int e = a.delta.min_exponent(); e <= a.delta.max_exponent(); ++e) coeffs.push_back(a.delta.coeff(e));
  }
  if (o.format == "json") {
    return dump({{"knot", o.knot},
                 {"min_exponent", a.delta.is_zero() ? 0 : a.delta.min_exponent()},
                 {"coefficients", coeffs},
                 {"det", a.determinant},
                 {"abs_sum", a.coeff_abs_sum}});
  }
  std::ostringstream os;
  os << a.delta.to_string("t") << "\ncoefficients " << coeffs.dump() << "\ndet " << a.determinant << "\nabs_sum "
     << a.coeff_abs_sum << "\n";
  return os.str();
}

std::string run_det(const Options& o) {
  const PlanarDiagram d = parse_knot_spec(o.knot);
  const DimTable t = khovanov_homology(d, field_or(o, Field::gf2()), o.knot);
  const std::int64_t v = jones_abs_at_minus_one(t);
  json j = {{"knot", o.knot}, {"jones_abs", v}};
  if (component_count(d) == 1) {
    const AlexanderInvariants a = alexander_invariants(d);
    j["alexander_det"] = a.determinant;
    j["agree"] = a.determinant == v;
  }
  if (o.format == "json") return dump(j);
  std::ostringstream os;
  os << "|V(-1)| = " << v;
  if (j.contains("alexander_det")) os << ", |Delta(-1)| = " << j["alexander_det"] << (j["agree"] ? " (agree)" : " (DIFFER)");
  os << "\n";
  return os.str();
}

std::string run_bounds(const Options& o) {
  const Theory th = parse_theory(o.theory);
  const PlanarDiagram d = parse_knot_spec(o.knot);
  const DimTable t = khovanov_homology(d, field_or(o, default_field(th)), o.knot);
  const RankWindow w = floer_rank_window(d, th, t);
  if (o.format == "json") {
    json j = parse(window_json(w));
    j["knot"] = o.knot;
    j["collapsed"] = w.collapsed();
    return dump(j);
  }
  std::ostringstream os;
  os << o.knot << " " << to_string(th) << " window {";
  const auto ranks = w.admissible();
  for (std::size_t k = 0; k < ranks.size(); ++k) os << (k ? "," : "") << ranks[k];
  os << "}" << (w.collapsed() ? " collapsed" : "") << "\n  lower " << w.lower.value << " (" << w.lower.provenance
     << ")\n  upper " << w.upper.value << " (" << w.upper.provenance << ")\n";
  for (const auto& r : w.remarks) os << "  remark: " << r << "\n";
  return os.str();
}

std::string run_triple(const Options& o) {
  const PlanarDiagram d = parse_knot_spec(o.knot);
  const SkeinTriple t = skein_triple(d, o.crossing);
  const SkeinMaps m = les_homology_maps(t, field_or(o, Field::rationals()));
  if (o.format == "json") {
    return dump({{"knot", o.knot},
                 {"crossing", o.crossing},
                 {"table", parse(table_json(m.table))},
                 {"table0", parse(table_json(m.table0))},
                 {"table1", parse(table_json(m.table1))},
                 {"include", map_json(m.include)},
                 {"project", map_json(m.project)},
                 {"connecting", map_json(m.connecting)},
                 {"exact", m.exact()},
                 {"failures", m.exactness_failures}});
  }
  std::ostringstream os;
  os << o.knot << " at crossing " << o.crossing << ": ranks D " << m.table.total() << ", D0 " << m.table0.total()
     << ", D1 " << m.table1.total() << "\n";
  os << map_text("include D1 -> D", m.include) << map_text("project D -> D0", m.project)
     << map_text("connecting D0 -> D1", m.connecting);
  os << (m.exact() ? "exact in every bidegree\n" : "NOT exact\n");
  for (const auto& f : m.exactness_failures) os << "  " << f << "\n";
  return os.str();
}

std::string run_map_rank(const Options& o) {
  std::vector<ScanMark> marks;
  for (const auto& s : o.marks) {
    const auto colon = s.find(':');
    try {
      marks.push_back({static_cast<std::size_t>(std::stoul(s.substr(0, colon))), colon != std::string::npos && s.substr(colon + 1) == "c"});
    } catch (const std::exception&) {
      throw UsageError("--mark takes k or k:c, got '" + s + "'");
    }
  }
  if (marks.empty() || o.path.size() < 2) throw UsageError("map-rank needs --mark and at least two --face values");
  MarkedScan scan(parse_knot_spec(o.knot), marks, field_or(o, Field::rationals()));
  std::vector<FaceSpec> faces;
  for (const auto& f : o.path) {
    FaceSpec spec;
    std::stringstream ss(f);
    std::string part;
    while (std::getline(ss, part, ',')) spec.push_back(parse_face_kind(part));
    faces.push_back(spec);
  }
  HomologyMap phi = scan.face_map(faces[0], faces[1]);
  for (std::size_t k = 2; k < faces.size(); ++k) phi = compose_maps(scan.face_map(faces[k - 1], faces[k]), phi);
  const DimTable src = scan.model(faces.front()).table();
  const DimTable tgt = scan.model(faces.back()).table();
  if (o.format == "json") {
    json j = map_json(phi);
    j["knot"] = o.knot;
    j["source"] = parse(table_json(src));
    j["target"] = parse(table_json(tgt));
    return dump(j);
  }
  return "source rank " + std::to_string(src.total()) + ", target rank " + std::to_string(tgt.total()) + "\n" +
         map_text(o.path.front() + " -> " + o.path.back(), phi);
}

std::string run_sseq(const Options& o) {
  const LoadedProblem lp = load_problem_file(o.problem);
  const AnalysisReport r = analyse(lp);
  if (o.format == "json") return report_json(r) + "\n";
  if (o.format == "text") return report_text(r);
  std::vector<Arc> arcs = r.admissible;
  if (o.pattern > 0) {
    if (static_cast<std::size_t>(o.pattern) > r.patterns.size()) {
      throw UsageError("--pattern " + std::to_string(o.pattern) + " but there are " + std::to_string(r.patterns.size()) + " patterns");
    }
    arcs = r.patterns[o.pattern - 1].arcs;
  }
  GridOverlay overlay = overlay_of(lp.problem.marks, arcs);
  overlay.axes = o.delta_axes ? GridAxes::delta : GridAxes::plot;
  return o.format == "svg" ? grid_svg(r.table, overlay) : grid_text(r.table, overlay);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov tables, skein maps and spectral-sequence pattern search"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--field", o.field, "f2, q or fP for a prime P (default per command)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json", "grid", "svg"}));
  app.add_option("--out", o.out, "Write output to this file instead of stdout");
  app.add_flag("--delta", o.delta_axes, "Draw grids with delta = j - 2i down instead of j - i");

  auto knot_arg = [&](CLI::App* c) { c->add_option("knot", o.knot, "unknot, torus(p,q), pretzel(p,q,r), braid(...), pd([[...]]), mirror(...)")->required(); };
  auto* khr = app.add_subcommand("khr", "Reduced Khovanov homology table");
  knot_arg(khr);
  khr->add_option("--engine", o.engine, "scan or cube")->check(CLI::IsMember({"scan", "cube"}));
  auto* jones = app.add_subcommand("jones", "Jones polynomial from the graded Euler characteristic");
  knot_arg(jones);
  auto* alex = app.add_subcommand("alexander", "Alexander polynomial, determinant and coefficient sum");
  knot_arg(alex);
  auto* det = app.add_subcommand("det", "Determinant from the Jones and Alexander polynomials");
  knot_arg(det);
  auto* bounds = app.add_subcommand("bounds", "Floer rank window with provenance of each bound");
  knot_arg(bounds);
  bounds->add_option("--theory", o.theory, "km or os")->check(CLI::IsMember({"km", "os"}));
  auto* triple = app.add_subcommand("triple", "Skein triple maps and exactness at one crossing");
  knot_arg(triple);
  triple->add_option("--crossing", o.crossing, "Crossing index")->required();
  auto* maprank = app.add_subcommand("map-rank", "Rank of a composite of skein maps along faces");
  knot_arg(maprank);
  maprank->add_option("--mark", o.marks, "Marked crossing k, or k:c to include its changed copy")->required();
  maprank->add_option("--face", o.path, "Face per step, one kind per mark, comma separated")->required();
  auto* sseq = app.add_subcommand("sseq", "Enumerate differential patterns for a problem file");
  sseq->add_option("problem", o.problem, "Problem JSON file")->required();
  sseq->add_option("--pattern", o.pattern, "Overlay the arcs of this pattern (1-based) in grid/svg output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string output;
  try {
    if (*khr) output = run_khr(o);
    else if (*jones) output = run_jones(o);
    else if (*alex) output = run_alexander(o);
    else if (*det) output = run_det(o);
    else if (*bounds) output = run_bounds(o);
    else if (*triple) output = run_triple(o);
    else if (*maprank) output = run_map_rank(o);
    else if (*sseq) output = run_sseq(o);
  } catch (const UsageError& e) {
    std::cerr << "khss: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "khss: " << e.what() << "\n";
    return 1;
  }

  if (o.out.empty()) {
    std::cout << output;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "khss: cannot write " << o.out << "\n";
      return 1;
    }
    f << output;
  }
  return 0;
}
