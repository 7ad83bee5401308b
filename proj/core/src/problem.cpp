#include "khss/problem.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "khss/knot_spec.hpp"

namespace khss {

namespace {

using nlohmann::json;

struct Context {
  bool plot_coords = true;  // cells written [i, j-i]
  std::string base_dir;
  Theory theory = Theory::km;
  Field field = Field::rationals();
  PlanarDiagram diagram;
  std::string knot;
  DimTable page;
};

Cell read_cell(const json& j, const Context& ctx) {
  if (!j.is_array() || j.size() != 2) throw SSeqError("a cell is a pair [i, j-i] or [i, j]");
  const int i = j[0].get<int>();
  const int b = j[1].get<int>();
  return {i, ctx.plot_coords ? b + i : b};
}

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.first) + "," + std::to_string(c.second - c.first) + ")";
}

FaceSpec read_face(const std::string& text, std::size_t marks) {
  FaceSpec out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_face_kind(part));
  if (out.size() != marks) throw SSeqError("face '" + text + "' needs one kind per marked crossing");
  return out;
}

std::vector<ScanMark> read_scan_marks(const json& j) {
  std::vector<ScanMark> out;
  for (const json& m : j) out.push_back({m.at("crossing").get<std::size_t>(), m.value("change", false)});
  return out;
}

bool all_whole(const FaceSpec& f) {
  return std::all_of(f.begin(), f.end(), [](FaceKind k) { return k == FaceKind::whole; });
}

// Composite of face maps along a path of faces.
HomologyMap path_map(const MarkedScan& scan, const std::vector<FaceSpec>& path) {
  if (path.size() < 2) throw SSeqError("a map path needs at least two faces");
  HomologyMap phi = scan.face_map(path[0], path[1]);
  for (std::size_t k = 2; k < path.size(); ++k) phi = compose_maps(scan.face_map(path[k - 1], path[k]), phi);
  return phi;
}

std::vector<FaceSpec> read_path(const json& j, std::size_t marks) {
  std::vector<FaceSpec> out;
  for (const json& f : j) out.push_back(read_face(f.get<std::string>(), marks));
  return out;
}

void check_page(const DimTable& t, const Context& ctx, const std::string& what) {
  if (!t.same_cells(ctx.page)) throw SSeqError(what + " does not have the table of " + ctx.knot);
}

std::string face_text(const FaceSpec& f) {
  std::string s;
  for (FaceKind k : f) s += (s.empty() ? "" : ",") + to_string(k);
  return s;
}

void derive_exact(const json& e, const Context& ctx, LoadedProblem& out) {
  const auto marks = read_scan_marks(e.at("marks"));
  MarkedScan scan(ctx.diagram, marks, ctx.field);
  const auto path = read_path(e.at("path"), marks.size());
  const bool knot_is_source = all_whole(path.front());
  if (!knot_is_source && !all_whole(path.back())) throw SSeqError("an exact map must start or end at the whole diagram");
  const FaceSpec& other = knot_is_source ? path.back() : path.front();
  const DimTable other_table = scan.model(other).table();
  const SideStatus certified =
      SideStatus::collapsed(other_table, floer_rank_window(scan.face_diagram(other), ctx.theory, other_table));
  const SideStatus self = SideStatus::unknown(scan.model(knot_is_source ? path.front() : path.back()).table());
  check_page(self.table, ctx, "the whole face");
  const HomologyMap phi = path_map(scan, path);
  std::string name = "skein map";
  for (const FaceSpec& f : path) name += (name == "skein map" ? " " : " -> ") + face_text(f);
  const DerivedMarks d = knot_is_source ? derive_marks_exact(phi, self, certified, name)
                                        : derive_marks_exact(phi, certified, self, name);
  const MarkSet& got = knot_is_source ? d.on_source : d.on_target;
  out.problem.marks.merge(got);
  out.notes.push_back(name + " (rank " + std::to_string(phi.rank()) + ", (i,j) shift (" + std::to_string(phi.shift.i) + "," +
                      std::to_string(phi.shift.j) + ")): " + std::to_string(got.marks().size()) +
                      (knot_is_source ? " never_target" : " never_source") + " marks; far end " +
                      certified.certificate);
}

void derive_declared(const json& e, const Context& ctx, LoadedProblem& out) {
  CobordismDescriptor c;
  c.label = e.at("label").get<std::string>();
  c.euler_characteristic = e.at("euler_characteristic").get<int>();
  c.self_intersection = e.at("self_intersection").get<int>();
  std::vector<std::pair<Cell, Cell>> components;
  for (const json& p : e.at("components")) components.emplace_back(read_cell(p.at(0), ctx), read_cell(p.at(1), ctx));
  const bool from = e.contains("from");
  const std::string other_spec = from ? e.at("from").get<std::string>() : e.at("to").get<std::string>();
  const PlanarDiagram other = parse_knot_spec(other_spec);
  const DimTable other_table = khovanov_homology(other, ctx.field, other_spec);
  const SideStatus certified =
      SideStatus::collapsed(other_table, floer_rank_window(other, ctx.theory, other_table));
  const SideStatus self = SideStatus::unknown(ctx.page);
  const DerivedMarks d = from ? derive_marks_declared(c, components, certified, self)
                              : derive_marks_declared(c, components, self, certified);
  const MarkSet& got = from ? d.on_target : d.on_source;
  out.problem.marks.merge(got);
  const Bidegree s = cobordism_order_bound(c);
  out.notes.push_back("declared cobordism " + c.label + " with (i,j) bidegree (" + std::to_string(s.i) + "," +
                      std::to_string(s.j) + "): " + std::to_string(got.marks().size()) + " marks; " + other_spec +
                      " " + certified.certificate);
}

void derive_forced(const json& e, const Context& ctx, LoadedProblem& out) {
  const auto marks = read_scan_marks(e.at("marks"));
  MarkedScan scan(ctx.diagram, marks, ctx.field);
  const auto path = read_path(e.at("path"), marks.size());
  if (!all_whole(path.front())) throw SSeqError("forced sources need a map out of the whole diagram");
  const std::string known_path = (std::filesystem::path(ctx.base_dir) / e.at("known").get<std::string>()).string();
  const LoadedProblem known = load_problem_file(known_path);
  const Enumeration ke = enumerate_patterns(known.problem);
  if (ke.patterns.size() != 1) {
    throw SSeqError("the known problem " + known_path + " has " + std::to_string(ke.patterns.size()) +
                    " patterns, not one");
  }
  const DimTable target = scan.model(path.back()).table();
  if (!target.same_cells(known.problem.page)) throw SSeqError("map target does not have the table of " + known.problem.knot);
  check_page(scan.model(path.front()).table(), ctx, "the whole face");
  const HomologyMap phi = path_map(scan, path);
  const MarkSet got = derive_forced_sources(phi, ctx.page, target, ke.patterns.front());
  out.problem.marks.merge(got);
  out.notes.push_back("morphism to " + known.problem.knot + " (rank " + std::to_string(phi.rank()) + ", shift (" +
                      std::to_string(phi.shift.i) + "," + std::to_string(phi.shift.j) +
                      ")) against its unique pattern: " + std::to_string(got.marks().size()) + " forced sources");
}

void derive_positive(const Context& ctx, LoadedProblem& out) {
  const auto m = positive_knot_survivor(ctx.diagram, ctx.page);
  if (!m) throw SSeqError(ctx.knot + " is not a positive knot diagram with one-dimensional degree-0 homology");
  out.problem.marks.add(*m);
  out.notes.push_back("positive knot: survivor at " + cell_text(m->cell));
}

void derive_pretzel(const json& e, const Context& ctx, LoadedProblem& out) {
  if (ctx.theory != Theory::km) throw SSeqError("pretzel diagonal marks are derived for the km theory");
  const auto v = e.get<std::vector<int>>();
  if (v.size() != 3 || v[0] >= 0) throw SSeqError("pretzel_diagonals takes [-p, q, r]");
  PretzelMarks pm = pretzel_diagonal_marks(-v[0], v[1], v[2]);
  check_page(pm.table, ctx, "the pretzel chain table");
  out.problem.marks.merge(pm.marks);
  for (auto& s : pm.steps) out.notes.push_back(s);
}

}  // namespace

LoadedProblem load_problem_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SSeqError(std::string("problem is not valid JSON: ") + e.what());
  }
  try {
    LoadedProblem out;
    Context ctx;
    ctx.base_dir = base_dir;
    ctx.knot = j.at("knot").get<std::string>();
    ctx.theory = parse_theory(j.value("theory", std::string("km")));
    ctx.field = j.contains("field") ? Field::parse(j.at("field").get<std::string>()) : default_field(ctx.theory);
    const std::string coords = j.value("coordinates", std::string("i,j-i"));
    if (coords != "i,j-i" && coords != "i,j") throw SSeqError("coordinates are \"i,j-i\" or \"i,j\"");
    ctx.plot_coords = coords == "i,j-i";
    ctx.diagram = parse_knot_spec(ctx.knot);
    ctx.page = khovanov_homology(ctx.diagram, ctx.field, ctx.knot);

    out.theory = to_string(ctx.theory);
    SSeqProblem& p = out.problem;
    p.knot = ctx.knot;
    p.page = ctx.page;
    p.rule.theory = ctx.theory;
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::vector<int>>();
      if (w.size() != 2 || w[0] < 1 || w[1] < 1) throw SSeqError("weights are [a, b] with a, b >= 1");
      p.rule.a = w[0];
      p.rule.b = w[1];
    }
    p.rule.delta = parse_delta_rule(j.value("delta_rule", std::string("off")));
    if (j.contains("cap")) p.cap = j.at("cap").get<std::size_t>();
    if (j.contains("z4_targets")) {
      p.z4_targets = j.at("z4_targets").get<std::vector<int>>();
      p.z4_provenance = j.value("z4_provenance", std::string("user"));
    }
    for (const json& m : j.value("marks", json::array())) {
      Mark mk;
      mk.kind = parse_mark_kind(m.at("kind").get<std::string>());
      mk.cell = read_cell(m.at("cell"), ctx);
      mk.count = m.value("count", 1);
      mk.page = m.value("page", 0);
      if (m.contains("target")) mk.target = read_cell(m.at("target"), ctx);
      mk.provenance = m.value("provenance", std::string("user"));
      mk.declared = m.value("declared", false);
      p.marks.add(mk);
    }
    for (const json& d : j.value("derive", json::array())) {
      if (d.contains("exact")) {
        derive_exact(d.at("exact"), ctx, out);
      } else if (d.contains("declared")) {
        derive_declared(d.at("declared"), ctx, out);
      } else if (d.contains("forced_sources")) {
        derive_forced(d.at("forced_sources"), ctx, out);
      } else if (d.contains("positive_knot_survivor")) {
        derive_positive(ctx, out);
      } else if (d.contains("pretzel_diagonals")) {
        derive_pretzel(d.at("pretzel_diagonals"), ctx, out);
      } else {
        throw SSeqError("unknown derivation " + d.dump());
      }
    }
    const json window = j.value("target_window", json("auto"));
    if (window.is_array()) {
      p.target_ranks = window.get<std::vector<int>>();
      p.target_provenance = j.value("target_provenance", std::string("user"));
    } else {
      if (!window.is_string() || window.get<std::string>() != "auto") {
        throw SSeqError("target_window is a list of ranks or \"auto\"");
      }
      RankWindow w = floer_rank_window(ctx.diagram, ctx.theory, ctx.page);
      for (const json& t : j.value("triangles", json::array())) {
        const auto specs = t.get<std::vector<std::string>>();
        if (specs.size() != 3) throw SSeqError("a triangle has three corners");
        std::array<RankWindow, 3> corners;
        int self = -1;
        for (int k = 0; k < 3; ++k) {
          if (specs[k] == ctx.knot) {
            corners[k] = w;
            self = k;
          } else {
            corners[k] = floer_rank_window(parse_knot_spec(specs[k]), ctx.theory);
          }
        }
        if (self < 0) throw SSeqError("triangle does not contain " + ctx.knot);
        w = triangle_rank_bound(corners)[self];
        out.notes.push_back("triangle " + specs[0] + " / " + specs[1] + " / " + specs[2] + ": window [" +
                            std::to_string(w.lower.value) + ", " + std::to_string(w.upper.value) + "]");
      }
      out.window = w;
      p.target_ranks = w.admissible();
      p.target_provenance = to_string(ctx.theory) + " window, lower bound from " + w.lower.provenance;
    }
    check_marks(p);
    return out;
  } catch (const json::exception& e) {
    throw SSeqError(std::string("malformed problem: ") + e.what());
  }
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SSeqError("cannot read problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  LoadedProblem p = load_problem_text(ss.str(), std::filesystem::path(path).parent_path().string());
  p.path = path;
  return p;
}

AnalysisReport analyse(const LoadedProblem& lp) {
  const SSeqProblem& p = lp.problem;
  AnalysisReport r;
  r.knot = p.knot;
  r.theory = lp.theory;
  r.field = p.page.field().short_name();
  r.table = p.page;
  r.delta_ranks = delta_profile(p.page).ranks;
  const PlanarDiagram d = parse_knot_spec(p.knot);
  if (component_count(d) == 1) r.classical = alexander_invariants(d);
  r.window = lp.window;
  r.target_ranks = p.target_ranks;
  r.target_provenance = p.target_provenance;
  r.z4_targets = p.z4_targets;
  r.z4_provenance = p.z4_provenance;
  r.marks = p.marks.marks();
  const Enumeration e = enumerate_patterns(p);
  r.admissible = e.admissible;
  r.patterns = e.patterns;
  r.forced_survivors = e.forced_survivors;
  r.forced_arcs = e.forced_arcs;
  r.states = e.states;
  r.assumptions = p.marks.assumptions();
  if (!p.z4_targets.empty()) r.assumptions.push_back("per-class targets: " + p.z4_provenance);
  r.notes = lp.notes;
  return r;
}

}  // namespace khss
