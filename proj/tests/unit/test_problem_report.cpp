#include "doctest.h"
#include "khss/problem.hpp"
#include "khss/report.hpp"

using namespace khss;

namespace {

const std::string kDir = KHSS_PROBLEM_DIR;

}  // namespace

TEST_CASE("problem files load with their derivations") {
  const LoadedProblem t45 = load_problem_file(kDir + "/t45_km.json");
  CHECK(t45.problem.knot == "torus(4,5)");
  CHECK(t45.problem.target_ranks == std::vector<int>{7});
  CHECK(t45.problem.z4_targets == std::vector<int>{2, 1, 2, 2});
  CHECK(t45.notes.size() == 2);
  const LoadedProblem p357 = load_problem_file(kDir + "/p357_km.json");
  REQUIRE(p357.window);
  CHECK(p357.problem.target_ranks == std::vector<int>{11, 13, 15});
}

TEST_CASE("cells default to (i, j-i) and can be given as (i, j)") {
  const std::string plot = R"J({"knot": "torus(2,3)", "target_window": [3],
    "marks": [{"cell": [2, 3], "kind": "never_source"}]})J";
  const std::string raw = R"J({"knot": "torus(2,3)", "target_window": [3], "coordinates": "i,j",
    "marks": [{"cell": [2, 5], "kind": "never_source"}]})J";
  CHECK(load_problem_text(plot).problem.marks.never_source({2, 5}) == 1);
  CHECK(load_problem_text(raw).problem.marks.never_source({2, 5}) == 1);
}

TEST_CASE("malformed problems are rejected with a message") {
  CHECK_THROWS_AS(load_problem_text("{"), SSeqError);
  CHECK_THROWS_AS(load_problem_text(R"J({"theory": "km"})J"), SSeqError);
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "torus(2,3)", "coordinates": "polar"})J"), SSeqError);
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "torus(2,3)", "target_window": "maybe"})J"), SSeqError);
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "torus(2,3)", "derive": [{"guess": true}]})J"), SSeqError);
  // A mark in an empty cell.
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "torus(2,3)", "marks": [{"cell": [1, 1], "kind": "survivor"}]})J"),
                  SSeqError);
  // The positivity rule does not apply to a negative knot.
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "mirror(torus(2,5))", "theory": "os",
    "derive": [{"positive_knot_survivor": true}]})J"),
                  SSeqError);
  // An exact path whose far end is not collapsed.
  CHECK_THROWS_AS(load_problem_text(R"J({"knot": "pretzel(-3,5,7)",
    "derive": [{"exact": {"marks": [{"crossing": 10}], "path": ["whole", "smoothing0"]}}]})J"),
                  SSeqError);
}

TEST_CASE("an analysis report survives a JSON round trip") {
  for (const char* f : {"t45_km.json", "p235_os.json"}) {
    const AnalysisReport r = analyse(load_problem_file(kDir + "/" + f));
    const std::string j = report_json(r);
    const AnalysisReport back = report_from_json(j);
    CHECK(report_json(back) == j);
    CHECK(back.table.same_cells(r.table));
    CHECK(back.patterns.size() == r.patterns.size());
    CHECK(back.assumptions == r.assumptions);
  }
}

TEST_CASE("the assumption ledger is empty iff every mark came from an exact path") {
  const AnalysisReport exact = analyse(load_problem_file(kDir + "/p357_km.json"));
  CHECK(exact.assumptions.empty());
  for (const Mark& m : exact.marks) CHECK_FALSE(m.declared);
  const AnalysisReport t45 = analyse(load_problem_file(kDir + "/t45_km.json"));
  CHECK_FALSE(t45.assumptions.empty());
}

TEST_CASE("table JSON round trip and validation") {
  DimTable t(Field::gf2(), "x");
  t.set(0, -1, 1);
  t.set(2, 3, 2);
  const DimTable back = table_from_json(table_json(t));
  CHECK(back.same_cells(t));
  CHECK(back.field() == Field::gf2());
  CHECK(back.label() == "x");
  CHECK_THROWS_AS(table_from_json(R"J({"field": "f2", "cells": [[0, 0, 1]], "total": 3})J"), std::invalid_argument);
}

TEST_CASE("grids") {
  CHECK(grid_text(DimTable{}) == "(empty table)\n");
  DimTable t(Field::gf2(), "x");
  t.set(0, -1, 1);
  t.set(2, 3, 1);
  GridOverlay o;
  o.circled[{2, 3}] = 1;
  o.arcs.push_back({{0, -1}, {2, 3}, 2, 1});
  const std::string g = grid_text(t, o);
  CHECK(g.find(" 1o") != std::string::npos);
  CHECK(g.find("(0,-1) -> (2,1) page 2") != std::string::npos);
  CHECK(grid_text(t, o) == g);
  const std::string svg = grid_svg(t, o);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
  o.axes = GridAxes::delta;
  CHECK(grid_text(t, o).rfind("  d |", 0) == 0);
}
