// Serialisation and drawing of tables, windows and analysis reports.
//
// JSON is returned as text so callers need no JSON library. Grids are drawn
// with i across and j - i (or delta = j - 2i) down, the way Khovanov tables
// are usually printed.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "khss/floer.hpp"
#include "khss/homology.hpp"
#include "khss/problem.hpp"
#include "khss/sseq.hpp"

namespace khss {

enum class GridAxes { plot, delta };

struct GridOverlay {
  std::map<Cell, int> circled;  // cell -> number of marked directions
  std::vector<Arc> arcs;
  GridAxes axes = GridAxes::plot;
};

// Marked cells of a mark set: survivors and both never kinds count.
GridOverlay overlay_of(const MarkSet& marks, std::vector<Arc> arcs = {});

std::string grid_text(const DimTable& t, const GridOverlay& overlay = {});
std::string grid_svg(const DimTable& t, const GridOverlay& overlay = {});

std::string table_json(const DimTable& t);
// Throws std::invalid_argument on malformed input.
DimTable table_from_json(const std::string& text);

std::string window_json(const RankWindow& w);

std::string report_json(const AnalysisReport& r);
AnalysisReport report_from_json(const std::string& text);

std::string report_text(const AnalysisReport& r);

}  // namespace khss
