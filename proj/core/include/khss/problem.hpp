// Problem files for the pattern enumeration, and their evaluation.
//
// A problem names a knot, a theory and the constraints; marks either come
// verbatim from the file or are derived from computed skein maps, declared
// cobordisms, known patterns of other problems, or the positive-knot rule.
// Cells in a problem file are written [i, j-i] unless "coordinates" is "i,j".
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khss/classical.hpp"
#include "khss/floer.hpp"
#include "khss/sseq.hpp"

namespace khss {

struct LoadedProblem {
  std::string path;
  std::string theory;
  SSeqProblem problem;
  std::optional<RankWindow> window;  // when the target came from rank bounds
  std::vector<std::string> notes;    // how each derived mark set was obtained
};

// Throws SSeqError (or the originating module's error) on bad input.
LoadedProblem load_problem_text(const std::string& text, const std::string& base_dir = ".");
LoadedProblem load_problem_file(const std::string& path);

struct AnalysisReport {
  std::string knot;
  std::string theory;
  std::string field;
  DimTable table;
  std::map<int, std::size_t> delta_ranks;
  std::optional<AlexanderInvariants> classical;
  std::optional<RankWindow> window;
  std::vector<int> target_ranks;
  std::string target_provenance;
  std::vector<int> z4_targets;
  std::string z4_provenance;
  std::vector<Mark> marks;
  std::vector<Arc> admissible;
  std::vector<Pattern> patterns;
  std::map<Cell, std::size_t> forced_survivors;
  std::vector<Arc> forced_arcs;
  std::size_t states = 0;
  std::vector<std::string> assumptions;  // every declared provenance
  std::vector<std::string> notes;
};

AnalysisReport analyse(const LoadedProblem& p);

}  // namespace khss
