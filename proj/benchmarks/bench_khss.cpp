#include <random>

#include <benchmark/benchmark.h>

#include "khss/homology.hpp"
#include "khss/knot_spec.hpp"
#include "khss/linalg.hpp"
#include "khss/problem.hpp"
#include "khss/skein.hpp"
#include "khss/sseq.hpp"

using namespace khss;

namespace {

const char* kKnots[] = {"torus(4,5)", "pretzel(-3,5,7)", "torus(3,7)", "pretzel(-2,7,7)"};

void BM_KhovanovScan(benchmark::State& state) {
  const char* spec = kKnots[state.range(0)];
  const PlanarDiagram d = parse_knot_spec(spec);
  const Field f = state.range(1) ? Field::rationals() : Field::gf2();
  for (auto _ : state) benchmark::DoNotOptimize(khovanov_homology(d, f));
  state.SetLabel(std::string(spec) + (state.range(1) ? " Q" : " GF(2)"));
}
BENCHMARK(BM_KhovanovScan)->ArgsProduct({{0, 1, 2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_KhovanovCube(benchmark::State& state) {
  const PlanarDiagram d = parse_knot_spec(state.range(0) ? "pretzel(-2,3,5)" : "torus(3,4)");
  for (auto _ : state) benchmark::DoNotOptimize(khovanov_homology(d, Field::gf2(), "", Engine::cube));
}
BENCHMARK(BM_KhovanovCube)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MatrixRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
  for (auto& r : rows)
    for (auto& x : r) x = rng() % 5 == 0 ? static_cast<std::int64_t>(rng() % 7) - 3 : 0;
  const Field f = state.range(1) ? Field::rationals() : Field::gf2();
  const ExactMatrix m = ExactMatrix::from_dense(f, rows);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_rank(m));
}
BENCHMARK(BM_MatrixRank)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_SkeinComposite(benchmark::State& state) {
  const PlanarDiagram d = parse_knot_spec("torus(4,5)");
  for (auto _ : state) {
    MarkedScan s(d, {{0, true}}, Field::rationals());
    benchmark::DoNotOptimize(compose_maps(s.face_map({FaceKind::smoothing0}, {FaceKind::changed}),
                                          s.face_map({FaceKind::whole}, {FaceKind::smoothing0})));
  }
}
BENCHMARK(BM_SkeinComposite)->Unit(benchmark::kMillisecond);

void BM_EnumerateUnmarked(benchmark::State& state) {
  SSeqProblem p;
  p.page = khovanov_homology(parse_knot_spec("pretzel(-3,5,7)"), Field::rationals());
  p.target_ranks = {11, 13, 15};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_patterns(p));
}
BENCHMARK(BM_EnumerateUnmarked)->Unit(benchmark::kMillisecond);

void BM_PretzelDiagonalMarks(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pretzel_diagonal_marks(3, 5, 7));
}
BENCHMARK(BM_PretzelDiagonalMarks)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
