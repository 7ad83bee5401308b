#include <random>

#include "doctest.h"
#include "khss/knot_spec.hpp"
#include "khss/skein.hpp"
#include "khss/sseq.hpp"
#include "oracles.hpp"

using namespace khss;

namespace {

DimTable table(std::initializer_list<std::tuple<int, int, std::size_t>> cells) {
  DimTable t(Field::rationals(), "synthetic");
  for (auto [i, j, d] : cells) t.set(i, j, d);
  return t;
}

Mark mark(MarkKind k, Cell c, int count = 1) {
  Mark m;
  m.kind = k;
  m.cell = c;
  m.count = count;
  m.provenance = "test";
  return m;
}

// Random knot-like table: odd j, a few cells of dimension 1 or 2.
DimTable random_table(std::mt19937& rng) {
  DimTable t(Field::rationals(), "random");
  const int cells = 3 + static_cast<int>(rng() % 5);
  for (int k = 0; k < cells; ++k) {
    const int i = static_cast<int>(rng() % 7);
    const int j = 2 * i + 2 * static_cast<int>(rng() % 4) - 3;
    t.set(i, j, 1 + rng() % 2);
  }
  return t;
}

SSeqProblem random_problem(std::mt19937& rng, Theory th) {
  SSeqProblem p;
  p.knot = "random";
  p.page = random_table(rng);
  p.rule.theory = th;
  if (th == Theory::os) p.rule.delta = static_cast<DeltaRule>(rng() % 3);
  const int total = static_cast<int>(p.page.total());
  for (int r = total % 2; r <= total; r += 2)
    if (rng() % 2) p.target_ranks.push_back(r);
  if (p.target_ranks.empty()) p.target_ranks.push_back(total);
  for (const auto& [c, d] : p.page.cells()) {
    if (rng() % 4 == 0) p.marks.add(mark(static_cast<MarkKind>(rng() % 3), c, 1 + static_cast<int>(rng() % d)));
  }
  return p;
}

}  // namespace

TEST_CASE("km arcs: di >= 1, dj >= 2, dj - di = 3 mod 4, page a di + b dj") {
  ArcRule km;
  CHECK_FALSE(km.admissible({0, 0}, {1, 0}));  // the Khovanov differential
  CHECK(km.admissible({2, 15}, {9, 25}));     // (2,13) -> (9,16) in (i, j-i)
  CHECK(km.admissible({0, 0}, {1, 4}));
  CHECK_FALSE(km.admissible({0, 0}, {1, 2}));
  CHECK_FALSE(km.admissible({0, 0}, {0, 3}));
  CHECK_FALSE(km.admissible({1, 0}, {0, 5}));  // di < 1
  km.a = 2;
  km.b = 3;
  CHECK(km.page({0, 0}, {1, 4}) == 2 * 1 + 3 * 4);
}

TEST_CASE("os arcs: di >= 2 with the delta rule") {
  ArcRule os;
  os.theory = Theory::os;
  CHECK_FALSE(os.admissible({0, 0}, {1, 0}));
  CHECK(os.admissible({0, 0}, {2, 2}));
  os.delta = DeltaRule::drop1;
  CHECK(os.admissible({2, 11}, {4, 13}));  // dj = 2 di - 2
  CHECK_FALSE(os.admissible({2, 11}, {4, 11}));
  os.delta = DeltaRule::strict;
  CHECK(os.admissible({2, 11}, {4, 11}));
  CHECK_FALSE(os.admissible({2, 11}, {4, 15}));
  CHECK(os.page({3, 13}, {6, 17}) == 3);
}

TEST_CASE("enumeration matches brute force on random problems") {
  std::mt19937 rng(31337);
  int nonempty = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SSeqProblem p = random_problem(rng, trial % 2 ? Theory::os : Theory::km);
    CAPTURE(trial);
    try {
      check_marks(p);
    } catch (const SSeqError&) {
      continue;
    }
    const Enumeration e = enumerate_patterns(p);
    const auto expect = oracle::brute_force_patterns(p);
    CHECK(oracle::keys_of(e) == expect);
    CHECK(e.patterns.size() == expect.size());
    nonempty += e.patterns.empty() ? 0 : 1;
  }
  CHECK(nonempty > 50);
}

TEST_CASE("per-class targets match brute force") {
  std::mt19937 rng(2718);
  for (int trial = 0; trial < 150; ++trial) {
    SSeqProblem p = random_problem(rng, Theory::km);
    try {
      check_marks(p);
    } catch (const SSeqError&) {
      continue;
    }
    // Targets of a random brute-force pattern, so the problem is satisfiable.
    SSeqProblem free = p;
    free.target_ranks.clear();
    for (int r = 0; r <= static_cast<int>(p.page.total()); ++r) free.target_ranks.push_back(r);
    const auto all = oracle::brute_force_patterns(free);
    if (all.empty()) continue;
    auto it = all.begin();
    std::advance(it, rng() % all.size());
    std::vector<int> cls(4, 0);
    std::map<Cell, int> used;
    for (const auto& [s, t, m] : *it) {
      used[s] += m;
      used[t] += m;
    }
    for (const auto& [c, d] : p.page.cells()) cls[((c.second - c.first - 1) % 4 + 4) % 4] += static_cast<int>(d) - used[c];
    p.z4_targets = cls;
    p.target_ranks = {cls[0] + cls[1] + cls[2] + cls[3]};
    CAPTURE(trial);
    const Enumeration e = enumerate_patterns(p);
    CHECK(oracle::keys_of(e) == oracle::brute_force_patterns(p));
    CHECK_FALSE(e.patterns.empty());
  }
}

TEST_CASE("every pattern satisfies the pattern invariants") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const SSeqProblem p = random_problem(rng, Theory::km);
    try {
      check_marks(p);
    } catch (const SSeqError&) {
      continue;
    }
    for (const Pattern& pat : enumerate_patterns(p).patterns) {
      std::map<Cell, std::size_t> out, in;
      for (const Arc& a : pat.arcs) {
        CHECK(p.rule.admissible(a.source, a.target));
        CHECK(a.multiplicity >= 1);
        out[a.source] += a.multiplicity;
        in[a.target] += a.multiplicity;
      }
      for (const auto& [c, d] : p.page.cells()) {
        CHECK(out[c] + in[c] + pat.residual.dim(c.first, c.second) == d);
        CHECK(static_cast<int>(out[c]) <= static_cast<int>(d) - p.marks.never_source(c));
        CHECK(static_cast<int>(in[c]) <= static_cast<int>(d) - p.marks.never_target(c));
      }
      CHECK(std::find(p.target_ranks.begin(), p.target_ranks.end(), static_cast<int>(pat.residual.total())) !=
            p.target_ranks.end());
    }
  }
}

TEST_CASE("adding marks never enlarges the pattern set") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    SSeqProblem p = random_problem(rng, trial % 2 ? Theory::os : Theory::km);
    p.marks = MarkSet{};
    auto previous = oracle::keys_of(enumerate_patterns(p));
    for (const auto& [c, d] : p.page.cells()) {
      if (rng() % 2) continue;
      p.marks.add(mark(static_cast<MarkKind>(rng() % 3), c, 1));
      const auto now = oracle::keys_of(enumerate_patterns(p));
      CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      previous = now;
    }
  }
}

TEST_CASE("a collapsed problem has exactly the empty pattern") {
  const DimTable t = khovanov_homology(parse_knot_spec("torus(4,5)"), Field::rationals());
  SSeqProblem p;
  p.page = t;
  p.target_ranks = {static_cast<int>(t.total())};
  const Enumeration e = enumerate_patterns(p);
  REQUIRE(e.patterns.size() == 1);
  CHECK(e.patterns[0].arcs.empty());
  CHECK(e.forced_survivor_total() == t.total());
}

TEST_CASE("inconsistent constraints give an empty pattern list, not an error") {
  SSeqProblem p;
  p.page = table({{0, 0, 1}, {1, 4, 1}});
  p.target_ranks = {0};
  p.marks.add(mark(MarkKind::survivor, {0, 0}));
  const Enumeration e = enumerate_patterns(p);
  CHECK(e.inconsistent());
}

TEST_CASE("the search cap refuses instead of truncating") {
  SSeqProblem p;
  p.page = khovanov_homology(parse_knot_spec("pretzel(-3,5,7)"), Field::rationals());
  p.target_ranks = {1, 3, 5, 7, 9, 11, 13, 15};
  p.cap = 10;
  CHECK_THROWS_AS(enumerate_patterns(p), SSeqError);
}

TEST_CASE("marks are checked against the table") {
  SSeqProblem p;
  p.page = table({{0, 0, 1}, {1, 4, 2}});
  p.marks.add(mark(MarkKind::never_source, {1, 4}, 3));
  CHECK_THROWS_AS(check_marks(p), SSeqError);
  SSeqProblem q;
  q.page = p.page;
  q.marks.add(mark(MarkKind::never_target, {5, 5}));
  CHECK_THROWS_AS(check_marks(q), SSeqError);
}

TEST_CASE("mark counts combine by maximum and survivors imply both kinds") {
  MarkSet m;
  m.add(mark(MarkKind::never_source, {0, 0}, 1));
  m.add(mark(MarkKind::never_source, {0, 0}, 2));
  m.add(mark(MarkKind::never_source, {0, 0}, 1));
  CHECK(m.never_source({0, 0}) == 2);
  m.add(mark(MarkKind::survivor, {1, 1}, 1));
  CHECK(m.never_source({1, 1}) == 1);
  CHECK(m.never_target({1, 1}) == 1);
  CHECK(m.assumptions().empty());
  Mark d = mark(MarkKind::never_target, {2, 2});
  d.declared = true;
  d.provenance = "declared: something";
  m.add(d);
  CHECK(m.assumptions() == std::vector<std::string>{"declared: something"});
}

TEST_CASE("exact marks from the P(-3,5,7) triangle maps leave 4 free targets and 4 free sources") {
  const PlanarDiagram d = parse_knot_spec("pretzel(-3,5,7)");
  const DimTable t = khovanov_homology(d, Field::rationals());
  MarkedScan proj(d, {{4, false}}, Field::rationals());
  const DimTable t0 = proj.model({FaceKind::smoothing0}).table();
  const DerivedMarks a =
      derive_marks_exact(proj.face_map({FaceKind::whole}, {FaceKind::smoothing0}), SideStatus::unknown(t),
                         SideStatus::collapsed(t0, floer_rank_window(proj.face_diagram({FaceKind::smoothing0}), Theory::km, t0)),
                         "projection");
  MarkedScan incl(d, {{1, false}}, Field::rationals());
  const DimTable t1 = incl.model({FaceKind::smoothing1}).table();
  const DerivedMarks b =
      derive_marks_exact(incl.face_map({FaceKind::smoothing1}, {FaceKind::whole}),
                         SideStatus::collapsed(t1, floer_rank_window(incl.face_diagram({FaceKind::smoothing1}), Theory::km, t1)),
                         SideStatus::unknown(t), "inclusion");
  CHECK(a.on_target.empty());
  CHECK(b.on_source.empty());
  int free_targets = 0, free_sources = 0, nt = 0, ns = 0;
  for (const auto& [c, dim] : t.cells()) {
    free_targets += static_cast<int>(dim) - a.on_source.never_target(c);
    free_sources += static_cast<int>(dim) - b.on_target.never_source(c);
    nt += a.on_source.never_target(c);
    ns += b.on_target.never_source(c);
  }
  CHECK(nt == 11);
  CHECK(ns == 11);
  CHECK(free_targets == 4);
  CHECK(free_sources == 4);
}

TEST_CASE("collapse must be certified") {
  const DimTable t = table({{0, 0, 1}, {1, 4, 2}});
  RankWindow w;
  w.lower = {1, "user"};
  w.upper = {3, "khovanov"};
  CHECK_THROWS_AS(SideStatus::collapsed(t, w), SSeqError);
  w.lower = {3, "user"};
  CHECK_NOTHROW(SideStatus::collapsed(t, w));
}

TEST_CASE("declared cobordism marks") {
  const DimTable src = table({{0, 0, 1}, {1, 4, 1}});
  const DimTable tgt = table({{11, 32, 1}, {12, 36, 1}});
  RankWindow w;
  w.lower = {2, "user"};
  w.upper = {2, "khovanov"};
  const CobordismDescriptor c{"test", -1, 22};
  SUBCASE("no components, no marks") {
    const DerivedMarks m = derive_marks_declared(c, {}, SideStatus::collapsed(src, w), SideStatus::unknown(tgt));
    CHECK(m.on_target.empty());
    CHECK(m.on_source.empty());
  }
  SUBCASE("a component gives a declared never_source mark") {
    const DerivedMarks m =
        derive_marks_declared(c, {{{0, 0}, {11, 32}}}, SideStatus::collapsed(src, w), SideStatus::unknown(tgt));
    CHECK(m.on_target.never_source({11, 32}) == 1);
    CHECK(m.on_target.marks().front().declared);
    CHECK_FALSE(m.on_target.assumptions().empty());
  }
  SUBCASE("wrong shift or empty cell is an error") {
    CHECK_THROWS_AS(derive_marks_declared(c, {{{0, 0}, {12, 36}}}, SideStatus::collapsed(src, w), SideStatus::unknown(tgt)),
                    SSeqError);
    CHECK_THROWS_AS(derive_marks_declared(c, {{{2, 8}, {13, 40}}}, SideStatus::collapsed(src, w), SideStatus::unknown(tgt)),
                    SSeqError);
  }
}

TEST_CASE("forced sources: trivial cases and the 1-dimensional requirement") {
  MarkedScan s(parse_knot_spec("pretzel(-2,3,7)"), {{6, false}, {8, false}}, Field::gf2());
  const HomologyMap phi = s.face_map({FaceKind::whole, FaceKind::whole}, {FaceKind::smoothing0, FaceKind::smoothing0});
  const DimTable src = s.model({FaceKind::whole, FaceKind::whole}).table();
  const DimTable tgt = s.model({FaceKind::smoothing0, FaceKind::smoothing0}).table();
  CHECK(derive_forced_sources(phi, src, tgt, Pattern{}).empty());
  // An arc whose source has no preimage under phi forces nothing.
  HomologyMap zero = phi;
  zero.blocks.clear();
  Pattern one;
  one.arcs.push_back({{2, 11}, {4, 13}, 2, 1});
  CHECK(derive_forced_sources(zero, src, tgt, one).empty());
  DimTable wide = tgt;
  wide.set(2, 11, 2);
  CHECK_THROWS_AS(derive_forced_sources(phi, src, wide, one), SSeqError);
}

TEST_CASE("positive knots get a survivor at homological degree 0") {
  const PlanarDiagram d = parse_knot_spec("torus(2,5)");
  const auto m = positive_knot_survivor(d, khovanov_homology(d, Field::gf2()));
  REQUIRE(m);
  CHECK(m->kind == MarkKind::survivor);
  CHECK(m->cell.first == 0);
  CHECK(m->provenance == "positive-knot-psi");
  const PlanarDiagram neg = mirror(d);
  CHECK_FALSE(positive_knot_survivor(neg, khovanov_homology(neg, Field::gf2())));
}

TEST_CASE("pretzel diagonal marks remove every delta-preserving arc") {
  for (auto [p, q, r] : {std::tuple{2, 3, 5}, {3, 4, 5}}) {
    const PretzelMarks pm = pretzel_diagonal_marks(p, q, r);
    SSeqProblem bare;
    bare.page = pm.table;
    CHECK_FALSE(delta_preserving_arcs(admissible_arcs(bare)).empty());
    bare.marks = pm.marks;
    CHECK(delta_preserving_arcs(admissible_arcs(bare)).empty());
    CHECK_FALSE(pm.steps.empty());
  }
}
