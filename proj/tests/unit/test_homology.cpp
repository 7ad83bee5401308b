#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "khss/complex.hpp"
#include "khss/homology.hpp"
#include "khss/knot_spec.hpp"
#include "oracles.hpp"

using namespace khss;

namespace {

DimTable khr(const std::string& spec, Field f = Field::rationals(), Engine e = Engine::scan) {
  return khovanov_homology(parse_knot_spec(spec), f, spec, e);
}

std::string random_braid(std::mt19937& rng, int strands, int length) {
  std::string s = "braid(";
  for (int k = 0; k < length; ++k) {
    int g = 1 + static_cast<int>(rng() % (strands - 1));
    if (rng() % 2) g = -g;
    s += (k ? "," : "") + std::to_string(g);
  }
  return s + ")";
}

}  // namespace

TEST_CASE("unknot and trefoil anchors") {
  const DimTable u = khr("unknot");
  CHECK(u.total() == 1);
  CHECK(u.dim(0, -1) == 1);
  CHECK(khr("torus(2,3)").total() == 3);
  CHECK(khr("mirror(torus(2,3))").total() == 3);
}

TEST_CASE("torus links T(2,2n) have rank 2n") {
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(khr("torus(2," + std::to_string(2 * n) + ")").total() == static_cast<std::size_t>(2 * n));
    CHECK(khr("torus(2," + std::to_string(2 * n) + ")", Field::gf2()).total() == static_cast<std::size_t>(2 * n));
  }
}

TEST_CASE("the Euler characteristic of every table is the state-sum Jones polynomial") {
  for (const auto& s : corpus::small_knots()) {
    CAPTURE(s);
    const PlanarDiagram d = parse_knot_spec(s);
    CHECK(oracle::euler_characteristic(khovanov_homology(d, Field::gf2())) == oracle::reduced_jones_state_sum(d));
    CHECK(oracle::euler_characteristic(khovanov_homology(d, Field::rationals())) == oracle::reduced_jones_state_sum(d));
  }
}

TEST_CASE("jones_polynomial agrees with the table's Euler characteristic") {
  for (const auto& s : corpus::small_knots()) {
    const DimTable t = khr(s);
    CHECK(jones_polynomial(t).coeffs() == oracle::euler_characteristic(t));
  }
}

TEST_CASE("scan engine agrees with the full resolution cube") {
  for (const auto& s : corpus::small_knots()) {
    CAPTURE(s);
    for (const Field f : {Field::gf2(), Field::rationals(), Field::gfp(3)}) {
      CHECK(khr(s, f, Engine::scan).same_cells(khr(s, f, Engine::cube)));
    }
  }
}

TEST_CASE("random braid closures: scan equals cube and chi equals the state sum") {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 25; ++trial) {
    const std::string s = random_braid(rng, 3 + static_cast<int>(rng() % 2), 3 + static_cast<int>(rng() % 6));
    CAPTURE(s);
    const PlanarDiagram d = parse_knot_spec(s);
    const DimTable scan = khovanov_homology(d, Field::gf2(), s, Engine::scan);
    CHECK(scan.same_cells(khovanov_homology(d, Field::gf2(), s, Engine::cube)));
    CHECK(oracle::euler_characteristic(scan) == oracle::reduced_jones_state_sum(d));
  }
}

TEST_CASE("the explicit cube complex squares to zero") {
  for (const char* s : {"torus(2,3)", "braid(1,-2,1,-2)", "pretzel(-2,3,5)"}) {
    for (const Field f : {Field::gf2(), Field::rationals()}) {
      const ChainComplex c = cube_chain_complex(parse_knot_spec(s), f);
      CHECK_NOTHROW(check_complex(c, true));
      CHECK(homology_table(c).same_cells(khr(s, f)));
    }
  }
}

TEST_CASE("mirror image reflects the table") {
  for (const char* s : {"torus(2,5)", "pretzel(-2,3,5)", "torus(3,4)", "braid(1,1,-2,1,-2,-2)"}) {
    CAPTURE(s);
    CHECK(khr(std::string("mirror(") + s + ")").same_cells(khr(s).mirrored()));
  }
}

TEST_CASE("torus and pretzel anchors") {
  CHECK(khr("torus(4,5)").total() == 9);
  CHECK(khr("pretzel(-3,5,7)").total() == 15);
  CHECK(khr("pretzel(-3,4,7)").total() == 11);
  CHECK(khr("pretzel(-2,5,7)").total() == 19);
  // t^0 q^8 + t^2 q^12 + t^3 q^14 + t^4 q^14 + t^5 q^18 + t^6 q^18 + t^7 q^20 with
  // the unknot at q^0; this library puts the unknot at j = -1.
  DimTable expect(Field::gf2(), "");
  for (auto [i, j] : {std::pair{0, 8}, {2, 12}, {3, 14}, {4, 14}, {5, 18}, {6, 18}, {7, 20}}) expect.set(i, j - 1, 1);
  CHECK(khr("pretzel(-2,3,5)", Field::gf2()).same_cells(expect));
  CHECK(khr("pretzel(-2,3,5)", Field::rationals()).same_cells(expect));
}

TEST_CASE("delta profile of thin and non-thin knots") {
  CHECK(delta_profile(khr("torus(2,7)")).thin);
  CHECK(delta_profile(khr("pd([[1,4,2,5],[3,8,4,9],[5,10,6,1],[9,6,10,7],[7,2,8,3]])")).thin);
  const DeltaProfile p = delta_profile(khr("pretzel(-3,5,7)"));
  CHECK_FALSE(p.thin);
  REQUIRE(p.ranks.size() == 2);
  // Upper diagonal p^2 - 1 = 8, lower (q - p)(r - p) - 1 = 7.
  CHECK(p.ranks.rbegin()->second == 8);
  CHECK(p.ranks.begin()->second == 7);
  CHECK(p.ranks.rbegin()->first - p.ranks.begin()->first == 2);
}

TEST_CASE("pretzel delta ranks follow p^2 - 1 / (q-p)(r-p) - 1, or p^2 / (q-p)(r-p) for even p") {
  for (auto [p, q, r] : {std::tuple{2, 3, 5}, {2, 3, 7}, {3, 4, 5}, {3, 4, 7}, {3, 5, 5}, {2, 5, 5}, {3, 5, 6}, {4, 5, 5}}) {
    CAPTURE(p);
    CAPTURE(q);
    CAPTURE(r);
    const std::string s = "pretzel(-" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
    const DeltaProfile dp = delta_profile(khr(s, Field::gf2()));
    REQUIRE(dp.ranks.size() == 2);
    CHECK(dp.ranks.rbegin()->first - dp.ranks.begin()->first == 2);
    const std::size_t upper = p % 2 ? p * p - 1 : p * p;
    const std::size_t lower = p % 2 ? (q - p) * (r - p) - 1 : (q - p) * (r - p);
    CHECK(dp.ranks.rbegin()->second == upper);
    CHECK(dp.ranks.begin()->second == lower);
  }
}

TEST_CASE("|V(-1)| at q = sqrt(-1) is the determinant") {
  CHECK(jones_abs_at_minus_one(khr("unknot")) == 1);
  CHECK(jones_abs_at_minus_one(khr("torus(2,3)")) == 3);
  CHECK(jones_abs_at_minus_one(khr("braid(1,-2,1,-2)")) == 5);
  CHECK(jones_abs_at_minus_one(khr("torus(4,5)")) == 5);
}

TEST_CASE("crossing cap is enforced") {
  CHECK_THROWS_AS(ReducedCube(parse_knot_spec("torus(3,5)"), 5), CubeError);
}
