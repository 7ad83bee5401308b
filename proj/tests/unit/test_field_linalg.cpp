#include <random>

#include "doctest.h"
#include "khss/field.hpp"
#include "khss/linalg.hpp"
#include "khss/rational.hpp"
#include "oracles.hpp"

using namespace khss;

namespace {

std::vector<std::vector<std::int64_t>> random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi,
                                                     double density) {
  std::uniform_int_distribution<int> val(lo, hi);
  std::bernoulli_distribution keep(density);
  std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(c, 0));
  for (auto& row : m)
    for (auto& x : row)
      if (keep(rng)) x = val(rng);
  return m;
}

}  // namespace

TEST_CASE("rational arithmetic stays exact across the small/big boundary") {
  const Rational big = Rational(std::numeric_limits<std::int64_t>::max() / 2) * Rational(6);
  CHECK_FALSE(big.is_small());
  CHECK(big / Rational(6) == Rational(std::numeric_limits<std::int64_t>::max() / 2));
  CHECK((big / Rational(6)).is_small());
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-4, 6) == Rational(2, -3));
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("field parsing and names") {
  CHECK(Field::parse("f2") == Field::gf2());
  CHECK(Field::parse("GF(2)") == Field::gf2());
  CHECK(Field::parse("q") == Field::rationals());
  CHECK(Field::parse("f7") == Field::gfp(7));
  CHECK(Field::gfp(7).name() == "GF(7)");
  CHECK_THROWS(Field::parse("f6"));
  CHECK_THROWS(Field::parse("reals"));
}

TEST_CASE("reduction into GF(p) is a ring map") {
  const Field f = Field::gfp(7);
  CHECK(reduce_into(f, Rational(10)) == Rational(3));
  CHECK(reduce_into(f, Rational(-1)) == Rational(6));
  // 1/3 = 5 mod 7
  CHECK(reduce_into(f, Rational(1, 3)) == Rational(5));
  CHECK(reduce_into(Field::gf2(), Rational(5)) == Rational(1));
}

TEST_CASE("matrix rank over GF(2), GF(5) and Q matches dense reference elimination") {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
    const auto m = random_matrix(rng, r, c, -3, 3, 0.45);
    CAPTURE(trial);
    CHECK(matrix_rank(ExactMatrix::from_dense(Field::gf2(), m)) == oracle::rank_mod_p(m, 2));
    CHECK(matrix_rank(ExactMatrix::from_dense(Field::gfp(5), m)) == oracle::rank_mod_p(m, 5));
    CHECK(matrix_rank(ExactMatrix::from_dense(Field::rationals(), m)) == oracle::rank_over_q(m));
    CHECK(sparse_rank(ExactMatrix::from_dense(Field::rationals(), m)) == oracle::rank_over_q(m));
    CHECK(sparse_rank(ExactMatrix::from_dense(Field::gf2(), m)) == oracle::rank_mod_p(m, 2));
  }
}

TEST_CASE("wide GF(2) matrices cross the 64-bit word boundary") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_matrix(rng, 40, 150, 0, 1, 0.1);
    CHECK(matrix_rank(ExactMatrix::from_dense(Field::gf2(), m)) == oracle::rank_mod_p(m, 2));
  }
}

TEST_CASE("kernel vectors are annihilated and rank plus nullity is the column count") {
  std::mt19937 rng(99);
  for (const Field f : {Field::gf2(), Field::gfp(3), Field::rationals()}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto m = ExactMatrix::from_dense(f, random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6, -2, 2, 0.5));
      const RankKernelImage rki = rank_kernel_image(m);
      CHECK(rki.rank + rki.kernel.size() == m.cols());
      CHECK(rki.image.size() == rki.rank);
      for (const Vector& v : rki.kernel) {
        for (const Rational& x : m.apply(v)) CHECK(x.is_zero());
      }
    }
  }
}

TEST_CASE("composition of matrices is associative and respects the identity") {
  std::mt19937 rng(5);
  const Field f = Field::rationals();
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = ExactMatrix::from_dense(f, random_matrix(rng, 3, 4, -2, 2, 0.6));
    const auto b = ExactMatrix::from_dense(f, random_matrix(rng, 4, 5, -2, 2, 0.6));
    const auto c = ExactMatrix::from_dense(f, random_matrix(rng, 5, 2, -2, 2, 0.6));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(compose(ExactMatrix::identity(f, 3), a) == a);
  }
  CHECK_THROWS(compose(ExactMatrix(f, 2, 3), ExactMatrix(f, 2, 3)));
}
