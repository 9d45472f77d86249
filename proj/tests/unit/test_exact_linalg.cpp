#include <cmath>

#include <gtest/gtest.h>

#include "glround/generator_set.hpp"
#include "glround/json_codec.hpp"
#include "glround/spectral.hpp"
#include "oracles.hpp"

using namespace glround;

namespace {

const GeneratorSet& example1() {
  static const GeneratorSet s = load_generator_set("example1");
  return s;
}

ExactMatrix elementary(std::size_t d, std::size_t i, std::size_t j) {
  ExactMatrix m(d, d);
  m(i, j) = 1;
  return m;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(to_string(parse_rational("2/4")), "1/2");
  EXPECT_EQ(to_string(parse_rational("3/-6")), "-1/2");
  EXPECT_EQ(to_string(parse_rational("-0/5")), "0");
  EXPECT_EQ(to_string(parse_rational(" 12 ")), "12");
  const Rational q = parse_rational("-10/4");
  EXPECT_GT(q.get_den(), 0);
  EXPECT_EQ(q.get_num(), -5);
}

TEST(Rational, RejectsMalformed) {
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("1.5"), ParseError);
}

TEST(MatMul, IdentityAndInverse) {
  const auto& g1 = example1().generator(0);
  EXPECT_EQ(ExactMatrix::identity(3) * g1, g1);
  EXPECT_EQ(g1 * mat_inverse(g1), ExactMatrix::identity(3));
}

TEST(MatMul, ElementaryMatrices) {
  EXPECT_EQ(elementary(3, 0, 1) * elementary(3, 1, 2), elementary(3, 0, 2));
  EXPECT_EQ(elementary(3, 0, 1) * elementary(3, 2, 0), ExactMatrix(3, 3));
}

TEST(MatMul, DimensionMismatch) {
  EXPECT_THROW(mat_mul(ExactMatrix(2, 3), ExactMatrix(2, 3)), DimensionError);
}

TEST(MatInverse, Examples) {
  EXPECT_EQ(mat_inverse(ExactMatrix::identity(3)), ExactMatrix::identity(3));
  const auto inv = mat_inverse(example1().generator(0));
  for (const auto& x : inv.entries()) EXPECT_TRUE(is_integer(x));
  EXPECT_THROW(mat_inverse(ExactMatrix(3, 3)), SingularMatrixError);
  EXPECT_THROW(mat_inverse(ExactMatrix{{1, 2}, {2, 4}}), SingularMatrixError);
}

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(ExactMatrix::identity(4)), 1);
  EXPECT_EQ(determinant(ExactMatrix{{2, 0}, {0, 3}}), 6);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(oracle::cofactor_det(example1().generator(i)), 1);
    EXPECT_EQ(determinant(example1().generator(i)), 1);
  }
}

TEST(Determinant, MatchesCofactorOracle) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + rng.uniform_index(5);
    const auto a = oracle::random_integer_matrix(rng, d, d, 9);
    ASSERT_EQ(determinant(a), oracle::cofactor_det(a));
  }
}

TEST(VecNormSq, Examples) {
  EXPECT_EQ(vec_norm_sq(ExactVector{1, 0, 0}), 1);
  EXPECT_EQ(vec_norm_sq(ExactVector{3, 4, 0}), 25);
  const auto col = mat_vec(example1().generator(0), ExactVector{1, 0, 0});
  EXPECT_EQ(col, (ExactVector{-9, 11, 3}));
  EXPECT_EQ(vec_norm_sq(col), 211);
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(ExactMatrix::identity(3)), 1.0, 1e-9);
  EXPECT_NEAR(operator_norm(ExactMatrix{{2, 0}, {0, 1}}), 2.0, 1e-9);
}

TEST(OperatorNorm, MatchesJacobiOracle) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.uniform_index(4);
    const auto a = oracle::random_integer_matrix(rng, d, d, 50);
    const double expect = oracle::singular_max(a);
    ASSERT_NEAR(operator_norm(a), expect, 1e-9 * std::max(1.0, expect));
  }
}

TEST(OperatorNorm, CrossNormsOfExample1) {
  const auto& s = example1();
  double best = 1e300;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) best = std::min(best, oracle::singular_max(s.inverse(j) * s.generator(i)));
  EXPECT_NEAR(best, 12157.1, 0.1);
}

TEST(ExteriorSquare, Examples) {
  EXPECT_EQ(exterior_square(ExactMatrix::identity(3)), ExactMatrix::identity(3));
  const ExactMatrix d{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}};
  EXPECT_EQ(exterior_square(d), (ExactMatrix{{6, 0, 0}, {0, 10, 0}, {0, 0, 15}}));
  const auto& g1 = example1().generator(0);
  const auto& g2 = example1().generator(1);
  EXPECT_EQ(exterior_square(oracle::naive_mul(g1, g2)), oracle::naive_mul(exterior_square(g1), exterior_square(g2)));
  EXPECT_THROW(exterior_square(ExactMatrix(1, 1)), DimensionError);
}

TEST(ProjDistance, Examples) {
  const ProjPoint e1(RealVector{1, 0, 0}), e2(RealVector{0, 1, 0});
  EXPECT_EQ(proj_distance(e1, e1), 0.0);
  EXPECT_NEAR(proj_distance(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(proj_distance(ProjPoint(RealVector{1, 1, 0}), e1), std::sqrt(0.5), 1e-12);
}

TEST(ProjPoint, Canonicalization) {
  const ProjPoint p(RealVector{0, -3, 4});
  EXPECT_NEAR(p[1], 0.6, 1e-15);
  EXPECT_NEAR(p[2], -0.8, 1e-15);
  EXPECT_NEAR(euclidean_norm(p.direction()), 1.0, 1e-12);
  EXPECT_THROW(ProjPoint(RealVector{0, 0, 0}), DomainError);
  EXPECT_EQ(proj_distance(ProjPoint(RealVector{1, 2, 3}), ProjPoint(RealVector{-1, -2, -3})), 0.0);
}

TEST(MaxStretch, Examples) {
  const auto w = max_stretch_direction(ExactMatrix{{3, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_NEAR(std::abs(w[0]), 1.0, 1e-9);
  // Orthogonal matrix: any unit vector is accepted.
  const auto u = max_stretch_direction(ExactMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  EXPECT_NEAR(euclidean_norm(u.direction()), 1.0, 1e-12);
}

TEST(MaxStretch, AttainsOperatorNorm) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_integer_matrix(rng, 3, 3, 20);
    const auto ra = to_real(a);
    const auto w = max_stretch_direction(ra);
    const double norm = operator_norm(ra);
    ASSERT_NEAR(euclidean_norm(mat_vec(ra, w.direction())), norm, 1e-8 * norm);
  }
}

TEST(MaxStretch, NormImplicationForCrossMatrix) {
  const auto& s = example1();
  const RealMatrix a = to_real(s.inverse(1) * s.generator(0));
  const auto w = max_stretch_direction(a);
  const double norm = operator_norm(a);
  SplitMix64 rng(3);
  int shrunk = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto x = oracle::random_unit(rng, 3);
    if (euclidean_norm(mat_vec(a, x)) >= 1.0) continue;
    ++shrunk;
    double ip = 0.0;
    for (int c = 0; c < 3; ++c) ip += x[c] * w[c];
    ASSERT_LE(std::abs(ip) * norm, 1.0 + 1e-8);
  }
  SUCCEED() << shrunk << " contracted samples";
}

TEST(JsonCodec, MatrixRoundTrip) {
  const ExactMatrix m{{Rational(1, 3), -9}, {0, Rational(-7, 2)}};
  const auto j = encode(m);
  EXPECT_EQ(j.dump(), R"([["1/3","-9"],["0","-7/2"]])");
  EXPECT_EQ(decode_matrix(j), m);
  EXPECT_EQ(decode_matrix(nlohmann::json::parse("[[1, \"2\"], [3, 4]]")), (ExactMatrix{{1, 2}, {3, 4}}));
}

TEST(JsonCodec, ErrorsCarryLocation) {
  try {
    decode_matrix(nlohmann::json::parse(R"([["1","2"],["3","x"]])"), "g1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2 col 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(decode_matrix(nlohmann::json::parse(R"([["1","2"],["3"]])")), Error);
}
