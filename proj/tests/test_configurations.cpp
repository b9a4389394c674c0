#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "psdcone/configurations.hpp"

using namespace psdcone;

namespace {
const double kPi = std::numbers::pi;
}

TEST(Configurations, PentagonInnerProducts) {
  const GramMatrix g = gram(pentagon());
  const double adjacent = std::cos(kPi / 5) + std::cos(2 * kPi / 5);
  EXPECT_NEAR(adjacent, 1.1180339887, 1e-10);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(g(k, k), std::cos(kPi / 5) + 1.0, 1e-14);
    EXPECT_NEAR(g(k, (k + 1) % 5), adjacent, 1e-14);
    EXPECT_EQ(g(k, (k + 2) % 5), 0.0);  // snapped to exact zero
    EXPECT_EQ(g(k, (k + 3) % 5), 0.0);
  }
  EXPECT_NEAR(g(0, 0), 1.8090169944, 1e-10);
  EXPECT_GE(g.entries().minCoeff(), 0.0);
}

TEST(Configurations, PentagonGramIsCirculant) {
  const GramMatrix g = gram(pentagon());
  for (int j = 0; j < 5; ++j) {
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(g(j, k), g((j + 1) % 5, (k + 1) % 5), 1e-14);
  }
  EXPECT_EQ(pentagon().vectors.rows(), 5);
  EXPECT_EQ(pentagon().vectors.cols(), 3);
}

TEST(Configurations, HexagonStructure) {
  const VectorConfig hex = hexagon();
  const GramMatrix g = gram(hex);
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(g(k, (k + 3) % 6), 0.0);
    EXPECT_NEAR(g(k, (k + 1) % 6), 1.5, 1e-15);
    // Boundary of the cone: x1^2 = x2^2 + x3^2.
    const auto v = hex.vectors.row(k);
    EXPECT_NEAR(v(0) * v(0), v(1) * v(1) + v(2) * v(2), 1e-15);
    // Opposite vectors sum to (2, 0, 0) exactly.
    const auto sum = (hex.vectors.row(k) + hex.vectors.row((k + 3) % 6)).eval();
    EXPECT_EQ(sum(0), 2.0);
    EXPECT_EQ(sum(1), 0.0);
    EXPECT_EQ(sum(2), 0.0);
  }
  // Matches the trigonometric definition.
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(hex.vectors(k, 1), std::cos(2 * kPi * k / 6), 1e-15);
    EXPECT_NEAR(hex.vectors(k, 2), std::sin(2 * kPi * k / 6), 1e-15);
  }
}

TEST(Configurations, GramExamples) {
  VectorConfig one{RealMatrix::Ones(1, 1), ""};
  EXPECT_EQ(gram(one).entries(), RealMatrix::Ones(1, 1));
  VectorConfig pair{RealMatrix::Identity(2, 2), ""};
  EXPECT_EQ(gram(pair).entries(), RealMatrix::Identity(2, 2));
}

TEST(Configurations, GramMatrixValidation) {
  RealMatrix asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  EXPECT_THROW(GramMatrix{asym}, Error);
  RealMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  try {
    GramMatrix{indefinite};
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPsd);
  }
  RealMatrix negative(2, 2);
  negative << 1, -0.5, -0.5, 1;
  try {
    require_nonneg_entries(GramMatrix(negative));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GramHasNegativeEntry);
  }
}

TEST(Configurations, RandomNonnegConfig) {
  const VectorConfig single = random_nonneg_config(1, 3, 5);
  EXPECT_NEAR(single.vectors.row(0).norm(), 1.0, 1e-15);

  const VectorConfig pair = random_nonneg_config(2, 2, 5);
  EXPECT_GE(pair.vectors.row(0).dot(pair.vectors.row(1)), 0.0);

  const VectorConfig fixture = random_nonneg_config(4, 4, 7);
  EXPECT_EQ(fixture.vectors, random_nonneg_config(4, 4, 7).vectors);
  const RealMatrix g = fixture.vectors * fixture.vectors.transpose();
  EXPECT_GE(g.minCoeff(), 0.0);
  // Frozen regression values for seed 7.
  EXPECT_NEAR(fixture.vectors(0, 0), -0.12758300578756504, 1e-15);
  EXPECT_NEAR(fixture.vectors(3, 3), 0.28286743353439658, 1e-15);

  EXPECT_NE(random_nonneg_config(4, 4, 8).vectors, fixture.vectors);
}

TEST(Configurations, RandomNonnegConfigBudget) {
  try {
    random_nonneg_config(40, 2, 1, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GenerationFailure);
  }
  EXPECT_THROW(random_nonneg_config(0, 2, 1), Error);
}

TEST(Configurations, VectorsFromGramExamples) {
  const VectorConfig triple = vectors_from_gram(GramMatrix(RealMatrix::Identity(3, 3)));
  EXPECT_EQ(triple.m(), 3);
  EXPECT_LE((triple.vectors * triple.vectors.transpose() - RealMatrix::Identity(3, 3)).norm(), 1e-12);

  const GramMatrix pent = gram(pentagon());
  const VectorConfig recovered = vectors_from_gram(pent);
  EXPECT_EQ(recovered.m(), 3);
  EXPECT_LE((recovered.vectors * recovered.vectors.transpose() - pent.entries()).norm(), 1e-9 * pent.entries().norm());

  const VectorConfig twins = vectors_from_gram(GramMatrix(RealMatrix::Ones(2, 2)));
  EXPECT_EQ(twins.m(), 1);
  EXPECT_NEAR(std::abs(twins.vectors(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(twins.vectors(0, 0), twins.vectors(1, 0), 1e-12);
}

TEST(ConfigurationsProperty, VectorsFromGramRoundTrip) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 7;
    const int rank = 1 + static_cast<int>(rng.uniform() * n);
    RealMatrix v(n, rank);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    const GramMatrix g(v * v.transpose());
    const VectorConfig c = vectors_from_gram(g);
    EXPECT_LE(c.m(), rank);
    EXPECT_LE((c.vectors * c.vectors.transpose() - g.entries()).norm(), 1e-9 * g.entries().norm());
  }
}
