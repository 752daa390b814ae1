#include "teflow/entropy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "teflow/error.hpp"
#include "teflow/synth.hpp"
#include "test_util.hpp"

namespace teflow {
namespace {

SampleMatrix column(std::vector<double> v) { return SampleMatrix::from_columns({v}); }

std::vector<double> rank_column(const RankMatrix& r, std::size_t c) { return r.values().column(c); }

// --- rank_transform --------------------------------------------------------

TEST(RankTransform, OrdinalRanksOverT) {
  const auto r = rank_transform(column({3.2, 1.1, 5.0}));
  EXPECT_EQ(rank_column(r, 0), (std::vector<double>{2.0 / 3, 1.0 / 3, 3.0 / 3}));
}

TEST(RankTransform, TiesGetAverageRank) {
  const auto r = rank_transform(column({1.0, 1.0, 2.0}));
  EXPECT_EQ(rank_column(r, 0), (std::vector<double>{0.5, 0.5, 1.0}));
}

TEST(RankTransform, InvariantUnderExp) {
  const auto a = rank_transform(column({3.2, 1.1, 5.0}));
  const auto b = rank_transform(column({std::exp(3.2), std::exp(1.1), std::exp(5.0)}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(rank_column(b, 0), (std::vector<double>{2.0 / 3, 1.0 / 3, 3.0 / 3}));
}

TEST(RankTransform, UntiedColumnIsPermutationOfGrid) {
  const SampleMatrix x = testing::normal_matrix(257, 3, 9);
  const auto r = rank_transform(x);
  for (std::size_t c = 0; c < 3; ++c) {
    auto col = rank_column(r, c);
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < col.size(); ++i) {
      ASSERT_EQ(col[i], static_cast<double>(i + 1) / 257.0);
    }
  }
}

TEST(RankTransform, RejectsNonFinite) {
  SampleMatrix x = testing::uniform_matrix(5, 2, 1);
  x(3, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)rank_transform(x);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3, column 1"), std::string::npos) << e.what();
  }
  x(3, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW((void)rank_transform(x), DataError);
}

// --- knn_entropy -----------------------------------------------------------

TEST(KnnEntropy, MatchesBruteForceOracle) {
  for (std::size_t d : {1U, 2U, 3U}) {
    const SampleMatrix x = testing::normal_matrix(300, d, 40 + d);
    for (std::size_t k : {1U, 3U, 5U}) {
      KnnConfig cfg;
      cfg.k = k;
      EXPECT_NEAR(knn_entropy(x, cfg), testing::brute_knn_entropy(x, k), 1e-12)
          << "d=" << d << " k=" << k;
    }
  }
}

TEST(KnnEntropy, UniformIsZeroOnAverage) {
  std::vector<double> h;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    h.push_back(knn_entropy(testing::uniform_matrix(1000, 1, seed)));
  }
  EXPECT_NEAR(testing::mean(h), 0.0, 0.05);
}

TEST(KnnEntropy, StandardNormal) {
  const double analytic = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  EXPECT_NEAR(analytic, 1.4189, 1e-4);
  std::vector<double> h;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double v = knn_entropy(testing::normal_matrix(1000, 1, 500 + seed));
    EXPECT_NEAR(v, analytic, 0.15);
    h.push_back(v);
  }
  EXPECT_NEAR(testing::mean(h), analytic, 0.05);
}

TEST(KnnEntropy, IdenticalPointsUseDistanceFloor) {
  KnnConfig cfg;
  cfg.k = 1;
  const double h = knn_entropy(column({2.0, 2.0, 2.0}), cfg);
  EXPECT_TRUE(std::isfinite(h));
  EXPECT_NEAR(h, testing::digamma_int(3) - testing::digamma_int(1) + std::log(2e-12), 1e-12);
}

TEST(KnnEntropy, InsufficientSamples) {
  EXPECT_THROW((void)knn_entropy(column({1.0, 2.0, 3.0})), InsufficientSamplesError);
  EXPECT_NO_THROW((void)knn_entropy(column({1.0, 2.0, 3.0, 4.0})));
}

TEST(KnnEntropy, RejectsBadConfig) {
  KnnConfig cfg;
  cfg.k = 0;
  EXPECT_THROW((void)knn_entropy(column({1, 2, 3, 4}), cfg), ConfigError);
  cfg = {};
  cfg.distance_floor = 0.0;
  EXPECT_THROW((void)knn_entropy(column({1, 2, 3, 4}), cfg), ConfigError);
}

// --- copula_entropy / mutual_information ------------------------------------

TEST(CopulaEntropy, SingleColumnIsExactlyZero) {
  EXPECT_EQ(copula_entropy(testing::normal_matrix(50, 1, 3)), 0.0);
  EXPECT_EQ(copula_entropy(column({5, 5, 5, 5})), 0.0);
  EXPECT_THROW((void)copula_entropy(column({1, 2, 3})), InsufficientSamplesError);
}

TEST(CopulaEntropy, GaussianRho09) {
  const double oracle = -0.5 * std::log(1.0 - 0.81);
  EXPECT_NEAR(oracle, 0.8304, 1e-4);
  std::vector<double> ce;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ce.push_back(copula_entropy(synth::gen_gaussian_copula({synth::correlation_2d(0.9), 1000, seed})));
  }
  EXPECT_NEAR(testing::mean(ce), -oracle, 0.1);
}

TEST(MutualInformation, NegatesCopulaEntropyBitExactly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = synth::gen_gaussian_copula({synth::correlation_2d(0.3 * seed - 0.5), 200, seed});
    EXPECT_EQ(mutual_information(x) + copula_entropy(x), 0.0);
  }
}

TEST(MutualInformation, GaussianRho09) {
  std::vector<double> mi;
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    mi.push_back(mutual_information(synth::gen_gaussian_copula({synth::correlation_2d(0.9), 1000, seed})));
  }
  EXPECT_NEAR(testing::mean(mi), 0.830366, 0.1);
}

// --- properties ------------------------------------------------------------

TEST(CopulaEntropyProperty, MonotoneMarginalInvariance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = synth::gen_gaussian_copula({synth::correlation_2d(0.6), 400, seed});
    SampleMatrix g = x;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      g(r, 0) = std::exp(x(r, 0));
      g(r, 1) = std::pow(x(r, 1), 3) + 2.0 * x(r, 1) - 7.0;
    }
    EXPECT_EQ(copula_entropy(g), copula_entropy(x));
  }
}

TEST(CopulaEntropyProperty, RowPermutationInvariance) {
  std::mt19937_64 shuffler(7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = synth::gen_gaussian_copula({synth::correlation_2d(-0.4), 300, seed});
    std::vector<std::size_t> perm(x.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), shuffler);
    SampleMatrix p(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      p(r, 0) = x(perm[r], 0);
      p(r, 1) = x(perm[r], 1);
    }
    EXPECT_EQ(copula_entropy(p), copula_entropy(x));
  }
}

TEST(CopulaEntropyProperty, Deterministic) {
  const auto x = testing::normal_matrix(500, 3, 77);
  const double a = copula_entropy(x);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(copula_entropy(x), a);
}

TEST(CopulaEntropyProperty, NegativeUnderDependence) {
  for (double rho : {0.5, -0.5, 0.8}) {
    int negative = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      negative += copula_entropy(synth::gen_gaussian_copula({synth::correlation_2d(rho), 1000, seed})) < 0.0;
    }
    EXPECT_GE(negative, 19) << "rho=" << rho;
  }
}

TEST(CopulaEntropyProperty, EntropyDecomposition) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = synth::gen_gaussian_copula({synth::correlation_2d(0.7), 2000, seed});
    const double joint = knn_entropy(x);
    const double marginals =
        knn_entropy(SampleMatrix::from_columns({x.column(0)})) +
        knn_entropy(SampleMatrix::from_columns({x.column(1)}));
    EXPECT_NEAR(joint, marginals + copula_entropy(x), 0.15);
  }
}

}  // namespace
}  // namespace teflow
