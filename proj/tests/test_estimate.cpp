#include <gtest/gtest.h>

#include <cmath>

#include "actspec/estimate.hpp"
#include "actspec/rng.hpp"
#include "actspec/spectrum.hpp"
#include "fixtures.hpp"

using namespace actspec;

namespace {

// Values in [-1, 1] so the Hoeffding count uses M = 1.
ActivationDataset bounded_dataset(std::size_t n, std::size_t count, std::uint64_t seed) {
  StreamRng rng(seed, 0xb0);
  std::vector<Record> rs;
  for (std::size_t r = 0; r < count; ++r) {
    BitPattern p(n);
    for (std::size_t i = 0; i < n; ++i) p.set_sign(i, rng.sign());
    const double v = p.sign(0) * p.sign(1) * 0.6 + 0.4 * (2 * rng.uniform() - 1);
    rs.push_back({std::move(p), v, 1.0});
  }
  return ActivationDataset(n, std::move(rs));
}

SubsetMask random_mask(std::size_t n, StreamRng& rng, double p) {
  SubsetMask m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < p) m.insert(i);
  }
  return m;
}

}  // namespace

TEST(SampleSize, HoeffdingCount) {
  EstimatorConfig cfg;
  cfg.eta = 0.1;
  cfg.delta = 0.05;
  cfg.bound = 1.0;
  EXPECT_EQ(sample_size(cfg), 738u);
  cfg.eta = 0.05;
  EXPECT_EQ(sample_size(cfg), 2952u);  // ceil(4 * 737.78)
  cfg.eta = std::sqrt(2.0);
  cfg.delta = 2.0 / std::exp(2.0);
  EXPECT_EQ(sample_size(cfg), 2u);
}

TEST(SampleSize, HalvingEtaQuadruples) {
  EstimatorConfig cfg;
  cfg.bound = 1.0;
  for (double eta : {0.2, 0.1, 0.05, 0.02}) {
    cfg.eta = eta;
    const auto a = static_cast<double>(sample_size(cfg));
    cfg.eta = eta / 2;
    const auto b = static_cast<double>(sample_size(cfg));
    EXPECT_NEAR(b / a, 4.0, 4.0 / a + 1e-9);
  }
}

TEST(SampleSize, RejectsBadConfig) {
  EstimatorConfig cfg;
  cfg.bound = 0.0;
  EXPECT_THROW(sample_size(cfg), std::invalid_argument);
  cfg.bound = 1.0;
  cfg.delta = 1.0;
  EXPECT_THROW(sample_size(cfg), std::invalid_argument);
  cfg.delta = 0.05;
  cfg.eta = 0.0;
  EXPECT_THROW(sample_size(cfg), std::invalid_argument);
}

TEST(Estimate, ExhaustiveEqualsExact) {
  EstimatorConfig cfg;
  cfg.exhaustive = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = fixtures::random_dataset(8, 60, seed);
    StreamRng rng(seed, 1);
    const auto i_mask = random_mask(8, rng, 0.6);
    const auto s = random_mask(8, rng, 0.5) & i_mask;
    EXPECT_NEAR(bucket_weight_estimate(ds, s, i_mask, cfg).estimate, bucket_weight_exact(ds, s, i_mask), 1e-12);
  }
}

TEST(Estimate, MultitierWithinEtaAcrossSeeds) {
  const auto ds = fixtures::multitier_cube();
  EstimatorConfig cfg;
  cfg.eta = 0.05;
  cfg.delta = 0.01;
  cfg.bound = 1.0;
  const SubsetMask s(4, {2});
  int within = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.seed = seed;
    within += std::abs(bucket_weight_estimate(ds, s, s, cfg).estimate - 5.0 / 8) <= cfg.eta;
  }
  EXPECT_GE(within, 198);
}

TEST(Estimate, SingleRecord) {
  const ActivationDataset ds(3, {{BitPattern::from_signs({1, -1, 1}), -1.5, 2.0}});
  EstimatorConfig cfg;
  for (std::uint64_t i = 0; i < 8; ++i) {
    const auto est = bucket_weight_estimate(ds, SubsetMask(3), SubsetMask::from_index(3, i), cfg);
    EXPECT_DOUBLE_EQ(est.estimate, 2.25);
    EXPECT_DOUBLE_EQ(est.singleton_fraction, 1.0);
  }
}

TEST(Estimate, Deterministic) {
  const auto ds = bounded_dataset(10, 200, 3);
  EstimatorConfig cfg;
  cfg.seed = 42;
  const SubsetMask i_mask(10, {0, 1, 2, 3, 4, 5});
  const SubsetMask s(10, {0, 1});
  const auto a = bucket_weight_estimate(ds, s, i_mask, cfg);
  const auto b = bucket_weight_estimate(ds, s, i_mask, cfg);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.samples_used, b.samples_used);
  cfg.seed = 43;
  EXPECT_NE(bucket_weight_estimate(ds, s, i_mask, cfg).estimate, a.estimate);
}

TEST(Estimate, ConcentrationAtTenVariables) {
  EstimatorConfig cfg;
  cfg.eta = 0.1;
  cfg.delta = 0.05;
  cfg.bound = 1.0;
  int within = 0;
  const int runs = 200;
  for (int k = 0; k < runs; ++k) {
    const auto ds = bounded_dataset(10, 400, 1000 + k);
    StreamRng rng(k, 2);
    const auto i_mask = random_mask(10, rng, 0.7);
    const auto s = random_mask(10, rng, 0.5) & i_mask;
    cfg.seed = static_cast<std::uint64_t>(k);
    within += std::abs(bucket_weight_estimate(ds, s, i_mask, cfg).estimate - bucket_weight_exact(ds, s, i_mask)) <=
              cfg.eta;
  }
  EXPECT_GE(within, static_cast<int>(std::ceil((1 - cfg.delta) * runs)));
}

TEST(Estimate, UnbiasedOnGroupsOfAtLeastTwo) {
  // Every J-pattern appears several times, so no singleton groups.
  const auto ds = bounded_dataset(6, 512, 7);
  const SubsetMask i_mask(6, {0, 1, 2});
  const SubsetMask s(6, {0, 1});
  EstimatorConfig cfg;
  cfg.eta = 0.1;
  cfg.bound = 1.0;
  const int seeds = 400;
  double mean = 0;
  double singleton = 0;
  for (int k = 0; k < seeds; ++k) {
    cfg.seed = static_cast<std::uint64_t>(k);
    const auto est = bucket_weight_estimate(ds, s, i_mask, cfg);
    mean += est.estimate;
    singleton = std::max(singleton, est.singleton_fraction);
  }
  mean /= seeds;
  EXPECT_EQ(singleton, 0.0);
  EXPECT_NEAR(mean, bucket_weight_exact(ds, s, i_mask), 3 * cfg.eta / std::sqrt(static_cast<double>(seeds)));
}

TEST(Estimate, PairCountOverride) {
  const auto ds = bounded_dataset(5, 50, 1);
  EstimatorConfig cfg;
  cfg.pair_count = 17;
  EXPECT_EQ(bucket_weight_estimate(ds, SubsetMask(5), SubsetMask(5, {0}), cfg).samples_used, 17u);
}

TEST(Estimate, RejectsSNotInI) {
  const auto ds = bounded_dataset(5, 50, 1);
  EXPECT_THROW(bucket_weight_estimate(ds, SubsetMask(5, {1}), SubsetMask(5, {0}), EstimatorConfig{}),
               std::invalid_argument);
}

TEST(Spliced, UniformDonorTracksFullCubeWeight) {
  const auto ds = fixtures::multitier_cube();
  PatternOracle oracle{[](const BitPattern& p) {
                         return fixtures::multitier_reference(p.sign(0), p.sign(1), p.sign(2), p.sign(3));
                       },
                       false, "multitier"};
  EstimatorConfig cfg;
  cfg.eta = 0.05;
  cfg.bound = 1.0;
  cfg.seed = 9;
  const SubsetMask s(4, {2});
  EXPECT_NEAR(bucket_weight_spliced(ds, oracle, s, s, cfg).estimate, 5.0 / 8, 0.05);
  const SubsetMask both(4, {2, 3});
  // {x3,x4} plus its three weight-1/64 supersets.
  EXPECT_NEAR(bucket_weight_spliced(ds, oracle, both, both, cfg).estimate, 28.0 / 64, 0.05);
}

TEST(Spliced, RefusesProjectionOracle) {
  const auto ds = fixtures::multitier_cube();
  PatternOracle oracle{[](const BitPattern&) { return 0.0; }, true, "projection"};
  EXPECT_THROW(bucket_weight_spliced(ds, oracle, SubsetMask(4), SubsetMask(4), EstimatorConfig{}),
               std::invalid_argument);
}
