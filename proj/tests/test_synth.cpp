#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "actspec/rng.hpp"
#include "actspec/synth.hpp"
#include "fixtures.hpp"

using namespace actspec;

namespace {

PatternOracle linear_oracle() {
  // f = x0 + 2 x1; x2 is ignored.
  return PatternOracle{[](const BitPattern& p) { return p.sign(0) + 2.0 * p.sign(1); }, false, "linear"};
}

}  // namespace

TEST(Multitier, MatchesReference) {
  for (std::uint64_t x = 0; x < 16; ++x) {
    const auto p = BitPattern::from_index(4, x);
    const auto s = p.signs();
    EXPECT_EQ(multitier(s), fixtures::multitier_reference(s[0], s[1], s[2], s[3]));
    EXPECT_EQ(multitier_of(p), fixtures::multitier_reference(s[0], s[1], s[2], s[3]));
  }
  EXPECT_EQ(multitier(1, 1, -1, -1), 1);   // descending chain
  EXPECT_EQ(multitier(-1, 1, -1, 1), -1);  // none of the three
  EXPECT_THROW(multitier(std::vector<int>{1, 1, 1}), DimensionError);
}

TEST(Generate, BaseAndConstant) {
  const auto base = gen_synth_dataset(SynthKind::base);
  EXPECT_EQ(base.dimension(), 4u);
  EXPECT_EQ(base.size(), 16u);
  EXPECT_DOUBLE_EQ(base.mean_value(), fixtures::multitier_cube().mean_value());

  const auto constant = gen_synth_dataset(SynthKind::constant);
  EXPECT_EQ(constant.dimension(), 5u);
  EXPECT_EQ(constant.size(), 16u);
  for (const auto& r : constant.records()) EXPECT_EQ(r.pattern.sign(4), 1);
  EXPECT_EQ(gen_synth_dataset(SynthKind::constant, 40).size(), 40u);
}

TEST(Generate, NoiseIsSeeded) {
  const auto a = gen_synth_dataset(SynthKind::noise, 50, 3);
  EXPECT_EQ(a.dimension(), 100u);
  EXPECT_EQ(a.size(), 50u);
  EXPECT_EQ(a, gen_synth_dataset(SynthKind::noise, 50, 3));
  EXPECT_NE(a, gen_synth_dataset(SynthKind::noise, 50, 4));
  for (const auto& r : a.records()) EXPECT_EQ(r.value, multitier_of(r.pattern));
  EXPECT_THROW(gen_synth_dataset(SynthKind::noise, 0, 1), std::invalid_argument);
  EXPECT_THROW(parse_synth_kind("uniform"), std::invalid_argument);
}

TEST(Influence, EnumerationOnMultitier) {
  const auto inf = influence_by_enumeration(multitier_of, 4);
  const std::vector<double> want{3.0 / 8, 3.0 / 8, 5.0 / 8, 5.0 / 8};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(inf[i], want[i], 1e-15);
  const auto padded = influence_by_enumeration(multitier_of, 6);
  EXPECT_EQ(padded[4], 0.0);
  EXPECT_EQ(padded[5], 0.0);
}

TEST(Tv, Examples) {
  const ImportanceVector a{{1, 1, 0, 0}};
  const ImportanceVector b{{0, 0, 1, 1}};
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 1.0);
  EXPECT_DOUBLE_EQ(tv_distance(a, a), 0.0);
  const ImportanceVector c{{3, 1}};
  const ImportanceVector d{{1, 1}};
  EXPECT_DOUBLE_EQ(tv_distance(c, d), 0.25);  // (|.75-.5| + |.25-.5|) / 2
  const ImportanceVector zero{{0, 0}};
  EXPECT_THROW(zero.normalize(), std::invalid_argument);
  EXPECT_THROW(tv_distance(a, c), DimensionError);
}

TEST(Baselines, FeatureAblationOnLinear) {
  const auto ds = fixtures::cube_dataset(3, [](const BitPattern&) { return 0.0; });
  const auto imp = feature_ablation_importance(linear_oracle(), ds);
  EXPECT_DOUBLE_EQ(imp.values[0], 2.0);
  EXPECT_DOUBLE_EQ(imp.values[1], 4.0);
  EXPECT_DOUBLE_EQ(imp.values[2], 0.0);
}

TEST(Baselines, FeatureAblationRefusesProjection) {
  const auto ds = fixtures::multitier_cube();
  PatternOracle proj{[](const BitPattern&) { return 0.0; }, true, "projection"};
  EXPECT_THROW(feature_ablation_importance(proj, ds), std::invalid_argument);
}

TEST(Baselines, ShapleyMarginalsAreEfficient) {
  const PatternOracle f{[](const BitPattern& p) { return multitier_of(p) + 0.5 * p.sign(4) * p.sign(0); }, false, "f"};
  StreamRng rng(4, 4);
  const BitPattern baseline(5);
  for (int k = 0; k < 30; ++k) {
    BitPattern x(5);
    for (std::size_t i = 0; i < 5; ++i) x.set_sign(i, rng.sign());
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 5; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const auto m = shapley_marginals(f, x, perm);
    EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), f(x) - f(baseline), 1e-12);
  }
}

TEST(Baselines, ShapleyOnLinearIsExact) {
  // Additive f: every order gives the same marginals, (x_i + 1) * weight.
  const auto ds = fixtures::cube_dataset(3, [](const BitPattern&) { return 0.0; });
  const auto imp = shapley_sampling_importance(linear_oracle(), ds, 3, 1);
  EXPECT_DOUBLE_EQ(imp.values[0], 1.0);  // mean of |0| and |2|
  EXPECT_DOUBLE_EQ(imp.values[1], 2.0);
  EXPECT_DOUBLE_EQ(imp.values[2], 0.0);
  EXPECT_EQ(shapley_sampling_importance(linear_oracle(), ds, 3, 1).values, imp.values);
}
