#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "actspec/rng.hpp"
#include "actspec/search.hpp"
#include "actspec/spectrum.hpp"
#include "fixtures.hpp"

using namespace actspec;

namespace {

std::set<SubsetMask> accepted_set(const SpectrumReport& r) {
  std::set<SubsetMask> out;
  for (const auto& a : r.accepted) out.insert(a.mask);
  return out;
}

SearchParams exact_params(double tau2, double gamma) {
  SearchParams p;
  p.tau = std::sqrt(tau2);
  p.gamma = gamma;
  return p;
}

ActivationDataset random_boolean_cube(std::size_t n, std::uint64_t seed) {
  StreamRng rng(seed, 0xb001);
  // Sparse-ish spectra: a random sign of a few random parities, so there is
  // something above each threshold.
  std::vector<SubsetMask> terms;
  for (int k = 0; k < 3; ++k) terms.push_back(SubsetMask::from_index(n, rng.below(std::size_t{1} << n)));
  std::vector<double> coef{0.7, 0.5, 0.3};
  std::vector<double> flips(std::size_t{1} << n);
  for (auto& f : flips) f = rng.uniform() < 0.1 ? -1.0 : 1.0;
  return fixtures::cube_dataset(n, [&](const BitPattern& p) {
    double v = 0;
    for (int k = 0; k < 3; ++k) v += coef[k] * parity(p, terms[k]);
    return (v >= 0 ? 1.0 : -1.0) * flips[p.index()];
  });
}

}  // namespace

TEST(RedundancyScore, WorkedTableExamples) {
  const auto ds = fixtures::worked_example();
  EXPECT_DOUBLE_EQ(redundancy_score(ds, 3, SubsetMask(5, {2})), 1.0);
  const auto constant = redundancy_check(ds, 4, SubsetMask(5));
  EXPECT_DOUBLE_EQ(constant.score, 1.0);
  EXPECT_TRUE(constant.witness.empty());
}

TEST(RedundancyScore, ZeroOnFullCube) {
  const auto ds = fixtures::multitier_cube();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::uint64_t a = 0; a < 16; ++a) {
      const auto mask = SubsetMask::from_index(4, a);
      if (mask.contains(i)) continue;
      EXPECT_NEAR(redundancy_score(ds, i, mask), 0.0, 1e-15);
    }
  }
}

TEST(RedundancyScore, MatchesEnumeration) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = fixtures::random_dataset(9, 30, seed);
    StreamRng rng(seed, 4);
    const std::size_t i = rng.below(9);
    SubsetMask a(9);
    for (std::size_t v = 0; v < 9; ++v) {
      if (v != i && rng.uniform() < 0.5) a.insert(v);
    }
    const auto am = a.members();
    double sum = 0;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << am.size()); ++t) {
      SubsetMask u(9);
      for (std::size_t b = 0; b < am.size(); ++b) {
        if ((t >> b) & 1) u.insert(am[b]);
      }
      u.insert(i);
      double m = 0;
      for (const auto& r : ds.records()) m += r.weight * parity(r.pattern, u);
      m /= ds.total_weight();
      sum += m * m;
    }
    EXPECT_NEAR(redundancy_score(ds, i, a), sum, 1e-12);
  }
}

TEST(RedundancyScore, RejectsMemberVariable) {
  EXPECT_THROW(redundancy_score(fixtures::worked_example(), 2, SubsetMask(5, {2})), std::invalid_argument);
}

TEST(Search, MultitierHighThreshold) {
  const auto r = actspec_search(fixtures::multitier_cube(), exact_params(0.3, 0.5));
  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_EQ(r.accepted[0].mask, SubsetMask(4, {2, 3}));
  EXPECT_NEAR(std::abs(r.accepted[0].coefficient), 5.0 / 8, 1e-12);
}

TEST(Search, MultitierLowThreshold) {
  const auto r = actspec_search(fixtures::multitier_cube(), exact_params(0.1, 0.5));
  const std::set<SubsetMask> want{SubsetMask(4, {0, 1}), SubsetMask(4, {0, 3}), SubsetMask(4, {1, 2}),
                                   SubsetMask(4, {2, 3})};
  EXPECT_EQ(accepted_set(r), want);
  EXPECT_NEAR(r.residual, 12.0 / 64, 1e-12);
  EXPECT_TRUE(r.redundancy.empty());
}

TEST(Search, WorkedExampleRedundancy) {
  const auto ds = fixtures::worked_example();
  const auto r = actspec_search(ds, exact_params(0.5, 0.5));

  // Independent view: every one of the 32 coefficients.
  std::vector<SubsetMask> heavy;
  for (std::uint64_t s = 0; s < 32; ++s) {
    const auto m = SubsetMask::from_index(5, s);
    if (std::pow(projection_coefficient(ds, m), 2) >= 0.5) heavy.push_back(m);
  }
  // x3, x4, x3x5, x4x5, x1x2, x1x2x5, ...: all the same parity on the four rows.
  for (const auto& m : heavy) EXPECT_DOUBLE_EQ(std::abs(projection_coefficient(ds, m)), 1.0);

  ASSERT_EQ(r.accepted.size(), 1u);
  EXPECT_EQ(r.accepted[0].mask, SubsetMask(5, {2}));
  EXPECT_DOUBLE_EQ(r.accepted[0].coefficient, 1.0);

  const auto* x5 = r.redundancy_for(4);
  ASSERT_NE(x5, nullptr);
  EXPECT_TRUE(x5->witness.empty());
  EXPECT_DOUBLE_EQ(x5->score, 1.0);

  const auto* x4 = r.redundancy_for(3);
  ASSERT_NE(x4, nullptr);
  EXPECT_EQ(x4->witness, SubsetMask(5, {2}));

  // The pair {x1, x2} carries the same parity and is merged into {x3}.
  bool pair_merged = false;
  for (const auto& d : r.duplicates) {
    if (d.mask == SubsetMask(5, {0, 1})) {
      pair_merged = true;
      EXPECT_EQ(d.representative, SubsetMask(5, {2}));
    }
  }
  EXPECT_TRUE(pair_merged);
  for (const auto& e : r.redundancy) EXPECT_GT(e.score, 0.5);
}

TEST(Search, OracleEquivalenceWithoutFilter) {
  for (std::uint64_t f = 0; f < 50; ++f) {
    const std::size_t n = 4 + f % 7;
    const auto ds = random_boolean_cube(n, f);
    const auto table = wht_exact(cube_values(ds));
    for (double tau2 : {0.05, 0.1, 0.3}) {
      std::set<SubsetMask> want;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        if (table.at_index(s) * table.at_index(s) >= tau2) want.insert(SubsetMask::from_index(n, s));
      }
      const auto r = actspec_search(ds, exact_params(tau2, 1.0));
      EXPECT_EQ(accepted_set(r), want) << "function " << f << " tau2 " << tau2;
    }
  }
}

TEST(Search, MonotonePruning) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ds = fixtures::random_dataset(6, 60, seed);
    for (Aggregation agg : {Aggregation::exact, Aggregation::sampled}) {
      std::set<SubsetMask> previous;
      bool first = true;
      for (double tau2 : {0.02, 0.05, 0.1, 0.2, 0.4}) {
        auto p = exact_params(tau2, 0.5);
        p.aggregation = agg;
        p.estimator.seed = seed;
        const auto now = accepted_set(actspec_search(ds, p));
        if (!first) {
          for (const auto& m : now) EXPECT_TRUE(previous.count(m)) << m.to_string();
        }
        previous = now;
        first = false;
      }
    }
  }
}

TEST(Search, Deterministic) {
  const auto ds = fixtures::random_dataset(8, 80, 3);
  auto p = exact_params(0.05, 0.5);
  p.aggregation = Aggregation::sampled;
  p.estimator.seed = 11;
  const auto a = actspec_search(ds, p);
  p.threads = 3;
  const auto b = actspec_search(ds, p);
  ASSERT_EQ(a.accepted.size(), b.accepted.size());
  for (std::size_t k = 0; k < a.accepted.size(); ++k) {
    EXPECT_EQ(a.accepted[k].mask, b.accepted[k].mask);
    EXPECT_EQ(a.accepted[k].coefficient, b.accepted[k].coefficient);
  }
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.stats.weight_queries, b.stats.weight_queries);
}

TEST(Search, InfluenceConsistencyOnFullCube) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    StreamRng rng(seed, 8);
    const auto ds = fixtures::cube_dataset(6, [&](const BitPattern&) { return rng.normal(); });
    const auto exact = influences_exact(wht_exact(cube_values(ds)));
    const auto r = actspec_search(ds, exact_params(1e-300, 1.0));
    ASSERT_EQ(r.accepted.size(), 64u);
    const auto est = influence_estimate(r, r.total_weight);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(est.values[i], exact[i], 1e-9);
  }
}

TEST(Search, FilterSoundness) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    // Correlated columns so the filter fires.
    StreamRng rng(seed, 5);
    std::vector<Record> rs;
    for (int r = 0; r < 40; ++r) {
      BitPattern p(7);
      for (std::size_t i = 0; i < 7; ++i) p.set_sign(i, rng.sign());
      p.set_sign(5, p.sign(0) * p.sign(1));
      p.set_sign(6, 1);
      rs.push_back({p, p.sign(0) * p.sign(1) + 0.3 * p.sign(2), 1.0});
    }
    const ActivationDataset ds(7, rs);
    const auto r = actspec_search(ds, exact_params(0.05, 0.5));
    EXPECT_NE(r.redundancy_for(6), nullptr);
    for (const auto& e : r.redundancy) {
      if (e.kind == RedundancyKind::filter) {
        const auto check = redundancy_check(ds, e.variable, e.context);
        EXPECT_NEAR(check.score, e.score, 1e-12);
        EXPECT_GT(e.score, 0.5);
        EXPECT_EQ(check.witness, e.witness);
      } else {
        double m = 0;
        auto u = e.witness;
        u ^= SubsetMask(7, {e.variable});
        for (const auto& rec : ds.records()) m += rec.weight * parity(rec.pattern, u);
        EXPECT_GT(std::abs(m / ds.total_weight()), 0.5);
      }
    }
    // Accepted masks are distinct.
    EXPECT_EQ(accepted_set(r).size(), r.accepted.size());
  }
}

TEST(Search, ParamValidation) {
  const auto ds = fixtures::multitier_cube();
  EXPECT_THROW(actspec_search(ds, exact_params(0.0, 0.5)), std::invalid_argument);
  EXPECT_THROW(actspec_search(ds, exact_params(0.1, 0.0)), std::invalid_argument);
  EXPECT_THROW(actspec_search(ds, exact_params(0.1, 1.5)), std::invalid_argument);
  auto p = exact_params(0.1, 0.5);
  p.aggregation = Aggregation::spliced;
  EXPECT_THROW(actspec_search(ds, p), std::invalid_argument);
}

TEST(Search, FrontierLimit) {
  const auto ds = fixtures::random_dataset(16, 2000, 1);
  auto p = exact_params(1e-6, 1.0);
  p.max_buckets = 8;
  EXPECT_THROW(actspec_search(ds, p), SearchLimitError);
}

TEST(Search, TopK) {
  const auto r = actspec_search_top_k(fixtures::multitier_cube(), exact_params(0.5, 0.5), 4);
  EXPECT_EQ(r.accepted.size(), 4u);
}

TEST(Search, ParseNames) {
  EXPECT_EQ(parse_aggregation("spliced"), Aggregation::spliced);
  EXPECT_EQ(to_string(VariableOrder::singleton_weight_last), "singleton_weight_last");
  EXPECT_EQ(parse_variable_order(to_string(VariableOrder::singleton_weight)), VariableOrder::singleton_weight);
  EXPECT_THROW(parse_aggregation("fast"), std::invalid_argument);
}

TEST(InfluenceEstimate, MultitierFourSubsets) {
  const auto r = actspec_search(fixtures::multitier_cube(), exact_params(0.1, 0.5));
  const auto est = influence_estimate(r, 1.0);
  const std::vector<double> want{3.0 / 8, 3.0 / 8, 5.0 / 8, 5.0 / 8};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(est.values[i], want[i], 1e-12);
  EXPECT_FALSE(est.residual_clamped);
}

TEST(InfluenceEstimate, EmptyReportIsHalfEverywhere) {
  SpectrumReport r;
  r.n = 5;
  const auto est = influence_estimate(r, 1.0);
  for (double v : est.values) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_EQ(est.support.size(), 5u);
}

TEST(InfluenceEstimate, ConstantVariableGetsZero) {
  const auto cube = fixtures::multitier_cube();
  std::vector<Record> rs;
  for (const auto& rec : cube.records()) {
    auto signs = rec.pattern.signs();
    signs.push_back(1);
    rs.push_back({BitPattern::from_signs(signs), rec.value, 1.0});
  }
  const ActivationDataset ds(5, rs);
  const auto r = actspec_search(ds, exact_params(0.1, 0.5));
  const auto est = influence_estimate(r, r.total_weight);
  EXPECT_EQ(est.values[4], 0.0);
  EXPECT_NEAR(est.values[2], 5.0 / 8, 1e-12);
}

TEST(InfluenceEstimate, NegativeResidualIsClamped) {
  SpectrumReport r;
  r.n = 2;
  r.accepted.push_back({SubsetMask(2, {0}), 1.0});
  const auto est = influence_estimate(r, 0.5);
  EXPECT_TRUE(est.residual_clamped);
  EXPECT_EQ(est.residual, 0.0);
  EXPECT_DOUBLE_EQ(est.values[0], 1.0);
}
