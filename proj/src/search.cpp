#include "actspec/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "actspec/parallel.hpp"
#include "actspec/spectrum.hpp"

namespace actspec {

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::exact: return "exact";
    case Aggregation::sampled: return "sampled";
    case Aggregation::spliced: return "spliced";
  }
  return "exact";
}

std::string to_string(VariableOrder o) {
  switch (o) {
    case VariableOrder::natural: return "natural";
    case VariableOrder::singleton_weight: return "singleton_weight";
    case VariableOrder::singleton_weight_last: return "singleton_weight_last";
  }
  return "natural";
}

Aggregation parse_aggregation(const std::string& text) {
  if (text == "exact") return Aggregation::exact;
  if (text == "sampled") return Aggregation::sampled;
  if (text == "spliced") return Aggregation::spliced;
  throw std::invalid_argument("unknown aggregation mode '" + text + "' (exact, sampled, spliced)");
}

VariableOrder parse_variable_order(const std::string& text) {
  if (text == "natural") return VariableOrder::natural;
  if (text == "singleton_weight") return VariableOrder::singleton_weight;
  if (text == "singleton_weight_last") return VariableOrder::singleton_weight_last;
  throw std::invalid_argument("unknown variable order '" + text +
                              "' (natural, singleton_weight, singleton_weight_last)");
}

void SearchParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("search: tau must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("search: gamma must lie in (0,1]");
  if (!(prune_fraction > 0.0 && prune_fraction <= 1.0)) {
    throw std::invalid_argument("search: prune_fraction must lie in (0,1]");
  }
  estimator.validate();
  if (max_buckets == 0) throw std::invalid_argument("search: max_buckets must be positive");
}

const RedundancyEntry* SpectrumReport::redundancy_for(std::size_t variable) const {
  for (const auto& e : redundancy) {
    if (e.variable == variable) return &e;
  }
  return nullptr;
}

namespace {

constexpr std::size_t kWitnessTableLimit = 16;

// Weighted mean of x_i x^T.
double sign_correlation(const ActivationDataset& ds, std::size_t i, const SubsetMask& t) {
  SubsetMask m = t;
  m.insert(i);
  const auto mask = m.words();
  double acc = 0.0;
  for (const auto& r : ds.records()) acc += r.weight * parity_words(r.pattern.words(), mask);
  return acc / ds.total_weight();
}

bool better_witness(double term, const SubsetMask& t, double best, const SubsetMask& best_t) {
  if (term > best + 1e-12) return true;
  if (term < best - 1e-12) return false;
  return t.cardinality() < best_t.cardinality();
}

}  // namespace

RedundancyResult redundancy_check(const ActivationDataset& ds, std::size_t i, const SubsetMask& a) {
  const std::size_t n = ds.dimension();
  if (a.dimension() != n) throw DimensionError("redundancy_check: dimension mismatch");
  if (i >= n) throw DimensionError("redundancy_check: variable index out of range");
  if (a.contains(i)) throw std::invalid_argument("redundancy_check: variable must not belong to A");

  const auto groups = detail::index_groups(ds, a);
  const double total = ds.total_weight();
  std::vector<double> cell(groups.group_count(), 0.0);  // sum_g w x_i / W
  for (std::size_t g = 0; g < groups.group_count(); ++g) {
    for (std::size_t k = groups.begin[g]; k < groups.begin[g + 1]; ++k) {
      const Record& r = ds[groups.order[k]];
      cell[g] += r.weight * r.pattern.sign(i);
    }
    cell[g] /= total;
  }
  const std::size_t size_a = a.cardinality();
  RedundancyResult out;
  double sq = 0.0;
  for (double c : cell) sq += c * c;
  out.score = std::ldexp(sq, static_cast<int>(size_a));

  const auto members = a.members();
  if (size_a <= kWitnessTableLimit) {
    // E[x_i x^T] = sum_y cell(y) y^T: an unscaled transform over the A-coordinates.
    std::vector<double> table(std::size_t{1} << size_a, 0.0);
    for (std::size_t g = 0; g < groups.group_count(); ++g) {
      const BitPattern& p = ds[groups.order[groups.begin[g]]].pattern;
      std::size_t idx = 0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (p.positive(members[j])) idx |= std::size_t{1} << j;
      }
      table[idx] += cell[g];
    }
    const auto coeffs = wht_exact(table);
    const double unscale = std::ldexp(1.0, static_cast<int>(size_a));
    out.witness = SubsetMask(n);
    out.witness_term = -1.0;
    for (std::size_t t = 0; t < table.size(); ++t) {
      const double e = coeffs.at_index(t) * unscale;
      SubsetMask cand(n);
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (t & (std::size_t{1} << j)) cand.insert(members[j]);
      }
      if (better_witness(e * e, cand, out.witness_term, out.witness)) {
        out.witness_term = e * e;
        out.witness = cand;
      }
    }
  } else {
    // Greedy ascent from the empty set, one member at a time.
    SubsetMask t(n);
    double best = std::pow(sign_correlation(ds, i, t), 2);
    for (;;) {
      SubsetMask step_t = t;
      double step = best;
      for (std::size_t m : members) {
        if (t.contains(m)) continue;
        SubsetMask cand = t;
        cand.insert(m);
        const double e = std::pow(sign_correlation(ds, i, cand), 2);
        if (e > step + 1e-12) {
          step = e;
          step_t = cand;
        }
      }
      if (step_t == t) break;
      t = step_t;
      best = step;
    }
    out.witness = t;
    out.witness_term = best;
  }
  return out;
}

double redundancy_score(const ActivationDataset& ds, std::size_t i, const SubsetMask& a) {
  return redundancy_check(ds, i, a).score;
}

namespace {

struct Child {
  SubsetMask s;
  bool include = false;
  double weight = 0.0;
  std::size_t cost = 0;
  double singleton_fraction = 0.0;
  bool redundant = false;
  RedundancyResult redundancy;
  bool checked = false;
};

class WeightEngine {
 public:
  WeightEngine(const ActivationDataset& ds, const SearchParams& params, const PatternOracle* oracle)
      : ds_(ds), params_(params), oracle_(oracle) {
    if (params.aggregation == Aggregation::spliced) {
      if (oracle == nullptr) throw std::invalid_argument("spliced aggregation needs a query oracle");
      if (oracle->projection_only) {
        throw std::invalid_argument("spliced aggregation needs query access off the dataset; use promote mode");
      }
    }
  }

  // Prepares per-depth state for I = i_mask.
  void set_decided(const SubsetMask& i_mask) {
    i_mask_ = i_mask;
    if (params_.aggregation != Aggregation::spliced) groups_ = detail::index_groups(ds_, i_mask.complement());
  }

  void weigh(Child& c) const {
    switch (params_.aggregation) {
      case Aggregation::exact: {
        const auto sums = detail::group_sums(ds_, groups_, c.s);
        double acc = 0.0;
        for (std::size_t g = 0; g < sums.weight.size(); ++g) {
          if (sums.weight[g] > 0.0) acc += sums.signal[g] * sums.signal[g] / sums.weight[g];
        }
        c.weight = acc / ds_.total_weight();
        c.cost = ds_.size();
        break;
      }
      case Aggregation::sampled: {
        const auto est = detail::bucket_weight_estimate_grouped(ds_, groups_, c.s, i_mask_, params_.estimator);
        c.weight = est.estimate;
        c.cost = est.samples_used;
        c.singleton_fraction = est.singleton_fraction;
        break;
      }
      case Aggregation::spliced: {
        const auto est = bucket_weight_spliced(ds_, *oracle_, c.s, i_mask_, params_.estimator);
        c.weight = est.estimate;
        c.cost = est.samples_used;
        break;
      }
    }
  }

 private:
  const ActivationDataset& ds_;
  const SearchParams& params_;
  const PatternOracle* oracle_;
  SubsetMask i_mask_;
  detail::GroupIndex groups_;
};

std::vector<std::size_t> variable_order(const ActivationDataset& ds, const SearchParams& params,
                                        WeightEngine& engine, SearchStats& stats) {
  const std::size_t n = ds.dimension();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (params.order == VariableOrder::natural) return order;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    SubsetMask single(n, {i});
    engine.set_decided(single);
    Child c;
    c.s = single;
    engine.weigh(c);
    w[i] = c.weight;
    ++stats.weight_queries;
    stats.oracle_calls += c.cost;
  }
  if (params.order == VariableOrder::singleton_weight) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
  }
  return order;
}

// Lexicographic comparison of member positions under the search order.
bool order_less(const SubsetMask& a, const SubsetMask& b, const std::vector<std::size_t>& rank) {
  if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
  auto ranks = [&](const SubsetMask& m) {
    std::vector<std::size_t> r;
    for (std::size_t v : m.members()) r.push_back(rank[v]);
    std::sort(r.begin(), r.end());
    return r;
  };
  return ranks(a) < ranks(b);
}

double parity_correlation(const ActivationDataset& ds, const SubsetMask& a, const SubsetMask& b) {
  const SubsetMask m = a ^ b;
  const auto mask = m.words();
  double acc = 0.0;
  for (const auto& r : ds.records()) acc += r.weight * parity_words(r.pattern.words(), mask);
  return acc / ds.total_weight();
}

}  // namespace

SpectrumReport actspec_search(const ActivationDataset& ds, const SearchParams& params, const PatternOracle* oracle) {
  params.validate();
  if (ds.empty()) throw std::invalid_argument("actspec_search: empty dataset");
  const std::size_t n = ds.dimension();
  const double tau2 = params.tau * params.tau;
  const double prune = params.prune_fraction * tau2;

  SpectrumReport report;
  report.n = n;
  report.params = params;
  report.total_weight = ds.mean_square();

  WeightEngine engine(ds, params, oracle);
  report.order = variable_order(ds, params, engine, report.stats);

  std::vector<Bucket> frontier{Bucket{0, SubsetMask(n), report.total_weight}};
  SubsetMask decided(n);
  report.stats.max_frontier = 1;

  for (std::size_t k = 0; k < n && !frontier.empty(); ++k) {
    const std::size_t v = report.order[k];
    decided.insert(v);
    engine.set_decided(decided);

    std::vector<Child> children(frontier.size() * 2);
    for (std::size_t b = 0; b < frontier.size(); ++b) {
      children[2 * b].s = frontier[b].s;
      children[2 * b + 1].s = frontier[b].s;
      children[2 * b + 1].s.insert(v);
      children[2 * b + 1].include = true;
    }
    detail::parallel_for(children.size(), params.threads, [&](std::size_t c) {
      Child& child = children[c];
      engine.weigh(child);
      if (child.include && child.weight >= prune) {
        SubsetMask context = child.s;
        context.erase(v);
        child.redundancy = redundancy_check(ds, v, context);
        child.checked = true;
        child.redundant = child.redundancy.score > params.gamma;
      }
    });

    std::vector<Bucket> next;
    for (const Child& child : children) {
      ++report.stats.weight_queries;
      report.stats.oracle_calls += child.cost;
      report.stats.max_singleton_fraction = std::max(report.stats.max_singleton_fraction, child.singleton_fraction);
      if (child.checked) ++report.stats.redundancy_queries;
      if (child.weight < prune) continue;
      if (child.redundant) {
        if (report.redundancy_for(v) == nullptr) {
          SubsetMask context = child.s;
          context.erase(v);
          report.redundancy.push_back(
              RedundancyEntry{v, child.redundancy.witness, context, child.redundancy.score, RedundancyKind::filter});
        }
        continue;
      }
      next.push_back(Bucket{k + 1, child.s, child.weight});
    }
    if (next.size() > params.max_buckets) {
      throw SearchLimitError("search frontier reached " + std::to_string(next.size()) + " buckets at depth " +
                             std::to_string(k + 1) + "; raise tau or use a different aggregation mode");
    }
    report.stats.max_frontier = std::max(report.stats.max_frontier, next.size());
    frontier = std::move(next);
  }
  report.stats.leaves = frontier.size();

  // Leaves carry their own subset; confirm against the dataset coefficient.
  std::vector<AcceptedSubset> candidates;
  for (const Bucket& b : frontier) {
    const double c = projection_coefficient(ds, b.s);
    if (c * c >= tau2) candidates.push_back(AcceptedSubset{b.s, c});
  }
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[report.order[k]] = k;
  std::stable_sort(candidates.begin(), candidates.end(), [&](const AcceptedSubset& a, const AcceptedSubset& b) {
    return order_less(a.mask, b.mask, rank);
  });

  // Keep one representative per group of parities that coincide on the data.
  for (const AcceptedSubset& cand : candidates) {
    const AcceptedSubset* into = nullptr;
    double overlap = 0.0;
    for (const AcceptedSubset& kept : report.accepted) {
      const double o = std::abs(parity_correlation(ds, cand.mask, kept.mask));
      if (o > params.gamma) {
        into = &kept;
        overlap = o;
        break;
      }
    }
    if (into == nullptr) {
      report.accepted.push_back(cand);
    } else if (cand.mask.cardinality() == 1) {
      const std::size_t var = cand.mask.members().front();
      if (report.redundancy_for(var) == nullptr) {
        report.redundancy.push_back(RedundancyEntry{var, into->mask, into->mask, overlap, RedundancyKind::duplicate});
      }
    } else {
      report.duplicates.push_back(DuplicateSubset{cand.mask, into->mask, overlap});
    }
  }

  double captured = 0.0;
  for (const auto& a : report.accepted) captured += a.coefficient * a.coefficient;
  report.residual = report.total_weight - captured;
  return report;
}

SpectrumReport actspec_search_top_k(const ActivationDataset& ds, SearchParams params, std::size_t k,
                                    const PatternOracle* oracle) {
  if (k == 0) throw std::invalid_argument("top-k search: k must be positive");
  const double total = ds.mean_square();
  if (!(total > 0.0)) throw std::invalid_argument("top-k search: dataset has zero weight");
  // Bisect log(tau^2) between total * 1e-6 and total.
  double lo = std::log(total * 1e-6);
  double hi = std::log(total);
  std::optional<SpectrumReport> best;
  auto score = [&](const SpectrumReport& r) {
    const auto c = r.accepted.size();
    return c > k ? c - k : k - c;
  };
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    params.tau = std::sqrt(std::exp(mid));
    SpectrumReport r;
    try {
      r = actspec_search(ds, params, oracle);
    } catch (const SearchLimitError&) {
      lo = mid;  // too permissive
      continue;
    }
    const std::size_t count = r.accepted.size();
    if (!best || score(r) < score(*best) || (score(r) == score(*best) && r.params.tau > best->params.tau)) {
      best = r;
    }
    if (count == k) break;
    if (count > k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!best) throw SearchLimitError("top-k search: every threshold tried exceeded the frontier limit");
  return *best;
}

InfluenceEstimate influence_estimate(const SpectrumReport& report, double total_weight) {
  const std::size_t n = report.n;
  InfluenceEstimate out;
  out.values.assign(n, 0.0);
  double captured = 0.0;
  std::vector<bool> in_support(n, false);
  for (const auto& a : report.accepted) {
    const double w = a.coefficient * a.coefficient;
    captured += w;
    for (std::size_t v : a.mask.members()) {
      out.values[v] += w;
      in_support[v] = true;
    }
  }
  std::vector<bool> constant(n, false);
  for (const auto& e : report.redundancy) {
    if (e.witness.empty()) constant[e.variable] = true;
  }
  if (report.accepted.empty()) std::fill(in_support.begin(), in_support.end(), true);

  double residual = total_weight - captured;
  const double slack = report.params.aggregation == Aggregation::exact
                           ? 1e-9 * std::max(1.0, total_weight)
                           : report.params.estimator.eta * static_cast<double>(report.accepted.size());
  if (residual < 0.0) {
    if (residual < -slack) out.residual_clamped = true;
    residual = 0.0;
  }
  out.residual = residual;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_support[i] && !constant[i]) {
      out.values[i] += residual / 2.0;
      out.support.push_back(i);
    }
  }
  return out;
}

}  // namespace actspec
