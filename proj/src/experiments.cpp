#include "actspec/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "actspec/parallel.hpp"

namespace actspec {

namespace {

std::vector<double> signs_of(const BitPattern& p) {
  std::vector<double> x(p.dimension());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = p.sign(i);
  return x;
}

PatternOracle net_oracle(std::shared_ptr<const Mlp> net, std::string name) {
  PatternOracle o;
  o.name = std::move(name);
  o.evaluate = [net](const BitPattern& p) { return mlp_forward(*net, signs_of(p))[0]; };
  return o;
}

bool is_noise(SynthSetting s) { return s == SynthSetting::noise1000 || s == SynthSetting::noise50; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mlp train_learned_net(const TrainConfig& cfg) {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  for (std::uint64_t x = 0; x < 16; ++x) {
    const auto p = BitPattern::from_index(4, x);
    inputs.push_back(signs_of(p));
    targets.push_back({multitier_of(p)});
  }
  auto result = train_mlp(inputs, targets, cfg);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const double y = mlp_forward(result.net, inputs[k])[0];
    if ((y > 0.0) != (targets[k][0] > 0.0)) {
      throw NumericError("learned multi-tier network misclassifies a cube point (final MSE " +
                         std::to_string(result.final_mse) + ")");
    }
  }
  return std::move(result.net);
}

double tv_or_one(const ImportanceVector& truth, const ImportanceVector& estimate) {
  double mass = 0.0;
  for (double v : estimate.values) mass += std::abs(v);
  return mass > 0.0 ? tv_distance(truth, estimate) : 1.0;
}

}  // namespace

std::string to_string(SynthSetting s) {
  switch (s) {
    case SynthSetting::hardcoded: return "hardcoded";
    case SynthSetting::learned: return "learned";
    case SynthSetting::constant: return "constant";
    case SynthSetting::noise1000: return "noise1000";
    case SynthSetting::noise50: return "noise50";
  }
  return "?";
}

SynthSetting parse_synth_setting(const std::string& text) {
  for (auto s : all_synth_settings()) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown setting '" + text + "' (hardcoded, learned, constant, noise1000, noise50)");
}

std::vector<SynthSetting> all_synth_settings() {
  return {SynthSetting::hardcoded, SynthSetting::learned, SynthSetting::constant, SynthSetting::noise1000,
          SynthSetting::noise50};
}

ImportanceVector multitier_ground_truth(std::size_t n) {
  if (n < 4) throw DimensionError("multi-tier ground truth needs n >= 4");
  ImportanceVector v;
  v.values.assign(n, 0.0);
  v.values[0] = v.values[1] = 3.0 / 8.0;
  v.values[2] = v.values[3] = 5.0 / 8.0;
  return v;
}

SynthFixture make_synth_fixture(SynthSetting setting, const SynthBenchConfig& cfg, std::uint64_t seed) {
  SynthFixture fx;
  fx.setting = setting;
  switch (setting) {
    case SynthSetting::hardcoded:
    case SynthSetting::learned: {
      auto net = std::make_shared<const Mlp>(setting == SynthSetting::hardcoded ? build_multitier_net(4)
                                                                                 : train_learned_net(cfg.learned));
      std::vector<Record> records;
      for (std::uint64_t x = 0; x < 16; ++x) {
        auto p = BitPattern::from_index(4, x);
        double y = mlp_forward(*net, signs_of(p))[0];
        if (setting == SynthSetting::learned) y = y > 0.0 ? 1.0 : -1.0;
        records.push_back({std::move(p), y, 1.0});
      }
      fx.data = ActivationDataset(4, std::move(records));
      fx.net = net;
      break;
    }
    case SynthSetting::constant: {
      fx.data = gen_synth_dataset(SynthKind::constant);
      fx.net = std::make_shared<const Mlp>(build_multitier_net(5));
      break;
    }
    case SynthSetting::noise1000:
    case SynthSetting::noise50: {
      fx.data = gen_synth_dataset(SynthKind::noise, setting == SynthSetting::noise1000 ? 1000 : 50, seed);
      fx.net = std::make_shared<const Mlp>(build_multitier_net(100));
      break;
    }
  }
  fx.oracle = net_oracle(fx.net, to_string(setting));
  fx.truth = multitier_ground_truth(fx.data.dimension());
  return fx;
}

SearchParams synth_search_params(SynthSetting setting, const SynthBenchConfig& cfg, std::uint64_t seed) {
  SearchParams p;
  p.gamma = cfg.gamma;
  p.threads = cfg.threads;
  p.estimator.seed = seed;
  if (is_noise(setting)) {
    p.tau = cfg.noise_tau;
    p.aggregation = Aggregation::spliced;
    p.order = VariableOrder::singleton_weight_last;
    p.estimator.pair_count = cfg.pair_count;
  } else {
    p.tau = cfg.tau;
  }
  return p;
}

SettingRun run_actspec_setting(const SynthFixture& fixture, const SynthBenchConfig& cfg, std::uint64_t seed) {
  SettingRun run;
  const auto params = synth_search_params(fixture.setting, cfg, seed);
  run.report = actspec_search(fixture.data, params, &fixture.oracle);
  run.influence = influence_estimate(run.report, run.report.total_weight);
  run.tv = tv_or_one(fixture.truth, ImportanceVector{run.influence.values, false});
  return run;
}

std::vector<std::string> scoreboard_methods() { return {"actspec", "feature_ablation", "shapley_sampling"}; }

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::vector<ScoreRow> run_synth_bench(const SynthBenchConfig& cfg, const std::vector<SynthSetting>& settings,
                                      const std::vector<std::string>& methods) {
  for (const auto& m : methods) {
    const auto known = scoreboard_methods();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw std::invalid_argument("unknown method '" + m + "' (actspec, feature_ablation, shapley_sampling)");
    }
  }
  std::vector<ScoreRow> rows;
  for (auto setting : settings) {
    const std::size_t runs = is_noise(setting) ? std::max<std::size_t>(1, cfg.noise_seeds) : 1;
    std::vector<SynthFixture> fixtures;
    if (setting == SynthSetting::learned) {
      fixtures.push_back(make_synth_fixture(setting, cfg, cfg.first_seed));
    } else {
      for (std::size_t r = 0; r < runs; ++r) fixtures.push_back(make_synth_fixture(setting, cfg, cfg.first_seed + r));
    }
    for (const auto& method : methods) {
      std::vector<double> tvs(fixtures.size());
      const auto t0 = std::chrono::steady_clock::now();
      auto one = [&](std::size_t r) {
        const auto& fx = fixtures[r];
        const std::uint64_t seed = cfg.first_seed + r;
        if (method == "actspec") {
          tvs[r] = run_actspec_setting(fx, cfg, seed).tv;
        } else if (method == "feature_ablation") {
          tvs[r] = tv_or_one(fx.truth, feature_ablation_importance(fx.oracle, fx.data));
        } else {
          tvs[r] = tv_or_one(fx.truth, shapley_sampling_importance(fx.oracle, fx.data, cfg.shapley_permutations, seed));
        }
      };
      if (method == "actspec") {
        // The search parallelizes internally.
        for (std::size_t r = 0; r < fixtures.size(); ++r) one(r);
      } else {
        detail::parallel_for(fixtures.size(), cfg.threads, one);
      }
      rows.push_back({method, setting, median(tvs), seconds_since(t0), fixtures.size()});
    }
  }
  return rows;
}

void write_scoreboard_csv(const std::vector<ScoreRow>& rows, std::ostream& os, bool with_runtime) {
  std::ostringstream line;
  os << "method,setting,tv_distance" << (with_runtime ? ",runtime" : "") << '\n';
  for (const auto& r : rows) {
    line.str("");
    line.precision(17);
    line << r.method << ',' << to_string(r.setting) << ',' << r.tv;
    if (with_runtime) {
      line.precision(6);
      line << ',' << r.runtime_seconds;
    }
    os << line.str() << '\n';
  }
}

MnistData load_mnist_subset(const MnistConfig& cfg) {
  if (cfg.keep.size() != 0 && cfg.keep.size() != 2) {
    throw std::invalid_argument("label filter must be empty (all classes) or a pair");
  }
  if (cfg.keep.empty() && cfg.target_class > 9) throw std::invalid_argument("target class must be a digit");
  MnistData d;
  d.images = filter_labels(load_idx(cfg.images, cfg.labels), cfg.keep);
  if (d.images.size() == 0) throw std::invalid_argument("label filter selected no images");
  d.inputs = binarized_inputs(d.images);
  const std::size_t classes = cfg.keep.empty() ? 10 : 2;
  for (auto label : d.images.labels) {
    std::vector<double> t(classes, 0.0);
    if (cfg.keep.empty()) {
      t[label] = 1.0;
    } else {
      t[label == cfg.keep[0] ? 0 : 1] = 1.0;
    }
    d.targets.push_back(std::move(t));
  }
  return d;
}

double classifier_accuracy(const Mlp& net, const MnistData& data) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.inputs.size(); ++i) {
    const auto out = mlp_forward(net, data.inputs[i]);
    const auto guess = std::max_element(out.begin(), out.end()) - out.begin();
    const auto truth = std::max_element(data.targets[i].begin(), data.targets[i].end()) - data.targets[i].begin();
    correct += guess == truth;
  }
  return data.inputs.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(data.inputs.size());
}

TrainedClassifier train_mnist_classifier(const MnistData& data, const MnistConfig& cfg, double dropout) {
  TrainConfig tc;
  tc.layer_sizes.push_back(kImagePixels);
  tc.layer_sizes.insert(tc.layer_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  tc.layer_sizes.push_back(data.targets.empty() ? 2 : data.targets.front().size());
  tc.epochs = cfg.epochs;
  tc.learning_rate = cfg.learning_rate;
  tc.dropout = dropout;
  tc.seed = cfg.seed;
  tc.batch_size = cfg.batch_size;
  auto unit = data.inputs;
  for (auto& x : unit) {
    for (double& v : x) v = 0.5 * (v + 1.0);
  }
  auto result = train_mlp(unit, data.targets, tc);
  fold_input_affine(result.net, 0.5, 0.5);
  TrainedClassifier out;
  out.net = std::move(result.net);
  out.final_mse = result.final_mse;
  out.accuracy = classifier_accuracy(out.net, data);
  return out;
}

OutputSelector mnist_selector(const MnistConfig& cfg) {
  if (cfg.keep.empty()) return OutputSelector{cfg.target_class, std::nullopt};
  return OutputSelector{0, std::size_t{1}};
}

ActivationDataset mnist_layer_dataset(const SubnetOracle& oracle, const MnistData& data, bool unit_rms) {
  auto ds = extract_activation_dataset(oracle, data.inputs);
  if (!unit_rms) return ds;
  const double rms = std::sqrt(ds.mean_square());
  if (!(rms > 0.0)) throw NumericError("selected output is identically zero on the data");
  return ds.scaled(1.0 / rms);
}

std::vector<std::size_t> screen_variables(const ActivationDataset& ds, std::size_t m) {
  const std::size_t n = ds.dimension();
  std::vector<double> score(n, 0.0);
  for (const auto& r : ds.records()) {
    for (std::size_t i = 0; i < n; ++i) score[i] += r.weight * r.value * r.pattern.sign(i);
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(score[a]) > std::abs(score[b]); });
  idx.resize(std::min(m, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

ActivationDataset restrict_variables(const ActivationDataset& ds, const std::vector<std::size_t>& vars) {
  if (vars.empty()) throw std::invalid_argument("restrict_variables: no variables");
  for (auto v : vars) {
    if (v >= ds.dimension()) throw DimensionError("restrict_variables: index out of range");
  }
  std::vector<Record> records;
  records.reserve(ds.size());
  for (const auto& r : ds.records()) {
    BitPattern p(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (r.pattern.positive(vars[k])) p.set_sign(k, 1);
    }
    records.push_back({std::move(p), r.value, r.weight});
  }
  return ActivationDataset(vars.size(), std::move(records));
}

SpectrumReport lift_report(const SpectrumReport& report, const std::vector<std::size_t>& vars, std::size_t n) {
  if (vars.size() != report.n) throw DimensionError("lift_report: variable list differs from the report width");
  auto lift = [&](const SubsetMask& s) {
    SubsetMask out(n);
    for (auto k : s.members()) out.insert(vars[k]);
    return out;
  };
  SpectrumReport out = report;
  out.n = n;
  for (auto& a : out.accepted) a.mask = lift(a.mask);
  for (auto& r : out.redundancy) {
    r.variable = vars[r.variable];
    r.witness = lift(r.witness);
    r.context = lift(r.context);
  }
  for (auto& d : out.duplicates) {
    d.mask = lift(d.mask);
    d.representative = lift(d.representative);
  }
  for (auto& v : out.order) v = vars[v];
  return out;
}

PatternUniqueness layer_uniqueness(const SubnetOracle& oracle, const MnistData& data) {
  std::set<std::vector<double>> continuous;
  std::set<std::vector<bool>> binary;
  for (const auto& x : data.inputs) {
    auto a = mlp_forward_to(oracle.net, oracle.cut, x);
    std::vector<bool> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] > 0.0;
    binary.insert(std::move(b));
    continuous.insert(std::move(a));
  }
  return {continuous.size(), binary.size()};
}

std::vector<SweepRow> run_dropout_sweep(const std::vector<double>& rates, const MnistData& data,
                                        const MnistConfig& cfg, std::size_t cut, const SearchParams& params) {
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 0.9)) throw std::invalid_argument("dropout rates must lie in [0, 0.9]");
  }
  if (cut == 0 || cut > cfg.hidden.size()) throw std::invalid_argument("sweep cut must name a hidden layer");
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    SweepRow row;
    row.rate = rate;
    try {
      const auto trained = train_mnist_classifier(data, cfg, rate);
      row.accuracy = trained.accuracy;
      const auto oracle = SubnetOracle::make(trained.net, cut, mnist_selector(cfg), data.inputs);
      const auto ds = mnist_layer_dataset(oracle, data, true);
      const auto report = actspec_search(ds, params);
      double total = 0.0;
      for (const auto& a : report.accepted) total += static_cast<double>(a.mask.cardinality());
      row.accepted = report.accepted.size();
      row.mean_size = report.accepted.empty() ? 0.0 : total / static_cast<double>(report.accepted.size());
      row.redundancy_count = report.redundancy.size();
    } catch (const NumericError& e) {
      row.error = e.what();
    } catch (const SearchLimitError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  std::ostringstream line;
  line.precision(17);
  os << "rate,mean_size,redundancy_count\n";
  for (const auto& r : rows) {
    line.str("");
    line << r.rate << ',';
    if (r.error) {
      line << "nan,nan";
    } else {
      line << r.mean_size << ',' << r.redundancy_count;
    }
    os << line.str() << '\n';
  }
}

}  // namespace actspec
