#pragma once

// Experiment drivers shared by the CLI and the acceptance checks: the
// multi-tier scoreboard settings and the MNIST classifier, layer analysis and
// dropout sweep.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actspec/mnistio.hpp"
#include "actspec/nn.hpp"
#include "actspec/search.hpp"
#include "actspec/synth.hpp"

namespace actspec {

enum class SynthSetting { hardcoded, learned, constant, noise1000, noise50 };

std::string to_string(SynthSetting s);
SynthSetting parse_synth_setting(const std::string& text);
std::vector<SynthSetting> all_synth_settings();

struct SynthBenchConfig {
  /// Thresholds for the three exact settings.
  double tau = 0.31622776601683794;  // tau^2 = 0.1
  double gamma = 0.5;
  /// Thresholds for the noise settings (spliced aggregation).
  double noise_tau = 0.22360679774997896;  // tau^2 = 0.05
  std::size_t noise_seeds = 20;
  /// Noise run r uses data and estimator seed first_seed + r.
  std::uint64_t first_seed = 1;
  /// Pairs per weight query in the noise settings (0 = Hoeffding count).
  std::size_t pair_count = 0;
  std::size_t shapley_permutations = 8;
  unsigned threads = 1;
  /// The learned network: widths 4-16-16-1 trained on the 16 cube points.
  TrainConfig learned{{4, 16, 16, 1}, 5000, 0.03, 0.9, 0.0, 1, 0, 1e-7};
};

/// Dataset, query oracle and ground-truth importance for one setting.
struct SynthFixture {
  SynthSetting setting = SynthSetting::hardcoded;
  ActivationDataset data;
  std::shared_ptr<const Mlp> net;
  PatternOracle oracle;
  ImportanceVector truth;
};

/// Multi-tier influences (3/8, 3/8, 5/8, 5/8) padded with zeros to n.
ImportanceVector multitier_ground_truth(std::size_t n);

/// The learned setting trains once per call; `seed` only matters for the noise settings.
SynthFixture make_synth_fixture(SynthSetting setting, const SynthBenchConfig& cfg, std::uint64_t seed = 1);

SearchParams synth_search_params(SynthSetting setting, const SynthBenchConfig& cfg, std::uint64_t seed);

struct SettingRun {
  SpectrumReport report;
  InfluenceEstimate influence;
  double tv = 0.0;
};

SettingRun run_actspec_setting(const SynthFixture& fixture, const SynthBenchConfig& cfg, std::uint64_t seed);

struct ScoreRow {
  std::string method;
  SynthSetting setting = SynthSetting::hardcoded;
  /// Median over runs for the noise settings.
  double tv = 0.0;
  double runtime_seconds = 0.0;
  std::size_t runs = 1;
};

std::vector<std::string> scoreboard_methods();
/// Rows in (setting, method) order for every setting in `settings` and every method.
std::vector<ScoreRow> run_synth_bench(const SynthBenchConfig& cfg, const std::vector<SynthSetting>& settings,
                                      const std::vector<std::string>& methods);
/// Columns method,setting,tv_distance,runtime; runtime is omitted when requested.
void write_scoreboard_csv(const std::vector<ScoreRow>& rows, std::ostream& os, bool with_runtime = true);

double median(std::vector<double> values);

struct MnistConfig {
  std::string images;
  std::string labels;
  /// Two labels: value = logit(keep[0]) - logit(keep[1]). Empty: all ten
  /// classes, value = logit(target_class).
  std::vector<std::uint8_t> keep{1, 7};
  std::size_t target_class = 0;
  std::vector<std::size_t> hidden{32, 32};
  std::size_t epochs = 20;
  double learning_rate = 0.005;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;
};

struct MnistData {
  ImageSet images;
  /// Binarized +-1 pixels.
  std::vector<std::vector<double>> inputs;
  /// One-hot over the kept classes (or all ten).
  std::vector<std::vector<double>> targets;
};

MnistData load_mnist_subset(const MnistConfig& cfg);

struct TrainedClassifier {
  Mlp net;
  double final_mse = 0.0;
  double accuracy = 0.0;
};

/// Trains on {0,1} pixels and folds (x + 1) / 2 into the first layer, so the
/// returned network takes the +-1 inputs directly.
TrainedClassifier train_mnist_classifier(const MnistData& data, const MnistConfig& cfg, double dropout);
double classifier_accuracy(const Mlp& net, const MnistData& data);
OutputSelector mnist_selector(const MnistConfig& cfg);

/// Binarized layer `cut` with the selected value; optionally rescaled to unit RMS.
ActivationDataset mnist_layer_dataset(const SubnetOracle& oracle, const MnistData& data, bool unit_rms);

/// The m variables with the largest |c({i})| (ties to the lower index), in ascending index order.
std::vector<std::size_t> screen_variables(const ActivationDataset& ds, std::size_t m);
/// Dataset over the listed coordinates only; coordinate k of the result is vars[k].
ActivationDataset restrict_variables(const ActivationDataset& ds, const std::vector<std::size_t>& vars);
/// Maps a report over restricted coordinates back to the original n coordinates.
SpectrumReport lift_report(const SpectrumReport& report, const std::vector<std::size_t>& vars, std::size_t n);

/// Count of distinct continuous layer vectors and of distinct binary patterns.
struct PatternUniqueness {
  std::size_t continuous = 0;
  std::size_t binary = 0;
};
PatternUniqueness layer_uniqueness(const SubnetOracle& oracle, const MnistData& data);

struct SweepRow {
  double rate = 0.0;
  double mean_size = 0.0;
  std::size_t redundancy_count = 0;
  std::size_t accepted = 0;
  double accuracy = 0.0;
  /// Set when training or the search failed for this rate.
  std::optional<std::string> error;
};

std::vector<SweepRow> run_dropout_sweep(const std::vector<double>& rates, const MnistData& data,
                                        const MnistConfig& cfg, std::size_t cut, const SearchParams& params);
/// Columns rate,mean_size,redundancy_count; failed rates print nan.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace actspec
