// actspec: command-line entry point.
//
// Exit codes: 0 success, 2 configuration error, 3 data-format error,
// 4 numeric failure (divergence, search limits), 1 anything else.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "actspec/abf.hpp"
#include "actspec/experiments.hpp"
#include "actspec/mnistio.hpp"
#include "actspec/nn.hpp"
#include "actspec/report.hpp"
#include "actspec/search.hpp"
#include "actspec/spectrum.hpp"
#include "actspec/synth.hpp"
#include "config.hpp"

namespace {

using namespace actspec;

constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

struct DataOptions {
  std::string input;
  std::string synth;
  std::size_t count = 0;
  std::uint64_t data_seed = 1;
};

struct SearchOptions {
  double tau = 0.3;
  double gamma = 0.5;
  double prune_fraction = 1.0;
  double eta = 0.1;
  double delta = 0.05;
  double bound = 0.0;
  std::uint64_t seed = 1;
  std::string mode = "exact";
  std::string order = "natural";
  std::size_t max_buckets = std::size_t{1} << 18;
  std::size_t top_k = 0;
  std::size_t pair_count = 0;
  bool dataset_donor = false;
  std::size_t screen = 0;
  std::string oracle_net;
  std::size_t output_index = 0;
};

struct MnistOptions {
  std::string images;
  std::string labels;
  std::string keep = "1,7";
  std::size_t target_class = 0;
  std::vector<std::size_t> hidden{32, 32};
  std::size_t epochs = 20;
  double lr = 0.005;
  std::size_t batch = 64;
  std::uint64_t train_seed = 1;
  std::string net;
  std::string save_net;
};

struct Settings {
  std::string config;
  unsigned threads = 1;
  std::string out;
  DataOptions data;
  SearchOptions search;
  /// mnist-input screens pixels; hidden layers are small enough to search whole.
  SearchOptions input_search{std::sqrt(0.05), 0.5, 1.0, 0.1, 0.05, 0.0, 1, "exact", "natural", std::size_t{1} << 18,
                             0, 0, false, 24, "", 0};
  SearchOptions layer_search{std::sqrt(0.03), 0.5, 1.0, 0.1, 0.05, 0.0, 1, "exact", "natural", std::size_t{1} << 18,
                             0, 0, false, 0, "", 0};
  MnistOptions mnist;
  // wht / influence
  bool exact_influence = false;
  std::string report;
  // synth-bench
  std::vector<std::string> settings;
  std::vector<std::string> methods;
  std::size_t noise_seeds = 20;
  std::uint64_t first_seed = 1;
  double noise_tau = std::sqrt(0.05);
  std::size_t permutations = 8;
  bool no_runtime = false;
  // mnist
  std::size_t cut = 1;
  double dropout = 0.0;
  bool raw_values = false;
  std::string save_abf;
  std::string heatmap_csv;
  std::string heatmap_pgm;
  std::size_t heatmap_top_k = 0;
  std::vector<double> rates{0.0, 0.25, 0.5};
  // intervene / export
  std::string subsets;
  std::string json_out;
  std::string dot_out;
};

// ---- output helpers ----

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body, bool binary = false) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  body(os);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

void write_json(const std::string& path, const Json& doc) {
  write_to(path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

// ---- option groups ----

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--input", d.input, "Activation dataset (.abf, or .jsonl debug form)");
  app->add_option("--synth", d.synth, "Generate a synthetic dataset instead: base, constant or noise");
  app->add_option("--count", d.count, "Record count for --synth constant/noise");
  app->add_option("--data-seed", d.data_seed, "Seed for --synth noise");
}

void add_search_options(CLI::App* app, SearchOptions& s) {
  app->add_option("--tau", s.tau, "Acceptance threshold on |coefficient| (weights compare with tau^2)");
  app->add_option("--gamma", s.gamma, "Redundancy threshold; 1 disables the filter for scores <= 1");
  app->add_option("--prune-fraction", s.prune_fraction, "Prune buckets below this fraction of tau^2");
  app->add_option("--eta", s.eta, "Estimator additive error");
  app->add_option("--delta", s.delta, "Estimator failure probability");
  app->add_option("--bound", s.bound, "Declared |f| bound (0: max |value| in the data)");
  app->add_option("--seed", s.seed, "Estimator seed");
  app->add_option("--mode", s.mode, "Aggregation: exact, sampled or spliced");
  app->add_option("--order", s.order, "Variable order: natural, singleton_weight, singleton_weight_last");
  app->add_option("--max-buckets", s.max_buckets, "Frontier size at which the search stops with exit code 4");
  app->add_option("--top-k", s.top_k, "Search tau for about k accepted subsets (overrides --tau)");
  app->add_option("--pair-count", s.pair_count, "Pairs per weight query (0: Hoeffding count)");
  app->add_flag("--dataset-donor", s.dataset_donor, "Spliced mode: copy free coordinates from a second record");
  app->add_option("--screen", s.screen, "Restrict the search to the m variables with largest |c({i})| (0: all)");
  app->add_option("--oracle-net", s.oracle_net, "Network JSON taking the pattern as +-1 input (spliced mode)");
  app->add_option("--output-index", s.output_index, "Network output used as the oracle value");
}

void add_mnist_options(CLI::App* app, MnistOptions& m) {
  app->add_option("--images", m.images, "IDX image file (.gz allowed)")->required();
  app->add_option("--labels", m.labels, "IDX label file (.gz allowed)")->required();
  app->add_option("--keep", m.keep, "Label pair such as 1,7, or 'all'");
  app->add_option("--target-class", m.target_class, "Logit used as the value when --keep all");
  app->add_option("--hidden", m.hidden, "Hidden layer widths")->delimiter(',');
  app->add_option("--epochs", m.epochs, "Training epochs");
  app->add_option("--lr", m.lr, "Learning rate");
  app->add_option("--batch", m.batch, "Mini-batch size");
  app->add_option("--train-seed", m.train_seed, "Training seed");
  app->add_option("--net", m.net, "Load this classifier instead of training one");
  app->add_option("--save-net", m.save_net, "Write the classifier JSON here");
}

// ---- conversions ----

ActivationDataset load_data(const DataOptions& d) {
  if (!d.input.empty() && !d.synth.empty()) throw std::invalid_argument("give either --input or --synth, not both");
  if (!d.input.empty()) return load_dataset(d.input);
  if (d.synth.empty()) throw std::invalid_argument("a dataset is required (--input or --synth)");
  return gen_synth_dataset(parse_synth_kind(d.synth), d.count, d.data_seed);
}

SearchParams search_params(const SearchOptions& s, unsigned threads) {
  SearchParams p;
  p.tau = s.tau;
  p.gamma = s.gamma;
  p.prune_fraction = s.prune_fraction;
  p.estimator.eta = s.eta;
  p.estimator.delta = s.delta;
  p.estimator.bound = s.bound;
  p.estimator.seed = s.seed;
  p.estimator.pair_count = s.pair_count;
  p.estimator.uniform_donor = !s.dataset_donor;
  p.aggregation = parse_aggregation(s.mode);
  p.order = parse_variable_order(s.order);
  p.max_buckets = s.max_buckets;
  p.threads = threads;
  p.validate();
  return p;
}

struct LoadedOracle {
  std::unique_ptr<SubnetOracle> subnet;
  PatternOracle oracle;
};

std::optional<LoadedOracle> load_pattern_oracle(const SearchOptions& s, std::size_t n) {
  if (s.oracle_net.empty()) return std::nullopt;
  Mlp net = load_mlp(s.oracle_net);
  if (net.input_dim() != n) throw DimensionError("oracle network input width differs from the dataset dimension");
  LoadedOracle out;
  out.subnet = std::make_unique<SubnetOracle>(SubnetOracle::make(std::move(net), 0, {s.output_index, std::nullopt}, {}));
  out.oracle = make_promote_oracle(*out.subnet);
  return out;
}

SpectrumReport run_search(const ActivationDataset& ds, const SearchOptions& s, unsigned threads) {
  const auto params = search_params(s, threads);
  const auto loaded = load_pattern_oracle(s, ds.dimension());
  if (params.aggregation == Aggregation::spliced && !loaded) {
    throw std::invalid_argument("spliced mode needs --oracle-net");
  }
  const PatternOracle* oracle = loaded ? &loaded->oracle : nullptr;
  auto search = [&](const ActivationDataset& data, const PatternOracle* o) {
    return s.top_k > 0 ? actspec_search_top_k(data, params, s.top_k, o) : actspec_search(data, params, o);
  };
  if (s.screen == 0 || s.screen >= ds.dimension()) return search(ds, oracle);
  if (oracle != nullptr) throw std::invalid_argument("--screen cannot be combined with an oracle network");
  const auto vars = screen_variables(ds, s.screen);
  return lift_report(search(restrict_variables(ds, vars), nullptr), vars, ds.dimension());
}

std::vector<std::uint8_t> parse_keep(const std::string& text) {
  if (text == "all") return {};
  std::vector<std::uint8_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const int v = std::stoi(item);
      if (v < 0 || v > 9) throw std::invalid_argument("label out of range");
      out.push_back(static_cast<std::uint8_t>(v));
    } catch (const std::exception&) {
      throw std::invalid_argument("--keep expects two digits such as 1,7 or 'all'");
    }
  }
  if (out.size() != 2 || out[0] == out[1]) throw std::invalid_argument("--keep expects two distinct digits or 'all'");
  return out;
}

MnistConfig mnist_config(const MnistOptions& m) {
  MnistConfig cfg;
  cfg.images = m.images;
  cfg.labels = m.labels;
  cfg.keep = parse_keep(m.keep);
  cfg.target_class = m.target_class;
  cfg.hidden = m.hidden;
  cfg.epochs = m.epochs;
  cfg.learning_rate = m.lr;
  cfg.batch_size = m.batch;
  cfg.seed = m.train_seed;
  return cfg;
}

Mlp classifier_for(const MnistOptions& m, const MnistConfig& cfg, const MnistData& data, double dropout) {
  Mlp net;
  if (!m.net.empty()) {
    net = load_mlp(m.net);
    if (net.input_dim() != kImagePixels) throw DimensionError("classifier must take 784 inputs");
    std::cerr << "loaded classifier, accuracy " << classifier_accuracy(net, data) << '\n';
  } else {
    auto trained = train_mnist_classifier(data, cfg, dropout);
    std::cerr << "trained classifier: mse " << trained.final_mse << ", accuracy " << trained.accuracy << '\n';
    net = std::move(trained.net);
  }
  if (!m.save_net.empty()) save_mlp(net, m.save_net);
  return net;
}

std::vector<SubsetMask> parse_subsets(const std::string& text, std::size_t n) {
  std::vector<SubsetMask> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    SubsetMask s(n);
    std::stringstream members(group);
    std::string item;
    while (std::getline(members, item, ',')) {
      std::size_t v = 0;
      try {
        v = std::stoul(item);
      } catch (const std::exception&) {
        throw std::invalid_argument("--subsets expects groups like 0,3;5");
      }
      if (v >= n) throw DimensionError("subset member " + std::to_string(v) + " exceeds the layer width");
      s.insert(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

SpectrumReport load_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open report " + path);
  return read_report_json(is);
}

void write_heatmaps(const Settings& st, const SpectrumReport& report) {
  if (st.heatmap_csv.empty() && st.heatmap_pgm.empty()) return;
  if (report.n != kImagePixels) throw DimensionError("heatmaps need a 784-variable report");
  const auto values = top_k_only(accepted_mass(report), st.heatmap_top_k);
  std::vector<bool> redundant(report.n, false);
  for (const auto& r : report.redundancy) redundant[r.variable] = true;
  if (!st.heatmap_csv.empty()) write_to(st.heatmap_csv, [&](std::ostream& os) { write_heatmap_csv(values, os); });
  if (!st.heatmap_pgm.empty()) {
    write_to(st.heatmap_pgm, [&](std::ostream& os) { write_heatmap_pgm(values, redundant, os); }, true);
  }
}

// ---- subcommands ----

int cmd_wht(const Settings& st) {
  const auto ds = load_data(st.data);
  const auto table = wht_exact(cube_values(ds));
  write_to(st.out, [&](std::ostream& os) { write_fourier_csv(table, os); });
  return 0;
}

int cmd_analyze(const Settings& st) {
  const auto ds = load_data(st.data);
  const auto report = run_search(ds, st.search, st.threads);
  write_json(st.out, report_to_json(report));
  return 0;
}

int cmd_influence(const Settings& st) {
  if (!st.report.empty()) {
    const auto report = load_report(st.report);
    write_json(st.out, influence_to_json(influence_estimate(report, report.total_weight)));
    return 0;
  }
  const auto ds = load_data(st.data);
  if (st.exact_influence) {
    InfluenceEstimate inf;
    inf.values = influences_exact(wht_exact(cube_values(ds)));
    for (std::size_t i = 0; i < inf.values.size(); ++i) inf.support.push_back(i);
    write_json(st.out, influence_to_json(inf));
    return 0;
  }
  const auto report = run_search(ds, st.search, st.threads);
  write_json(st.out, influence_to_json(influence_estimate(report, report.total_weight)));
  return 0;
}

int cmd_synth_bench(const Settings& st) {
  SynthBenchConfig cfg;
  cfg.tau = st.search.tau;
  cfg.gamma = st.search.gamma;
  cfg.noise_tau = st.noise_tau;
  cfg.noise_seeds = st.noise_seeds;
  cfg.first_seed = st.first_seed;
  cfg.pair_count = st.search.pair_count;
  cfg.shapley_permutations = st.permutations;
  cfg.threads = st.threads;
  std::vector<SynthSetting> settings;
  for (const auto& s : st.settings) settings.push_back(parse_synth_setting(s));
  if (settings.empty()) settings = all_synth_settings();
  const auto methods = st.methods.empty() ? scoreboard_methods() : st.methods;
  const auto rows = run_synth_bench(cfg, settings, methods);
  write_to(st.out, [&](std::ostream& os) { write_scoreboard_csv(rows, os, !st.no_runtime); });
  return 0;
}

int cmd_mnist_input(const Settings& st) {
  const auto cfg = mnist_config(st.mnist);
  const auto data = load_mnist_subset(cfg);
  const Mlp net = classifier_for(st.mnist, cfg, data, 0.0);
  const auto oracle = SubnetOracle::make(net, 0, mnist_selector(cfg), data.inputs);
  const auto ds = mnist_layer_dataset(oracle, data, !st.raw_values);
  if (!st.save_abf.empty()) save_dataset(ds, st.save_abf);
  const auto report = run_search(ds, st.input_search, st.threads);
  write_json(st.out, report_to_json(report));
  write_heatmaps(st, report);
  return 0;
}

int cmd_mnist_layer(const Settings& st) {
  const auto cfg = mnist_config(st.mnist);
  const auto data = load_mnist_subset(cfg);
  const Mlp net = classifier_for(st.mnist, cfg, data, st.dropout);
  if (st.cut == 0 || st.cut >= net.depth()) throw std::invalid_argument("--cut must name a hidden layer");
  const auto oracle = SubnetOracle::make(net, st.cut, mnist_selector(cfg), data.inputs);
  const auto uniq = layer_uniqueness(oracle, data);
  std::cerr << "layer " << st.cut << ": " << uniq.continuous << " distinct activation vectors, " << uniq.binary
            << " distinct binary patterns\n";
  const auto ds = mnist_layer_dataset(oracle, data, !st.raw_values);
  if (!st.save_abf.empty()) save_dataset(ds, st.save_abf);
  const auto report = run_search(ds, st.layer_search, st.threads);
  write_json(st.out, report_to_json(report));
  return 0;
}

int cmd_dropout_sweep(const Settings& st) {
  const auto cfg = mnist_config(st.mnist);
  const auto data = load_mnist_subset(cfg);
  const auto params = search_params(st.layer_search, st.threads);
  const auto rows = run_dropout_sweep(st.rates, data, cfg, st.cut, params);
  for (const auto& r : rows) {
    if (r.error) std::cerr << "rate " << r.rate << " failed: " << *r.error << '\n';
  }
  write_to(st.out, [&](std::ostream& os) { write_sweep_csv(rows, os); });
  return 0;
}

int cmd_intervene(const Settings& st) {
  const auto cfg = mnist_config(st.mnist);
  const auto data = load_mnist_subset(cfg);
  const Mlp net = classifier_for(st.mnist, cfg, data, 0.0);
  if (st.cut == 0 || st.cut >= net.depth()) throw std::invalid_argument("--cut must name a hidden layer");
  const auto oracle = SubnetOracle::make(net, st.cut, mnist_selector(cfg), data.inputs);
  std::vector<SubsetMask> subsets;
  if (!st.report.empty()) {
    const auto report = load_report(st.report);
    if (report.n != oracle.width()) throw DimensionError("report width differs from the layer width");
    for (const auto& a : report.accepted) subsets.push_back(a.mask);
  } else if (!st.subsets.empty()) {
    subsets = parse_subsets(st.subsets, oracle.width());
  } else {
    throw std::invalid_argument("give --report or --subsets");
  }
  const auto result = intervene_flip_rate(oracle, subsets, data.inputs);
  Json doc;
  doc["cut"] = st.cut;
  doc["inputs"] = data.inputs.size();
  doc["subsets"] = Json::array();
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    doc["subsets"].push_back({{"members", mask_to_json(subsets[k])}, {"flip_rate", result.subset_flip[k]}});
  }
  doc["variable_flip"] = result.variable_flip;
  doc["disagreement"] = result.disagreement;
  write_json(st.out, doc);
  return 0;
}

int cmd_export(const Settings& st) {
  const auto report = load_report(st.report);
  if (st.json_out.empty() && st.dot_out.empty() && st.heatmap_csv.empty() && st.heatmap_pgm.empty()) {
    write_json("", export_hypergraph(report));
    return 0;
  }
  if (!st.json_out.empty()) write_json(st.json_out, export_hypergraph(report));
  if (!st.dot_out.empty()) write_to(st.dot_out, [&](std::ostream& os) { write_hypergraph_dot(report, os); });
  write_heatmaps(st, report);
  return 0;
}

// ---- app construction ----

struct Command {
  CLI::App* app;
  std::function<int(const Settings&)> run;
};

std::vector<Command> build_app(CLI::App& app, Settings& st) {
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--config", st.config, "Flat key = value config file; flags override it");
  std::vector<Command> cmds;
  auto add = [&](const char* name, const char* help, std::function<int(const Settings&)> run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", st.config, "Flat key = value config file; flags override it");
    sub->add_option("--threads", st.threads, "Worker thread cap")->check(CLI::Range(1u, 256u));
    cmds.push_back({sub, std::move(run)});
    return sub;
  };

  auto* wht = add("wht", "Exact Fourier spectrum of a full-cube dataset (CSV)", cmd_wht);
  add_data_options(wht, st.data);
  wht->add_option("--out", st.out, "Output CSV (default stdout)");

  auto* analyze = add("analyze", "Run the ActSpec search on a dataset (report JSON)", cmd_analyze);
  add_data_options(analyze, st.data);
  add_search_options(analyze, st.search);
  analyze->add_option("--out", st.out, "Report JSON (default stdout)");

  auto* influence = add("influence", "Influence estimate from a report, a search, or the exact spectrum", cmd_influence);
  add_data_options(influence, st.data);
  add_search_options(influence, st.search);
  influence->add_option("--report", st.report, "Use this report instead of searching");
  influence->add_flag("--exact", st.exact_influence, "Exact influences from the full-cube spectrum");
  influence->add_option("--out", st.out, "Influence JSON (default stdout)");

  auto* bench = add("synth-bench", "Scoreboard of TV distances on the multi-tier settings (CSV)", cmd_synth_bench);
  bench->add_option("--settings", st.settings, "Subset of hardcoded,learned,constant,noise1000,noise50")
      ->delimiter(',');
  bench->add_option("--methods", st.methods, "Subset of actspec,feature_ablation,shapley_sampling")->delimiter(',');
  bench->add_option("--tau", st.search.tau, "Threshold for the exact settings");
  bench->add_option("--noise-tau", st.noise_tau, "Threshold for the noise settings");
  bench->add_option("--gamma", st.search.gamma, "Redundancy threshold");
  bench->add_option("--pair-count", st.search.pair_count, "Pairs per weight query in the noise settings");
  bench->add_option("--noise-seeds", st.noise_seeds, "Runs per noise setting (median reported)");
  bench->add_option("--first-seed", st.first_seed, "Seed of the first noise run");
  bench->add_option("--permutations", st.permutations, "Shapley permutations per record");
  bench->add_flag("--no-runtime", st.no_runtime, "Omit the wall-clock column");
  bench->add_option("--out", st.out, "Scoreboard CSV (default stdout)");

  auto* input = add("mnist-input", "ActSpec on binarized MNIST pixels (report JSON, heatmaps)", cmd_mnist_input);
  add_mnist_options(input, st.mnist);
  add_search_options(input, st.input_search);
  input->add_flag("--raw-values", st.raw_values, "Keep the logit scale instead of unit RMS");
  input->add_option("--save-abf", st.save_abf, "Also write the activation dataset");
  input->add_option("--heatmap-csv", st.heatmap_csv, "28x28 CSV of accepted mass per pixel");
  input->add_option("--heatmap-pgm", st.heatmap_pgm, "28x28 PGM of accepted mass per pixel");
  input->add_option("--heatmap-top-k", st.heatmap_top_k, "Keep only the k strongest pixels (0: all)");
  input->add_option("--out", st.out, "Report JSON (default stdout)");

  auto* layer = add("mnist-layer", "ActSpec on a binarized hidden layer of an MNIST classifier", cmd_mnist_layer);
  add_mnist_options(layer, st.mnist);
  add_search_options(layer, st.layer_search);
  layer->add_option("--cut", st.cut, "Hidden layer index (1 = after the first layer)");
  layer->add_option("--dropout", st.dropout, "Dropout rate when training");
  layer->add_flag("--raw-values", st.raw_values, "Keep the logit scale instead of unit RMS");
  layer->add_option("--save-abf", st.save_abf, "Also write the activation dataset");
  layer->add_option("--out", st.out, "Report JSON (default stdout)");

  auto* sweep = add("dropout-sweep", "Mean subset size and redundancy count per dropout rate (CSV)", cmd_dropout_sweep);
  add_mnist_options(sweep, st.mnist);
  add_search_options(sweep, st.layer_search);
  sweep->add_option("--rates", st.rates, "Dropout rates")->delimiter(',');
  sweep->add_option("--cut", st.cut, "Hidden layer index");
  sweep->add_option("--out", st.out, "Sweep CSV (default stdout)");

  auto* intervene = add("intervene", "Group and single-unit patching flip rates (JSON)", cmd_intervene);
  add_mnist_options(intervene, st.mnist);
  intervene->add_option("--cut", st.cut, "Hidden layer index");
  intervene->add_option("--report", st.report, "Patch the accepted subsets of this layer report");
  intervene->add_option("--subsets", st.subsets, "Explicit subsets, e.g. 0,3;5");
  intervene->add_option("--out", st.out, "Result JSON (default stdout)");

  auto* exp = add("export", "Hypergraph JSON/DOT and heatmaps from a report", cmd_export);
  exp->add_option("--report", st.report, "Report JSON")->required();
  exp->add_option("--json", st.json_out, "Hypergraph JSON");
  exp->add_option("--dot", st.dot_out, "Hypergraph DOT");
  exp->add_option("--heatmap-csv", st.heatmap_csv, "28x28 CSV (784-variable reports)");
  exp->add_option("--heatmap-pgm", st.heatmap_pgm, "28x28 PGM (784-variable reports)");
  exp->add_option("--heatmap-top-k", st.heatmap_top_k, "Keep only the k strongest pixels (0: all)");
  return cmds;
}

cli::OptionShapes option_shapes(const CLI::App* sub) {
  cli::OptionShapes out;
  for (const auto* opt : sub->get_options()) {
    for (const auto& name : opt->get_lnames()) {
      if (name == "help" || name == "config") continue;
      out[name] = opt->get_items_expected_max() == 0;
    }
  }
  return out;
}

// Applies the config file (if any) to the raw arguments.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto config = cli::load_flat_config(path);
  Settings scratch;
  CLI::App probe;
  const auto cmds = build_app(probe, scratch);
  std::set<std::string> known;
  for (const auto& c : cmds) {
    for (const auto& [name, flag] : option_shapes(c.app)) known.insert(name);
  }
  for (std::size_t i = 1; i < args.size(); ++i) {
    for (const auto& c : cmds) {
      if (args[i] == c.app->get_name()) return cli::apply_config(args, i + 1, config, option_shapes(c.app), known);
    }
  }
  return args;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  Settings st;
  CLI::App app("Activation spectroscopy: Fourier analysis of binarized activations", "actspec");
  auto cmds = build_app(app, st);
  try {
    args = with_config(args);
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& c : cmds) {
    if (c.app->parsed()) {
      return c.run(st);
    }
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const DimensionError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SearchLimitError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
