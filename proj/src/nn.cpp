#include "actspec/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "actspec/abf.hpp"
#include "actspec/rng.hpp"
#include "json.hpp"

namespace actspec {

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "identity"; }

Activation parse_activation(const std::string& text) {
  if (text == "relu") return Activation::relu;
  if (text == "identity" || text == "linear") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + text + "'");
}

std::size_t Mlp::width_at(std::size_t cut) const {
  if (cut > layers.size()) throw DimensionError("cut beyond network depth");
  return cut == 0 ? input_dim() : layers[cut - 1].rows;
}

void Mlp::validate() const {
  if (layers.empty()) throw std::invalid_argument("network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& L = layers[l];
    if (L.rows == 0 || L.cols == 0) throw DimensionError("layer " + std::to_string(l) + " has a zero dimension");
    if (L.weights.size() != L.rows * L.cols || L.bias.size() != L.rows) {
      throw DimensionError("layer " + std::to_string(l) + " parameter sizes do not match rows x cols");
    }
    if (l > 0 && L.cols != layers[l - 1].rows) {
      throw DimensionError("layer " + std::to_string(l) + " input width does not chain");
    }
    for (double v : L.weights) {
      if (!std::isfinite(v)) throw NumericError("non-finite weight in layer " + std::to_string(l));
    }
    for (double v : L.bias) {
      if (!std::isfinite(v)) throw NumericError("non-finite bias in layer " + std::to_string(l));
    }
  }
  if (!dropout.empty() && dropout.size() != layers.size()) {
    throw DimensionError("dropout list must have one rate per layer");
  }
  for (double p : dropout) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout rate must lie in [0,1)");
  }
}

namespace {

void apply_layer(const Layer& L, std::span<const double> in, std::vector<double>& out) {
  out.resize(L.rows);
  for (std::size_t r = 0; r < L.rows; ++r) {
    const double* w = &L.weights[r * L.cols];
    double acc = L.bias[r];
    for (std::size_t c = 0; c < L.cols; ++c) acc += w[c] * in[c];
    out[r] = (L.activation == Activation::relu && acc < 0.0) ? 0.0 : acc;
  }
}

void check_input(std::span<const double> input, std::size_t expected) {
  if (input.size() != expected) throw DimensionError("network input has the wrong dimension");
  for (double v : input) {
    if (!std::isfinite(v)) throw NumericError("non-finite network input");
  }
}

std::vector<double> run_layers(const Mlp& net, std::size_t from, std::size_t to, std::span<const double> values) {
  std::vector<double> cur(values.begin(), values.end());
  std::vector<double> next;
  for (std::size_t l = from; l < to; ++l) {
    apply_layer(net.layers[l], cur, next);
    cur.swap(next);
  }
  return cur;
}

}  // namespace

std::vector<double> mlp_forward(const Mlp& net, std::span<const double> input) {
  check_input(input, net.input_dim());
  return run_layers(net, 0, net.depth(), input);
}

std::vector<double> mlp_forward_from(const Mlp& net, std::size_t from, std::span<const double> values) {
  if (from > net.depth()) throw DimensionError("cut beyond network depth");
  check_input(values, net.width_at(from));
  return run_layers(net, from, net.depth(), values);
}

std::vector<double> mlp_forward_to(const Mlp& net, std::size_t cut, std::span<const double> input) {
  if (cut > net.depth()) throw DimensionError("cut beyond network depth");
  check_input(input, net.input_dim());
  return run_layers(net, 0, cut, input);
}

namespace {

// Forward pass keeping every layer's output; `masks` (optional) holds the
// inverted-dropout multipliers applied to each layer's output.
void forward_trace(const Mlp& net, std::span<const double> input, const std::vector<std::vector<double>>* masks,
                   std::vector<std::vector<double>>& acts) {
  acts.resize(net.depth() + 1);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    apply_layer(net.layers[l], acts[l], acts[l + 1]);
    if (masks != nullptr && !(*masks)[l].empty()) {
      for (std::size_t r = 0; r < acts[l + 1].size(); ++r) acts[l + 1][r] *= (*masks)[l][r];
    }
  }
}

void zero_like(const Mlp& net, MlpGradients& g) {
  g.weights.resize(net.depth());
  g.bias.resize(net.depth());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    g.weights[l].assign(net.layers[l].weights.size(), 0.0);
    g.bias[l].assign(net.layers[l].bias.size(), 0.0);
  }
}

// Accumulates d(scale * sum (y - t)^2)/d(params) for one sample; returns sum (y - t)^2.
double backprop_sample(const Mlp& net, std::span<const double> input, std::span<const double> target,
                       const std::vector<std::vector<double>>* masks, double scale, MlpGradients& g,
                       std::vector<std::vector<double>>& acts, std::vector<double>& delta, std::vector<double>& prev) {
  forward_trace(net, input, masks, acts);
  const std::vector<double>& y = acts.back();
  if (target.size() != y.size()) throw DimensionError("target has the wrong dimension");
  double sq = 0.0;
  delta.resize(y.size());
  for (std::size_t o = 0; o < y.size(); ++o) {
    const double e = y[o] - target[o];
    sq += e * e;
    delta[o] = 2.0 * e * scale;
  }
  for (std::size_t l = net.depth(); l-- > 0;) {
    const Layer& L = net.layers[l];
    // delta currently holds dLoss/d(output of layer l) (after dropout); push it
    // through the dropout multiplier and the activation.
    for (std::size_t r = 0; r < L.rows; ++r) {
      if (masks != nullptr && !(*masks)[l].empty()) delta[r] *= (*masks)[l][r];
      if (L.activation == Activation::relu && !(acts[l + 1][r] > 0.0)) delta[r] = 0.0;
    }
    const std::vector<double>& in = acts[l];
    for (std::size_t r = 0; r < L.rows; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      double* gw = &g.weights[l][r * L.cols];
      for (std::size_t c = 0; c < L.cols; ++c) gw[c] += d * in[c];
      g.bias[l][r] += d;
    }
    if (l == 0) break;
    prev.assign(L.cols, 0.0);
    for (std::size_t r = 0; r < L.rows; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      const double* w = &L.weights[r * L.cols];
      for (std::size_t c = 0; c < L.cols; ++c) prev[c] += d * w[c];
    }
    delta.swap(prev);
  }
  return sq;
}

}  // namespace

double mse_with_gradients(const Mlp& net, const std::vector<std::vector<double>>& inputs,
                          const std::vector<std::vector<double>>& targets, MlpGradients& grads) {
  if (inputs.empty() || inputs.size() != targets.size()) throw DimensionError("inputs and targets must pair up");
  zero_like(net, grads);
  const double scale = 1.0 / static_cast<double>(inputs.size() * net.output_dim());
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev;
  double sq = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    check_input(inputs[i], net.input_dim());
    sq += backprop_sample(net, inputs[i], targets[i], nullptr, scale, grads, acts, delta, prev);
  }
  return sq * scale;
}

double mse(const Mlp& net, const std::vector<std::vector<double>>& inputs,
           const std::vector<std::vector<double>>& targets) {
  if (inputs.empty() || inputs.size() != targets.size()) throw DimensionError("inputs and targets must pair up");
  double sq = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto y = mlp_forward(net, inputs[i]);
    if (y.size() != targets[i].size()) throw DimensionError("target has the wrong dimension");
    for (std::size_t o = 0; o < y.size(); ++o) sq += (y[o] - targets[i][o]) * (y[o] - targets[i][o]);
  }
  return sq / static_cast<double>(inputs.size() * net.output_dim());
}

Mlp init_mlp(const std::vector<std::size_t>& layer_sizes, double dropout, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("need at least input and output sizes");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout rate must lie in [0,1)");
  Mlp net;
  StreamRng rng(seed, 0x1417);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    Layer L;
    L.cols = layer_sizes[l];
    L.rows = layer_sizes[l + 1];
    if (L.rows == 0 || L.cols == 0) throw std::invalid_argument("layer sizes must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(L.cols));
    L.weights.resize(L.rows * L.cols);
    for (double& w : L.weights) w = (2.0 * rng.uniform() - 1.0) * bound;
    L.bias.assign(L.rows, 0.0);
    L.activation = (l + 2 == layer_sizes.size()) ? Activation::identity : Activation::relu;
    net.layers.push_back(std::move(L));
  }
  net.dropout.assign(net.depth(), 0.0);
  for (std::size_t l = 0; l + 1 < net.depth(); ++l) net.dropout[l] = dropout;
  return net;
}

TrainResult train_mlp(const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets, const TrainConfig& cfg) {
  if (inputs.empty() || inputs.size() != targets.size()) throw DimensionError("inputs and targets must pair up");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw std::invalid_argument("momentum must lie in [0,1)");
  TrainResult result;
  result.net = init_mlp(cfg.layer_sizes, cfg.dropout, cfg.seed);
  Mlp& net = result.net;
  for (const auto& x : inputs) check_input(x, net.input_dim());
  for (const auto& t : targets) {
    if (t.size() != net.output_dim()) throw DimensionError("target has the wrong dimension");
  }

  const std::size_t count = inputs.size();
  const std::size_t batch = cfg.batch_size > 0 ? std::min(cfg.batch_size, count) : (count <= 4096 ? count : 64);
  const bool use_dropout = cfg.dropout > 0.0;

  MlpGradients velocity, grads;
  zero_like(net, velocity);
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  std::vector<std::vector<double>> acts, masks(net.depth());
  std::vector<double> delta, prev;
  StreamRng shuffle_rng(cfg.seed, 0x5eed);
  StreamRng dropout_rng(cfg.seed, 0xd0d0);

  if (cfg.target_mse > 0.0 && mse(net, inputs, targets) < cfg.target_mse) {
    result.final_mse = mse(net, inputs, targets);
    return result;
  }
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch < count) {
      for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[shuffle_rng.below(i)]);
    }
    double epoch_sq = 0.0;
    for (std::size_t start = 0; start < count; start += batch) {
      const std::size_t end = std::min(count, start + batch);
      zero_like(net, grads);
      const double scale = 1.0 / static_cast<double>((end - start) * net.output_dim());
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = perm[k];
        if (use_dropout) {
          for (std::size_t l = 0; l < net.depth(); ++l) {
            const double p = net.dropout[l];
            if (p <= 0.0) {
              masks[l].clear();
              continue;
            }
            masks[l].resize(net.layers[l].rows);
            for (double& m : masks[l]) m = dropout_rng.uniform() < p ? 0.0 : 1.0 / (1.0 - p);
          }
        }
        epoch_sq += backprop_sample(net, inputs[i], targets[i], use_dropout ? &masks : nullptr, scale, grads, acts,
                                    delta, prev);
      }
      for (std::size_t l = 0; l < net.depth(); ++l) {
        Layer& L = net.layers[l];
        for (std::size_t j = 0; j < L.weights.size(); ++j) {
          velocity.weights[l][j] = cfg.momentum * velocity.weights[l][j] - cfg.learning_rate * grads.weights[l][j];
          L.weights[j] += velocity.weights[l][j];
        }
        for (std::size_t j = 0; j < L.bias.size(); ++j) {
          velocity.bias[l][j] = cfg.momentum * velocity.bias[l][j] - cfg.learning_rate * grads.bias[l][j];
          L.bias[j] += velocity.bias[l][j];
        }
      }
    }
    result.epochs_run = epoch + 1;
    if (!std::isfinite(epoch_sq)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) + " (non-finite loss)");
    }
    if (cfg.target_mse > 0.0 && (epoch % 10 == 9 || epoch + 1 == cfg.epochs) &&
        mse(net, inputs, targets) < cfg.target_mse) {
      break;
    }
  }
  result.final_mse = mse(net, inputs, targets);
  if (!std::isfinite(result.final_mse)) throw NumericError("training produced a non-finite loss");
  return result;
}

void fold_input_affine(Mlp& net, double scale, double shift) {
  if (net.layers.empty()) throw std::invalid_argument("network has no layers");
  Layer& L = net.layers.front();
  for (std::size_t r = 0; r < L.rows; ++r) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < L.cols; ++c) {
      row_sum += L.w(r, c);
      L.w(r, c) *= scale;
    }
    L.bias[r] += shift * row_sum;
  }
}

void write_mlp_json(const Mlp& net, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["layers"] = nlohmann::ordered_json::array();
  for (const Layer& L : net.layers) {
    nlohmann::ordered_json j;
    j["rows"] = L.rows;
    j["cols"] = L.cols;
    j["weights"] = L.weights;
    j["bias"] = L.bias;
    j["activation"] = to_string(L.activation);
    doc["layers"].push_back(std::move(j));
  }
  doc["dropout"] = net.dropout.empty() ? std::vector<double>(net.depth(), 0.0) : net.dropout;
  os << doc.dump(1) << '\n';
}

Mlp read_mlp_json(std::istream& is) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("network JSON does not parse: ") + e.what());
  }
  Mlp net;
  try {
    for (const auto& j : doc.at("layers")) {
      Layer L;
      L.rows = j.at("rows").get<std::size_t>();
      L.cols = j.at("cols").get<std::size_t>();
      L.weights = j.at("weights").get<std::vector<double>>();
      L.bias = j.at("bias").get<std::vector<double>>();
      L.activation = parse_activation(j.at("activation").get<std::string>());
      net.layers.push_back(std::move(L));
    }
    if (doc.contains("dropout")) net.dropout = doc.at("dropout").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("network JSON has the wrong shape: ") + e.what());
  }
  net.validate();
  return net;
}

void save_mlp(const Mlp& net, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_mlp_json(net, os);
}

Mlp load_mlp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  return read_mlp_json(is);
}

Mlp build_multitier_net(std::size_t input_dim) {
  if (input_dim < 4) throw DimensionError("multi-tier network needs at least 4 inputs");
  // Signed coefficients times 8, indexed by subset (bit i = variable i).
  static constexpr int kCoeff8[16] = {1, 1, -1, 3, 1, 1, 3, -1, 1, -3, -1, -1, 5, 1, -1, -1};

  // Parity of k signs as a function of their sum s in {-k, -k+2, ..., k}:
  //   p(s) = (-1)^k + sum_{j<k} c_j ReLU(s + k - 2j),
  // with c_0 = (-1)^(k-1) (the first slope) and c_j = 2 (-1)^(k-j-1) (the slope flips at each knot).
  Layer hidden;
  hidden.cols = input_dim;
  hidden.activation = Activation::relu;
  Layer parities;
  parities.rows = 16;
  parities.activation = Activation::identity;
  parities.bias.assign(16, 0.0);
  struct Unit {
    std::size_t subset;
    double coeff;
  };
  std::vector<Unit> units;
  for (std::size_t s = 0; s < 16; ++s) {
    const int k = std::popcount(s);
    parities.bias[s] = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < k; ++j) {
      std::vector<double> row(input_dim, 0.0);
      for (std::size_t i = 0; i < 4; ++i) {
        if (s & (std::size_t{1} << i)) row[i] = 1.0;
      }
      hidden.weights.insert(hidden.weights.end(), row.begin(), row.end());
      hidden.bias.push_back(static_cast<double>(k - 2 * j));
      const double sign = ((k - j - 1) % 2 == 0) ? 1.0 : -1.0;
      units.push_back(Unit{s, j == 0 ? sign : 2.0 * sign});
    }
  }
  hidden.rows = units.size();
  parities.cols = hidden.rows;
  parities.weights.assign(parities.rows * parities.cols, 0.0);
  for (std::size_t u = 0; u < units.size(); ++u) parities.w(units[u].subset, u) = units[u].coeff;

  Layer out;
  out.rows = 1;
  out.cols = 16;
  out.activation = Activation::identity;
  out.bias = {0.0};
  for (int c : kCoeff8) out.weights.push_back(c / 8.0);

  Mlp net;
  net.layers = {std::move(hidden), std::move(parities), std::move(out)};
  net.dropout.assign(3, 0.0);
  return net;
}

double OutputSelector::operator()(std::span<const double> output) const {
  if (index >= output.size() || (minus && *minus >= output.size())) {
    throw DimensionError("output selector out of range");
  }
  return minus ? output[index] - output[*minus] : output[index];
}

SubnetOracle SubnetOracle::make(Mlp net, std::size_t cut, OutputSelector selector,
                                const std::vector<std::vector<double>>& reference_inputs) {
  net.validate();
  if (cut >= net.depth()) throw DimensionError("cut must lie below the output layer");
  if (selector.index >= net.output_dim() || (selector.minus && *selector.minus >= net.output_dim())) {
    throw DimensionError("output selector out of range");
  }
  SubnetOracle o;
  o.cut = cut;
  o.selector = selector;
  const std::size_t width = net.width_at(cut);
  o.mean_activation.assign(width, 0.0);
  o.mean_positive_activation.assign(width, 0.0);
  std::vector<std::size_t> positive(width, 0);
  for (const auto& x : reference_inputs) {
    const auto a = mlp_forward_to(net, cut, x);
    for (std::size_t i = 0; i < width; ++i) {
      o.mean_activation[i] += a[i];
      if (a[i] > 0.0) {
        o.mean_positive_activation[i] += a[i];
        ++positive[i];
      }
    }
  }
  if (!reference_inputs.empty()) {
    for (std::size_t i = 0; i < width; ++i) {
      o.mean_activation[i] /= static_cast<double>(reference_inputs.size());
      if (positive[i] > 0) o.mean_positive_activation[i] /= static_cast<double>(positive[i]);
    }
  }
  o.net = std::move(net);
  return o;
}

ActivationDataset extract_activation_dataset(const SubnetOracle& oracle,
                                             const std::vector<std::vector<double>>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("extract_activation_dataset: no inputs");
  const std::size_t width = oracle.width();
  std::vector<Record> records;
  records.reserve(inputs.size());
  for (const auto& x : inputs) {
    const auto a = mlp_forward_to(oracle.net, oracle.cut, x);
    BitPattern p(width);
    for (std::size_t i = 0; i < width; ++i) {
      if (a[i] > 0.0) p.set_sign(i, 1);
    }
    const auto y = mlp_forward_from(oracle.net, oracle.cut, a);
    records.push_back(Record{std::move(p), oracle.selector(y), 1.0});
  }
  return ActivationDataset(width, std::move(records));
}

ProjectionTable::ProjectionTable(const ActivationDataset& ds) {
  std::unordered_map<BitPattern, std::pair<double, double>, BitPatternHash> acc;
  for (const auto& r : ds.records()) {
    auto& slot = acc[r.pattern];
    slot.first += r.weight * r.value;
    slot.second += r.weight;
  }
  for (auto& [p, s] : acc) values_[p] = s.second > 0.0 ? s.first / s.second : 0.0;
}

double ProjectionTable::operator()(const BitPattern& p) const {
  const auto it = values_.find(p);
  return it == values_.end() ? 0.0 : it->second;
}

double query_pattern(const SubnetOracle& oracle, const BitPattern& pattern, QueryMode mode,
                     const ProjectionTable* table) {
  if (pattern.dimension() != oracle.width()) throw DimensionError("pattern width differs from the layer width");
  if (mode == QueryMode::projection) {
    if (table == nullptr) throw std::invalid_argument("projection mode needs the dataset table");
    return (*table)(pattern);
  }
  std::vector<double> rep(oracle.width());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (oracle.cut == 0) {
      rep[i] = pattern.sign(i);
    } else {
      rep[i] = pattern.positive(i) ? oracle.mean_positive_activation[i] : 0.0;
    }
  }
  return oracle.selector(mlp_forward_from(oracle.net, oracle.cut, rep));
}

PatternOracle make_promote_oracle(const SubnetOracle& oracle) {
  PatternOracle out;
  out.name = "promote";
  out.evaluate = [&oracle](const BitPattern& p) { return query_pattern(oracle, p, QueryMode::promote); };
  return out;
}

PatternOracle make_projection_oracle(const ProjectionTable& table) {
  PatternOracle out;
  out.name = "projection";
  out.projection_only = true;
  out.evaluate = [&table](const BitPattern& p) { return table(p); };
  return out;
}

namespace {

std::size_t decision(std::span<const double> out) {
  if (out.size() == 1) return out[0] > 0.0 ? 1 : 0;
  return static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
}

}  // namespace

InterventionResult intervene_flip_rate(const SubnetOracle& oracle, const std::vector<SubsetMask>& subsets,
                                       const std::vector<std::vector<double>>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("intervene_flip_rate: no inputs");
  const std::size_t width = oracle.width();
  for (const auto& s : subsets) {
    if (s.dimension() != width) throw DimensionError("intervention subset width differs from the layer width");
  }
  InterventionResult out;
  out.subset_flip.assign(subsets.size(), 0.0);
  out.variable_flip.assign(width, 0.0);
  std::vector<bool> involved(width, false);
  for (const auto& s : subsets) {
    for (std::size_t v : s.members()) involved[v] = true;
  }
  auto patch = [&](std::vector<double>& a, std::size_t i) { a[i] = a[i] > 0.0 ? 0.0 : oracle.mean_activation[i]; };

  std::size_t disagreements = 0;
  std::size_t comparisons = 0;
  for (const auto& x : inputs) {
    const auto a = mlp_forward_to(oracle.net, oracle.cut, x);
    const std::size_t base = decision(mlp_forward_from(oracle.net, oracle.cut, a));
    std::vector<bool> single_flip(width, false);
    for (std::size_t i = 0; i < width; ++i) {
      if (!involved[i]) continue;
      auto b = a;
      patch(b, i);
      single_flip[i] = decision(mlp_forward_from(oracle.net, oracle.cut, b)) != base;
      if (single_flip[i]) out.variable_flip[i] += 1.0;
    }
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      auto b = a;
      bool any_single = false;
      for (std::size_t v : subsets[s].members()) {
        patch(b, v);
        any_single = any_single || single_flip[v];
      }
      const bool group = decision(mlp_forward_from(oracle.net, oracle.cut, b)) != base;
      if (group) out.subset_flip[s] += 1.0;
      if (!subsets[s].empty()) {
        ++comparisons;
        if (group != any_single) ++disagreements;
      }
    }
  }
  const double count = static_cast<double>(inputs.size());
  for (double& f : out.subset_flip) f /= count;
  for (double& f : out.variable_flip) f /= count;
  out.disagreement = comparisons == 0 ? 0.0 : static_cast<double>(disagreements) / static_cast<double>(comparisons);
  return out;
}

}  // namespace actspec
