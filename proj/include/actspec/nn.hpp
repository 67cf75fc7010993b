#pragma once

// A small dense ReLU network: forward, backprop on MSE, SGD with momentum and
// inverted dropout, plus the sub-network oracle used to turn a layer's
// binarized activations into a pseudo-Boolean function.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "actspec/dataset.hpp"
#include "actspec/oracle.hpp"

namespace actspec {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Activation { relu, identity };

std::string to_string(Activation a);
Activation parse_activation(const std::string& text);

struct Layer {
  std::size_t rows = 0;  // outputs
  std::size_t cols = 0;  // inputs
  std::vector<double> weights;  // row-major rows x cols
  std::vector<double> bias;
  Activation activation = Activation::relu;

  double& w(std::size_t r, std::size_t c) { return weights[r * cols + c]; }
  double w(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }

  friend bool operator==(const Layer&, const Layer&) = default;
};

struct Mlp {
  std::vector<Layer> layers;
  /// Dropout rate applied to each layer's output during training (empty = none).
  std::vector<double> dropout;

  std::size_t depth() const { return layers.size(); }
  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().cols; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().rows; }
  /// Width of the representation after `cut` layers (cut = 0 is the input).
  std::size_t width_at(std::size_t cut) const;
  void validate() const;

  friend bool operator==(const Mlp&, const Mlp&) = default;
};

std::vector<double> mlp_forward(const Mlp& net, std::span<const double> input);
/// Applies layers [from, depth) to a representation at cut `from`.
std::vector<double> mlp_forward_from(const Mlp& net, std::size_t from, std::span<const double> values);
/// Applies layers [0, cut).
std::vector<double> mlp_forward_to(const Mlp& net, std::size_t cut, std::span<const double> input);

struct MlpGradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;
};

/// Mean over samples and outputs of (y - t)^2, with its exact gradient.
double mse_with_gradients(const Mlp& net, const std::vector<std::vector<double>>& inputs,
                          const std::vector<std::vector<double>>& targets, MlpGradients& grads);
double mse(const Mlp& net, const std::vector<std::vector<double>>& inputs,
           const std::vector<std::vector<double>>& targets);

struct TrainConfig {
  /// Layer widths including input and output, e.g. {4, 16, 16, 1}.
  std::vector<std::size_t> layer_sizes;
  std::size_t epochs = 1000;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double dropout = 0.0;
  std::uint64_t seed = 1;
  /// 0 selects full batch up to 4096 samples, otherwise 64.
  std::size_t batch_size = 0;
  /// Stop once the full-data MSE falls below this (0 disables).
  double target_mse = 0.0;
};

struct TrainResult {
  Mlp net;
  double final_mse = 0.0;
  std::size_t epochs_run = 0;
};

/// Seeded He-uniform weights, zero biases, ReLU hidden layers, identity output.
Mlp init_mlp(const std::vector<std::size_t>& layer_sizes, double dropout, std::uint64_t seed);

/// Throws NumericError when the loss becomes non-finite.
TrainResult train_mlp(const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets, const TrainConfig& cfg);

/// Rewrites the first layer so the network applied to x equals the original
/// applied to scale * x + shift (elementwise, same scalars for every input).
void fold_input_affine(Mlp& net, double scale, double shift);

void write_mlp_json(const Mlp& net, std::ostream& os);
Mlp read_mlp_json(std::istream& is);
void save_mlp(const Mlp& net, const std::string& path);
Mlp load_mlp(const std::string& path);

/// Three layers: 32 ReLU units realizing the parities of every subset of the
/// first four inputs as piecewise-linear functions of their sums, 16 identity
/// units holding the parities, and the weighted sum with the multi-tier
/// coefficients. Extra inputs (input_dim > 4) get zero weights.
Mlp build_multitier_net(std::size_t input_dim = 4);

/// Which scalar of the network output defines the pseudo-Boolean value.
struct OutputSelector {
  std::size_t index = 0;
  /// When set, the value is output[index] - output[*minus].
  std::optional<std::size_t> minus;

  double operator()(std::span<const double> output) const;
};

/// The function from the binarized representation after `cut` layers to the selected output.
struct SubnetOracle {
  Mlp net;
  std::size_t cut = 0;
  OutputSelector selector;
  /// Mean activation per unit over the reference inputs.
  std::vector<double> mean_activation;
  /// Mean of the strictly positive activations per unit (0 when never active).
  std::vector<double> mean_positive_activation;

  static SubnetOracle make(Mlp net, std::size_t cut, OutputSelector selector,
                           const std::vector<std::vector<double>>& reference_inputs);
  std::size_t width() const { return net.width_at(cut); }
};

/// Binarizes by activation > 0; value is the selector on the full forward pass.
ActivationDataset extract_activation_dataset(const SubnetOracle& oracle,
                                             const std::vector<std::vector<double>>& inputs);

/// Lookup of recorded values; zero off the dataset. Duplicates average by weight.
class ProjectionTable {
 public:
  explicit ProjectionTable(const ActivationDataset& ds);
  double operator()(const BitPattern& p) const;
  bool contains(const BitPattern& p) const { return values_.count(p) != 0; }

 private:
  std::unordered_map<BitPattern, double, BitPatternHash> values_;
};

enum class QueryMode { promote, projection };

/// Promote mode: +1 maps to the unit's mean positive activation and -1 to 0,
/// then the upper sub-network runs. At cut 0 the pattern's signs are fed
/// directly, since the network's inputs are themselves signs. Projection mode
/// needs `table`.
double query_pattern(const SubnetOracle& oracle, const BitPattern& pattern, QueryMode mode,
                     const ProjectionTable* table = nullptr);

PatternOracle make_promote_oracle(const SubnetOracle& oracle);
/// The ProjectionTable must outlive the returned oracle.
PatternOracle make_projection_oracle(const ProjectionTable& table);

struct InterventionResult {
  /// Per subset: fraction of inputs whose decision changes under the group patch.
  std::vector<double> subset_flip;
  /// Per unit: fraction of inputs whose decision changes when that unit alone is
  /// patched; 0 for units that belong to no subset.
  std::vector<double> variable_flip;
  /// Over (input, subset): fraction where "some member alone flips" differs from
  /// "the group flips".
  double disagreement = 0.0;
};

/// Patch rule: an active unit (> 0) is set to 0, an inactive one to its mean activation.
InterventionResult intervene_flip_rate(const SubnetOracle& oracle, const std::vector<SubsetMask>& subsets,
                                       const std::vector<std::vector<double>>& inputs);

}  // namespace actspec
