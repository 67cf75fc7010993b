#pragma once

// Shared datasets and hand-built networks for the tests and acceptance checks.

#include <cstdint>
#include <functional>
#include <vector>

#include "actspec/dataset.hpp"
#include "actspec/nn.hpp"
#include "actspec/rng.hpp"

namespace actspec::fixtures {

// The four-row, five-variable redundancy table: x3 = f, x4 = x3, x5 = +1,
// x1 x2 = x3.
inline ActivationDataset worked_example() {
  const int rows[4][6] = {{1, 1, 1, 1, 1, 1}, {1, -1, -1, -1, 1, -1}, {-1, 1, -1, -1, 1, -1}, {-1, -1, 1, 1, 1, 1}};
  std::vector<Record> rs;
  for (const auto& r : rows) {
    rs.push_back({BitPattern::from_signs({r[0], r[1], r[2], r[3], r[4]}), static_cast<double>(r[5]), 1.0});
  }
  return ActivationDataset(5, std::move(rs));
}

// Multi-tier truth table written out directly (independent of synth.cpp).
inline double multitier_reference(int x1, int x2, int x3, int x4) {
  const bool top = x3 == 1 && x4 == 1;
  const bool down = x1 >= x2 && x2 >= x3 && x3 >= x4;
  const bool up = x1 <= x2 && x2 <= x3 && x3 <= x4;
  return (top || down || up) ? 1.0 : -1.0;
}

inline ActivationDataset cube_dataset(std::size_t n, const std::function<double(const BitPattern&)>& f) {
  std::vector<Record> rs;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    auto p = BitPattern::from_index(n, x);
    const double v = f(p);
    rs.push_back({std::move(p), v, 1.0});
  }
  return ActivationDataset(n, std::move(rs));
}

inline ActivationDataset multitier_cube() {
  return cube_dataset(4, [](const BitPattern& p) {
    return multitier_reference(p.sign(0), p.sign(1), p.sign(2), p.sign(3));
  });
}

// Random records with uniform patterns, normal values and weights in [0.5, 2).
inline ActivationDataset random_dataset(std::size_t n, std::size_t count, std::uint64_t seed, bool weighted = true) {
  StreamRng rng(seed, 0xda7a);
  std::vector<Record> rs;
  for (std::size_t r = 0; r < count; ++r) {
    BitPattern p(n);
    for (std::size_t i = 0; i < n; ++i) p.set_sign(i, rng.sign());
    const double w = weighted ? 0.5 + 1.5 * rng.uniform() : 1.0;
    rs.push_back({std::move(p), rng.normal(), w});
  }
  return ActivationDataset(n, std::move(rs));
}

inline Layer make_layer(std::size_t rows, std::size_t cols, std::vector<double> w, std::vector<double> b,
                        Activation a) {
  Layer L;
  L.rows = rows;
  L.cols = cols;
  L.weights = std::move(w);
  L.bias = std::move(b);
  L.activation = a;
  return L;
}

// Two units at cut 1 (a ReLU copy of the input). The next layer computes
// u = relu(h0 - h1) and v = relu(h1 - h0); the logits are z0 = 0 and
// z1 = 0.5 - u - v. On input (1, 1) both units are active and class 1 wins.
// Zeroing either unit alone makes |h0 - h1| = 1 and flips to class 0; zeroing
// both keeps h0 = h1 and the decision stays.
inline Mlp cancellation_net() {
  Mlp net;
  net.layers.push_back(make_layer(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::relu));
  net.layers.push_back(make_layer(2, 2, {1, -1, -1, 1}, {0, 0}, Activation::relu));
  net.layers.push_back(make_layer(2, 2, {0, 0, -1, -1}, {0, 0.5}, Activation::identity));
  return net;
}

// Unit 0 at cut 1 alone decides: z0 = 0.5, z1 = h0.
inline Mlp dictator_unit_net() {
  Mlp net;
  net.layers.push_back(make_layer(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::relu));
  net.layers.push_back(make_layer(2, 2, {0, 0, 1, 0}, {0.5, 0}, Activation::identity));
  return net;
}

}  // namespace actspec::fixtures
