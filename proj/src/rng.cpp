#include "actspec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace actspec {

double StreamRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double acc = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("sampling weights must be nonnegative");
    acc += w;
    cumulative_.push_back(acc);
  }
  if (!(acc > 0.0)) throw std::invalid_argument("sampling weights sum to zero");
}

std::size_t WeightedSampler::sample(StreamRng& rng) const {
  const double target = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  // upper_bound never lands on a zero-weight entry: its cumulative value equals its predecessor's.
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace actspec
