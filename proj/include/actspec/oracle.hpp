#pragma once

#include <functional>
#include <string>

#include "actspec/bits.hpp"

namespace actspec {

/// Query access to a pseudo-Boolean function. A projection-only oracle is
/// defined on the dataset's patterns and returns 0 everywhere else, so methods
/// that evaluate perturbed patterns must refuse it.
struct PatternOracle {
  std::function<double(const BitPattern&)> evaluate;
  bool projection_only = false;
  std::string name;

  double operator()(const BitPattern& p) const { return evaluate(p); }
};

}  // namespace actspec
