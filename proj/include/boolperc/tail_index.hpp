#pragma once

#include "boolperc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace boolperc {

/// Hill estimator of the tail index alpha from the k largest order
/// statistics: k / sum_{i<k} log(X_(i) / X_(k)), with X_(0) the maximum.
/// Its asymptotic standard deviation for a pure Pareto tail is alpha / sqrt(k).
inline double tail_index_estimate(std::span<const double> samples, std::size_t k) {
  if (samples.size() < 100) throw InputError("tail index: need at least 100 samples");
  if (k < 10 || k > samples.size() / 2) throw InputError("tail index: need 10 <= k <= n/2");
  for (double x : samples)
    if (!(x > 0) || !std::isfinite(x)) throw InputError("tail index: samples must be positive and finite");

  std::vector<double> top(samples.begin(), samples.end());
  std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                   std::greater<>());
  const double threshold = top[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
  if (!(sum > 0)) throw InputError("tail index: zero spacings among the top order statistics");
  return static_cast<double>(k) / sum;
}

}  // namespace boolperc
