#include "tmcsig/apportion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tmcsig {

std::vector<std::int64_t> largest_remainder(std::int64_t total, std::span<const double> weights) {
  if (total < 0) throw std::invalid_argument("largest_remainder: negative total");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("largest_remainder: weights must be finite and non-negative");
    }
  }
  std::vector<std::int64_t> seats(weights.size(), 0);
  if (total == 0) return seats;

  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weight_sum <= 0.0) throw std::invalid_argument("largest_remainder: all weights are zero");

  std::vector<double> remainder(weights.size(), 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / weight_sum;
    const auto whole = static_cast<std::int64_t>(std::floor(quota));
    seats[i] = whole;
    remainder[i] = quota - static_cast<double>(whole);
    assigned += whole;
  }

  // Floating-point quotas can overshoot by a unit when weights do not sum to 1.
  while (assigned > total) {
    auto it = std::max_element(seats.begin(), seats.end());
    --*it;
    --assigned;
  }

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });

  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    if (weights[order[k]] > 0.0) {
      ++seats[order[k]];
      ++assigned;
    }
  }
  return seats;
}

}  // namespace tmcsig
