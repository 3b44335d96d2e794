#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tmcsig {

/// Hamilton (largest-remainder) apportionment of `total` units over
/// non-negative `weights`. The result always sums to `total`; equal remainders
/// go to the lower index. Throws std::invalid_argument for negative input or
/// for total > 0 with all-zero weights.
std::vector<std::int64_t> largest_remainder(std::int64_t total, std::span<const double> weights);

}  // namespace tmcsig
