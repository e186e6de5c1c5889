#pragma once

#include <array>
#include <cstdint>
#include <numeric>

#include "krsim/common.hpp"

namespace krsim {

// Cliques destroyed by one removal, bucketed by how many vertices they share
// with the removed clique (m = 2..k). by_m[k] is always 1: the clique itself.
struct RemovalDelta {
  int k = 0;
  std::array<std::uint64_t, kMaxK + 1> by_m{};

  std::uint64_t total() const { return std::accumulate(by_m.begin(), by_m.end(), std::uint64_t{0}); }
  friend bool operator==(const RemovalDelta&, const RemovalDelta&) = default;
};

}  // namespace krsim
