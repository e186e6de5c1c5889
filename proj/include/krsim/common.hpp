#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace krsim {

using Vertex = std::uint32_t;

// Largest clique order the engine and index support.
inline constexpr int kMaxK = 16;

// Raised when a sample is requested from an index that holds no K_k copies,
// i.e. the process has reached its hitting time.
class ProcessTerminated : public std::runtime_error {
 public:
  ProcessTerminated() : std::runtime_error("process terminated: no K_k copies remain") {}
};

// Exact C(n, r) as a 64-bit value. Throws std::overflow_error when the value
// is 2^63 or larger.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

// C(n, r) in floating point; never overflows for the ranges used here.
double binomial_real(double n, double r);

}  // namespace krsim
