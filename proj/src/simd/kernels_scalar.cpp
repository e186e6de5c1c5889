#include "krsim/simd/bit_kernels.hpp"

#include <bit>

namespace krsim::simd {
namespace {

std::uint64_t popcount_scalar(const Word* a, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += std::popcount(a[i]);
  return total;
}

std::uint64_t and_popcount_scalar(const Word* a, const Word* b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::uint64_t and3_popcount_scalar(const Word* a, const Word* b, const Word* c,
                                   std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += std::popcount(a[i] & b[i] & c[i]);
  return total;
}

void and_into_scalar(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

void andnot_into_scalar(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & ~b[i];
}

}  // namespace

namespace detail {
const BitKernels scalar_kernels{Isa::scalar,        popcount_scalar,
                                and_popcount_scalar, and3_popcount_scalar,
                                and_into_scalar,     andnot_into_scalar};
}  // namespace detail

}  // namespace krsim::simd
