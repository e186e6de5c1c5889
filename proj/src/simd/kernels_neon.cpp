#include "krsim/simd/bit_kernels.hpp"

#include <arm_neon.h>

namespace krsim::simd {
namespace {

inline std::uint64_t count_vec(uint64x2_t v) {
  return vaddvq_u8(vcntq_u8(vreinterpretq_u8_u64(v)));
}

inline std::uint64_t count_word(Word w) {
  return vaddv_u8(vcnt_u8(vcreate_u8(w)));
}

std::uint64_t popcount_neon(const Word* a, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) total += count_vec(vld1q_u64(a + i));
  for (; i < n; ++i) total += count_word(a[i]);
  return total;
}

std::uint64_t and_popcount_neon(const Word* a, const Word* b, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) total += count_vec(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) total += count_word(a[i] & b[i]);
  return total;
}

std::uint64_t and3_popcount_neon(const Word* a, const Word* b, const Word* c,
                                 std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    total += count_vec(
        vandq_u64(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)), vld1q_u64(c + i)));
  }
  for (; i < n; ++i) total += count_word(a[i] & b[i] & c[i]);
  return total;
}

void and_into_neon(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(dst + i, vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void andnot_into_neon(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  // vbicq_u64(x, y) computes x & ~y
  for (; i + 2 <= n; i += 2) vst1q_u64(dst + i, vbicq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] & ~b[i];
}

}  // namespace

namespace detail {
const BitKernels neon_kernels{Isa::neon,        popcount_neon,
                              and_popcount_neon, and3_popcount_neon,
                              and_into_neon,     andnot_into_neon};
}  // namespace detail

}  // namespace krsim::simd
