// Compiled with -mavx2 -mpopcnt. Nothing here may run before dispatch has
// confirmed CPU support.
#include "krsim/simd/bit_kernels.hpp"

#include <immintrin.h>

namespace krsim::simd {
namespace {

// Nibble-lookup popcount (Mula): per-byte counts via pshufb, summed with psadbw.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts =
      _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  return static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 0)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 1)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 2)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 3));
}

inline __m256i load(const Word* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

std::uint64_t popcount_avx2(const Word* a, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcount_bytes(load(a + i)));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i]));
  return total;
}

std::uint64_t and_popcount_avx2(const Word* a, const Word* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_bytes(_mm256_and_si256(load(a + i), load(b + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

std::uint64_t and3_popcount_avx2(const Word* a, const Word* b, const Word* c,
                                 std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_and_si256(_mm256_and_si256(load(a + i), load(b + i)), load(c + i));
    acc = _mm256_add_epi64(acc, popcount_bytes(v));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i] & c[i]));
  return total;
}

void and_into_avx2(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_and_si256(load(a + i), load(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void andnot_into_avx2(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // _mm256_andnot_si256(x, y) computes ~x & y
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_andnot_si256(load(b + i), load(a + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] & ~b[i];
}

}  // namespace

namespace detail {
const BitKernels avx2_kernels{Isa::avx2,        popcount_avx2,
                              and_popcount_avx2, and3_popcount_avx2,
                              and_into_avx2,     andnot_into_avx2};
}  // namespace detail

}  // namespace krsim::simd
