#pragma once
// Word-parallel kernels over bit-packed vertex rows.
//
// Every kernel has a portable scalar reference in kernels_scalar.cpp. Vector
// variants (AVX2 on x86-64, NEON on AArch64) live in their own translation
// units, compiled with the matching target flags, and are only handed out
// when the running CPU reports support. The KRSIM_SIMD environment variable
// (scalar|avx2|neon) pins the choice for benchmarking and equivalence runs.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace krsim::simd {

using Word = std::uint64_t;

enum class Isa { scalar, avx2, neon };

struct BitKernels {
  Isa isa;
  std::uint64_t (*popcount)(const Word* a, std::size_t n);
  std::uint64_t (*and_popcount)(const Word* a, const Word* b, std::size_t n);
  std::uint64_t (*and3_popcount)(const Word* a, const Word* b, const Word* c,
                                 std::size_t n);
  // dst = a & b
  void (*and_into)(Word* dst, const Word* a, const Word* b, std::size_t n);
  // dst = a & ~b
  void (*andnot_into)(Word* dst, const Word* a, const Word* b, std::size_t n);
};

// Kernels selected for this process. Resolved once, on first call.
const BitKernels& active();

// nullptr when the variant was not compiled in or the CPU lacks support.
const BitKernels* kernels_for(Isa isa);

// Every variant usable on this machine, scalar first.
std::vector<const BitKernels*> available();

std::string_view isa_name(Isa isa);

namespace detail {
extern const BitKernels scalar_kernels;
#if defined(KRSIM_HAVE_AVX2)
extern const BitKernels avx2_kernels;
#endif
#if defined(KRSIM_HAVE_NEON)
extern const BitKernels neon_kernels;
#endif
}  // namespace detail

}  // namespace krsim::simd
