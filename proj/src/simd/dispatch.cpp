#include "krsim/simd/bit_kernels.hpp"

#include <cstdlib>
#include <string>

namespace krsim::simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(KRSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::neon:
#if defined(KRSIM_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const BitKernels* compiled(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_kernels;
    case Isa::avx2:
#if defined(KRSIM_HAVE_AVX2)
      return &detail::avx2_kernels;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(KRSIM_HAVE_NEON)
      return &detail::neon_kernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const BitKernels& resolve() {
  if (const char* forced = std::getenv("KRSIM_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa)) {
        if (const BitKernels* k = kernels_for(isa)) return *k;
      }
    }
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const BitKernels* k = kernels_for(isa)) return *k;
  }
  return detail::scalar_kernels;
}

}  // namespace

const BitKernels* kernels_for(Isa isa) {
  const BitKernels* k = compiled(isa);
  return (k != nullptr && cpu_supports(isa)) ? k : nullptr;
}

const BitKernels& active() {
  static const BitKernels& chosen = resolve();
  return chosen;
}

std::vector<const BitKernels*> available() {
  std::vector<const BitKernels*> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (const BitKernels* k = kernels_for(isa)) out.push_back(k);
  }
  return out;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace krsim::simd
