#include "rail/linalg/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rail::kernels {

#ifdef RAIL_HAVE_AVX2
namespace avx2 {
extern const KernelSet kAvx2Set;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(RAIL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool scalar_forced() {
  const char* env = std::getenv("RAIL_FORCE_SCALAR");
  return env != nullptr && std::strcmp(env, "0") != 0 && env[0] != '\0';
}

const KernelSet& select() {
  if (!scalar_forced()) {
    if (const KernelSet* k = avx2_kernels()) return *k;
  }
  return scalar_kernels();
}

}  // namespace

const KernelSet* avx2_kernels() {
#ifdef RAIL_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2::kAvx2Set : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active() {
  static const KernelSet& chosen = select();
  return chosen;
}

}  // namespace rail::kernels
