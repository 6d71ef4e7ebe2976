#include "pocket/simd/conv_pool.hpp"

#include "pocket/error.hpp"

#include <cstdlib>
#include <string>

namespace pocket::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(POCKET_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(POCKET_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

ConvPoolFn conv_pool_for(Isa isa) {
  if (!isa_available(isa))
    throw ConfigError("SIMD variant '" + std::string(to_string(isa)) + "' is not available");
  switch (isa) {
#if defined(POCKET_HAVE_AVX2)
    case Isa::Avx2: return &conv_pool_avx2;
#endif
#if defined(POCKET_HAVE_NEON)
    case Isa::Neon: return &conv_pool_neon;
#endif
    default: return &conv_pool_scalar;
  }
}

Isa preferred_isa() {
  if (const char* env = std::getenv("POCKET_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
      if (want == to_string(isa) && isa_available(isa)) return isa;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

} // namespace pocket::simd
