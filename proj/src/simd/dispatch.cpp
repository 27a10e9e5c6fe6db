#include <atomic>
#include <cstdlib>
#include <string>

#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe::simd {

namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("ENTROFRAME_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::InvalidArgument,
                "ISA " + std::string(to_string(isa)) + " not available on this CPU");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2) return detail::avx2_kernels();
#endif
#if defined(__aarch64__)
  if (isa == Isa::Neon) return detail::neon_kernels();
#endif
  return detail::scalar_kernels();
}

const Kernels& kernels() { return kernels_for(active_isa()); }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::InvalidArgument,
                "ISA " + std::string(to_string(isa)) + " not available on this CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

}  // namespace entroframe::simd
