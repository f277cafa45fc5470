#include <cstdlib>

#include "areasig/simd/disk_area.hpp"

namespace areasig::simd {

bool avx2_available() noexcept {
#if defined(AREASIG_HAVE_AVX2_KERNEL) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok;
#else
  return false;
#endif
}

DiskAreaFn disk_area_kernel(Isa isa) noexcept {
#if defined(AREASIG_HAVE_AVX2_KERNEL)
  if (isa == Isa::avx2 && avx2_available()) return &disk_area_avx2;
#endif
  (void)isa;
  return &disk_area_scalar;
}

namespace {

Isa pick_isa() noexcept {
  if (std::getenv("AREASIG_FORCE_SCALAR") != nullptr) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() noexcept {
  static const Isa isa = pick_isa();
  return isa;
}

}  // namespace

DiskAreaFn active_disk_area_kernel() noexcept {
  static const DiskAreaFn fn = disk_area_kernel(active_isa());
  return fn;
}

std::string_view active_isa_name() noexcept {
  return active_isa() == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace areasig::simd
