#pragma once

// Disk/polygon intersection area kernels.
//
// Every kernel computes the same sum: for each directed edge (a, b) of a
// closed polygon, translated so the disk center is the origin, the signed area
// of triangle(0, a, b) clipped to the disk. The edge is split at its circle
// crossings; sub-segments inside the disk contribute cross(p, q) / 2 and those
// outside contribute the circular sector r^2 / 2 * angle(p, q). The crossing
// parameters are clamped to [0, 1] so the three pieces are always evaluated
// and no per-edge branching is needed.

#include <cstddef>
#include <span>
#include <string_view>

namespace areasig::simd {

// xs, ys hold n+1 vertices with the first repeated at the end.
using DiskAreaFn = double (*)(const double* xs, const double* ys, std::size_t n_edges,
                              double cx, double cy, double r);

double disk_area_scalar(const double* xs, const double* ys, std::size_t n_edges, double cx,
                        double cy, double r);

#if defined(AREASIG_HAVE_AVX2_KERNEL)
double disk_area_avx2(const double* xs, const double* ys, std::size_t n_edges, double cx,
                      double cy, double r);
#endif

enum class Isa { scalar, avx2 };

// True when the AVX2 variant was compiled in and the running CPU supports it.
bool avx2_available() noexcept;

// Kernel for the requested ISA; falls back to scalar when unavailable.
DiskAreaFn disk_area_kernel(Isa isa) noexcept;

// Kernel chosen once at first use: AVX2+FMA when the CPU has it, else scalar.
// Setting AREASIG_FORCE_SCALAR in the environment pins the scalar kernel.
DiskAreaFn active_disk_area_kernel() noexcept;
std::string_view active_isa_name() noexcept;

inline double disk_area(std::span<const double> xs, std::span<const double> ys, double cx,
                        double cy, double r) {
  return active_disk_area_kernel()(xs.data(), ys.data(), xs.size() - 1, cx, cy, r);
}

}  // namespace areasig::simd
