// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <cmath>

#include "areasig/simd/disk_area.hpp"

namespace areasig::simd {

namespace {

// Cephes atan rational approximation on [0, 0.66] after range reduction.
constexpr double kP0 = -8.750608600031904122785e-1;
constexpr double kP1 = -1.615753718733365076637e1;
constexpr double kP2 = -7.500855792314704667340e1;
constexpr double kP3 = -1.228866684490136173410e2;
constexpr double kP4 = -6.485021904942025371773e1;
constexpr double kQ0 = 2.485846490142306297962e1;
constexpr double kQ1 = 1.650270098316988542046e2;
constexpr double kQ2 = 4.328810604912902668951e2;
constexpr double kQ3 = 4.853903996359136964868e2;
constexpr double kQ4 = 1.945506571482613964425e2;
constexpr double kMoreBits = 6.123233995736765886130e-17;
constexpr double kPiO4 = 0.78539816339744830962;
constexpr double kPiO2 = 1.57079632679489661923;
constexpr double kPi = 3.14159265358979323846;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Four-lane atan2(y, x). Matches std::atan2 to a few ulp away from the
// (y = +-0, x < 0) branch cut, which the area kernel never evaluates on.
inline __m256d atan2_pd(__m256d y, __m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ax = abs_pd(x);
  const __m256d ay = abs_pd(y);
  const __m256d swap = _mm256_cmp_pd(ay, ax, _CMP_GT_OQ);
  const __m256d num = _mm256_min_pd(ax, ay);
  __m256d den = _mm256_max_pd(ax, ay);
  den = _mm256_blendv_pd(den, one, _mm256_cmp_pd(den, zero, _CMP_EQ_OQ));
  const __m256d z = _mm256_div_pd(num, den);

  const __m256d big = _mm256_cmp_pd(z, _mm256_set1_pd(0.66), _CMP_GT_OQ);
  const __m256d zr =
      _mm256_blendv_pd(z, _mm256_div_pd(_mm256_sub_pd(z, one), _mm256_add_pd(z, one)), big);
  const __m256d base = _mm256_and_pd(big, _mm256_set1_pd(kPiO4));
  const __m256d extra = _mm256_and_pd(big, _mm256_set1_pd(0.5 * kMoreBits));

  const __m256d z2 = _mm256_mul_pd(zr, zr);
  __m256d p = _mm256_set1_pd(kP0);
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(kP1));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(kP2));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(kP3));
  p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(kP4));
  __m256d q = _mm256_add_pd(z2, _mm256_set1_pd(kQ0));
  q = _mm256_fmadd_pd(q, z2, _mm256_set1_pd(kQ1));
  q = _mm256_fmadd_pd(q, z2, _mm256_set1_pd(kQ2));
  q = _mm256_fmadd_pd(q, z2, _mm256_set1_pd(kQ3));
  q = _mm256_fmadd_pd(q, z2, _mm256_set1_pd(kQ4));
  const __m256d ratio = _mm256_div_pd(_mm256_mul_pd(z2, p), q);
  __m256d at = _mm256_add_pd(base, _mm256_add_pd(_mm256_fmadd_pd(zr, ratio, zr), extra));

  at = _mm256_blendv_pd(at, _mm256_sub_pd(_mm256_set1_pd(kPiO2), at), swap);
  at = _mm256_blendv_pd(at, _mm256_sub_pd(_mm256_set1_pd(kPi), at),
                        _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
  const __m256d sign = _mm256_and_pd(y, _mm256_set1_pd(-0.0));
  return _mm256_or_pd(at, sign);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double disk_area_avx2(const double* xs, const double* ys, std::size_t n_edges, double cx,
                      double cy, double r) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d r2 = _mm256_set1_pd(r * r);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d sectors = zero;
  __m256d triangles = zero;
  std::size_t i = 0;
  for (; i + 4 <= n_edges; i += 4) {
    const __m256d px = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
    const __m256d py = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
    const __m256d qx = _mm256_sub_pd(_mm256_loadu_pd(xs + i + 1), vcx);
    const __m256d qy = _mm256_sub_pd(_mm256_loadu_pd(ys + i + 1), vcy);
    const __m256d dx = _mm256_sub_pd(qx, px);
    const __m256d dy = _mm256_sub_pd(qy, py);

    const __m256d a = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d b = _mm256_fmadd_pd(px, dx, _mm256_mul_pd(py, dy));
    const __m256d c = _mm256_sub_pd(_mm256_fmadd_pd(px, px, _mm256_mul_pd(py, py)), r2);
    const __m256d disc = _mm256_fmsub_pd(b, b, _mm256_mul_pd(a, c));
    const __m256d live = _mm256_and_pd(_mm256_cmp_pd(disc, zero, _CMP_GT_OQ),
                                       _mm256_cmp_pd(a, zero, _CMP_GT_OQ));
    const __m256d safe_a = _mm256_blendv_pd(one, a, live);
    const __m256d sq = _mm256_sqrt_pd(_mm256_max_pd(disc, zero));
    const __m256d neg_b = _mm256_sub_pd(zero, b);
    __m256d t1 = _mm256_div_pd(_mm256_sub_pd(neg_b, sq), safe_a);
    __m256d t2 = _mm256_div_pd(_mm256_add_pd(neg_b, sq), safe_a);
    t1 = _mm256_and_pd(live, _mm256_min_pd(_mm256_max_pd(t1, zero), one));
    t2 = _mm256_and_pd(live, _mm256_min_pd(_mm256_max_pd(t2, zero), one));

    const __m256d ax = _mm256_fmadd_pd(t1, dx, px);
    const __m256d ay = _mm256_fmadd_pd(t1, dy, py);
    const __m256d bx = _mm256_fmadd_pd(t2, dx, px);
    const __m256d by = _mm256_fmadd_pd(t2, dy, py);

    // Sector p -> A and sector B -> q.
    const __m256d s1 = atan2_pd(_mm256_fmsub_pd(px, ay, _mm256_mul_pd(py, ax)),
                                _mm256_fmadd_pd(px, ax, _mm256_mul_pd(py, ay)));
    const __m256d s2 = atan2_pd(_mm256_fmsub_pd(bx, qy, _mm256_mul_pd(by, qx)),
                                _mm256_fmadd_pd(bx, qx, _mm256_mul_pd(by, qy)));
    // Degenerate edges contribute nothing.
    const __m256d nondegenerate = _mm256_cmp_pd(a, zero, _CMP_GT_OQ);
    sectors = _mm256_add_pd(sectors, _mm256_and_pd(nondegenerate, _mm256_add_pd(s1, s2)));
    triangles = _mm256_add_pd(triangles, _mm256_fmsub_pd(ax, by, _mm256_mul_pd(ay, bx)));
  }
  double sum = 0.5 * r * r * hsum(sectors) + 0.5 * hsum(triangles);
  if (i < n_edges) sum += disk_area_scalar(xs + i, ys + i, n_edges - i, cx, cy, r);
  return sum;
}

}  // namespace areasig::simd
