// Compiled with -mavx2; only reached through the dispatcher after a CPUID check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernel_tables.hpp"

namespace rhostat::kernels {
namespace {

inline std::uint64_t hsum_epi64(__m256i acc) {
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return static_cast<std::uint64_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

inline double hmax_pd(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double best = lanes[0];
  for (int j = 1; j < 4; ++j)
    if (lanes[j] > best) best = lanes[j];
  return best;
}

inline double hmin_pd(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double best = lanes[0];
  for (int j = 1; j < 4; ++j)
    if (lanes[j] < best) best = lanes[j];
  return best;
}

// Lanes of a compare mask are all-ones (-1 as int64) when set, so
// subtracting the mask from the accumulator adds one per hit.
template <Predicate P>
inline __m256i step(__m256i acc, const double* v, std::size_t i, __m256d threshold,
                    __m256d level, __m256d sign) {
  const __m256d a = _mm256_loadu_pd(v + i);
  __m256d mask;
  if constexpr (P == Predicate::Deviation) {
    const __m256d dev = _mm256_andnot_pd(sign, _mm256_sub_pd(a, level));
    mask = _mm256_cmp_pd(dev, threshold, _CMP_GE_OQ);
  } else {
    const __m256d b = _mm256_loadu_pd(v + i + 1);
    const __m256d d = _mm256_sub_pd(b, a);
    if constexpr (P == Predicate::Downward) {
      mask = _mm256_cmp_pd(d, threshold, _CMP_GE_OQ);
    } else if constexpr (P == Predicate::Absolute) {
      mask = _mm256_cmp_pd(_mm256_andnot_pd(sign, d), threshold, _CMP_GE_OQ);
    } else {
      mask = _mm256_cmp_pd(d, threshold, _CMP_LE_OQ);
    }
  }
  return _mm256_sub_epi64(acc, _mm256_castpd_si256(mask));
}

template <Predicate P>
std::uint64_t count_impl(const double* v, std::size_t first, std::size_t last, double eps,
                         double level) {
  const double th = (P == Predicate::Reversed) ? -eps : eps;
  const __m256d threshold = _mm256_set1_pd(th);
  const __m256d vlevel = _mm256_set1_pd(level);
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256i acc0 = _mm256_setzero_si256();
  __m256i acc1 = _mm256_setzero_si256();
  std::size_t i = first;
  for (; i + 8 <= last; i += 8) {
    acc0 = step<P>(acc0, v, i, threshold, vlevel, sign);
    acc1 = step<P>(acc1, v, i + 4, threshold, vlevel, sign);
  }
  for (; i + 4 <= last; i += 4) acc0 = step<P>(acc0, v, i, threshold, vlevel, sign);
  std::uint64_t hits = hsum_epi64(_mm256_add_epi64(acc0, acc1));

  for (; i < last; ++i) {
    if constexpr (P == Predicate::Downward) hits += (v[i + 1] - v[i]) >= th;
    else if constexpr (P == Predicate::Absolute) hits += std::fabs(v[i + 1] - v[i]) >= th;
    else if constexpr (P == Predicate::Deviation) hits += std::fabs(v[i] - level) >= th;
    else hits += (v[i + 1] - v[i]) <= th;
  }
  return hits;
}

std::uint64_t count_hits_avx2(Predicate predicate, const double* v, std::size_t first,
                              std::size_t last, double eps, double level) {
  switch (predicate) {
    case Predicate::Downward: return count_impl<Predicate::Downward>(v, first, last, eps, level);
    case Predicate::Absolute: return count_impl<Predicate::Absolute>(v, first, last, eps, level);
    case Predicate::Deviation: return count_impl<Predicate::Deviation>(v, first, last, eps, level);
    case Predicate::Reversed: return count_impl<Predicate::Reversed>(v, first, last, eps, level);
  }
  return 0;
}

// _mm256_max_pd(x, acc) returns acc when x is NaN or equal to acc, which is
// exactly what the scalar "if (x > best)" update does.
double max_delta_avx2(const double* v, std::size_t first, std::size_t last) {
  __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = first;
  for (; i + 4 <= last; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i + 1), _mm256_loadu_pd(v + i));
    acc = _mm256_max_pd(d, acc);
  }
  double best = hmax_pd(acc);
  for (; i < last; ++i) {
    const double d = v[i + 1] - v[i];
    if (d > best) best = d;
  }
  return best;
}

double max_abs_delta_avx2(const double* v, std::size_t first, std::size_t last) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = first;
  for (; i + 4 <= last; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i + 1), _mm256_loadu_pd(v + i));
    acc = _mm256_max_pd(_mm256_andnot_pd(sign, d), acc);
  }
  double best = hmax_pd(acc);
  for (; i < last; ++i) {
    const double d = std::fabs(v[i + 1] - v[i]);
    if (d > best) best = d;
  }
  return best;
}

void extent_avx2(const double* v, std::size_t n, double* lo, double* hi) {
  __m256d mn = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d mx = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    mn = _mm256_min_pd(x, mn);
    mx = _mm256_max_pd(x, mx);
  }
  double a = hmin_pd(mn);
  double b = hmax_pd(mx);
  for (; i < n; ++i) {
    if (v[i] < a) a = v[i];
    if (v[i] > b) b = v[i];
  }
  *lo = a;
  *hi = b;
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static constexpr KernelTable table{Isa::Avx2, count_hits_avx2, max_delta_avx2,
                                     max_abs_delta_avx2, extent_avx2};
  return table;
}

}  // namespace rhostat::kernels
