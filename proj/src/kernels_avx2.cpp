#include "aubry/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace aubry::kern {

namespace {

// Per-lane int32 predecessor blend masks, indexed by the movemask of the
// 4-lane double compare.
alignas(16) const int32_t kLaneMask[16][4] = {
    {0, 0, 0, 0},    {-1, 0, 0, 0},   {0, -1, 0, 0},   {-1, -1, 0, 0},
    {0, 0, -1, 0},   {-1, 0, -1, 0},  {0, -1, -1, 0},  {-1, -1, -1, 0},
    {0, 0, 0, -1},   {-1, 0, 0, -1},  {0, -1, 0, -1},  {-1, -1, 0, -1},
    {0, 0, -1, -1},  {-1, 0, -1, -1}, {0, -1, -1, -1}, {-1, -1, -1, -1}};

bool minplus_pred_avx2(double* dst, const double* src, const double* add,
                       double off, int32_t* pred, int32_t tag, double eps,
                       std::size_t len) {
  const __m256d voff = _mm256_set1_pd(off);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m128i vtag = _mm_set1_epi32(tag);
  bool big = false;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d cand = _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(src + i),
                                               _mm256_loadu_pd(add + i)),
                                 voff);
    __m256d old = _mm256_loadu_pd(dst + i);
    __m256d lt = _mm256_cmp_pd(cand, old, _CMP_LT_OQ);
    int mask = _mm256_movemask_pd(lt);
    if (mask == 0) continue;
    _mm256_storeu_pd(dst + i, _mm256_blendv_pd(old, cand, lt));
    __m128i lanes = _mm_load_si128(reinterpret_cast<const __m128i*>(kLaneMask[mask]));
    __m128i oldp = _mm_loadu_si128(reinterpret_cast<__m128i*>(pred + i));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(pred + i),
                     _mm_blendv_epi8(oldp, vtag, lanes));
    if (!big) {
      __m256d gain = _mm256_sub_pd(old, cand);
      __m256d bigm = _mm256_and_pd(lt, _mm256_cmp_pd(gain, veps, _CMP_GT_OQ));
      if (_mm256_movemask_pd(bigm)) big = true;
    }
  }
  for (; i < len; ++i) {
    double cand = (src[i] + add[i]) + off;
    if (cand < dst[i]) {
      if (dst[i] - cand > eps) big = true;
      dst[i] = cand;
      pred[i] = tag;
    }
  }
  return big;
}

bool minplus_avx2(double* dst, const double* src, const double* add, double off,
                  double eps, std::size_t len) {
  const __m256d voff = _mm256_set1_pd(off);
  const __m256d veps = _mm256_set1_pd(eps);
  bool big = false;
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d cand = _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(src + i),
                                               _mm256_loadu_pd(add + i)),
                                 voff);
    __m256d old = _mm256_loadu_pd(dst + i);
    __m256d lt = _mm256_cmp_pd(cand, old, _CMP_LT_OQ);
    int mask = _mm256_movemask_pd(lt);
    if (mask == 0) continue;
    _mm256_storeu_pd(dst + i, _mm256_blendv_pd(old, cand, lt));
    if (!big) {
      __m256d gain = _mm256_sub_pd(old, cand);
      __m256d bigm = _mm256_and_pd(lt, _mm256_cmp_pd(gain, veps, _CMP_GT_OQ));
      if (_mm256_movemask_pd(bigm)) big = true;
    }
  }
  for (; i < len; ++i) {
    double cand = (src[i] + add[i]) + off;
    if (cand < dst[i]) {
      if (dst[i] - cand > eps) big = true;
      dst[i] = cand;
    }
  }
  return big;
}

void axpby2_avx2(double* out, const double* ca, const double* sa, double p,
                 double q, std::size_t len) {
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d acc = _mm256_fmadd_pd(vq, _mm256_loadu_pd(sa + i), _mm256_loadu_pd(out + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vp, _mm256_loadu_pd(ca + i), acc));
  }
  for (; i < len; ++i)
    out[i] = std::fma(p, ca[i], std::fma(q, sa[i], out[i]));
}

}  // namespace

const Kernels* avx2_kernels() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
    return nullptr;
  static const Kernels k{minplus_pred_avx2, minplus_avx2, axpby2_avx2, "avx2"};
  return &k;
}

}  // namespace aubry::kern

#endif  // x86_64
