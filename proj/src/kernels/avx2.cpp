#include <immintrin.h>

#include "simd_impl.hpp"

// AVX2 + FMA lane type (4 doubles) and kernel registration. Built only on
// x86_64 with -mavx2 -mfma; callers must gate on avx2_supported().

namespace tqe::kernels {

namespace {

struct V4 {
  __m256d v;
  static constexpr int W = 4;

  static V4 set1(double x) { return {_mm256_set1_pd(x)}; }
  static V4 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }

  friend V4 operator+(V4 a, V4 b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend V4 operator-(V4 a, V4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend V4 operator*(V4 a, V4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend V4 operator/(V4 a, V4 b) { return {_mm256_div_pd(a.v, b.v)}; }

  static V4 fma(V4 a, V4 b, V4 c) { return {_mm256_fmadd_pd(a.v, b.v, c.v)}; }
  static V4 round(V4 a) {
    return {_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC)};
  }
  static V4 floor(V4 a) { return {_mm256_floor_pd(a.v)}; }
  static V4 abs(V4 a) {
    return {_mm256_andnot_pd(_mm256_set1_pd(-0.0), a.v)};
  }
  static V4 cmp_eq(V4 a, V4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }
  static V4 cmp_lt(V4 a, V4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)}; }
  static V4 blend(V4 mask, V4 a, V4 b) { return {_mm256_blendv_pd(b.v, a.v, mask.v)}; }

  double hsum() const {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
  }
};

constexpr Ops kAvx2Ops{"avx2", simd::trig_eval_batch_impl<V4>,
                       simd::oscillatory_weighted_sum_impl<V4>, simd::birkhoff_dev_sq_impl<V4>};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace tqe::kernels
