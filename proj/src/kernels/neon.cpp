#include <arm_neon.h>

#include "simd_impl.hpp"

// NEON lane type (2 doubles) for aarch64. Masks travel as all-ones/all-zeros
// bit patterns inside the float vector, matching the AVX2 convention.

namespace tqe::kernels {

namespace {

struct V2 {
  float64x2_t v;
  static constexpr int W = 2;

  static V2 set1(double x) { return {vdupq_n_f64(x)}; }
  static V2 load(const double* p) { return {vld1q_f64(p)}; }
  void store(double* p) const { vst1q_f64(p, v); }

  friend V2 operator+(V2 a, V2 b) { return {vaddq_f64(a.v, b.v)}; }
  friend V2 operator-(V2 a, V2 b) { return {vsubq_f64(a.v, b.v)}; }
  friend V2 operator*(V2 a, V2 b) { return {vmulq_f64(a.v, b.v)}; }
  friend V2 operator/(V2 a, V2 b) { return {vdivq_f64(a.v, b.v)}; }

  static V2 fma(V2 a, V2 b, V2 c) { return {vfmaq_f64(c.v, a.v, b.v)}; }
  static V2 round(V2 a) { return {vrndnq_f64(a.v)}; }
  static V2 floor(V2 a) { return {vrndmq_f64(a.v)}; }
  static V2 abs(V2 a) { return {vabsq_f64(a.v)}; }
  static V2 cmp_eq(V2 a, V2 b) {
    return {vreinterpretq_f64_u64(vceqq_f64(a.v, b.v))};
  }
  static V2 cmp_lt(V2 a, V2 b) {
    return {vreinterpretq_f64_u64(vcltq_f64(a.v, b.v))};
  }
  static V2 blend(V2 mask, V2 a, V2 b) {
    return {vbslq_f64(vreinterpretq_u64_f64(mask.v), a.v, b.v)};
  }

  double hsum() const { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }
};

constexpr Ops kNeonOps{"neon", simd::trig_eval_batch_impl<V2>,
                       simd::oscillatory_weighted_sum_impl<V2>, simd::birkhoff_dev_sq_impl<V2>};

}  // namespace

const Ops& neon_ops() { return kNeonOps; }

}  // namespace tqe::kernels
