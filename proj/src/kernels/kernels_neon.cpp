#include "irssense/kernels.hpp"

#include <arm_neon.h>

// One float64x2_t holds a single complex double [re, im].

namespace irssense::kern::neon {

namespace {

inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  // [ar*br - ai*bi, ar*bi + ai*br]
  const float64x2_t ar = vdupq_laneq_f64(a, 0);
  const float64x2_t ai = vdupq_laneq_f64(a, 1);
  const float64x2_t bsw = vextq_f64(b, b, 1);
  float64x2_t t = vmulq_f64(ai, bsw);
  t = vsetq_lane_f64(-vgetq_lane_f64(t, 0), t, 0);
  return vfmaq_f64(t, ar, b);
}

}  // namespace

cd cdotu(const cd* a, const cd* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(a + i));
    const float64x2_t vb = vld1q_f64(reinterpret_cast<const double*>(b + i));
    acc = vaddq_f64(acc, cmul1(va, vb));
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

cd cdotc(const cd* a, const cd* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(a + i));
    va = vsetq_lane_f64(-vgetq_lane_f64(va, 1), va, 1);
    const float64x2_t vb = vld1q_f64(reinterpret_cast<const double*>(b + i));
    acc = vaddq_f64(acc, cmul1(va, vb));
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(a + i));
    const float64x2_t vb = vld1q_f64(reinterpret_cast<const double*>(b + i));
    const float64x2_t vc = vld1q_f64(reinterpret_cast<const double*>(c + i));
    acc = vaddq_f64(acc, cmul1(cmul1(va, vb), vc));
  }
  return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

double sumsq(const cd* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(a + i));
    acc = vfmaq_f64(acc, va, va);
  }
  return vaddvq_f64(acc);
}

void cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(a + i));
    const float64x2_t vb = vld1q_f64(reinterpret_cast<const double*>(b + i));
    vst1q_f64(reinterpret_cast<double*>(out + i), cmul1(va, vb));
  }
}

void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  const float64x2_t va = vld1q_f64(reinterpret_cast<const double*>(&alpha));
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t vx = vld1q_f64(reinterpret_cast<const double*>(x + i));
    const float64x2_t vy = vld1q_f64(reinterpret_cast<const double*>(y + i));
    vst1q_f64(reinterpret_cast<double*>(y + i), vaddq_f64(vy, cmul1(va, vx)));
  }
}

}  // namespace irssense::kern::neon
