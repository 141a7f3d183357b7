#include "irssense/kernels.hpp"

#include <immintrin.h>

// Interleaved layout: one __m256d holds two complex doubles [r0, i0, r1, i1].

namespace irssense::kern::avx2 {

namespace {

inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d t1 = _mm256_mul_pd(_mm256_movedup_pd(a), b);
  const __m256d aim = _mm256_permute_pd(a, 0b1111);
  const __m256d bsw = _mm256_permute_pd(b, 0b0101);
  return _mm256_addsub_pd(t1, _mm256_mul_pd(aim, bsw));
}

inline __m256d cmul2_conj(__m256d a, __m256d b) {
  // conj(a) * b
  const __m256d t1 = _mm256_mul_pd(_mm256_movedup_pd(a), b);
  const __m256d aim = _mm256_permute_pd(a, 0b1111);
  const __m256d bsw = _mm256_permute_pd(b, 0b0101);
  const __m256d t2 = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(aim, bsw));
  return _mm256_addsub_pd(t1, t2);
}

inline cd reduce_pairs(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

}  // namespace

cd cdotu(const cd* a, const cd* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    const __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    acc = _mm256_add_pd(acc, cmul2(va, vb));
  }
  cd s = reduce_pairs(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

cd cdotc(const cd* a, const cd* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    const __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    acc = _mm256_add_pd(acc, cmul2_conj(va, vb));
  }
  cd s = reduce_pairs(acc);
  for (; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    const __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    const __m256d vc = _mm256_loadu_pd(reinterpret_cast<const double*>(c + i));
    acc = _mm256_add_pd(acc, cmul2(cmul2(va, vb), vc));
  }
  cd s = reduce_pairs(acc);
  for (; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

double sumsq(const cd* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  const cd s = reduce_pairs(acc);
  double r = s.real() + s.imag();
  for (; i < n; ++i) r += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return r;
}

void cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(reinterpret_cast<const double*>(a + i));
    const __m256d vb = _mm256_loadu_pd(reinterpret_cast<const double*>(b + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), cmul2(va, vb));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d vy = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    const __m256d t1 = _mm256_mul_pd(are, vx);
    const __m256d xsw = _mm256_permute_pd(vx, 0b0101);
    const __m256d p = _mm256_addsub_pd(t1, _mm256_mul_pd(aim, xsw));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i), _mm256_add_pd(vy, p));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace irssense::kern::avx2
