#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel complex arithmetic kernels used by the simulation and
// estimation inner loops. Scalar reference implementations always exist;
// on x86-64 an AVX2+FMA variant is selected at runtime when the CPU
// supports it. Set IRSSENSE_KERNEL=scalar to force the reference path.

namespace irssense::kern {

using cd = std::complex<double>;

// sum_i a[i] * b[i]
cd cdotu(const cd* a, const cd* b, std::size_t n);
// sum_i conj(a[i]) * b[i]
cd cdotc(const cd* a, const cd* b, std::size_t n);
// sum_i a[i] * b[i] * c[i]   (reflection composite gain a^T diag(b) c)
cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n);
// sum_i |a[i]|^2
double sumsq(const cd* a, std::size_t n);
// out[i] = a[i] * b[i]
void cmul(const cd* a, const cd* b, cd* out, std::size_t n);
// y[i] += alpha * x[i]
void caxpy(cd alpha, const cd* x, cd* y, std::size_t n);

// Name of the variant the dispatcher resolved to ("scalar", "avx2", "neon").
const std::string& active_variant();

namespace scalar {
cd cdotu(const cd* a, const cd* b, std::size_t n);
cd cdotc(const cd* a, const cd* b, std::size_t n);
cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n);
double sumsq(const cd* a, std::size_t n);
void cmul(const cd* a, const cd* b, cd* out, std::size_t n);
void caxpy(cd alpha, const cd* x, cd* y, std::size_t n);
}  // namespace scalar

#if defined(IRSSENSE_HAVE_AVX2)
namespace avx2 {
cd cdotu(const cd* a, const cd* b, std::size_t n);
cd cdotc(const cd* a, const cd* b, std::size_t n);
cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n);
double sumsq(const cd* a, std::size_t n);
void cmul(const cd* a, const cd* b, cd* out, std::size_t n);
void caxpy(cd alpha, const cd* x, cd* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(IRSSENSE_HAVE_NEON)
namespace neon {
cd cdotu(const cd* a, const cd* b, std::size_t n);
cd cdotc(const cd* a, const cd* b, std::size_t n);
cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n);
double sumsq(const cd* a, std::size_t n);
void cmul(const cd* a, const cd* b, cd* out, std::size_t n);
void caxpy(cd alpha, const cd* x, cd* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace irssense::kern
