#include "irssense/kernels.hpp"

namespace irssense::kern::scalar {

cd cdotu(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

cd cdotc(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double pr = ar * br - ai * bi;
    const double pi = ar * bi + ai * br;
    const double cr = c[i].real(), ci = c[i].imag();
    re += pr * cr - pi * ci;
    im += pr * ci + pi * cr;
  }
  return {re, im};
}

double sumsq(const cd* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  }
  return s;
}

void cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  const double cr = alpha.real(), ci = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cd{cr * xr - ci * xi, cr * xi + ci * xr};
  }
}

}  // namespace irssense::kern::scalar
