#include "irssense/kernels.hpp"

#include <cstdlib>
#include <mutex>

namespace irssense::kern {

namespace {

struct Table {
  cd (*cdotu)(const cd*, const cd*, std::size_t);
  cd (*cdotc)(const cd*, const cd*, std::size_t);
  cd (*tdotu)(const cd*, const cd*, const cd*, std::size_t);
  double (*sumsq)(const cd*, std::size_t);
  void (*cmul)(const cd*, const cd*, cd*, std::size_t);
  void (*caxpy)(cd, const cd*, cd*, std::size_t);
  std::string name;
};

Table make_table() {
  const char* forced = std::getenv("IRSSENSE_KERNEL");
  const std::string want = forced ? forced : "auto";
#if defined(IRSSENSE_HAVE_AVX2)
  const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (cpu_ok && (want == "auto" || want == "avx2")) {
    return {avx2::cdotu, avx2::cdotc, avx2::tdotu,
            avx2::sumsq, avx2::cmul, avx2::caxpy, "avx2"};
  }
#endif
#if defined(IRSSENSE_HAVE_NEON)
  if (want == "auto" || want == "neon") {
    return {neon::cdotu, neon::cdotc, neon::tdotu,
            neon::sumsq, neon::cmul, neon::caxpy, "neon"};
  }
#endif
  return {scalar::cdotu, scalar::cdotc, scalar::tdotu,
          scalar::sumsq, scalar::cmul, scalar::caxpy, "scalar"};
}

const Table& table() {
  static const Table t = make_table();
  return t;
}

}  // namespace

cd cdotu(const cd* a, const cd* b, std::size_t n) { return table().cdotu(a, b, n); }
cd cdotc(const cd* a, const cd* b, std::size_t n) { return table().cdotc(a, b, n); }
cd tdotu(const cd* a, const cd* b, const cd* c, std::size_t n) {
  return table().tdotu(a, b, c, n);
}
double sumsq(const cd* a, std::size_t n) { return table().sumsq(a, n); }
void cmul(const cd* a, const cd* b, cd* out, std::size_t n) { table().cmul(a, b, out, n); }
void caxpy(cd alpha, const cd* x, cd* y, std::size_t n) { table().caxpy(alpha, x, y, n); }

const std::string& active_variant() { return table().name; }

}  // namespace irssense::kern
