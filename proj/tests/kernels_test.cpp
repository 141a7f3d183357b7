#include <doctest.h>

#include "irssense/kernels.hpp"
#include "irssense/rng.hpp"

#include <vector>

using irssense::RngStream;
using irssense::kern::cd;

namespace {

std::vector<cd> random_vec(RngStream& rng, std::size_t n) {
  std::vector<cd> v(n);
  for (auto& z : v) z = rng.cgaussian(1.0);
  return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
  // Odd lengths exercise the vector tails.
  RngStream rng(42);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2},
                        std::size_t{3}, std::size_t{7}, std::size_t{8},
                        std::size_t{129}, std::size_t{1000}}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const auto c = random_vec(rng, n);

    const cd du = irssense::kern::cdotu(a.data(), b.data(), n);
    const cd su = irssense::kern::scalar::cdotu(a.data(), b.data(), n);
    CHECK(std::abs(du - su) <= 1e-12 * (1.0 + std::abs(su)));

    const cd dc = irssense::kern::cdotc(a.data(), b.data(), n);
    const cd sc = irssense::kern::scalar::cdotc(a.data(), b.data(), n);
    CHECK(std::abs(dc - sc) <= 1e-12 * (1.0 + std::abs(sc)));

    const cd dt = irssense::kern::tdotu(a.data(), b.data(), c.data(), n);
    const cd st = irssense::kern::scalar::tdotu(a.data(), b.data(), c.data(), n);
    CHECK(std::abs(dt - st) <= 1e-12 * (1.0 + std::abs(st)));

    CHECK(irssense::kern::sumsq(a.data(), n) ==
          doctest::Approx(irssense::kern::scalar::sumsq(a.data(), n)).epsilon(1e-12));

    std::vector<cd> out_d(n), out_s(n);
    irssense::kern::cmul(a.data(), b.data(), out_d.data(), n);
    irssense::kern::scalar::cmul(a.data(), b.data(), out_s.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(out_d[i] - out_s[i]) <= 1e-14);

    std::vector<cd> y_d = c, y_s = c;
    const cd alpha{0.3, -1.7};
    irssense::kern::caxpy(alpha, a.data(), y_d.data(), n);
    irssense::kern::scalar::caxpy(alpha, a.data(), y_s.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y_d[i] - y_s[i]) <= 1e-13);
  }
}

TEST_CASE("kernels match a naive oracle") {
  RngStream rng(7);
  const std::size_t n = 37;
  const auto a = random_vec(rng, n);
  const auto b = random_vec(rng, n);
  const auto c = random_vec(rng, n);

  cd du{}, dc{}, dt{};
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    du += a[i] * b[i];
    dc += std::conj(a[i]) * b[i];
    dt += a[i] * b[i] * c[i];
    sq += std::norm(a[i]);
  }
  CHECK(std::abs(irssense::kern::cdotu(a.data(), b.data(), n) - du) < 1e-12);
  CHECK(std::abs(irssense::kern::cdotc(a.data(), b.data(), n) - dc) < 1e-12);
  CHECK(std::abs(irssense::kern::tdotu(a.data(), b.data(), c.data(), n) - dt) < 1e-12);
  CHECK(irssense::kern::sumsq(a.data(), n) == doctest::Approx(sq).epsilon(1e-12));
}

TEST_CASE("sumsq equals cdotc of a vector with itself") {
  RngStream rng(11);
  const auto a = random_vec(rng, 53);
  const cd self = irssense::kern::cdotc(a.data(), a.data(), a.size());
  CHECK(std::abs(self.imag()) < 1e-12);
  CHECK(self.real() == doctest::Approx(irssense::kern::sumsq(a.data(), a.size())));
  CHECK(self.real() >= 0.0);
}

TEST_CASE("dispatcher reports a known variant") {
  const std::string& v = irssense::kern::active_variant();
  CHECK((v == "scalar" || v == "avx2" || v == "neon"));
}
