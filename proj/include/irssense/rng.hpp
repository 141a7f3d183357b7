#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace irssense {

// Stream derivation is bit-exact and documented in the README:
//   mix64(seed, trial, tag) = f(f(f(seed ^ K) ^ trial) ^ tag)
// where K = 0x9e3779b97f4a7c15 and f is the splitmix64 finalizer
//   z ^= z >> 30;  z *= 0xbf58476d1ce4e5b9;
//   z ^= z >> 27;  z *= 0x94d049bb133111eb;
//   z ^= z >> 31;
// Purpose tags are FNV-1a 64-bit hashes of the tag string.
std::uint64_t splitmix64_fin(std::uint64_t z);
std::uint64_t mix64(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag);
std::uint64_t fnv1a64(std::string_view s);

// Deterministic splitmix64 generator with a hand-rolled Box-Muller
// transform, so streams are reproducible across platforms and standard
// library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  // Circular complex Gaussian with E|z|^2 = power.
  std::complex<double> cgaussian(double power);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream for (master_seed, trial_index, purpose) — order-independent across
// trials, so parallel Monte Carlo runs reproduce bit-identically.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t trial_index,
                        std::string_view purpose);

}  // namespace irssense
