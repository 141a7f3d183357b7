#include "irssense/rng.hpp"

#include <cmath>

namespace irssense {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t splitmix64_fin(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

std::uint64_t mix64(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) {
  return splitmix64_fin(splitmix64_fin(splitmix64_fin(seed ^ kGolden) ^ trial) ^ tag);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return splitmix64_fin(state_);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

std::complex<double> RngStream::cgaussian(double power) {
  const double s = std::sqrt(power / 2.0);
  const double re = gaussian();
  const double im = gaussian();
  return {s * re, s * im};
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t trial_index,
                        std::string_view purpose) {
  return RngStream(mix64(master_seed, trial_index, fnv1a64(purpose)));
}

}  // namespace irssense
