#pragma once

// Seedable, splittable 64-bit random stream (PCG64 XSL-RR 128/64).
// Identical (seed, stream) pairs yield identical draw sequences; distinct
// stream ids give independently usable streams.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sepbayes {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {
    const u128 initstate = make128(seed, 0x243f6a8885a308d3ULL);
    const u128 initseq = make128(stream, 0x13198a2e03707344ULL);
    state_ = 0;
    inc_ = (initseq << 1) | 1u;
    step();
    state_ += initstate;
    step();
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept {
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return rotr(xored, rot);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (no cached second value, so the draw
  // sequence is a pure function of call order).
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_ * u2);
  }

  // Exponential with rate 1.
  double exponential() noexcept { return -std::log(uniform()); }

 private:
  using u128 = unsigned __int128;
  static constexpr double pi_ = 3.141592653589793238462643383279502884;

  static std::uint64_t splitmix(std::uint64_t& x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static u128 make128(std::uint64_t base, std::uint64_t salt) noexcept {
    std::uint64_t s = base ^ salt;
    const std::uint64_t hi = splitmix(s);
    const std::uint64_t lo = splitmix(s);
    return (u128(hi) << 64) | lo;
  }

  static std::uint64_t rotr(std::uint64_t v, unsigned r) noexcept {
    return (v >> r) | (v << ((64u - r) & 63u));
  }

  void step() noexcept { state_ = state_ * mult_ + inc_; }

  static constexpr u128 mult_ =
      (u128(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

  u128 state_ = 0;
  u128 inc_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

}  // namespace sepbayes
