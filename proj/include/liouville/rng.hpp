#ifndef LIOUVILLE_RNG_HPP
#define LIOUVILLE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace liouville {

// Counter-based generator (Philox-4x32-10). A draw is addressed by
// (seed, stream, counter), so parallel workers can own disjoint streams
// and reproduce samples bitwise regardless of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on the open interval (0,1).
  double uniform() {
    return ((next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(6.283185307179586476925287 * u2);
    double s = std::sin(6.283185307179586476925287 * u2);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Position in the stream, exposed so batch code can skip ahead.
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) {
    counter_ = c;
    have_spare_ = false;
    buffered_ = 0;
  }

  std::uint64_t next_u64() {
    if (buffered_ == 0) refill();
    std::uint64_t lo = out_[4 - buffered_];
    std::uint64_t hi = out_[4 - buffered_ + 1];
    buffered_ -= 2;
    return (hi << 32) | lo;
  }

 private:
  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = 0xD2511F53ull * c0;
      std::uint64_t p1 = 0xCD9E8D57ull * c2;
      std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t l0 = static_cast<std::uint32_t>(p0);
      std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t l1 = static_cast<std::uint32_t>(p1);
      std::uint32_t n0 = h1 ^ c1 ^ k0;
      std::uint32_t n1 = l1;
      std::uint32_t n2 = h0 ^ c3 ^ k1;
      std::uint32_t n3 = l0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_[0] = c0;
    out_[1] = c1;
    out_[2] = c2;
    out_[3] = c3;
    buffered_ = 4;
    ++counter_;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int buffered_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace liouville

#endif
