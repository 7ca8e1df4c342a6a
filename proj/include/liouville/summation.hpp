#ifndef LIOUVILLE_SUMMATION_HPP
#define LIOUVILLE_SUMMATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace liouville {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Chunk size shared by every Monte Carlo reduction in the artifact. The
// chunking (not the thread count) defines the summation order, so estimates
// are bitwise reproducible however the chunks were computed.
inline constexpr std::size_t kSumChunk = 4096;

// Sum of x[0..n) in fixed-chunk order with per-chunk compensation.
inline double chunked_sum(const double* x, std::size_t n) {
  CompensatedSum total;
  for (std::size_t base = 0; base < n; base += kSumChunk) {
    std::size_t end = base + kSumChunk < n ? base + kSumChunk : n;
    CompensatedSum chunk;
    for (std::size_t i = base; i < end; ++i) chunk.add(x[i]);
    total.add(chunk.value());
  }
  return total.value();
}

inline double chunked_sum(const std::vector<double>& x) {
  return chunked_sum(x.data(), x.size());
}

// log(sum(exp(x_i - shift))) accumulated in fixed-chunk order; the caller
// supplies the shift (typically max x_i) to keep everything finite.
inline double chunked_sum_exp(const std::vector<double>& x, double shift) {
  std::vector<double> e(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) e[i] = std::exp(x[i] - shift);
  return chunked_sum(e);
}

}  // namespace liouville

#endif
