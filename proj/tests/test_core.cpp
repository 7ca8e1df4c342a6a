#include <cmath>
#include <vector>

#include "doctest.h"
#include "liouville/quadrature.hpp"
#include "liouville/rng.hpp"
#include "liouville/summation.hpp"

using namespace liouville;

TEST_CASE("counter rng reproducibility and stream independence") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  // Different stream, same seed: decorrelated sequence.
  a.set_counter(0);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.uniform() == c.uniform()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("rng normal and gamma moments") {
  CounterRng r(123, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);

  CounterRng g(99, 1);
  double shape = 2.125;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = g.gamma(shape);
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  CHECK(m1 == doctest::Approx(shape).epsilon(0.02));
  CHECK(m2 - m1 * m1 == doctest::Approx(shape).epsilon(0.05));
}

TEST_CASE("compensated sum recovers cancelled small terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("chunked sum matches long-double reference") {
  CounterRng r(7, 0);
  std::vector<double> x(100000);
  long double ref = 0.0L;
  for (double& v : x) {
    v = r.normal() * std::exp(4.0 * r.uniform());
    ref += v;
  }
  double got = chunked_sum(x);
  CHECK(got == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
}

TEST_CASE("gauss-legendre exactness") {
  Quadrature1D q = gauss_legendre(12);
  // integral x^k over [-1,1]
  for (int k = 0; k <= 23; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
      s += q.weights[i] * std::pow(q.nodes[i], k);
    double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("gauss-jacobi integrates the conical power law") {
  // weight (1+x)^{-0.5} on [-1,1]: integral (1+x)^{-1/2} x^2 dx.
  Quadrature1D q = gauss_jacobi(16, 0.0, -0.5);
  double s = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    s += q.weights[i] * q.nodes[i] * q.nodes[i];
  // integral_{-1}^{1} x^2/sqrt(1+x) dx = 2*sqrt(2)*(1 - 2/3... ) computed:
  // substitute u = 1+x: integral_0^2 (u-1)^2 u^{-1/2} du
  //  = [2/5 u^{5/2} - 4/3 u^{3/2} + 2 u^{1/2}]_0^2.
  double u = 2.0;
  double exact = 2.0 / 5.0 * std::pow(u, 2.5) - 4.0 / 3.0 * std::pow(u, 1.5) +
                 2.0 * std::sqrt(u);
  CHECK(s == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles endpoint power and log singularities") {
  Quadrature1D q = tanh_sinh_01(150);
  double s_pow = 0, s_log = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    s_pow += q.weights[i] / std::sqrt(q.nodes[i]);
    s_log += q.weights[i] * std::log(q.nodes[i]);
  }
  CHECK(s_pow == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s_log == doctest::Approx(-1.0).epsilon(1e-12));
}
