#include <cmath>

#include "doctest.h"
#include "liouville/field.hpp"
#include "liouville/geometry.hpp"
#include "liouville/grid.hpp"
#include "liouville/harmonics.hpp"
#include "liouville/rng.hpp"
#include "liouville/singular_quadrature.hpp"
#include "liouville/transform.hpp"

using namespace liouville;

namespace {

SingularityConfig benchmark_config() {
  SingularityConfig cfg;
  cfg.points = {Complex(0, 0), Complex(1, 0), Complex(-1, 0)};
  cfg.weights = {1.5, 1.5, 1.5};
  cfg.lambda = 1.0;
  return cfg;
}

Eigen::VectorXd random_band_limited(const SphericalTransform& t, int l_band,
                                    std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(t.n_coeff());
  for (int l = 1; l <= l_band; ++l)
    for (int m = -l; m <= l; ++m)
      c(sh_index(l, m)) = rng.normal() / (1.0 + l * l);
  return c;
}

}  // namespace

TEST_CASE("metric density point values and total area") {
  CHECK(metric_density(Complex(0, 0)) == doctest::Approx(4.0));
  CHECK(metric_density(Complex(1, 0)) == doctest::Approx(1.0));
  SphereGrid g = make_grid(16);
  double area = 0;
  for (double w : g.weights) area += w;
  CHECK(area == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
}

TEST_CASE("green function closed form, symmetry, vanishing mean") {
  CHECK(green_function(Complex(0, 0), Complex(1, 0)) ==
        doctest::Approx(0.5 * std::log(2.0) - 0.5).epsilon(1e-14));
  CounterRng rng(5, 0);
  for (int i = 0; i < 10; ++i) {
    Complex x(rng.normal(), rng.normal()), y(rng.normal(), rng.normal());
    CHECK(green_function(x, y) ==
          doctest::Approx(green_function(y, x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(green_function(Complex(1, 1), Complex(1, 1)),
                  SingularEvaluationError);

  // g-mean of G(0, .): the integrand has a log singularity at the origin
  // and is continuous-but-not-smooth at infinity, so use the safe cells.
  SingularityConfig one_point;
  one_point.points = {Complex(0, 0)};
  one_point.weights = {0.0};
  one_point.lambda = 1.0;
  SingularQuadratureOptions o;
  o.log_safe = true;
  o.infinity_cell = true;
  SingularQuadrature quad(one_point, 64, o);
  double mean = quad.integrate(
      [](Complex z) { return green_function(Complex(0, 0), z); });
  CHECK(std::abs(mean) < 1e-8);
}

TEST_CASE("grid node count and harmonic exactness") {
  SphereGrid g = make_grid(16);
  CHECK(g.node_count() == 17u * 33u);
  CHECK_THROWS_AS(make_grid(7), ContractError);

  SphericalTransform t(g);
  // integral Y_{2,1}^2 dA = 1; integral Y_{l,m} dA = 0 for l >= 1.
  Eigen::VectorXd y21 = Eigen::VectorXd::Zero(t.n_coeff());
  y21(sh_index(2, 1)) = 1.0;
  Eigen::VectorXd v = t.inverse(y21);
  double norm = 0, mean = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    norm += g.weights[i] * v(i) * v(i);
    mean += g.weights[i] * v(i);
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(mean) < 1e-12);
}

TEST_CASE("transform round trip and point evaluation") {
  SphereGrid g = make_grid(24);
  SphericalTransform t(g);
  Eigen::VectorXd c = random_band_limited(t, 24, 11);
  c(0) = 0.7;  // include a mean
  Eigen::VectorXd v = t.inverse(c);
  Eigen::VectorXd c2 = t.forward(v);
  CHECK((c - c2).lpNorm<Eigen::Infinity>() < 1e-12);

  // constant round trip
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.node_count());
  Eigen::VectorXd cc = t.forward(ones);
  CHECK(cc(0) == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  for (int a = 1; a < t.n_coeff(); ++a) CHECK(std::abs(cc(a)) < 1e-13);

  // evaluate() agrees with nodal values
  for (std::size_t i : {std::size_t(5), std::size_t(100), std::size_t(400)})
    CHECK(t.evaluate(c, g.nodes[i]) == doctest::Approx(v(i)).epsilon(1e-11));

  // serial and parallel paths are bitwise identical
  Eigen::VectorXd cs = t.forward(v, false);
  Eigen::VectorXd vp = t.inverse(c, true), vs = t.inverse(c, false);
  for (int a = 0; a < t.n_coeff(); ++a) CHECK(c2(a) == cs(a));
  for (Eigen::Index i = 0; i < vp.size(); ++i) CHECK(vp(i) == vs(i));
}

TEST_CASE("laplacian eigenvalues, mean-zero commutation, dirichlet energy") {
  SphereGrid g = make_grid(16);
  SphericalTransform t(g);
  Eigen::VectorXd y10 = Eigen::VectorXd::Zero(t.n_coeff());
  y10(sh_index(1, 0)) = 1.0;
  Eigen::VectorXd lap = laplacian_round(y10);
  CHECK(lap(sh_index(1, 0)) == doctest::Approx(-2.0));
  CHECK(dirichlet_energy(y10) == doctest::Approx(2.0 / (4.0 * M_PI)));
  CHECK(dirichlet_energy(3.0 * y10) ==
        doctest::Approx(9.0 * 2.0 / (4.0 * M_PI)));

  Eigen::VectorXd c = random_band_limited(t, 16, 3);
  c(0) = 1.0;
  Eigen::VectorXd a = laplacian_round(project_mean_zero(c));
  Eigen::VectorXd b = project_mean_zero(laplacian_round(c));
  CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);

  // quadrature cross-check of the Parseval identity:
  // (1/4pi) integral |grad f|^2 d^2z via -(1/4pi) integral f (Delta_g f) dA.
  Eigen::VectorXd fvals = t.inverse(c);
  Eigen::VectorXd lvals = t.inverse(laplacian_round(c));
  double quad = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    quad -= g.weights[i] * fvals(i) * lvals(i);
  CHECK(quad / (4.0 * M_PI) ==
        doctest::Approx(dirichlet_energy(c)).epsilon(1e-11));
}

TEST_CASE("complex derivatives against closed forms") {
  SphereGrid g = make_grid(32);
  SphericalTransform t(g);
  // f = sin(theta) cos(phi) = (z + conj z)/(1+|z|^2) is degree-1 band
  // limited: it is proportional to Y_{1,1}.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(t.n_coeff());
  double a11 = std::sqrt(3.0 / (4.0 * M_PI));
  c(sh_index(1, 1)) = 1.0 / a11;  // so that f = sin(theta) cos(phi)

  for (Complex z : {Complex(0.3, 0.2), Complex(-0.8, 0.5), Complex(2.0, -1.0)}) {
    double f;
    Complex fz, fzz;
    t.evaluate_derivs(c, z, &f, &fz, &fzz);
    Complex zb = std::conj(z);
    double r2 = std::norm(z);
    double f_exact = 2.0 * z.real() / (1.0 + r2);
    Complex fz_exact = (1.0 - zb * zb) / ((1.0 + r2) * (1.0 + r2));
    Complex fzz_exact =
        -2.0 * zb * (1.0 - zb * zb) / std::pow(1.0 + r2, 3.0);
    CHECK(f == doctest::Approx(f_exact).epsilon(1e-11));
    CHECK(std::abs(fz - fz_exact) < 1e-11);
    CHECK(std::abs(fzz - fzz_exact) < 1e-10);
  }
}

TEST_CASE("complex derivatives against Richardson finite differences") {
  SphereGrid g = make_grid(24);
  SphericalTransform t(g);
  Eigen::VectorXd c = random_band_limited(t, 12, 21);
  Complex z(0.4, -0.7);
  double f;
  Complex fz, fzz;
  t.evaluate_derivs(c, z, &f, &fz, &fzz);

  auto ev = [&](Complex p) { return t.evaluate(c, p); };
  auto fd = [&](double h) {
    double fx = (ev(z + h) - ev(z - h)) / (2 * h);
    double fy = (ev(z + Complex(0, h)) - ev(z - Complex(0, h))) / (2 * h);
    return Complex(0.5 * fx, -0.5 * fy);
  };
  Complex d1 = fd(1e-3), d2 = fd(5e-4);
  Complex rich = (4.0 * d2 - d1) / 3.0;
  CHECK(std::abs(fz - rich) / std::abs(rich) < 1e-6);

  auto fdxx = [&](double h) {
    // d2/dz2 = (1/4)(fxx - fyy) - (i/2) fxy
    double fxx = (ev(z + h) - 2 * ev(z) + ev(z - h)) / (h * h);
    double fyy =
        (ev(z + Complex(0, h)) - 2 * ev(z) + ev(z - Complex(0, h))) / (h * h);
    double fxy = (ev(z + Complex(h, h)) - ev(z + Complex(h, -h)) -
                  ev(z + Complex(-h, h)) + ev(z + Complex(-h, -h))) /
                 (4 * h * h);
    return Complex(0.25 * (fxx - fyy), -0.5 * fxy);
  };
  Complex s1 = fdxx(2e-3), s2 = fdxx(1e-3);
  Complex rich2 = (4.0 * s2 - s1) / 3.0;
  CHECK(std::abs(fzz - rich2) < 1e-5 * (1.0 + std::abs(rich2)));
}

TEST_CASE("green spectral identity: truncated legendre kernel converges") {
  std::pair<Complex, Complex> pairs[3] = {
      {Complex(0, 0), Complex(1, 0)},
      {Complex(0.5, 0.5), Complex(-1, 0.2)},
      {Complex(2, 0), Complex(0, -0.7)}};
  for (auto& pr : pairs) {
    double ct = cos_sphere_angle(pr.first, pr.second);
    double exact = green_function(pr.first, pr.second);
    double err_prev = 1e9;
    for (int L : {64, 256, 1024}) {
      double s = 0;
      for (int l = 1; l <= L; ++l)
        s += (2.0 * l + 1.0) / (2.0 * l * (l + 1.0)) * legendre_pl(l, ct);
      double err = std::abs(s - exact);
      CHECK(err < err_prev);
      err_prev = err;
    }
    CHECK(err_prev < 2e-3);
  }
}

TEST_CASE("singularity config validation") {
  SingularityConfig cfg = benchmark_config();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.c0() == doctest::Approx(0.5));
  cfg.weights[0] = 2.0;
  CHECK_THROWS_AS(cfg.validate(), AdmissibilityError);
  cfg = benchmark_config();
  cfg.weights = {1.3, 1.3, 1.3};  // sum 3.9 < 4
  CHECK_THROWS_AS(cfg.validate(), AdmissibilityError);
  cfg = benchmark_config();
  cfg.points[1] = cfg.points[2];
  CHECK_THROWS_AS(cfg.validate(), ContractError);
}

TEST_CASE("singular weight: local exponent and trivial case") {
  SingularityConfig cfg = benchmark_config();
  // chi = 0 everywhere: w == 1
  SingularityConfig flat = cfg;
  flat.weights = {0, 0, 0};
  CHECK(singular_weight(flat, Complex(0.3, 0.4)) == doctest::Approx(1.0));

  // ln w(z_k + eps) + chi_k ln eps stays bounded as eps -> 0
  double prev = 0;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    double v = log_singular_weight(cfg, cfg.points[1] + Complex(eps, 0)) +
               cfg.weights[1] * std::log(eps);
    if (prev != 0) CHECK(std::abs(v - prev) < 0.05);
    prev = v;
  }
  // and matches the regular-part helper at the point itself
  CHECK(prev == doctest::Approx(log_weight_regular_at(cfg, 1, cfg.points[1]))
                    .epsilon(1e-6));
}

TEST_CASE("quadrature of ln g and ln w") {
  SingularityConfig cfg = benchmark_config();

  // (1/4pi) integral ln g dg = 2 (ln 2 - 1): ln g has a log singularity at
  // the chart's point at infinity, handled by the inverted cell.
  SingularityConfig empty;
  empty.lambda = 1.0;
  SingularQuadratureOptions o;
  o.log_safe = true;
  o.infinity_cell = true;
  SingularQuadrature quad(empty, 64, o);
  double v = quad.integrate([](Complex z) { return log_metric_density(z); });
  CHECK(v / (4.0 * M_PI) ==
        doctest::Approx(2.0 * (std::log(2.0) - 1.0)).epsilon(1e-8));

  // integral ln w dg = 0 (log singularities at the z_k)
  SingularQuadratureOptions ow;
  ow.log_safe = true;
  SingularQuadrature quadw(cfg, 64, ow);
  double vw =
      quadw.integrate([&](Complex z) { return log_singular_weight(cfg, z); });
  CHECK(std::abs(vw) < 1e-7);
}

TEST_CASE("singular quadrature of w g: refinement consistency") {
  SingularityConfig cfg = benchmark_config();
  auto value = [&](int l_max, SingularQuadratureOptions o) {
    SingularQuadrature q(cfg, l_max, o);
    return q.integrate([&](Complex z) { return singular_weight(cfg, z); });
  };
  SingularQuadratureOptions a;           // defaults
  SingularQuadratureOptions b;
  b.n_radial = 40;
  b.n_angular = 96;
  b.r_loc_factor = 0.3;
  b.mask_start = 0.15;
  b.poly_order = 11;
  b.oversample = 3;
  double v64 = value(64, a);
  double v64b = value(64, b);
  double v96 = value(96, a);
  CAPTURE(v64);
  CAPTURE(v64b);
  CAPTURE(v96);
  CHECK(std::abs(v64 - v64b) / std::abs(v64b) < 1e-8);
  CHECK(std::abs(v64 - v96) / std::abs(v96) < 1e-8);
}
