#include "liouville/local_basis.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

namespace {

// Degree 2N+1 smoothstep on [0, 1] and its first two derivatives.
double smoothstep_poly(int n, double x) {
  double s = 0.0;
  double binom_a = 1.0;  // C(n + k, k)
  for (int k = 0; k <= n; ++k) {
    double binom_b = 1.0;  // C(2n + 1, n - k)
    for (int j = 0; j < n - k; ++j)
      binom_b = binom_b * (2 * n + 1 - j) / (j + 1);
    s += binom_a * binom_b * std::pow(-x, k);
    binom_a = binom_a * (n + k + 1) / (k + 1);
  }
  return std::pow(x, n + 1) * s;
}

double central_binom(int n) {
  double b = 1.0;
  for (int j = 0; j < n; ++j) b = b * (2 * n - j) / (j + 1);
  return b;
}

// S'(x) = (2n+1) C(2n, n) x^n (1-x)^n.
double smoothstep_poly_d1(int n, double x) {
  return (2 * n + 1) * central_binom(n) * std::pow(x * (1.0 - x), n);
}

double smoothstep_poly_d2(int n, double x) {
  return (2 * n + 1) * central_binom(n) * n *
         std::pow(x * (1.0 - x), n - 1) * (1.0 - 2.0 * x);
}

struct Radial {
  double v, d1, d2;
};

// eta(r) = 1 - S((r/R - t0)/(1 - t0)); plateau eta = 1 for r <= t0 R.
Radial window_at(double r, double radius, double t0, int order) {
  double t = r / radius;
  if (t <= t0) return {1.0, 0.0, 0.0};
  if (t >= 1.0) return {0.0, 0.0, 0.0};
  double span = (1.0 - t0) * radius;
  double x = (r - t0 * radius) / span;
  return {1.0 - smoothstep_poly(order, x),
          -smoothstep_poly_d1(order, x) / span,
          -smoothstep_poly_d2(order, x) / (span * span)};
}

}  // namespace

// Radial profile P(r) = eta(r) r^{power} (1 + r^2)^{-(s + |m|)/2} and its
// first two derivatives. The algebraic tail keeps the profile smooth on the
// whole sphere, including at infinity, when no window is applied.
LocalTerm::Radial3 LocalTerm::profile(double r, double power) const {
  Radial w = radius > 0.0 ? window_at(r, radius, plateau, window_order)
                          : Radial{1.0, 0.0, 0.0};
  double rp = std::pow(r, power);
  double rp1 = power * rp / r;
  double rp2 = power * (power - 1.0) * rp / (r * r);

  double q = 0.5 * (s + std::abs(m));
  double u = 1.0 + r * r;
  double g = std::pow(u, -q);
  double g1 = -2.0 * q * r * g / u;
  double g2 = -2.0 * q * g / u - 2.0 * q * r * g1 / u +
              4.0 * q * r * r * g / (u * u);

  double p0 = w.v * rp * g;
  double p1 = w.d1 * rp * g + w.v * rp1 * g + w.v * rp * g1;
  double p2 = w.d2 * rp * g + w.v * rp2 * g + w.v * rp * g2 +
              2.0 * (w.d1 * rp1 * g + w.d1 * rp * g1 + w.v * rp1 * g1);
  return {p0, p1, p2};
}

double LocalTerm::value(const Complex& z) const {
  Complex xi = z - center;
  double r = std::abs(xi);
  if ((radius > 0.0 && r >= radius) || r == 0.0) return 0.0;
  double ang = m >= 0 ? std::cos(m * std::arg(xi))
                      : std::sin(-m * std::arg(xi));
  return scale * profile(r, s).v * ang;
}

void LocalTerm::derivs(const Complex& z, double* f, Complex* fz,
                       Complex* fzz) const {
  Complex xi = z - center;
  double r = std::abs(xi);
  if ((radius > 0.0 && r >= radius) || r == 0.0) {
    *f = 0.0;
    *fz = 0.0;
    *fzz = 0.0;
    return;
  }
  int mm = std::abs(m);
  // F = A(r) xi^mm with A = scale * profile(r, s - mm); the real field is
  // Re F (m >= 0) or Im F (m < 0).
  Radial3 a = profile(r, s - mm);
  double a0 = scale * a.v;
  double a1 = scale * a.d1;
  double a2 = scale * a.d2;

  Complex xib = std::conj(xi);
  Complex xim = std::pow(xi, mm);
  Complex xibm = std::pow(xib, mm);
  Complex dr = xib / (2.0 * r);  // d r / d xi

  Complex d1 = a1 * dr * xim +
               (mm > 0 ? static_cast<double>(mm) * a0 * xim / xi : Complex(0));
  Complex e1 = a1 * dr * xibm;
  Complex d2 = (a2 * xib * xib / (4.0 * r * r) -
                a1 * xib * xib / (4.0 * r * r * r)) * xim +
               (mm > 0 ? 2.0 * static_cast<double>(mm) * a1 * dr * xim / xi
                       : Complex(0)) +
               (mm > 1 ? static_cast<double>(mm) * (mm - 1.0) * a0 * xim /
                             (xi * xi)
                       : Complex(0));
  Complex e2 = xibm * xib * xib / (4.0 * r * r) * (a2 - a1 / r);

  if (m >= 0) {
    *f = 0.5 * ((a0 * xim) + (a0 * xibm)).real();
    *fz = 0.5 * (d1 + e1);
    *fzz = 0.5 * (d2 + e2);
  } else {
    Complex ihalf(0.0, -0.5);
    *f = (ihalf * (a0 * xim - a0 * xibm)).real();
    *fz = ihalf * (d1 - e1);
    *fzz = ihalf * (d2 - e2);
  }
}

double LocalTerm::laplacian_flat(const Complex& z) const {
  Complex xi = z - center;
  double r = std::abs(xi);
  if ((radius > 0.0 && r >= radius) || r == 0.0) return 0.0;
  Radial3 b = profile(r, s);
  double ang = m >= 0 ? std::cos(m * std::arg(xi))
                      : std::sin(-m * std::arg(xi));
  return scale * (b.d2 + b.d1 / r -
                  static_cast<double>(m) * m * b.v / (r * r)) * ang;
}

std::vector<LocalTerm> make_local_terms(const SingularityConfig& cfg,
                                        double s_max, double radius) {
  std::vector<LocalTerm> out;
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    double nu = 2.0 - cfg.weights[k];
    if (nu <= 0.0) continue;
    std::vector<std::pair<long long, int>> seen;
    for (int j = 1; j * nu <= s_max + 1e-12; ++j) {
      for (int n = 0; j * nu + n <= s_max + 1e-12; ++n) {
        double s = j * nu + n;
        for (int m = -n; m <= n; ++m) {
          // Skip (near-)smooth combinations: r^s e^{im theta} is a
          // polynomial in (x, y) when s - |m| is an even integer >= 0.
          double d = s - std::abs(m);
          double frac = d / 2.0 - std::floor(d / 2.0 + 0.025);
          if (std::abs(frac) < 0.025) continue;
          long long key = llround(s * 1e9);
          if (std::find(seen.begin(), seen.end(),
                        std::make_pair(key, m)) != seen.end())
            continue;
          seen.emplace_back(key, m);
          LocalTerm t;
          t.center = cfg.points[k];
          t.s = s;
          t.m = m;
          t.radius = radius;
          out.push_back(t);
        }
      }
    }
  }
  return out;
}

}  // namespace liouville
