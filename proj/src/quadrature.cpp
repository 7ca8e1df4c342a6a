#include "liouville/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace liouville {

Quadrature1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.weights[i] = w;
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

Quadrature1D gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  const double a = alpha, b = beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double denom = (2 * k + a + b) * (2 * k + a + b + 2);
    double diag;
    if (k == 0)
      diag = (b - a) / (a + b + 2.0);
    else
      diag = (b * b - a * a) / denom;
    J(k, k) = diag;
    if (k + 1 < n) {
      double k1 = k + 1;
      double num, den;
      if (k == 0) {
        num = 4.0 * (1 + a) * (1 + b);
        den = (2 + a + b) * (2 + a + b) * (3 + a + b);
      } else {
        num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
        double t = 2 * k1 + a + b;
        den = t * t * (t + 1) * (t - 1);
      }
      double off = std::sqrt(num / den);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  double mu0 = std::pow(2.0, a + b + 1.0) *
               std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) -
                        std::lgamma(a + b + 2));
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    q.weights[i] = mu0 * v0 * v0;
  }
  return q;
}

Quadrature1D tanh_sinh_01(int n) {
  if (n < 8) throw std::invalid_argument("tanh_sinh_01: n must be >= 8");
  // t range wide enough that the endpoint gap underflows past double
  // resolution. Nodes near 0 are computed in exponential form, not as
  // (1 - tanh)/2, to keep full relative precision where singular
  // integrands need it.
  const double t_max = 4.3;
  const double h = 2.0 * t_max / (n - 1);
  Quadrature1D q;
  for (int j = 0; j < n; ++j) {
    double t = -t_max + j * h;
    double s = 0.5 * M_PI * std::sinh(t);
    double e = std::exp(-2.0 * std::abs(s));
    double gap = e / (1.0 + e);  // distance to the nearer endpoint
    double x = s < 0.0 ? gap : 1.0 - gap;
    // w = (pi h / 4) cosh(t) / cosh^2(s), with 1/cosh^2 = 4 e / (1+e)^2.
    double w = M_PI * h * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
    if (x <= 0.0 || x >= 1.0 || w < 1e-290) continue;
    q.nodes.push_back(x);
    q.weights.push_back(w);
  }
  return q;
}

}  // namespace liouville
