#include "liouville/singular_quadrature.hpp"

#include <cmath>

#include "liouville/quadrature.hpp"

namespace liouville {

double SingularQuadrature::smoothstep(double t, double t0, MaskShape shape,
                                      int poly_order) {
  if (t <= t0) return 0.0;
  if (t >= 1.0) return 1.0;
  double x = (t - t0) / (1.0 - t0);
  switch (shape) {
    case MaskShape::exp_bump: {
      double qa = std::exp(-1.0 / x);
      double qb = std::exp(-1.0 / (1.0 - x));
      return qa / (qa + qb);
    }
    case MaskShape::erf_clip: {
      // Clip where erf is below machine precision so the step is exactly
      // 0 / 1 at the interval ends; 8.3 sigma keeps the clip below 1e-16.
      double sigma = 0.5 / 8.3;
      return 0.5 * (1.0 + std::erf((x - 0.5) / (sigma * std::sqrt(2.0))));
    }
    case MaskShape::poly: {
      // Smoothstep S_N with N = poly_order: the unique degree 2N+1
      // polynomial with N vanishing derivatives at both ends.
      int n = poly_order;
      double s = 0.0;
      double binom_a = 1.0;  // C(n + k, k)
      for (int k = 0; k <= n; ++k) {
        double binom_b = 1.0;  // C(2n + 1, n - k)
        for (int j = 0; j < n - k; ++j)
          binom_b = binom_b * (2 * n + 1 - j) / (j + 1);
        double sk = binom_a * binom_b * std::pow(-x, k);
        s += sk;
        binom_a = binom_a * (n + k + 1) / (k + 1);
      }
      return std::pow(x, n + 1) * s;
    }
  }
  return 0.0;
}

SingularQuadrature::SingularQuadrature(const SingularityConfig& cfg,
                                       int l_max,
                                       SingularQuadratureOptions opts)
    : cfg_(cfg), opts_(opts) {
  if (opts_.r_loc_factor <= 0.0 || opts_.r_loc_factor > 0.45)
    throw ContractError("singular quadrature: r_loc_factor out of (0, 0.45]");
  double d_min = cfg_.size() >= 2 ? cfg_.min_pairwise_distance() : 1.0;
  r_loc_ = opts_.r_loc_factor * d_min;

  grid_ = make_grid(std::max(8, opts_.oversample * l_max));
  transform_ = std::make_unique<SphericalTransform>(grid_, l_max);

  // Mask at global nodes.
  mask_.resize(grid_.node_count(), 1.0);
  for (std::size_t i = 0; i < grid_.node_count(); ++i) {
    double m = 1.0;
    for (std::size_t k = 0; k < cfg_.size(); ++k)
      m *= mask_profile(std::abs(grid_.nodes[i] - cfg_.points[k]) / r_loc_);
    if (opts_.infinity_cell) {
      double az = std::abs(grid_.nodes[i]);
      double t = az > 0.0 ? 1.0 / (az * opts_.r_inf) : 2.0;
      m *= mask_profile(t);
    }
    mask_[i] = m;
  }
  for (std::size_t i = 0; i < grid_.node_count(); ++i)
    if (mask_[i] > 0.0)
      global_.push_back({grid_.nodes[i], grid_.weights[i] * mask_[i]});

  // Local polar cells. The grid weights already represent g d^2x, so the
  // cells integrate f * g against plane polar measure r dr dtheta.
  const double dtheta = 2.0 * M_PI / opts_.n_angular;
  for (std::size_t k = 0; k < cfg_.size(); ++k) {
    double chi = cfg_.weights[k];
    std::vector<double> rr, vv;  // radial nodes, weights for f * r dr
    if (opts_.log_safe) {
      Quadrature1D ts = tanh_sinh_01(std::max(60, 3 * opts_.n_radial));
      for (std::size_t j = 0; j < ts.nodes.size(); ++j) {
        double r = r_loc_ * ts.nodes[j];
        rr.push_back(r);
        vv.push_back(r_loc_ * r_loc_ * ts.weights[j] * ts.nodes[j]);
      }
    } else {
      // Gauss-Jacobi in r with weight r^{1-chi}: exact for the leading
      // power law of f ~ r^{-chi} near z_k.
      Quadrature1D gj = gauss_jacobi(opts_.n_radial, 0.0, 1.0 - chi);
      double scale = std::pow(0.5 * r_loc_, 2.0 - chi);
      for (int j = 0; j < opts_.n_radial; ++j) {
        double r = 0.5 * r_loc_ * (1.0 + gj.nodes[j]);
        rr.push_back(r);
        vv.push_back(scale * gj.weights[j] * std::pow(r, chi));
      }
    }
    for (std::size_t j = 0; j < rr.size(); ++j) {
      double cut = 1.0 - mask_profile(rr[j] / r_loc_);
      if (cut <= 0.0) continue;
      for (int a = 0; a < opts_.n_angular; ++a) {
        double th = (a + 0.5) * dtheta;
        Complex z = cfg_.points[k] +
                    Complex(rr[j] * std::cos(th), rr[j] * std::sin(th));
        local_.push_back({z, vv[j] * cut * dtheta * metric_density(z)});
      }
    }
  }

  if (opts_.infinity_cell) {
    // Cell around the point at infinity in inverted coordinates v = 1/z;
    // g d^2z is invariant under the inversion.
    Quadrature1D ts = tanh_sinh_01(std::max(60, 3 * opts_.n_radial));
    for (std::size_t j = 0; j < ts.nodes.size(); ++j) {
      double rv = opts_.r_inf * ts.nodes[j];
      double v = opts_.r_inf * opts_.r_inf * ts.weights[j] * ts.nodes[j];
      double cut = 1.0 - mask_profile(rv / opts_.r_inf);
      if (cut <= 0.0) continue;
      for (int a = 0; a < opts_.n_angular; ++a) {
        double th = (a + 0.5) * dtheta;
        Complex vz(rv * std::cos(th), rv * std::sin(th));
        Complex z = 1.0 / vz;
        local_.push_back({z, v * cut * dtheta * metric_density(vz)});
      }
    }
  }
}

}  // namespace liouville
