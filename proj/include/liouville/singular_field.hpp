#ifndef LIOUVILLE_SINGULAR_FIELD_HPP
#define LIOUVILLE_SINGULAR_FIELD_HPP

#include <vector>

#include "liouville/field.hpp"
#include "liouville/geometry.hpp"
#include "liouville/local_basis.hpp"

namespace liouville {

// Field of the form
//   f(z) = smooth(z) + constant + a ln g(z) + sum_k b_k ln(1 / |z - z_k|)
//          + sum_b d_b zeta_b(z)
// with the smooth part band-limited, the singular logarithms symbolic, and
// optional windowed local corrections zeta_b, so pointwise values and
// complex derivatives stay exact near the centers. The transform pointer
// must outlive the field.
struct SingularField {
  const SphericalTransform* transform = nullptr;
  Eigen::VectorXd smooth_coeffs;
  double constant = 0.0;
  double log_metric_coef = 0.0;
  std::vector<Complex> centers;
  std::vector<double> log_coefs;
  std::vector<LocalTerm> local_terms;
  Eigen::VectorXd local_coefs;

  double evaluate(const Complex& z) const {
    double v = transform->evaluate(smooth_coeffs, z) + constant +
               log_metric_coef * log_metric_density(z);
    for (std::size_t k = 0; k < centers.size(); ++k)
      v -= log_coefs[k] * std::log(std::abs(z - centers[k]));
    for (std::size_t b = 0; b < local_terms.size(); ++b)
      v += local_coefs(b) * local_terms[b].value(z);
    return v;
  }

  // f, df/dz, d^2f/dz^2 with d/dz = (d/dx - i d/dy) / 2.
  void derivs(const Complex& z, double* f, Complex* fz, Complex* fzz) const {
    transform->evaluate_derivs(smooth_coeffs, z, f, fz, fzz);
    double r2 = std::norm(z);
    Complex zb = std::conj(z);
    *f += constant + log_metric_coef * log_metric_density(z);
    *fz += log_metric_coef * (-2.0 * zb / (1.0 + r2));
    *fzz += log_metric_coef * (2.0 * zb * zb / ((1.0 + r2) * (1.0 + r2)));
    for (std::size_t k = 0; k < centers.size(); ++k) {
      Complex d = z - centers[k];
      *f -= log_coefs[k] * std::log(std::abs(d));
      *fz -= log_coefs[k] * 0.5 / d;
      *fzz += log_coefs[k] * 0.5 / (d * d);
    }
    for (std::size_t b = 0; b < local_terms.size(); ++b) {
      double tf;
      Complex tz, tzz;
      local_terms[b].derivs(z, &tf, &tz, &tzz);
      *f += local_coefs(b) * tf;
      *fz += local_coefs(b) * tz;
      *fzz += local_coefs(b) * tzz;
    }
  }

  // Flat-chart Laplacian: the logarithms are harmonic away from the
  // centers, ln g contributes -2 g, the smooth part goes through the
  // spectral Laplace-Beltrami operator (flat = g times round).
  double laplacian_flat(const Complex& z) const {
    Eigen::VectorXd lap = laplacian_round(smooth_coeffs);
    double v = metric_density(z) *
               (transform->evaluate(lap, z) - 2.0 * log_metric_coef);
    for (std::size_t b = 0; b < local_terms.size(); ++b)
      v += local_coefs(b) * local_terms[b].laplacian_flat(z);
    return v;
  }
};

}  // namespace liouville

#endif
