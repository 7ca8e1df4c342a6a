#ifndef LIOUVILLE_GEOMETRY_HPP
#define LIOUVILLE_GEOMETRY_HPP

#include <complex>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

using Complex = std::complex<double>;

// Constant in the sphere Green function, G = ln(1/|x-y|) - (ln g(x) +
// ln g(y))/4 + kappa. The value ln 2 - 1/2 makes the g-mean of G vanish.
inline constexpr double kKappa = 0.19314718055994530942;  // ln 2 - 1/2

// Round metric density g(z) = 4/(1+|z|^2)^2.
inline double metric_density(const Complex& z) {
  double r2 = std::norm(z);
  double d = 1.0 + r2;
  return 4.0 / (d * d);
}

inline double log_metric_density(const Complex& z) {
  return std::log(4.0) - 2.0 * std::log1p(std::norm(z));
}

// Green function of the round Laplacian, normalized so that
// Delta_g G(., y) = -2 pi (delta_y - 1/(4 pi)) and the g-mean vanishes.
double green_function(const Complex& x, const Complex& y);

// Prescribed conical data: points z_k, orders chi_k, cosmological constant.
struct SingularityConfig {
  std::vector<Complex> points;
  std::vector<double> weights;
  double lambda = 1.0;

  std::size_t size() const { return points.size(); }
  double sum_chi() const;
  // c_0 = sum chi_k - 4, positive under the negative-curvature condition.
  double c0() const { return sum_chi() - 4.0; }
  double min_pairwise_distance() const;

  // Throws ContractError / AdmissibilityError; negative-curvature mode
  // additionally demands sum chi_k > 4.
  void validate(bool require_negative_curvature = true) const;
};

// w(z) = exp(sum_k chi_k G(z_k, z)); blows up like |z-z_k|^{-chi_k}.
double singular_weight(const SingularityConfig& cfg, const Complex& z);
double log_singular_weight(const SingularityConfig& cfg, const Complex& z);

// log of the smooth factor w(z) * |z-z_k|^{chi_k} near the k-th point,
// finite at z = z_k itself. Used by the local quadrature cells.
double log_weight_regular_at(const SingularityConfig& cfg, std::size_t k,
                             const Complex& z);

// Cosine of the geodesic angle between the sphere points with stereographic
// coordinates x and y.
inline double cos_sphere_angle(const Complex& x, const Complex& y) {
  double num = 2.0 * std::norm(x - y);
  double den = (1.0 + std::norm(x)) * (1.0 + std::norm(y));
  return 1.0 - num / den;
}

}  // namespace liouville

#endif
