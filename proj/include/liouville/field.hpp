#ifndef LIOUVILLE_FIELD_HPP
#define LIOUVILLE_FIELD_HPP

#include "liouville/harmonics.hpp"
#include "liouville/transform.hpp"

namespace liouville {

// Function on the sphere stored both ways; values and coefficients are kept
// consistent by construction (see make_field_*).
struct ScalarField {
  const SphereGrid* grid = nullptr;
  Eigen::VectorXd values;
  Eigen::VectorXd coeffs;
  bool mean_zero = false;
};

inline ScalarField make_field_from_coeffs(const SphericalTransform& t,
                                          const Eigen::VectorXd& coeffs) {
  ScalarField f;
  f.grid = &t.grid();
  f.coeffs = coeffs;
  f.values = t.inverse(coeffs);
  f.mean_zero = coeffs(0) == 0.0;
  return f;
}

inline ScalarField make_field_from_values(const SphericalTransform& t,
                                          const Eigen::VectorXd& values) {
  ScalarField f;
  f.grid = &t.grid();
  f.values = values;
  f.coeffs = t.forward(values);
  f.mean_zero = f.coeffs(0) == 0.0;
  return f;
}

// Laplace-Beltrami of the round unit sphere: multiply by -l(l+1).
inline Eigen::VectorXd laplacian_round(const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd out(coeffs.size());
  int l_max = static_cast<int>(std::sqrt(static_cast<double>(coeffs.size()))) - 1;
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m)
      out(sh_index(l, m)) = -static_cast<double>(l) * (l + 1) *
                            coeffs(sh_index(l, m));
  return out;
}

// (1/4 pi) integral |grad f|^2 d^2z, by Parseval on the orthonormal basis.
inline double dirichlet_energy(const Eigen::VectorXd& coeffs) {
  int l_max = static_cast<int>(std::sqrt(static_cast<double>(coeffs.size()))) - 1;
  double acc = 0.0;
  for (int l = 1; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      double c = coeffs(sh_index(l, m));
      acc += static_cast<double>(l) * (l + 1) * c * c;
    }
  return acc / (4.0 * M_PI);
}

// Drop the l = 0 coefficient (the g-mean is sqrt(4 pi) times it).
inline Eigen::VectorXd project_mean_zero(Eigen::VectorXd coeffs) {
  coeffs(0) = 0.0;
  return coeffs;
}

inline double g_mean(const Eigen::VectorXd& coeffs) {
  // mean against g d^2x / (4 pi); Y_00 = 1/sqrt(4 pi).
  return coeffs(0) / std::sqrt(4.0 * M_PI);
}

}  // namespace liouville

#endif
