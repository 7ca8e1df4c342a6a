#ifndef LIOUVILLE_TRANSFORM_HPP
#define LIOUVILLE_TRANSFORM_HPP

#include <Eigen/Dense>

#include "liouville/grid.hpp"
#include "liouville/harmonics.hpp"

namespace liouville {

// Forward/inverse spherical-harmonic transform bound to a grid. The basis
// degree may be lower than the grid degree (oversampled quadrature); by
// default they coincide. Both directions are exact round-trips for
// band-limited data and bitwise deterministic: parallelism splits over
// independent output entries only, never over reduction order.
class SphericalTransform {
 public:
  explicit SphericalTransform(const SphereGrid& grid, int basis_l_max = -1);

  int l_max() const { return l_max_; }
  int n_coeff() const { return sh_count(l_max_); }
  const SphereGrid& grid() const { return *grid_; }

  // values at grid nodes -> coefficients (length (l_max+1)^2).
  Eigen::VectorXd forward(const Eigen::VectorXd& values,
                          bool parallel = true) const;
  // coefficients -> values at grid nodes.
  Eigen::VectorXd inverse(const Eigen::VectorXd& coeffs,
                          bool parallel = true) const;

  // Spectral interpolant at an arbitrary chart point.
  double evaluate(const Eigen::VectorXd& coeffs, const Complex& z) const;

  // f, d/dz and d^2/dz^2 of the interpolant (complex convention
  // d/dz = (d/dx - i d/dy)/2). Degrades near the poles of the chart;
  // callers keep evaluation points away from theta = 0, pi.
  void evaluate_derivs(const Eigen::VectorXd& coeffs, const Complex& z,
                       double* f, Complex* fz, Complex* fzz) const;

  // Row of basis values Y_a(z) for all a < n_coeff().
  void basis_row(const Complex& z, double* out) const;

 private:
  const SphereGrid* grid_;
  int l_max_;
  int n_packed_;
  // Associated Legendre values per theta row, packed (l, m >= 0).
  std::vector<double> plm_;
  // cos(m phi_j), sin(m phi_j) tables, n_phi x (l_max+1).
  std::vector<double> cosm_, sinm_;
};

}  // namespace liouville

#endif
