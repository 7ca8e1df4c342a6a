#ifndef LIOUVILLE_GRID_HPP
#define LIOUVILLE_GRID_HPP

#include <vector>

#include "liouville/geometry.hpp"

namespace liouville {

// Collocation grid: Gauss-Legendre colatitude rows x uniform longitude,
// mapped to the plane by stereographic projection z = tan(theta/2) e^{i phi}.
// The product rule integrates spherical harmonics exactly through degree
// 2 l_max against the area measure g d^2x.
struct SphereGrid {
  int l_max = 0;
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> cos_theta;  // per row
  std::vector<double> sin_theta;
  std::vector<double> theta;
  std::vector<double> row_weight;        // Gauss-Legendre weight per row
  std::vector<Complex> nodes;            // row-major, size n_theta * n_phi
  std::vector<double> weights;           // for sum w_i f(z_i) ~ integral f g d^2x
  std::vector<double> phi;               // per column

  std::size_t node_count() const { return nodes.size(); }
};

// l_max >= 8 required; smaller grids resolve none of the test problems.
SphereGrid make_grid(int l_max);

// Stereographic coordinate of the sphere point (theta, phi).
inline Complex plane_from_angles(double theta, double phi) {
  double r = std::tan(0.5 * theta);
  return Complex(r * std::cos(phi), r * std::sin(phi));
}

inline void angles_from_plane(const Complex& z, double* theta, double* phi) {
  *theta = 2.0 * std::atan(std::abs(z));
  *phi = std::atan2(z.imag(), z.real());
}

}  // namespace liouville

#endif
