#include "liouville/grid.hpp"

#include <cmath>

#include "liouville/quadrature.hpp"

namespace liouville {

SphereGrid make_grid(int l_max) {
  if (l_max < 8)
    throw ContractError("make_grid: l_max must be at least 8");
  SphereGrid grid;
  grid.l_max = l_max;
  grid.n_theta = l_max + 1;
  grid.n_phi = 2 * l_max + 1;
  Quadrature1D gl = gauss_legendre(grid.n_theta);

  grid.cos_theta.resize(grid.n_theta);
  grid.sin_theta.resize(grid.n_theta);
  grid.theta.resize(grid.n_theta);
  grid.row_weight.resize(grid.n_theta);
  grid.phi.resize(grid.n_phi);
  grid.nodes.resize(static_cast<std::size_t>(grid.n_theta) * grid.n_phi);
  grid.weights.resize(grid.nodes.size());

  // Nodes listed from the north pole (theta = 0, z = 0) outward, so
  // cos theta descends.
  for (int i = 0; i < grid.n_theta; ++i) {
    double x = gl.nodes[grid.n_theta - 1 - i];
    grid.cos_theta[i] = x;
    grid.sin_theta[i] = std::sqrt(1.0 - x * x);
    grid.theta[i] = std::acos(x);
    grid.row_weight[i] = gl.weights[grid.n_theta - 1 - i];
  }
  double dphi = 2.0 * M_PI / grid.n_phi;
  for (int j = 0; j < grid.n_phi; ++j) grid.phi[j] = j * dphi;

  for (int i = 0; i < grid.n_theta; ++i) {
    // tan(theta/2) = sin theta / (1 + cos theta), stable for theta < pi.
    double r = grid.sin_theta[i] / (1.0 + grid.cos_theta[i]);
    for (int j = 0; j < grid.n_phi; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * grid.n_phi + j;
      grid.nodes[idx] =
          Complex(r * std::cos(grid.phi[j]), r * std::sin(grid.phi[j]));
      grid.weights[idx] = grid.row_weight[i] * dphi;
    }
  }
  return grid;
}

}  // namespace liouville
