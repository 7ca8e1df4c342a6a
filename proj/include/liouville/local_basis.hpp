#ifndef LIOUVILLE_LOCAL_BASIS_HPP
#define LIOUVILLE_LOCAL_BASIS_HPP

#include <vector>

#include "liouville/geometry.hpp"

namespace liouville {

// Singular basis function around one conical point,
//   zeta(z) = scale * eta(r / radius) * r^s (1 + r^2)^{-(s + |m|)/2}
//             * T_m(theta),
// r, theta polar around the center, T_m = cos(m theta) for m >= 0 and
// sin(|m| theta) for m < 0. These capture the non-smooth part of solutions
// near a conical point, where the expansion runs over radial exponents
// j (2 - chi) + n that a truncated harmonic series cannot resolve. The
// algebraic tail makes the function smooth on the rest of the sphere
// (including at infinity), so the only rough feature the harmonic basis
// has to absorb is the cusp the function exists to model. radius <= 0
// disables the window eta entirely; a positive radius makes the support
// compact with a plateau where eta = 1 near the center.
struct LocalTerm {
  Complex center;
  double s = 0.5;
  int m = 0;
  double radius = -1.0;
  int window_order = 9;
  double plateau = 0.3;  // window is 1 for r < plateau * radius
  double scale = 1.0;

  double value(const Complex& z) const;
  // f, df/dz, d^2f/dz^2 with d/dz = (d/dx - i d/dy)/2; valid away from the
  // center (the fields vanish there but the derivatives blow up).
  void derivs(const Complex& z, double* f, Complex* fz, Complex* fzz) const;
  double laplacian_flat(const Complex& z) const;

 private:
  struct Radial3 {
    double v, d1, d2;
  };
  Radial3 profile(double r, double power) const;
};

// Exponent lattice for the conical orders of cfg, one family per point:
// s = j (2 - chi_k) + n <= s_max with angular orders |m| <= n, skipping
// combinations that are smooth functions of (x, y) (even integer s - |m|),
// which the harmonic basis already spans.
std::vector<LocalTerm> make_local_terms(const SingularityConfig& cfg,
                                        double s_max, double radius);

}  // namespace liouville

#endif
