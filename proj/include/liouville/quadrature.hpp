#ifndef LIOUVILLE_QUADRATURE_HPP
#define LIOUVILLE_QUADRATURE_HPP

#include <vector>

namespace liouville {

struct Quadrature1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1,1], exact for polynomials of degree 2n-1.
Quadrature1D gauss_legendre(int n);

// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1,1]
// (Golub-Welsch). Used for radial rules with an endpoint power law.
Quadrature1D gauss_jacobi(int n, double alpha, double beta);

// Tanh-sinh rule on (0,1); tolerates integrable endpoint singularities
// (powers, logarithms) without knowing the exponent. Roughly n nodes.
Quadrature1D tanh_sinh_01(int n);

}  // namespace liouville

#endif
