#ifndef LIOUVILLE_HARMONICS_HPP
#define LIOUVILLE_HARMONICS_HPP

#include <vector>

namespace liouville {

// Real spherical harmonics, orthonormal for the sphere area measure
// (equivalently for g d^2x in the stereographic chart). Coefficient
// vectors are indexed by sh_index(l, m) = l^2 + l + m, length (L+1)^2.

inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int l_max) { return (l_max + 1) * (l_max + 1); }

// Packed (l, m >= 0) index for associated-Legendre tables: m-major,
// l running m..L within each m block.
inline int lm_packed(int l_max, int l, int m) {
  return m * (l_max + 1) - (m * (m - 1)) / 2 + (l - m);
}
inline int lm_packed_count(int l_max) {
  return (l_max + 1) * (l_max + 2) / 2;
}

// Orthonormalized associated Legendre P̄_lm(theta) for all m >= 0, l >= m,
// packed as above. Normalization: Y_{l,0} = P̄_l0, Y_{l,m>0} = sqrt(2)
// P̄_lm cos(m phi), Y_{l,-m} = sqrt(2) P̄_lm sin(m phi) are orthonormal.
void legendre_all(int l_max, double cos_theta, double sin_theta, double* out);

// Same plus d/d(theta).
void legendre_all_d1(int l_max, double cos_theta, double sin_theta,
                     double* p, double* dp);

// Legendre polynomial P_l(x) (unit normalization P_l(1) = 1).
double legendre_pl(int l, double x);

}  // namespace liouville

#endif
