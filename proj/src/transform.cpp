#include "liouville/transform.hpp"

#include <cmath>

#include "liouville/harmonics.hpp"

namespace liouville {

SphericalTransform::SphericalTransform(const SphereGrid& grid,
                                       int basis_l_max)
    : grid_(&grid),
      l_max_(basis_l_max < 0 ? grid.l_max : basis_l_max) {
  if (l_max_ > grid.l_max)
    throw ContractError("transform: basis degree exceeds grid degree");
  n_packed_ = lm_packed_count(l_max_);
  plm_.resize(static_cast<std::size_t>(grid.n_theta) * n_packed_);
  for (int i = 0; i < grid.n_theta; ++i)
    legendre_all(l_max_, grid.cos_theta[i], grid.sin_theta[i],
                 plm_.data() + static_cast<std::size_t>(i) * n_packed_);
  cosm_.resize(static_cast<std::size_t>(grid.n_phi) * (l_max_ + 1));
  sinm_.resize(cosm_.size());
  for (int j = 0; j < grid.n_phi; ++j)
    for (int m = 0; m <= l_max_; ++m) {
      cosm_[static_cast<std::size_t>(j) * (l_max_ + 1) + m] =
          std::cos(m * grid.phi[j]);
      sinm_[static_cast<std::size_t>(j) * (l_max_ + 1) + m] =
          std::sin(m * grid.phi[j]);
    }
}

Eigen::VectorXd SphericalTransform::forward(const Eigen::VectorXd& values,
                                            bool parallel) const {
  const SphereGrid& g = *grid_;
  if (values.size() != static_cast<Eigen::Index>(g.node_count()))
    throw ContractError("forward: value vector does not match grid");
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_coeff());
  const double dphi = 2.0 * M_PI / g.n_phi;
  const double sqrt2 = std::sqrt(2.0);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int m = 0; m <= l_max_; ++m) {
    std::vector<double> A(g.n_theta, 0.0), B(g.n_theta, 0.0);
    for (int i = 0; i < g.n_theta; ++i) {
      double a = 0.0, b = 0.0;
      const double* row = values.data() + static_cast<std::size_t>(i) * g.n_phi;
      for (int j = 0; j < g.n_phi; ++j) {
        double cm = cosm_[static_cast<std::size_t>(j) * (l_max_ + 1) + m];
        double sm = sinm_[static_cast<std::size_t>(j) * (l_max_ + 1) + m];
        a += row[j] * cm;
        b += row[j] * sm;
      }
      A[i] = a;
      B[i] = b;
    }
    int base = lm_packed(l_max_, m, m);
    for (int l = m; l <= l_max_; ++l) {
      double sc = 0.0, ss = 0.0;
      for (int i = 0; i < g.n_theta; ++i) {
        double p = plm_[static_cast<std::size_t>(i) * n_packed_ + base +
                        (l - m)] *
                   g.row_weight[i];
        sc += p * A[i];
        ss += p * B[i];
      }
      if (m == 0) {
        coeffs(sh_index(l, 0)) = dphi * sc;
      } else {
        coeffs(sh_index(l, m)) = sqrt2 * dphi * sc;
        coeffs(sh_index(l, -m)) = sqrt2 * dphi * ss;
      }
    }
  }
  return coeffs;
}

Eigen::VectorXd SphericalTransform::inverse(const Eigen::VectorXd& coeffs,
                                            bool parallel) const {
  const SphereGrid& g = *grid_;
  if (coeffs.size() != n_coeff())
    throw ContractError("inverse: coefficient vector does not match basis");
  Eigen::VectorXd values(g.node_count());
  const double sqrt2 = std::sqrt(2.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < g.n_theta; ++i) {
    const double* prow = plm_.data() + static_cast<std::size_t>(i) * n_packed_;
    std::vector<double> Sc(l_max_ + 1, 0.0), Ss(l_max_ + 1, 0.0);
    for (int m = 0; m <= l_max_; ++m) {
      int base = lm_packed(l_max_, m, m);
      double sc = 0.0, ss = 0.0;
      for (int l = m; l <= l_max_; ++l) {
        double p = prow[base + (l - m)];
        if (m == 0) {
          sc += coeffs(sh_index(l, 0)) * p;
        } else {
          sc += coeffs(sh_index(l, m)) * p * sqrt2;
          ss += coeffs(sh_index(l, -m)) * p * sqrt2;
        }
      }
      Sc[m] = sc;
      Ss[m] = ss;
    }
    for (int j = 0; j < g.n_phi; ++j) {
      const double* cm = cosm_.data() + static_cast<std::size_t>(j) * (l_max_ + 1);
      const double* sm = sinm_.data() + static_cast<std::size_t>(j) * (l_max_ + 1);
      double v = Sc[0];
      for (int m = 1; m <= l_max_; ++m) v += Sc[m] * cm[m] + Ss[m] * sm[m];
      values(static_cast<std::size_t>(i) * g.n_phi + j) = v;
    }
  }
  return values;
}

void SphericalTransform::basis_row(const Complex& z, double* out) const {
  double theta, phi;
  angles_from_plane(z, &theta, &phi);
  double ct = std::cos(theta), st = std::sin(theta);
  std::vector<double> p(n_packed_);
  legendre_all(l_max_, ct, st, p.data());
  const double sqrt2 = std::sqrt(2.0);
  for (int m = 0; m <= l_max_; ++m) {
    int base = lm_packed(l_max_, m, m);
    double cm = std::cos(m * phi), sm = std::sin(m * phi);
    for (int l = m; l <= l_max_; ++l) {
      double pv = p[base + (l - m)];
      if (m == 0) {
        out[sh_index(l, 0)] = pv;
      } else {
        out[sh_index(l, m)] = sqrt2 * pv * cm;
        out[sh_index(l, -m)] = sqrt2 * pv * sm;
      }
    }
  }
}

double SphericalTransform::evaluate(const Eigen::VectorXd& coeffs,
                                    const Complex& z) const {
  double theta, phi;
  angles_from_plane(z, &theta, &phi);
  double ct = std::cos(theta), st = std::sin(theta);
  std::vector<double> p(n_packed_);
  legendre_all(l_max_, ct, st, p.data());
  const double sqrt2 = std::sqrt(2.0);
  double acc = 0.0;
  for (int m = 0; m <= l_max_; ++m) {
    int base = lm_packed(l_max_, m, m);
    double sc = 0.0, ss = 0.0;
    for (int l = m; l <= l_max_; ++l) {
      double pv = p[base + (l - m)];
      if (m == 0) {
        sc += coeffs(sh_index(l, 0)) * pv;
      } else {
        sc += coeffs(sh_index(l, m)) * pv * sqrt2;
        ss += coeffs(sh_index(l, -m)) * pv * sqrt2;
      }
    }
    acc += sc * std::cos(m * phi) + (m > 0 ? ss * std::sin(m * phi) : 0.0);
  }
  return acc;
}

void SphericalTransform::evaluate_derivs(const Eigen::VectorXd& coeffs,
                                         const Complex& z, double* f,
                                         Complex* fz, Complex* fzz) const {
  double theta, phi;
  angles_from_plane(z, &theta, &phi);
  double ct = std::cos(theta), st = std::sin(theta);
  std::vector<double> p(n_packed_), dp(n_packed_);
  legendre_all_d1(l_max_, ct, st, p.data(), dp.data());
  const double sqrt2 = std::sqrt(2.0);

  // Angular accumulators: value, d/dtheta, d/dphi, d2/dtheta dphi,
  // sum of m^2 terms, and sum of l(l+1) terms (for d2/dtheta2 via the
  // associated Legendre ODE).
  double F = 0.0, Ft = 0.0, Fp = 0.0, Ftp = 0.0, Fmm = 0.0, Flap = 0.0;
  for (int m = 0; m <= l_max_; ++m) {
    int base = lm_packed(l_max_, m, m);
    double sc = 0.0, ss = 0.0, dsc = 0.0, dss = 0.0;
    double lc = 0.0, ls = 0.0;
    for (int l = m; l <= l_max_; ++l) {
      double pv = p[base + (l - m)];
      double dv = dp[base + (l - m)];
      double ll1 = static_cast<double>(l) * (l + 1);
      if (m == 0) {
        double c = coeffs(sh_index(l, 0));
        sc += c * pv;
        dsc += c * dv;
        lc += c * pv * ll1;
      } else {
        double c = coeffs(sh_index(l, m)) * sqrt2;
        double s = coeffs(sh_index(l, -m)) * sqrt2;
        sc += c * pv;
        ss += s * pv;
        dsc += c * dv;
        dss += s * dv;
        lc += c * pv * ll1;
        ls += s * pv * ll1;
      }
    }
    double cm = std::cos(m * phi), sm = std::sin(m * phi);
    double even = sc * cm + ss * sm;          // angular value factor
    double odd = -sc * sm + ss * cm;          // d/dphi brings m * odd
    F += even;
    Ft += dsc * cm + dss * sm;
    Fp += m * odd;
    Ftp += m * (-dsc * sm + dss * cm);
    Fmm += m * m * even;
    Flap += lc * cm + ls * sm;
  }
  double Ftt = -(ct / st) * Ft + Fmm / (st * st) - Flap;
  double Fpp = -Fmm;

  // Chain rule for z = tan(theta/2) e^{i phi}.
  double r = std::abs(z);
  Complex zb = std::conj(z);
  Complex tz = zb / (r * (1.0 + r * r));                 // dz theta
  Complex pz = Complex(0.0, -0.5) / z;                   // dz phi
  Complex tzz = -zb * zb * (1.0 + 3.0 * r * r) /
                (2.0 * r * r * r * (1.0 + r * r) * (1.0 + r * r));
  Complex pzz = Complex(0.0, 0.5) / (z * z);

  if (f) *f = F;
  if (fz) *fz = Ft * tz + Fp * pz;
  if (fzz)
    *fzz = Ftt * tz * tz + 2.0 * Ftp * tz * pz + Fpp * pz * pz + Ft * tzz +
           Fp * pzz;
}

}  // namespace liouville
