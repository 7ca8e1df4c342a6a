#ifndef LIOUVILLE_CLASSICAL_HPP
#define LIOUVILLE_CLASSICAL_HPP

#include <memory>

#include "liouville/field.hpp"
#include "liouville/geometry.hpp"
#include "liouville/local_basis.hpp"
#include "liouville/singular_field.hpp"
#include "liouville/singular_quadrature.hpp"

namespace liouville {

// Source data for the shifted equation. psi is given by its coefficients in
// the orthonormal spherical-harmonic basis.
struct SourceTerm {
  Eigen::VectorXd psi_coeffs;
  double c_psi = 0.0;  // integral of psi dA, plus sum chi minus 4
  double mean = 0.0;   // (1 / 4 pi) integral of psi dA
};

SourceTerm make_source_term(const SingularityConfig& cfg,
                            const Eigen::VectorXd& psi_coeffs);

// The functional is coercive iff c_psi exceeds this (negative) threshold.
double coercivity_threshold(const SingularityConfig& cfg);

// Constant part of the action carried by the singular points: metric terms
// at the z_k plus the pairwise Green interactions.
double singularity_self_energy(const SingularityConfig& cfg);

struct ClassicalSolution {
  ScalarField h;               // band-limited part of the minimizer
  Eigen::VectorXd local_coefs; // coefficients of the singular local terms
  Eigen::VectorXd x;           // full coefficient vector (spectral | local)
  SourceTerm source;
  double residual_norm = 0.0;  // L2 norm of the projected optimality residual
  double j_value = 0.0;
  double log_mass = 0.0;       // ln integral w e^h dA
  int iterations = 0;
};

struct SolveOptions {
  double tol = 1e-10;  // on the L2 norm of the functional gradient
  int max_iterations = 80;
  const Eigen::VectorXd* initial = nullptr;  // defaults to h = 0
};

struct ProblemOptions {
  SingularQuadratureOptions quad;
  // Singular r^s terms around each z_k capture the conical expansion the
  // truncated harmonic series cannot; without them the pointwise PDE
  // residual is dominated by the r^{2-chi} cusp of h. Their coefficients
  // are not free unknowns: the equation determines each of them from
  // smooth local data of lower order, and the solver matches that
  // recursion alternately with the spectral minimization.
  bool augment = true;
  double s_max = 3.75;  // include local exponents up to this
  // Local-cell rule for the Newton operator only; the gradient and the
  // functional always use the full rule, so a coarse operator costs extra
  // iterations at most, never accuracy.
  int newton_n_radial = 12;
  int newton_n_angular = 48;
};

// Discretization of the constrained minimization behind the equation with
// conical sources: quadrature that absorbs the conical weight w, the
// spectral + local singular basis, and the Newton solver. One instance can
// serve many solves against the same configuration and degree.
class LiouvilleProblem {
 public:
  LiouvilleProblem(const SingularityConfig& cfg, int l_max,
                   ProblemOptions opts = {});

  const SingularityConfig& config() const { return cfg_; }
  int l_max() const { return l_max_; }
  int n_spectral() const { return transform_->n_coeff(); }
  int n_local() const { return static_cast<int>(terms_.size()); }
  int n_total() const { return n_spectral() + n_local(); }
  const SphereGrid& grid() const { return grid_; }
  const SphericalTransform& transform() const { return *transform_; }
  const SingularQuadrature& quadrature() const { return quad_; }
  const std::vector<LocalTerm>& local_terms() const { return terms_; }

  struct Moments {
    double mass = 0.0;      // integral w e^h dA
    Eigen::VectorXd first;  // integral (basis_i) w e^h dA, extended basis
  };

  // x holds spectral coefficients first, local coefficients after; shorter
  // vectors are zero-padded.
  Moments moments(const Eigen::VectorXd& x) const;
  double mass(const Eigen::VectorXd& x) const;
  double evaluate_h(const Eigen::VectorXd& x, const Complex& z) const;
  // (1 / 4 pi) integral |grad h|^2 d^2z over the extended basis.
  double dirichlet(const Eigen::VectorXd& x) const;
  // integral h psi dA for band-limited psi.
  double source_pairing(const SourceTerm& src, const Eigen::VectorXd& x) const;
  const Eigen::VectorXd& local_means() const { return zeta_mean_; }

  double j_value(const SourceTerm& src, const Eigen::VectorXd& x) const;
  Eigen::VectorXd j_gradient(const SourceTerm& src,
                             const Eigen::VectorXd& x) const;

  ClassicalSolution solve(const SourceTerm& src, SolveOptions opts = {}) const;

 private:
  struct Iterate;
  Iterate assemble(const Eigen::VectorXd& x) const;
  Eigen::VectorXd hessian_apply(const Iterate& it, double c_psi,
                                const Eigen::VectorXd& v) const;
  Eigen::VectorXd gradient_at(const Iterate& it,
                              const Eigen::VectorXd& psi_ext,
                              double c_psi) const;
  double j_at(const Iterate& it, const Eigen::VectorXd& psi_ext,
              double c_psi) const;
  // psi extended by its pairing with the local terms.
  Eigen::VectorXd extend_psi(const Eigen::VectorXd& psi) const;
  // Coefficients the conical expansion of the equation prescribes for the
  // local terms, given the current smooth part and mass.
  Eigen::VectorXd matched_local_coefs(const Eigen::VectorXd& c,
                                      const Eigen::VectorXd& d, double mass,
                                      double c_psi) const;

  SingularityConfig cfg_;
  int l_max_;
  double s_max_ = 0.0;
  SphereGrid grid_;
  std::unique_ptr<SphericalTransform> transform_;
  SingularQuadrature quad_;
  std::vector<LocalTerm> terms_;
  Eigen::VectorXd log_w_fine_;   // log w at fine nodes (0 where masked out)
  Eigen::VectorXd log_w_local_;  // log w at local nodes
  Eigen::VectorXd local_weight_;
  Eigen::MatrixXd basis_local_;  // local node count x n_spectral
  Eigen::MatrixXd zg_;           // centered zeta at fine nodes
  Eigen::MatrixXd zl_;           // centered zeta at local nodes
  // Coarse copy of the local cells for the Newton operator only: conjugate
  // gradients tolerates an approximate second moment, and the full rule is
  // an order of magnitude more nodes than the direction needs.
  Eigen::VectorXd log_w_local_h_;
  Eigen::VectorXd local_weight_h_;
  Eigen::MatrixXd basis_local_h_;
  Eigen::MatrixXd zl_h_;
  Eigen::VectorXd zeta_mean_;    // (1/4pi) integral zeta dA
  Eigen::MatrixXd sz_;  // int Y_a zeta_b dA, for the Dirichlet cross terms
  Eigen::MatrixXd q_;   // (1/4pi) grad zeta . grad zeta couplings
};

// phi* = h + ln g + sum_k chi_k G(z_k, .) - ln I(h) + ln(c0 / Lambda),
// returned with the singular logarithms symbolic. The last two constants
// are forced by Lambda integral e^{phi*} = c0. Requires the psi = 0 solve.
SingularField reconstruct_phi_star(const LiouvilleProblem& prob,
                                   const ClassicalSolution& sol);

// f(psi) = -self_energy + c ln(c / Lambda) - c - J_psi(h_psi) for c > 0,
// +infinity otherwise.
double classical_free_energy(const LiouvilleProblem& prob,
                             const SourceTerm& src);

// H(psi) = -(1/4pi) integral |grad h|^2 - c_psi ln integral w e^h g
//          + integral h psi g, assembled from its own displayed terms.
double variational_exponent_H(const LiouvilleProblem& prob,
                              const SourceTerm& src);

// psi whose linear functional u -> integral psi u g - S_L(u) is maximized
// at the field x + beta, projected onto the harmonic basis. alpha solves
// Lambda e^beta integral w e^h g = alpha + sum chi - 4.
Eigen::VectorXd exposing_hyperplane(const LiouvilleProblem& prob,
                                    const Eigen::VectorXd& x, double beta,
                                    double* alpha_out = nullptr);

}  // namespace liouville

#endif
