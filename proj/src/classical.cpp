#include "liouville/classical.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "liouville/errors.hpp"
#include "liouville/summation.hpp"

namespace liouville {

namespace timing {
inline std::atomic<long>& bucket(int i) {
  static std::atomic<long> t[12];
  return t[i];
}
struct Scoped {
  int i;
  std::chrono::steady_clock::time_point t0;
  explicit Scoped(int i_) : i(i_), t0(std::chrono::steady_clock::now()) {}
  ~Scoped() {
    bucket(i) += std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  }
};
}  // namespace timing


namespace {

Eigen::VectorXd padded(const Eigen::VectorXd& v, int n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  int m = std::min<int>(n, static_cast<int>(v.size()));
  out.head(m) = v.head(m);
  return out;
}

double laplace_factor(int a) {
  int l = static_cast<int>(std::sqrt(static_cast<double>(a)));
  return static_cast<double>(l) * (l + 1);
}

// Truncated expansion around one conical point: a map from (radial
// exponent, angular order) to the complex coefficient of r^s e^{i m theta},
// with the Hermitian partner at -m stored explicitly so products are plain
// convolutions. Exponents are keyed on a 1e-6 grid; every exponent in play
// is a short sum of term exponents and integers, so collisions resolve
// consistently.
class LocalSeries {
 public:
  using Key = std::pair<long long, int>;

  static long long skey(double s) { return std::llround(s * 1e6); }

  void add(double s, int m, const Complex& v) { c_[{skey(s), m}] += v; }

  Complex get(double s, int m) const {
    auto it = c_.find({skey(s), m});
    return it == c_.end() ? Complex(0.0) : it->second;
  }

  bool empty() const { return c_.empty(); }

  LocalSeries times(const LocalSeries& o, double s_cut) const {
    LocalSeries out;
    long long cut = skey(s_cut);
    for (const auto& [ka, va] : c_)
      for (const auto& [kb, vb] : o.c_) {
        long long s = ka.first + kb.first;
        if (s > cut) continue;
        out.c_[{s, ka.second + kb.second}] += va * vb;
      }
    return out;
  }

  // exp(this) for a series with strictly positive exponents.
  LocalSeries exponential(double s_cut) const {
    LocalSeries out, term;
    out.add(0.0, 0, 1.0);
    term.add(0.0, 0, 1.0);
    double factorial = 1.0;
    for (int p = 1; p <= 64; ++p) {
      term = term.times(*this, s_cut);
      if (term.empty()) break;
      factorial *= p;
      double scale = 0.0;
      for (const auto& [k, v] : term.c_) {
        out.c_[k] += v / factorial;
        scale = std::max(scale, std::abs(v));
      }
      if (scale / factorial < 1e-18) break;
    }
    return out;
  }

 private:
  std::map<Key, Complex> c_;
};

// Coefficient of r^{2k} in (1 + r^2)^{-q}.
double tail_coef(double q, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b *= -(q + i) / (i + 1);
  return b;
}

// Add coef * r^s * T_m(theta) (the real angular convention of LocalTerm)
// to the series.
void add_real_term(LocalSeries& out, double s, int m, double coef) {
  if (m == 0) {
    out.add(s, 0, coef);
  } else if (m > 0) {
    out.add(s, m, 0.5 * coef);
    out.add(s, -m, 0.5 * coef);
  } else {
    out.add(s, -m, Complex(0.0, -0.5) * coef);
    out.add(s, m, Complex(0.0, 0.5) * coef);
  }
}

}  // namespace

SourceTerm make_source_term(const SingularityConfig& cfg,
                            const Eigen::VectorXd& psi_coeffs) {
  SourceTerm src;
  src.psi_coeffs = psi_coeffs;
  double c0_coef = psi_coeffs.size() > 0 ? psi_coeffs(0) : 0.0;
  src.mean = c0_coef / std::sqrt(4.0 * M_PI);
  src.c_psi = 4.0 * M_PI * src.mean + cfg.sum_chi() - 4.0;
  return src;
}

double coercivity_threshold(const SingularityConfig& cfg) {
  double m = 1.0;
  for (double chi : cfg.weights) m = std::min(m, 1.0 - chi / 2.0);
  return -4.0 * m;
}

double singularity_self_energy(const SingularityConfig& cfg) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    double chi = cfg.weights[k];
    acc.add(-chi * (1.0 - chi / 4.0) * log_metric_density(cfg.points[k]));
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (j != k)
        acc.add(-0.5 * chi * cfg.weights[j] *
                green_function(cfg.points[j], cfg.points[k]));
  }
  return acc.value();
}

struct LiouvilleProblem::Iterate {
  Eigen::VectorXd x;
  Eigen::VectorXd masked_vals;  // w e^h times mask at fine nodes
  Eigen::VectorXd u_local;      // weighted w e^h at local nodes
  Eigen::VectorXd u_local_h;    // same on the coarse Newton-operator rule
  Eigen::VectorXd first;        // extended-basis first moments
  double mass = 0.0;
};

LiouvilleProblem::LiouvilleProblem(const SingularityConfig& cfg, int l_max,
                                   ProblemOptions opts)
    : cfg_(cfg),
      l_max_(l_max),
      s_max_(opts.augment ? opts.s_max : 0.0),
      grid_(make_grid(l_max)),
      quad_(cfg, l_max,
            [&] {
              SingularQuadratureOptions q = opts.quad;
              // The local terms multiply the conical weight by r^s cusp
              // factors; the tanh-sinh radial rule absorbs any algebraic
              // endpoint behavior, the Jacobi rule only the pure power law.
              if (opts.augment) q.log_safe = true;
              // A trapezoid rule with n points integrates the product of a
              // degree l_max harmonic and the cell integrand exactly only
              // for n > l_max plus the integrand's own angular content;
              // anything less folds the high-m moments onto low ones.
              if (q.alias_floor)
                q.n_angular = std::max(q.n_angular, l_max + 48);
              return q;
            }()) {
  cfg_.validate();
  auto T = [t = std::chrono::steady_clock::now()](const char* tag) mutable {
    auto now = std::chrono::steady_clock::now();
    if (std::getenv("LIOUVILLE_TIME"))
      std::fprintf(stderr, "  ctor %s %.2fs\n", tag,
                   std::chrono::duration<double>(now - t).count());
    t = now;
  };
  T("members");
  timing::Scoped* ctm = new timing::Scoped(6);
  transform_ = std::make_unique<SphericalTransform>(grid_);
  int n = transform_->n_coeff();

  const SphereGrid& fine = quad_.grid();
  const std::vector<double>& mask = quad_.global_mask();
  log_w_fine_ = Eigen::VectorXd::Zero(fine.node_count());
  for (std::size_t i = 0; i < fine.node_count(); ++i)
    if (mask[i] > 0.0)
      log_w_fine_(i) = log_singular_weight(cfg_, fine.nodes[i]);

  T("logw_fine");
  const auto& loc = quad_.local_nodes();
  int n_loc = static_cast<int>(loc.size());
  log_w_local_.resize(n_loc);
  local_weight_.resize(n_loc);
  basis_local_.resize(n_loc, n);
  std::vector<double> row(n);
#pragma omp parallel for schedule(static) firstprivate(row)
  for (int j = 0; j < n_loc; ++j) {
    log_w_local_(j) = log_singular_weight(cfg_, loc[j].z);
    local_weight_(j) = loc[j].w;
    transform_->basis_row(loc[j].z, row.data());
    for (int a = 0; a < n; ++a) basis_local_(j, a) = row[a];
  }

  T("basis_local");
  {
    SingularQuadratureOptions co = opts.quad;
    if (opts.augment) co.log_safe = true;
    co.n_radial = opts.newton_n_radial;
    co.n_angular = opts.newton_n_angular;
    SingularQuadrature quad_c(cfg_, l_max, co);
    const auto& cloc = quad_c.local_nodes();
    int n_c = static_cast<int>(cloc.size());
    log_w_local_h_.resize(n_c);
    local_weight_h_.resize(n_c);
    basis_local_h_.resize(n_c, n);
#pragma omp parallel for schedule(static) firstprivate(row)
    for (int j = 0; j < n_c; ++j) {
      log_w_local_h_(j) = log_singular_weight(cfg_, cloc[j].z);
      local_weight_h_(j) = cloc[j].w;
      transform_->basis_row(cloc[j].z, row.data());
      for (int a = 0; a < n; ++a) basis_local_h_(j, a) = row[a];
    }
    if (opts.augment) terms_ = make_local_terms(cfg_, opts.s_max, -1.0);
    int nm0 = n_local();
    zl_h_.resize(n_c, nm0);
    for (int b = 0; b < nm0; ++b)
      for (int j = 0; j < n_c; ++j)
        zl_h_(j, b) = terms_[b].value(cloc[j].z);
  }
  T("newton_block");
  int nm = n_local();
  zg_.resize(fine.node_count(), nm);
  zl_.resize(n_loc, nm);
  zeta_mean_.resize(nm);
  q_ = Eigen::MatrixXd::Zero(nm, nm);
  sz_ = Eigen::MatrixXd::Zero(n, nm);
  if (nm == 0) { delete ctm; return; }

  Eigen::VectorXd wfine(fine.node_count());
  for (std::size_t i = 0; i < fine.node_count(); ++i)
    wfine(i) = fine.weights[i] * mask[i];

  for (int b = 0; b < nm; ++b) {
    for (std::size_t i = 0; i < fine.node_count(); ++i)
      zg_(i, b) = terms_[b].value(fine.nodes[i]);
    for (int j = 0; j < n_loc; ++j) zl_(j, b) = terms_[b].value(loc[j].z);
    // Means on the solve rule itself, so the discrete g-mean of h vanishes
    // exactly rather than up to quadrature error.
    zeta_mean_(b) =
        (wfine.dot(zg_.col(b)) + local_weight_.dot(zl_.col(b))) / (4.0 * M_PI);
  }

  // Dirichlet couplings of the local terms, assembled once on a dedicated
  // high-resolution rule (the solve grid under-resolves the
  // partition-of-unity transition). They enter the reported functional and
  // the gradient of the smooth part; nothing is minimized over the local
  // coefficients, so their conditioning never feeds back into the solve.
  delete ctm; ctm = new timing::Scoped(7);
  SingularQuadratureOptions hi = opts.quad;
  hi.log_safe = true;
  hi.oversample = std::max(3, (192 + l_max - 1) / l_max);
  hi.n_radial = 48;
  hi.n_angular = 96;
  timing::Scoped* btm = new timing::Scoped(8);
  SingularQuadrature quad_hi(cfg_, l_max, hi);
  delete btm; btm = new timing::Scoped(9);
  const SphereGrid& hfine = quad_hi.grid();
  const std::vector<double>& hmask = quad_hi.global_mask();
  const auto& hloc = quad_hi.local_nodes();
  int n_hloc = static_cast<int>(hloc.size());

  Eigen::MatrixXd zhi(hfine.node_count(), nm);
  Eigen::MatrixXcd gz_hi(hfine.node_count(), nm);
  Eigen::MatrixXd zhl(n_hloc, nm);
  Eigen::MatrixXcd gz_hl(n_hloc, nm);
  // Flat-measure weights d^2z = dA / g for the gradient Gram below.
  Eigen::VectorXd flat_hi(hfine.node_count());
  Eigen::VectorXd whi(hfine.node_count());
  for (std::size_t i = 0; i < hfine.node_count(); ++i) {
    whi(i) = hfine.weights[i] * hmask[i];
    flat_hi(i) = whi(i) / metric_density(hfine.nodes[i]);
  }
  Eigen::VectorXd whl(n_hloc), flat_hl(n_hloc);
  for (int j = 0; j < n_hloc; ++j) {
    whl(j) = hloc[j].w;
    flat_hl(j) = hloc[j].w / metric_density(hloc[j].z);
  }
  for (int b = 0; b < nm; ++b) {
    for (std::size_t i = 0; i < hfine.node_count(); ++i) {
      double f;
      Complex fz, fzz;
      terms_[b].derivs(hfine.nodes[i], &f, &fz, &fzz);
      zhi(i, b) = hmask[i] > 0.0 ? f : 0.0;
      gz_hi(i, b) = hmask[i] > 0.0 ? fz : Complex(0.0);
    }
    for (int j = 0; j < n_hloc; ++j) {
      double f;
      Complex fz, fzz;
      terms_[b].derivs(hloc[j].z, &f, &fz, &fzz);
      zhl(j, b) = f;
      gz_hl(j, b) = fz;
    }
  }

  delete btm; btm = new timing::Scoped(10);
  // Q through the gradient Gram: grad u . grad v = 4 Re(u_z conj(v_z)).
  for (int b = 0; b < nm; ++b)
    for (int b2 = b; b2 < nm; ++b2) {
      double v =
          (gz_hi.col(b).conjugate().cwiseProduct(gz_hi.col(b2)).real())
              .dot(flat_hi) +
          (gz_hl.col(b).conjugate().cwiseProduct(gz_hl.col(b2)).real())
              .dot(flat_hl);
      q_(b, b2) = q_(b2, b) = v / M_PI;
    }

  delete btm; btm = new timing::Scoped(11);
  // sz = int Y_a zeta_b dA: masked part through the high-resolution
  // forward transform, local cells by direct basis accumulation.
  for (int b = 0; b < nm; ++b)
    sz_.col(b) =
        quad_hi.transform().forward(whi.cwiseQuotient(
            Eigen::VectorXd::Map(hfine.weights.data(), hfine.node_count()))
                                        .cwiseProduct(zhi.col(b)));
  {
    std::vector<double> hrow(n);
    for (int j = 0; j < n_hloc; ++j) {
      transform_->basis_row(hloc[j].z, hrow.data());
      for (int b = 0; b < nm; ++b) {
        double wz = whl(j) * zhl(j, b);
        for (int a = 0; a < n; ++a) sz_(a, b) += wz * hrow[a];
      }
    }
  }

  delete btm;
  zg_.rowwise() -= zeta_mean_.transpose();
  zl_.rowwise() -= zeta_mean_.transpose();
  zl_h_.rowwise() -= zeta_mean_.transpose();
  delete ctm;
}

double LiouvilleProblem::dirichlet(const Eigen::VectorXd& x) const {
  Eigen::VectorXd full = padded(x, n_total());
  Eigen::VectorXd c = full.head(n_spectral());
  double v = dirichlet_energy(c);
  if (n_local() > 0) {
    Eigen::VectorXd d = full.tail(n_local());
    Eigen::VectorXd szd = sz_ * d;
    double cross = 0.0;
    for (int a = 1; a < n_spectral(); ++a)
      cross += laplace_factor(a) * c(a) * szd(a);
    v += cross / (2.0 * M_PI) + d.dot(q_ * d);
  }
  return v;
}

double LiouvilleProblem::source_pairing(const SourceTerm& src,
                                        const Eigen::VectorXd& x) const {
  return extend_psi(src.psi_coeffs).dot(padded(x, n_total()));
}

// Column-blocked products for the large node x coefficient matrices; the
// stock vector product falls off the streaming path at these shapes.
static Eigen::VectorXd mat_vec(const Eigen::MatrixXd& B, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(B.rows());
  int a = 0;
  for (; a + 4 <= B.cols(); a += 4)
    out += v(a) * B.col(a) + v(a + 1) * B.col(a + 1) + v(a + 2) * B.col(a + 2) +
           v(a + 3) * B.col(a + 3);
  for (; a < B.cols(); ++a) out += v(a) * B.col(a);
  return out;
}

static Eigen::VectorXd mat_tvec(const Eigen::MatrixXd& B, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(B.cols());
  for (int a = 0; a < B.cols(); ++a) out(a) = B.col(a).dot(u);
  return out;
}

LiouvilleProblem::Iterate LiouvilleProblem::assemble(
    const Eigen::VectorXd& x) const {
  timing::Scoped tm(0);
  Iterate it;
  it.x = x;
  int n = n_spectral();
  int nm = n_local();
  Eigen::VectorXd c = x.head(n);
  Eigen::VectorXd d = nm > 0 ? Eigen::VectorXd(x.tail(nm))
                             : Eigen::VectorXd();
  const SphereGrid& fine = quad_.grid();
  const std::vector<double>& mask = quad_.global_mask();

  timing::Scoped* sub = new timing::Scoped(3);
  Eigen::VectorXd h_fine = quad_.transform().inverse(c);
  if (nm > 0) h_fine += mat_vec(zg_, d);
  it.masked_vals = Eigen::VectorXd::Zero(fine.node_count());
  for (std::size_t i = 0; i < fine.node_count(); ++i)
    if (mask[i] > 0.0)
      it.masked_vals(i) = mask[i] * std::exp(log_w_fine_(i) + h_fine(i));

  delete sub; sub = new timing::Scoped(4);
  Eigen::VectorXd h_loc = mat_vec(basis_local_, c);
  if (nm > 0) h_loc += zl_ * d;
  it.u_local = (log_w_local_ + h_loc).array().exp().matrix().cwiseProduct(
      local_weight_);

  Eigen::VectorXd h_loc_h = mat_vec(basis_local_h_, c);
  if (nm > 0) h_loc_h += zl_h_ * d;
  it.u_local_h =
      (log_w_local_h_ + h_loc_h).array().exp().matrix().cwiseProduct(
          local_weight_h_);

  delete sub; sub = new timing::Scoped(5);
  it.first.resize(n + nm);
  it.first.head(n) = quad_.transform().forward(it.masked_vals) +
                     mat_tvec(basis_local_, it.u_local);
  if (nm > 0) {
    Eigen::VectorXd wm(fine.node_count());
    for (std::size_t i = 0; i < fine.node_count(); ++i)
      wm(i) = fine.weights[i] * it.masked_vals(i);
    it.first.tail(nm) = zg_.transpose() * wm + zl_.transpose() * it.u_local;
  }
  delete sub;
  it.mass = std::sqrt(4.0 * M_PI) * it.first(0);
  return it;
}

Eigen::VectorXd LiouvilleProblem::extend_psi(
    const Eigen::VectorXd& psi) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_total());
  Eigen::VectorXd p = padded(psi, n_spectral());
  out.head(n_spectral()) = p;
  // integral psi (zeta - mean) dA for the local tail.
  if (n_local() > 0)
    out.tail(n_local()) =
        sz_.transpose() * p - std::sqrt(4.0 * M_PI) * p(0) * zeta_mean_;
  return out;
}

double LiouvilleProblem::j_at(const Iterate& it,
                              const Eigen::VectorXd& psi_ext,
                              double c_psi) const {
  return dirichlet(it.x) - psi_ext.dot(it.x) + c_psi * std::log(it.mass);
}

Eigen::VectorXd LiouvilleProblem::gradient_at(const Iterate& it,
                                              const Eigen::VectorXd& psi_ext,
                                              double c_psi) const {
  int n = n_spectral();
  int nm = n_local();
  Eigen::VectorXd c = it.x.head(n);
  Eigen::VectorXd g(n + nm);
  for (int a = 1; a < n; ++a)
    g(a) = laplace_factor(a) * c(a) / (2.0 * M_PI);
  g(0) = 0.0;
  if (nm > 0) {
    Eigen::VectorXd d = it.x.tail(nm);
    Eigen::VectorXd szd = sz_ * d;
    for (int a = 1; a < n; ++a)
      g(a) += laplace_factor(a) * szd(a) / (2.0 * M_PI);
    Eigen::VectorXd lc = Eigen::VectorXd::Zero(n);
    for (int a = 1; a < n; ++a) lc(a) = laplace_factor(a) * c(a);
    g.tail(nm) = sz_.transpose() * lc / (2.0 * M_PI) + 2.0 * (q_ * d);
  }
  g += c_psi / it.mass * it.first;
  g -= psi_ext;
  g(0) = 0.0;
  return g;
}

Eigen::VectorXd LiouvilleProblem::hessian_apply(
    const Iterate& it, double c_psi, const Eigen::VectorXd& v) const {
  timing::Scoped tm(1);
  // Spectral directions only: the local coefficients are matched, never
  // minimized over, so Newton steps live in the spectral block.
  int n = n_spectral();
  Eigen::VectorXd vc = v.head(n);

  Eigen::VectorXd dir_fine = quad_.transform().inverse(vc);
  Eigen::VectorXd dir_loc = mat_vec(basis_local_h_, vc);

  Eigen::VectorXd prod_fine = it.masked_vals.cwiseProduct(dir_fine);
  Eigen::VectorXd prod_loc = it.u_local_h.cwiseProduct(dir_loc);
  Eigen::VectorXd second = quad_.transform().forward(prod_fine) +
                           mat_tvec(basis_local_h_, prod_loc);

  double mean_dir = it.first.head(n).dot(vc) / it.mass;
  Eigen::VectorXd out(n);
  for (int a = 1; a < n; ++a)
    out(a) = laplace_factor(a) * vc(a) / (2.0 * M_PI);
  out(0) = 0.0;
  out += c_psi * (second / it.mass - it.first.head(n) / it.mass * mean_dir);
  out(0) = 0.0;
  return out;
}

LiouvilleProblem::Moments LiouvilleProblem::moments(
    const Eigen::VectorXd& x) const {
  Iterate it = assemble(padded(x, n_total()));
  return {it.mass, it.first};
}

double LiouvilleProblem::mass(const Eigen::VectorXd& x) const {
  return moments(x).mass;
}

double LiouvilleProblem::evaluate_h(const Eigen::VectorXd& x,
                                    const Complex& z) const {
  Eigen::VectorXd full = padded(x, n_total());
  double v = transform_->evaluate(full.head(n_spectral()), z);
  for (int b = 0; b < n_local(); ++b)
    v += full(n_spectral() + b) * (terms_[b].value(z) - zeta_mean_(b));
  return v;
}

double LiouvilleProblem::j_value(const SourceTerm& src,
                                 const Eigen::VectorXd& x) const {
  Iterate it = assemble(padded(x, n_total()));
  return j_at(it, extend_psi(src.psi_coeffs), src.c_psi);
}

Eigen::VectorXd LiouvilleProblem::j_gradient(const SourceTerm& src,
                                             const Eigen::VectorXd& x) const {
  Iterate it = assemble(padded(x, n_total()));
  return gradient_at(it, extend_psi(src.psi_coeffs), src.c_psi);
}

Eigen::VectorXd LiouvilleProblem::matched_local_coefs(
    const Eigen::VectorXd& c, const Eigen::VectorXd& d, double mass,
    double c_psi) const {
  timing::Scoped tm(2);
  // Near z_k the stationarity equation reads, in the flat chart,
  //   Delta h = beta r^{-chi} U(z) e^{D(z)} + smooth,
  // with beta = 2 pi c_psi / mass, U = (w r^chi) g e^{h_smooth} analytic at
  // z_k, and D the singular content carried by the local terms. Matching
  // each power r^{s-2} e^{i m theta} of the source fixes the coefficient
  // of the r^s T_m term through the inverse-Laplacian factor
  // 1 / (s^2 - m^2). The smooth data of U comes from the current iterate,
  // so the map is applied as a fixed point alternating with the spectral
  // solve.
  Eigen::VectorXd out = d;
  double beta = 2.0 * M_PI * c_psi / mass;
  double sum_chi = cfg_.sum_chi();
  Eigen::VectorXd lap = laplacian_round(c);
  Eigen::VectorXd lap2 = laplacian_round(lap);
  double mean_shift = 0.0;
  for (int b = 0; b < n_local(); ++b) mean_shift -= d(b) * zeta_mean_(b);

  for (std::size_t k = 0; k < cfg_.size(); ++k) {
    Complex zk = cfg_.points[k];
    double chi = cfg_.weights[k];
    std::vector<int> idx;
    for (int b = 0; b < n_local(); ++b)
      if (std::abs(terms_[b].center - zk) < 1e-12) idx.push_back(b);
    if (idx.empty()) continue;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return terms_[a].s < terms_[b].s; });
    double s_src = s_max_ - 2.0 + chi + 1e-9;

    LocalSeries sing;
    for (int b : idx) {
      const LocalTerm& t = terms_[b];
      double q = (t.s + std::abs(t.m)) / 2.0;
      for (int kk = 0; t.s + 2 * kk <= s_src; ++kk)
        add_real_term(sing, t.s + 2 * kk, t.m,
                      d(b) * t.scale * tail_coef(q, kk));
    }
    LocalSeries expd = sing.exponential(s_src);

    // Degree-3 Taylor data of L = ln U at z_k. The chart derivatives of
    // the interpolant are exact away from the chart poles but undefined at
    // them (and a center may sit at one), so every derivative at z_k is
    // taken as the Richardson-extrapolated average over a symmetric
    // four-point stencil, which also supplies the third orders. The conical
    // weight, the metric, and the other centers' terms enter analytically.
    double f0 = transform_->evaluate(c, zk);
    Complex hz, hzz, hzzz;
    Complex lap_z, lap_zz;
    Complex fzz_even;  // (d_z^2 + d_zbar^2) f_zz / 2, for the fourth order
    {
      auto probe = [&](double eps, Complex* pz, Complex* pzz, Complex* pzzz,
                       Complex* plapz, Complex* plapzz, Complex* peven) {
        Complex sz = 0.0, szz = 0.0, slzz = 0.0;
        Complex fzp[4];
        Complex offs[4] = {Complex(eps, 0), Complex(-eps, 0),
                           Complex(0, eps), Complex(0, -eps)};
        Complex lz4 = 0.0;
        for (int i = 0; i < 4; ++i) {
          double f;
          Complex fz, fzz;
          transform_->evaluate_derivs(c, zk + offs[i], &f, &fz, &fzz);
          sz += fz;
          szz += fzz;
          fzp[i] = fzz;
          transform_->evaluate_derivs(lap, zk + offs[i], &f, &fz, &fzz);
          lz4 += fz;
          slzz += fzz;
        }
        *pz = 0.25 * sz;
        *pzz = 0.25 * szz;
        *pzzz = 0.5 * ((fzp[0] - fzp[1]) / (2 * eps) -
                       Complex(0, 1) * (fzp[2] - fzp[3]) / (2 * eps));
        *plapz = 0.25 * lz4;
        *plapzz = 0.25 * slzz;
        // The centerless even combination of a field F sampled on the same
        // four points recovers (F_zz + F_zbzb) / 2.
        *peven = (fzp[0] + fzp[1] - fzp[2] - fzp[3]) / (4.0 * eps * eps);
      };
      Complex v[3][6];
      double eps = 2e-3;
      for (int lev = 0; lev < 3; ++lev)
        probe(eps * (1 << lev), &v[lev][0], &v[lev][1], &v[lev][2],
              &v[lev][3], &v[lev][4], &v[lev][5]);
      Complex out[6];
      for (int q = 0; q < 6; ++q) {
        Complex r1a = (4.0 * v[0][q] - v[1][q]) / 3.0;
        Complex r1b = (4.0 * v[1][q] - v[2][q]) / 3.0;
        out[q] = (16.0 * r1a - r1b) / 15.0;
      }
      hz = out[0];
      hzz = out[1];
      hzzz = out[2];
      lap_z = out[3];
      lap_zz = out[4];
      fzz_even = out[5];
    }
    double g_zk = metric_density(zk);
    double lap_0 = transform_->evaluate(lap, zk);
    double h_lap_flat = g_zk * lap_0;
    Complex zkb = std::conj(zk);
    double n2 = 1.0 + std::norm(zk);
    Complex g_z = g_zk * (-2.0 * zkb / n2);  // dg/dz = g dlng/dz
    // (1/4) d/dz of Delta_flat h = (1/4) d/dz (g * Delta_round h).
    Complex hzzb = 0.25 * (g_z * lap_0 + g_zk * lap_z);

    // Fourth orders of the smooth part through Delta_flat h = g A with
    // A the round Laplacian of the interpolant: the chart derivatives of
    // g A supply the mixed ones, and the even stencil combination of f_zz
    // contains h_zzzz once the mixed order is removed.
    double u3 = n2 * n2 * n2;
    Complex g_zz = 24.0 * zkb * zkb / (u3 * n2);
    Complex g_zb = -8.0 / u3 + 24.0 * zk * zkb / (u3 * n2);
    double lap2_0 = transform_->evaluate(lap2, zk);
    Complex hzzzb =
        0.25 * (g_zz * lap_0 + 2.0 * g_z * lap_z + g_zk * lap_zz);
    double hzzbb =
        0.25 * (g_zb.real() * lap_0 +
                2.0 * (g_z * std::conj(lap_z)).real() +
                g_zk * g_zk * lap2_0 / 4.0);
    Complex hzzzz = 2.0 * fzz_even - hzzbb;

    double h0 = f0 + mean_shift;
    Complex lz = hz;
    Complex lzz = hzz;
    Complex lzzz = hzzz;
    Complex lzzb = hzzb;
    Complex lzzzz = hzzzz;
    Complex lzzzb = hzzzb;
    double lzzbb = hzzbb;
    double lzb = h_lap_flat / 4.0;
    for (int b = 0; b < n_local(); ++b) {
      if (std::abs(terms_[b].center - zk) < 1e-12) continue;
      const LocalTerm& t = terms_[b];
      double f;
      Complex fz, fzz;
      t.derivs(zk, &f, &fz, &fzz);
      h0 += d(b) * f;
      lz += d(b) * fz;
      lzz += d(b) * fzz;
      lzb += d(b) * t.laplacian_flat(zk) / 4.0;
      // Third orders of the smooth tail by the same stencil trick.
      auto probe = [&](double eps, Complex* pzzz, Complex* pzzb) {
        Complex fzp[4];
        double lp[4];
        Complex offs[4] = {Complex(eps, 0), Complex(-eps, 0),
                           Complex(0, eps), Complex(0, -eps)};
        for (int i = 0; i < 4; ++i) {
          double ff;
          Complex f1, f2;
          t.derivs(zk + offs[i], &ff, &f1, &f2);
          fzp[i] = f2;
          lp[i] = t.laplacian_flat(zk + offs[i]);
        }
        *pzzz = 0.5 * ((fzp[0] - fzp[1]) / (2 * eps) -
                       Complex(0, 1) * (fzp[2] - fzp[3]) / (2 * eps));
        *pzzb = 0.125 * ((lp[0] - lp[1]) / (2 * eps) -
                         Complex(0, 1) * (lp[2] - lp[3]) / (2 * eps));
      };
      Complex zzz1, zzb1, zzz2, zzb2;
      double eps = 2e-3;
      probe(eps, &zzz1, &zzb1);
      probe(2 * eps, &zzz2, &zzb2);
      lzzz += d(b) * (4.0 * zzz1 - zzz2) / 3.0;
      lzzb += d(b) * (4.0 * zzb1 - zzb2) / 3.0;
      // Fourth orders of the smooth tail: d_z^2 of the f_zz and Laplacian
      // fields from axis plus diagonal points around the (regular) center,
      // and the doubled Laplacian for the fully mixed one.
      double lap0 = t.laplacian_flat(zk);
      auto probe4 = [&](double eps4, Complex* pzzzz, Complex* pzzzb,
                        Complex* pzzbb) {
        Complex ax[4], dg[4];
        double lax[4], ldg[4];
        Complex offs[4] = {Complex(eps4, 0), Complex(-eps4, 0),
                           Complex(0, eps4), Complex(0, -eps4)};
        Complex doffs[4] = {Complex(eps4, eps4), Complex(eps4, -eps4),
                            Complex(-eps4, eps4), Complex(-eps4, -eps4)};
        for (int i = 0; i < 4; ++i) {
          double ff;
          Complex f1, f2;
          t.derivs(zk + offs[i], &ff, &f1, &f2);
          ax[i] = f2;
          lax[i] = t.laplacian_flat(zk + offs[i]);
          t.derivs(zk + doffs[i], &ff, &f1, &f2);
          dg[i] = f2;
          ldg[i] = t.laplacian_flat(zk + doffs[i]);
        }
        double e2 = eps4 * eps4;
        auto dz2 = [&](Complex xp, Complex xm, Complex yp, Complex ym,
                       Complex c0, Complex dpp, Complex dpm, Complex dmp,
                       Complex dmm) {
          Complex fxx = (xp + xm - 2.0 * c0) / e2;
          Complex fyy = (yp + ym - 2.0 * c0) / e2;
          Complex fxy = (dpp - dpm - dmp + dmm) / (4.0 * e2);
          return 0.25 * (fxx - fyy - 2.0 * Complex(0, 1) * fxy);
        };
        *pzzzz = dz2(ax[0], ax[1], ax[2], ax[3], fzz, dg[0], dg[1], dg[2],
                     dg[3]);
        *pzzzb = 0.25 * dz2(lax[0], lax[1], lax[2], lax[3], lap0, ldg[0],
                            ldg[1], ldg[2], ldg[3]);
        *pzzbb = (lax[0] + lax[1] + lax[2] + lax[3] - 4.0 * lap0) /
                 (16.0 * e2);
      };
      Complex q41, q42, q43, q44, q45, q46;
      probe4(eps, &q41, &q42, &q43);
      probe4(2 * eps, &q44, &q45, &q46);
      lzzzz += d(b) * (4.0 * q41 - q44) / 3.0;
      lzzzb += d(b) * (4.0 * q42 - q45) / 3.0;
      lzzbb += d(b) * ((4.0 * q43 - q46) / 3.0).real();
    }

    double l0 = chi * (-0.5 * std::log(g_zk) + kKappa) + std::log(g_zk) + h0;
    double mcoef = 1.0 - sum_chi / 4.0;
    lz += mcoef * (-2.0 * zkb / n2);
    lzz += mcoef * (2.0 * zkb * zkb / (n2 * n2));
    lzzz += mcoef * (-4.0 * zkb * zkb * zkb / (n2 * n2 * n2));
    double lzb_full = lzb + mcoef * (-g_zk / 2.0);
    lzzb += mcoef * (4.0 * zkb / (n2 * n2) -
                     4.0 * zk * zkb * zkb / (n2 * n2 * n2));
    lzzzz += mcoef * 12.0 * zkb * zkb * zkb * zkb / (u3 * n2);
    lzzzb += mcoef * (-12.0 * zkb * zkb / u3 +
                      12.0 * zk * zkb * zkb * zkb / (u3 * n2));
    lzzbb += mcoef * (4.0 / (n2 * n2) - 16.0 * std::norm(zk) / u3 +
                      12.0 * std::norm(zk) * std::norm(zk) / (u3 * n2));
    for (std::size_t j = 0; j < cfg_.size(); ++j) {
      if (j == k) continue;
      l0 += cfg_.weights[j] * green_function(cfg_.points[j], zk);
      Complex dzj = zk - cfg_.points[j];
      lz += -0.5 * cfg_.weights[j] / dzj;
      lzz += 0.5 * cfg_.weights[j] / (dzj * dzj);
      lzzz += -cfg_.weights[j] / (dzj * dzj * dzj);
      lzzzz += 3.0 * cfg_.weights[j] / (dzj * dzj * dzj * dzj);
    }

    double u0 = std::exp(l0);
    LocalSeries usr;
    usr.add(0.0, 0, u0);
    usr.add(1.0, 1, u0 * lz);
    usr.add(1.0, -1, std::conj(u0 * lz));
    Complex a20 = 0.5 * u0 * (lzz + lz * lz);
    usr.add(2.0, 2, a20);
    usr.add(2.0, -2, std::conj(a20));
    usr.add(2.0, 0, u0 * (lzb_full + std::norm(lz)));
    Complex a30 = u0 * (lzzz + 3.0 * lzz * lz + lz * lz * lz) / 6.0;
    Complex a21 = 0.5 * u0 *
                  (lz * lz * std::conj(lz) + 2.0 * lz * lzb_full +
                   lzz * std::conj(lz) + lzzb);
    usr.add(3.0, 3, a30);
    usr.add(3.0, -3, std::conj(a30));
    usr.add(3.0, 1, a21);
    usr.add(3.0, -1, std::conj(a21));
    // Degree four from exponentiating the normalized series of L.
    Complex p10 = lz, p01 = std::conj(lz);
    Complex p20 = 0.5 * lzz, p02 = std::conj(p20);
    Complex p30 = lzzz / 6.0;
    Complex p21 = 0.5 * lzzb, p12 = std::conj(p21);
    double p11 = lzb_full;
    Complex p40 = lzzzz / 24.0;
    Complex p31 = lzzzb / 6.0;
    double p22 = lzzbb / 4.0;
    Complex a40 = u0 * (p40 + p30 * p10 + 0.5 * p20 * p20 +
                        0.5 * p20 * p10 * p10 + p10 * p10 * p10 * p10 / 24.0);
    Complex a31 =
        u0 * (p31 + p30 * p01 + p21 * p10 + p20 * p11 + p20 * p10 * p01 +
              0.5 * p11 * p10 * p10 + p10 * p10 * p10 * p01 / 6.0);
    Complex a22 =
        u0 * (p22 + p21 * p01 + p12 * p10 + p20 * p02 + 0.5 * p11 * p11 +
              0.5 * p20 * p01 * p01 + 0.5 * p02 * p10 * p10 +
              p11 * p10 * p01 + 0.25 * p10 * p10 * p01 * p01);
    usr.add(4.0, 4, a40);
    usr.add(4.0, -4, std::conj(a40));
    usr.add(4.0, 2, a31);
    usr.add(4.0, -2, std::conj(a31));
    usr.add(4.0, 0, a22.real());

    if (std::getenv("LIOUVILLE_CHECK_USR")) {
      for (double rho : {0.04, 0.08}) {
        const int nth = 64;
        std::vector<Complex> uval(nth);
        for (int j = 0; j < nth; ++j) {
          Complex z = zk + rho * std::polar(1.0, 2.0 * M_PI * j / nth);
          double lv = chi * (-0.25 * (log_metric_density(z) +
                                      std::log(g_zk)) + kKappa) +
                      log_metric_density(z) + transform_->evaluate(c, z) +
                      mean_shift;
          for (std::size_t j2 = 0; j2 < cfg_.size(); ++j2)
            if (j2 != k)
              lv += cfg_.weights[j2] * green_function(cfg_.points[j2], z);
          for (int b = 0; b < n_local(); ++b)
            if (std::abs(terms_[b].center - zk) >= 1e-12)
              lv += d(b) * terms_[b].value(z);
          uval[j] = std::exp(lv);
        }
        for (int m = 0; m <= 4; ++m) {
          Complex fc = 0.0;
          for (int j = 0; j < nth; ++j)
            fc += uval[j] * std::polar(1.0, -2.0 * M_PI * m * j / nth);
          fc /= static_cast<double>(nth);
          Complex pred = 0.0;
          for (int t = m; t <= 4; t += 2)
            pred += usr.get(t, m) * std::pow(rho, t);
          std::fprintf(stderr,
                       "usr check ctr(%.0f,%.0f) rho=%.2f m=%d direct=(%.6e,"
                       "%.6e) series=(%.6e,%.6e) diff=%.2e\n",
                       zk.real(), zk.imag(), rho, m, fc.real(), fc.imag(),
                       pred.real(), pred.imag(), std::abs(fc - pred));
        }
      }
    }

    LocalSeries source = usr.times(expd, s_src);

    for (int b : idx) {
      const LocalTerm& t = terms_[b];
      int am = std::abs(t.m);
      double den = t.s * t.s - am * am;
      if (std::abs(den) < 1e-9) continue;  // resonant order, left alone
      Complex kap = beta * source.get(t.s - 2.0 + chi, am) / den;
      double target;
      if (t.m > 0)
        target = 2.0 * kap.real();
      else if (t.m < 0)
        target = -2.0 * kap.imag();
      else
        target = kap.real();
      // The algebraic profile of a lower term carries r^{s+2k} content of
      // the same angular order; idx is sorted, so those coefficients are
      // already final.
      for (int b2 : idx) {
        const LocalTerm& t2 = terms_[b2];
        if (b2 == b || t2.m != t.m) continue;
        double diff = t.s - t2.s;
        int kk = static_cast<int>(std::lround(diff / 2.0));
        if (kk < 1 || std::abs(diff - 2.0 * kk) > 1e-9) continue;
        target -= out(b2) * t2.scale * tail_coef((t2.s + am) / 2.0, kk);
      }
      out(b) = target / t.scale;
    }
  }
  return out;
}

ClassicalSolution LiouvilleProblem::solve(const SourceTerm& src,
                                          SolveOptions opts) const {
  double thresh = coercivity_threshold(cfg_);
  if (!(src.c_psi > thresh)) {
    std::ostringstream msg;
    msg << "source not coercive: c_psi = " << src.c_psi << " must exceed "
        << thresh;
    throw AdmissibilityError(msg.str());
  }

  int n = n_spectral();
  int nm = n_local();
  Eigen::VectorXd psi_ext = extend_psi(src.psi_coeffs);
  Eigen::VectorXd x0 = opts.initial ? padded(*opts.initial, n_total())
                                    : Eigen::VectorXd::Zero(n_total());
  Eigen::VectorXd c = x0.head(n);
  Eigen::VectorXd d =
      nm > 0 ? Eigen::VectorXd(x0.tail(nm)) : Eigen::VectorXd();
  c(0) = 0.0;

  Iterate it;
  double gnorm = 0.0;
  double match_gap = 0.0;
  int total_iters = 0;
  bool settled = false;
  // Early rounds of the matching fixed point only need the smooth part to
  // the accuracy of the current coefficient gap; the full gradient
  // tolerance is paid once the gap is nearly settled.
  bool full_tol_round = (nm == 0);
  const int max_outer = 40;
  for (int outer = 0; outer < max_outer && !settled; ++outer) {
    double tol_round =
        full_tol_round
            ? opts.tol
            : std::max(opts.tol,
                       std::min(1e-6, outer == 0 ? 1e-6 : 1e-2 * match_gap));
    // Minimize over the spectral block at the current local coefficients;
    // their Dirichlet cross term shifts the gradient by a constant.
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(n);
    if (nm > 0) {
      Eigen::VectorXd szd = sz_ * d;
      for (int a = 1; a < n; ++a)
        cross(a) = laplace_factor(a) * szd(a) / (2.0 * M_PI);
    }
    Eigen::VectorXd xfull(n + nm);
    xfull.head(n) = c;
    if (nm > 0) xfull.tail(nm) = d;
    it = assemble(xfull);

    bool inner_done = false;
    for (int iter = 0; iter < opts.max_iterations; ++iter, ++total_iters) {
      Eigen::VectorXd g(n);
      for (int a = 1; a < n; ++a)
        g(a) = laplace_factor(a) * c(a) / (2.0 * M_PI);
      g(0) = 0.0;
      g += cross + src.c_psi / it.mass * it.first.head(n) - psi_ext.head(n);
      g(0) = 0.0;
      gnorm = g.norm();
      if (gnorm < tol_round) {
        inner_done = true;
        break;
      }

      // Inexact Newton direction by preconditioned conjugate gradients; the
      // diagonal guess l(l+1)/2pi + 1 tames the spread of the harmonic
      // Laplacian factors. Bail out to the steepest-descent direction if
      // curvature turns nonpositive (possible far from the minimizer when
      // c_psi < 0).
      Eigen::VectorXd precond(n);
      for (int a = 0; a < n; ++a)
        precond(a) = laplace_factor(a) / (2.0 * M_PI) + 1.0;
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd r = -g;
      Eigen::VectorXd z = r.cwiseQuotient(precond);
      Eigen::VectorXd p = z;
      double rz = r.dot(z);
      double eta = std::min(0.5, std::sqrt(gnorm)) * gnorm;
      for (int kcg = 0; kcg < 400; ++kcg) {
        Eigen::VectorXd hp = hessian_apply(it, src.c_psi, p);
        double php = p.dot(hp);
        if (php <= 1e-14 * p.squaredNorm()) {
          if (kcg == 0) dir = -g;
          break;
        }
        double alpha = rz / php;
        dir += alpha * p;
        r -= alpha * hp;
        if (r.norm() < eta) break;
        z = r.cwiseQuotient(precond);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
      }
      if (dir.dot(g) >= 0.0) dir = -g;

      double j0 = j_at(it, psi_ext, src.c_psi);
      double slope = g.dot(dir);
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        Eigen::VectorXd ct = c + t * dir;
        ct(0) = 0.0;
        xfull.head(n) = ct;
        Iterate trial = assemble(xfull);
        // The last term keeps the test meaningful once the predicted
        // decrease falls below the rounding noise of J itself.
        double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::abs(j0));
        if (trial.mass > 0.0 && std::isfinite(trial.mass) &&
            j_at(trial, psi_ext, src.c_psi) <=
                j0 + 1e-4 * t * slope + noise) {
          c = ct;
          it = std::move(trial);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted)
        throw NumericalError(
            "solver line search stalled; gradient norm is the diagnostic",
            gnorm);
    }
    if (!inner_done)
      throw NumericalError(
          "solver did not reach tolerance; last gradient norm is the "
          "diagnostic",
          gnorm);

    if (nm == 0) {
      settled = true;
      break;
    }
    Eigen::VectorXd dn = matched_local_coefs(c, d, it.mass, src.c_psi);
    match_gap = (dn - d).cwiseAbs().maxCoeff();
    double gap_scale = 1.0 + d.cwiseAbs().maxCoeff();
    // The matching error feeds into the solution at roughly unit gain, so
    // chasing it below the requested tolerance buys nothing.
    double settle_gap = std::max(1e-11, 0.1 * opts.tol);
    if (match_gap <= settle_gap * gap_scale && full_tol_round) {
      settled = true;
    } else {
      d = dn;
      if (match_gap <= 1e3 * settle_gap * gap_scale) full_tol_round = true;
    }
  }
  if (!settled)
    throw NumericalError(
        "conical expansion matching did not settle; last update size is "
        "the diagnostic",
        match_gap);

  if (std::getenv("LIOUVILLE_TIME"))
    std::fprintf(stderr,
                 "assemble=%.1fs hess=%.1fs match=%.1fs iters=%d "
                 "fine=%.1fs loc=%.1fs proj=%.1fs setupA=%.1fs setupB=%.1fs "
                 "hiq=%.1fs hieval=%.1fs gram=%.1fs sz=%.1fs\n",
                 timing::bucket(0) * 1e-6, timing::bucket(1) * 1e-6,
                 timing::bucket(2) * 1e-6, total_iters,
                 timing::bucket(3) * 1e-6, timing::bucket(4) * 1e-6,
                 timing::bucket(5) * 1e-6, timing::bucket(6) * 1e-6,
                 timing::bucket(7) * 1e-6, timing::bucket(8) * 1e-6,
                 timing::bucket(9) * 1e-6, timing::bucket(10) * 1e-6,
                 timing::bucket(11) * 1e-6);

  ClassicalSolution sol;
  sol.h = make_field_from_coeffs(*transform_, c);
  sol.local_coefs = d;
  sol.x.resize(n + nm);
  sol.x.head(n) = c;
  if (nm > 0) sol.x.tail(nm) = d;
  sol.source = src;
  sol.residual_norm = gnorm;
  sol.j_value = j_at(it, psi_ext, src.c_psi);
  sol.log_mass = std::log(it.mass);
  sol.iterations = total_iters;
  return sol;
}

SingularField reconstruct_phi_star(const LiouvilleProblem& prob,
                                   const ClassicalSolution& sol) {
  if (sol.source.psi_coeffs.size() > 0 && sol.source.psi_coeffs.norm() > 0.0)
    throw ContractError("phi* reconstruction requires the psi = 0 solution");
  const SingularityConfig& cfg = prob.config();
  double c0 = cfg.sum_chi() - 4.0;

  SingularField phi;
  phi.transform = &prob.transform();
  phi.smooth_coeffs = sol.h.coeffs;
  phi.log_metric_coef = 1.0 - cfg.sum_chi() / 4.0;
  phi.centers = cfg.points;
  phi.log_coefs = cfg.weights;
  phi.local_terms = prob.local_terms();
  phi.local_coefs = sol.local_coefs;
  double c = std::log(c0 / cfg.lambda) - sol.log_mass;
  for (std::size_t k = 0; k < cfg.size(); ++k)
    c += cfg.weights[k] * (kKappa - 0.25 * log_metric_density(cfg.points[k]));
  // h uses the mean-centered local terms; the field stores the raw ones,
  // so the means move into the constant.
  for (int b = 0; b < prob.n_local(); ++b)
    c -= sol.local_coefs(b) * prob.local_means()(b);
  phi.constant = c;
  return phi;
}

double classical_free_energy(const LiouvilleProblem& prob,
                             const SourceTerm& src) {
  if (src.c_psi <= 0.0) return std::numeric_limits<double>::infinity();
  ClassicalSolution sol = prob.solve(src);
  double c = src.c_psi;
  return -singularity_self_energy(prob.config()) +
         c * std::log(c / prob.config().lambda) - c - sol.j_value;
}

double variational_exponent_H(const LiouvilleProblem& prob,
                              const SourceTerm& src) {
  ClassicalSolution sol = prob.solve(src);
  double ln_mass = std::log(prob.mass(sol.x));
  return -prob.dirichlet(sol.x) - src.c_psi * ln_mass +
         prob.source_pairing(src, sol.x);
}

Eigen::VectorXd exposing_hyperplane(const LiouvilleProblem& prob,
                                    const Eigen::VectorXd& x, double beta,
                                    double* alpha_out) {
  const SingularityConfig& cfg = prob.config();
  int n = prob.n_spectral();
  Eigen::VectorXd full = Eigen::VectorXd::Zero(prob.n_total());
  int m = std::min<int>(static_cast<int>(x.size()), prob.n_total());
  full.head(m) = x.head(m);
  full(0) = 0.0;
  LiouvilleProblem::Moments mom = prob.moments(full);
  double c0 = cfg.sum_chi() - 4.0;
  double alpha = cfg.lambda * std::exp(beta) * mom.mass - c0;
  if (alpha_out) *alpha_out = alpha;

  // Stationarity of u -> integral psi u g - S_L(u) at u = h + beta reads
  // psi = -(1/2pi) Delta h + Lambda e^beta w e^h on the harmonic modes,
  // which is the J gradient at x with source zero plus the alpha tilt.
  SourceTerm zero_src = make_source_term(cfg, Eigen::VectorXd::Zero(1));
  Eigen::VectorXd g0 = prob.j_gradient(zero_src, full);
  Eigen::VectorXd psi(n);
  psi(0) = alpha / std::sqrt(4.0 * M_PI);
  for (int a = 1; a < n; ++a)
    psi(a) = g0(a) + alpha * mom.first(a) / mom.mass;
  return psi;
}

}  // namespace liouville
