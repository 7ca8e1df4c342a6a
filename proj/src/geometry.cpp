#include "liouville/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace liouville {

double green_function(const Complex& x, const Complex& y) {
  double d = std::abs(x - y);
  if (d == 0.0)
    throw SingularEvaluationError("green_function: coincident points");
  return -std::log(d) -
         0.25 * (log_metric_density(x) + log_metric_density(y)) + kKappa;
}

double SingularityConfig::sum_chi() const {
  double s = 0.0;
  for (double chi : weights) s += chi;
  return s;
}

double SingularityConfig::min_pairwise_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      d = std::min(d, std::abs(points[i] - points[j]));
  return d;
}

void SingularityConfig::validate(bool require_negative_curvature) const {
  if (points.size() != weights.size())
    throw ContractError("singularity config: points/weights length mismatch");
  if (lambda <= 0.0)
    throw AdmissibilityError("singularity config: lambda must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].real()) || !std::isfinite(points[i].imag()))
      throw ContractError("singularity config: non-finite point");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw ContractError("singularity config: coincident points");
  }
  for (double chi : weights) {
    if (chi >= 2.0) {
      std::ostringstream os;
      os << "singularity config: chi = " << chi
         << " violates the integrability bound chi < 2";
      throw AdmissibilityError(os.str());
    }
  }
  if (require_negative_curvature && sum_chi() <= 4.0) {
    std::ostringstream os;
    os << "singularity config: sum chi = " << sum_chi()
       << " fails the negative-curvature condition sum chi > 4";
    throw AdmissibilityError(os.str());
  }
}

double log_singular_weight(const SingularityConfig& cfg, const Complex& z) {
  double s = 0.0;
  for (std::size_t k = 0; k < cfg.size(); ++k)
    s += cfg.weights[k] * green_function(cfg.points[k], z);
  return s;
}

double singular_weight(const SingularityConfig& cfg, const Complex& z) {
  return std::exp(log_singular_weight(cfg, z));
}

double log_weight_regular_at(const SingularityConfig& cfg, std::size_t k,
                             const Complex& z) {
  double s = 0.0;
  for (std::size_t j = 0; j < cfg.size(); ++j) {
    if (j == k) {
      // chi_k * (G(z_k, z) + ln|z - z_k|), i.e. the smooth remainder.
      s += cfg.weights[k] *
           (-0.25 * (log_metric_density(cfg.points[k]) +
                     log_metric_density(z)) +
            kKappa);
    } else {
      s += cfg.weights[j] * green_function(cfg.points[j], z);
    }
  }
  return s;
}

}  // namespace liouville
