#include "beg/model_params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace beg {

double sparse_activity(std::int64_t n) {
  if (n < 3) throw std::invalid_argument("N must be at least 3, got " + std::to_string(n));
  const double dn = static_cast<double>(n);
  return std::log(dn) / dn;
}

std::int64_t sparse_pattern_count(std::int64_t n, double alpha) {
  if (n < 3) throw std::invalid_argument("N must be at least 3, got " + std::to_string(n));
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive and finite");
  const double dn = static_cast<double>(n);
  const double ln = std::log(dn);
  const double m = std::floor(alpha * dn * dn / (ln * ln));
  if (m >= static_cast<double>(std::numeric_limits<std::int64_t>::max()))
    throw std::invalid_argument("pattern count overflows");
  return m < 1.0 ? 1 : static_cast<std::int64_t>(m);
}

ModelParams::ModelParams(std::int64_t n, double gamma, double alpha)
    : n_(n), gamma_(gamma), alpha_(alpha) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be non-negative and finite");
  activity_ = sparse_activity(n);
  pattern_count_ = sparse_pattern_count(n, alpha);
}

ModelParams ModelParams::with_activity(std::int64_t n, double activity, std::int64_t pattern_count,
                                       double gamma) {
  if (n < 3) throw std::invalid_argument("N must be at least 3, got " + std::to_string(n));
  if (!(activity > 0.0 && activity < 1.0)) throw std::invalid_argument("activity must lie in (0, 1)");
  if (pattern_count < 1) throw std::invalid_argument("pattern count must be at least 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be non-negative and finite");
  ModelParams p;
  p.n_ = n;
  p.gamma_ = gamma;
  const double dn = static_cast<double>(n);
  const double ln = std::log(dn);
  p.alpha_ = static_cast<double>(pattern_count) * ln * ln / (dn * dn);
  p.activity_ = activity;
  p.pattern_count_ = pattern_count;
  return p;
}

double ModelParams::threshold() const noexcept {
  return gamma_ * std::log(static_cast<double>(n_));
}

}  // namespace beg
