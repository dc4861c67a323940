#include "beg/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace beg::theory {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

}  // namespace

double g(double gamma, double x) {
  require_positive(gamma, "gamma");
  require_positive(x, "x");
  const double c = 1.0 + 2.0 / gamma;
  return x * (c - std::log(x)) - c;
}

double x_hat(double gamma) {
  require_positive(gamma, "gamma");
  const double v = std::exp(2.0 / gamma);
  if (!std::isfinite(v)) throw std::domain_error("gamma too small: e^{2/gamma} overflows");
  return v;
}

double root_xstar(double gamma) {
  double lo = x_hat(gamma);  // g(x_hat) > 0: g increases from g(1) = 0 up to x_hat
  double hi = 2.0 * lo;
  while (g(gamma, hi) >= 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("failed to bracket the root of g");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(gamma, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(g(gamma, lo)) <= std::abs(g(gamma, hi)) ? lo : hi;
}

double alpha_star(double gamma) {
  if (!(gamma > 0.0 && gamma <= 2.0))
    throw std::invalid_argument("alpha_star needs 0 < gamma <= 2; larger thresholds are inadmissible");
  return gamma / (root_xstar(gamma) - 1.0);
}

TheoryPoint theory_point(double gamma) {
  const double xs = root_xstar(gamma);
  return {gamma, x_hat(gamma), xs, alpha_star(gamma)};
}

double zero_error_h(double alpha, double gamma, double rho, double t) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(rho, "rho");
  return -t * gamma + rho * alpha * (0.5 * std::exp(2.0 * t) - 0.5 - t);
}

double zero_error_minimizer(double alpha, double gamma, double rho) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(rho, "rho");
  return 0.5 * std::log1p(gamma / (rho * alpha));
}

double zero_error_f(double alpha, double rho, double x) {
  require_positive(alpha, "alpha");
  require_positive(rho, "rho");
  require_positive(x, "x");
  return 1.0 + 0.5 * rho * alpha * (-x * std::log(x) + x - 1.0);
}

double zero_error_exponent(double alpha, double gamma, double rho) {
  require_positive(gamma, "gamma");
  require_positive(alpha, "alpha");
  require_positive(rho, "rho");
  return zero_error_f(alpha, rho, 1.0 + gamma / (rho * alpha));
}

double erase_v(double alpha, double gamma, double rho) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(rho, "rho");
  return 1.0 - 2.0 / alpha + gamma / (rho * alpha);
}

double erase_minimizer(double alpha, double gamma, double rho) {
  const double v = erase_v(alpha, gamma, rho);
  if (!(v > 0.0)) throw std::domain_error("erasure minimiser undefined for v <= 0");
  return -0.5 * std::log(v);
}

double erase_error_exponent(double alpha, double gamma, double rho) {
  if (!(gamma > 0.0 && gamma < 2.0)) throw std::invalid_argument("erasure exponent needs 0 < gamma < 2");
  const double v = erase_v(alpha, gamma, rho);
  if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
  return 0.5 * rho * alpha * (-v * std::log(v) + v - 1.0);
}

double signflip_minimizer(double alpha) {
  require_positive(alpha, "alpha");
  return std::asinh(1.0 / alpha);
}

double signflip_exponent(double alpha) {
  require_positive(alpha, "alpha");
  const double a = 1.0 / alpha;
  const double root = std::sqrt(1.0 + a * a);
  // cosh(arsinh a) - 1 = sqrt(1 + a^2) - 1, written without cancellation.
  return -std::asinh(a) + alpha * (a * a / (root + 1.0));
}

double cramer_objective(double lambda, double epsilon, double x, double t) {
  return t * x + lambda - 0.5 * lambda * std::exp(-epsilon * t) * (std::exp(2.0 * t) + 1.0);
}

double cramer_rate(double lambda, double epsilon, double x) {
  require_positive(lambda, "lambda");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  const double mean = lambda * (1.0 - epsilon);
  if (!(x >= mean) || !std::isfinite(x)) throw std::invalid_argument("cramer_rate needs x above the mean lambda (1 - eps)");
  if (x == mean) return 0.0;
  if (epsilon == 0.0) return 0.5 * x * std::log(x / lambda) - 0.5 * (x - lambda);

  // psi' is strictly decreasing, positive at 0 and negative past the bound.
  const auto slope = [&](double t) {
    return x + epsilon * 0.5 * lambda * std::exp(-epsilon * t) -
           (2.0 - epsilon) * 0.5 * lambda * std::exp((2.0 - epsilon) * t);
  };
  double lo = 0.0;
  double hi = std::log1p(2.0 * x / lambda);
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * (1.0 + hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return cramer_objective(lambda, epsilon, x, 0.5 * (lo + hi));
}

Admissibility gamma_admissibility(double gamma, double alpha) {
  require_positive(gamma, "gamma");
  require_positive(alpha, "alpha");
  if (gamma > 2.0) return Admissibility::inadmissible_gamma;
  return alpha < alpha_star(gamma) - 1e-9 ? Admissibility::stable : Admissibility::unstable;
}

const char* to_string(Admissibility a) noexcept {
  switch (a) {
    case Admissibility::stable:
      return "stable";
    case Admissibility::unstable:
      return "unstable";
    case Admissibility::inadmissible_gamma:
      return "inadmissible_gamma";
  }
  return "unknown";
}

}  // namespace beg::theory
