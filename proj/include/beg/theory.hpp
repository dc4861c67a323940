#pragma once

// Closed-form capacity calculator for the thresholded sparse BEG network.
// All logarithms are natural.

namespace beg::theory {

/// g_gamma(x) = x (1 + 2/gamma - ln x) - 1 - 2/gamma.
/// Throws std::invalid_argument unless gamma > 0 and x > 0.
double g(double gamma, double x);

/// e^{2/gamma}, the maximiser of g_gamma.
double x_hat(double gamma);

/// The root of g_gamma above 1 (it lies above x_hat). Bracketed bisection:
/// [x_hat, X] with X doubled until g < 0, then halved to a relative width
/// of 1e-12 or until the bracket stops shrinking.
double root_xstar(double gamma);

/// gamma / (x*_gamma - 1). Defined for 0 < gamma <= 2.
double alpha_star(double gamma);

struct TheoryPoint {
  double gamma;
  double x_hat;
  double x_star;
  double alpha_star;
};

TheoryPoint theory_point(double gamma);

// Zero -> nonzero errors. With k = rho ln N active neurons, the log of the
// error probability per ln N is 1 + min_t h(t).

/// h(t) = -t gamma + rho alpha (e^{2t}/2 - 1/2 - t).
double zero_error_h(double alpha, double gamma, double rho, double t);

/// t* = ln(1 + gamma/(rho alpha)) / 2, the global minimiser of h.
double zero_error_minimizer(double alpha, double gamma, double rho);

/// f_{alpha,rho}(x) = 1 + rho alpha (-x ln x + x - 1) / 2.
double zero_error_f(double alpha, double rho, double x);

/// f_{alpha,rho}(1 + gamma/(rho alpha)). Negative means the error
/// probability vanishes.
double zero_error_exponent(double alpha, double gamma, double rho = 1.0);

/// v = 1 - 2/alpha + gamma/(rho alpha).
double erase_v(double alpha, double gamma, double rho = 1.0);

/// u* = -ln(v) / 2 when v > 0.
double erase_minimizer(double alpha, double gamma, double rho = 1.0);

/// rho alpha (-v ln v + v - 1) / 2 when v > 0, otherwise -infinity (the
/// exponent is unbounded below). Requires 0 < gamma < 2.
double erase_error_exponent(double alpha, double gamma, double rho = 1.0);

/// s* = arsinh(1/alpha).
double signflip_minimizer(double alpha);

/// -arsinh(1/alpha) + alpha (cosh(arsinh(1/alpha)) - 1); negative for all
/// alpha > 0.
double signflip_exponent(double alpha);

/// psi_eps(t) = t x + lambda - (lambda/2) e^{-eps t} (e^{2t} + 1).
double cramer_objective(double lambda, double epsilon, double x, double t);

/// Legendre transform of the log-mgf of a Poisson(lambda) sum of
/// {-eps, 2-eps} steps, evaluated at x >= lambda (1 - eps). Closed form for
/// eps = 0; otherwise the concave objective is maximised on
/// [0, ln(1 + 2x/lambda)] by bisection on its derivative.
double cramer_rate(double lambda, double epsilon, double x);

enum class Admissibility { stable, unstable, inadmissible_gamma };

/// Classifies (gamma, alpha) against the sharp capacity bound. gamma > 2 is
/// inadmissible; gamma = 2 is compared against alpha_star(2). A load within
/// 1e-9 of the bound counts as unstable.
Admissibility gamma_admissibility(double gamma, double alpha);

const char* to_string(Admissibility a) noexcept;

}  // namespace beg::theory
