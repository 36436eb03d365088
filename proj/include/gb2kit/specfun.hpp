#pragma once

// Special functions backing the closed-form distribution and index formulas.
// Everything here is a pure function of its arguments; no global state.

namespace gb2kit::specfun {

// Euler-Mascheroni constant; equals -digamma(1).
inline constexpr double kEulerGamma = 0.57721566490153286061;

// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
double ln_gamma(double x);

// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

// psi'(x) and psi''(x); used by the 3F2 tail correction.
double trigamma(double x);
double tetragamma(double x);

// ln Gamma(x + delta) - ln Gamma(x), stable for large x and small |delta|/x.
double ln_gamma_ratio(double x, double delta);

// ln B(a, b), a, b > 0.
double ln_beta(double a, double b);

// Regularized incomplete beta I(x; p, q), x in [0, 1].
double reg_inc_beta(double x, double p, double q);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_inc_gamma_q(double a, double x);

// Error function (delegates to the C library implementation).
double erf(double x);

// Gauss hypergeometric 2F1(a, b; c; z). Designed for the arguments the
// index formulas need: z in [-1, ~0.75]. Negative z is mapped to (0, 1/2]
// by an Euler transformation before summing.
double hyp2f1(double a, double b, double c, double z);

// 3F2(a1, a2, a3; b1, b2; 1) by direct term summation. When convergence is
// slow (the margin b1 + b2 - a1 - a2 - a3 is small) the remaining tail is
// evaluated by an Euler-Maclaurin correction instead of more terms.
double hyp3f2_unit(double a1, double a2, double a3, double b1, double b2);

}  // namespace gb2kit::specfun
