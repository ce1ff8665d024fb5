#pragma once

#include <complex>

// Hermite polynomials / functions and the closed-form Gaussian-Hermite
// integrals used when computing moment constants.
namespace fkpp::specfun {

using Complex = std::complex<double>;

inline constexpr int kMaxHermiteOrder = 200;

/// Physicists' Hermite polynomial H_n(z) by upward recurrence
/// H_{n+1} = 2 z H_n - 2 n H_{n-1}.
Complex hermite_poly(int n, Complex z);
double hermite_poly(int n, double x);

/// L2-normalized Hermite function H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).
/// Evaluated through the normalized recurrence so large n does not overflow.
double hermite_function(int n, double x);

/// I_n = \int H_n(y) exp(-y^2/2) dy.
double gauss_hermite_I(int n);

/// J_n = \int y^2 H_{2n}(y) exp(-y^2/2) dy.
double gauss_hermite_J(int n);

/// \int exp(-w^2 y^2 + 2 s y) dy = sqrt(pi)/w exp(s^2/w^2), w > 0.
double gaussian_linear_integral(double w, double s);

/// (2l)!/l! as a double; exact for the orders used here.
double double_factorial_ratio(int l);

}  // namespace fkpp::specfun
