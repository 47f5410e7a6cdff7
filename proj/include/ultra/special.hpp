#pragma once

#include <complex>

namespace ultra {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

cplx dilog(cplx z);

// Inverse tangent integral Ti2(x) = Im-part analogue of Li2, continued to Re x > 0.
cplx inverse_tangent_integral(cplx x);
double inverse_tangent_integral(double x);

// Hurwitz zeta for real s > 1, q > 0.
double hurwitz_zeta(double s, double q);
// q^s * zeta(s, q); stays O(q) where zeta itself underflows.
double hurwitz_zeta_scaled(double s, double q);

double log_add_exp(double a, double b);

}  // namespace ultra
