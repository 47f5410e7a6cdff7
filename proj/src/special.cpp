#include "ultra/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ultra {

namespace {

// B_{2k} for k = 0..20.
constexpr std::array<double, 21> kBernoulliEven = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};

// Li2 = sum_n B_n u^{n+1}/(n+1)!, u = -log(1-z); fine for |z| <= 1, Re z <= 1/2.
cplx dilog_series(cplx z) {
    const cplx u = -std::log(1.0 - z);
    const cplx u2 = u * u;
    cplx sum = u - 0.25 * u2;
    cplx power = u;  // u^{2k+1}
    double fact = 1.0;  // (2k+1)!
    for (int k = 1; k <= 20; ++k) {
        power *= u2;
        fact *= double(2 * k) * double(2 * k + 1);
        const cplx term = kBernoulliEven[k] / fact * power;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

cplx dilog(cplx z) {
    constexpr double zeta2 = kPi * kPi / 6.0;
    if (z == cplx(0.0)) return 0.0;
    if (z == cplx(1.0)) return zeta2;
    if (std::abs(z) > 1.0) {
        const cplx l = std::log(-z);
        return -dilog(1.0 / z) - zeta2 - 0.5 * l * l;
    }
    if (z.real() > 0.5) return -dilog(1.0 - z) + zeta2 - std::log(z) * std::log(1.0 - z);
    return dilog_series(z);
}

cplx inverse_tangent_integral(cplx x) {
    const double m = std::abs(x);
    if (m == 0.0) return 0.0;
    if (m > 1.0 && x.real() > 0.0) return inverse_tangent_integral(1.0 / x) + 0.5 * kPi * std::log(x);
    if (m < 0.25) {
        const cplx x2 = x * x;
        cplx sum = 0.0;
        cplx power = x;
        for (int j = 0; j < 60; ++j) {
            const double d = 2.0 * j + 1.0;
            const cplx term = power / (d * d);
            sum += (j % 2 == 0) ? term : -term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            power *= x2;
        }
        return sum;
    }
    const cplx ix(-x.imag(), x.real());
    return (dilog(ix) - dilog(-ix)) / cplx(0.0, 2.0);
}

double inverse_tangent_integral(double x) {
    if (x < 0.0) return -inverse_tangent_integral(-x);
    return inverse_tangent_integral(cplx(x)).real();
}

double hurwitz_zeta_scaled(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw std::domain_error("hurwitz_zeta: need s > 1, q > 0");
    double sum = 0.0;
    double a = q;
    while (a < 24.0) {
        sum += std::pow(q / a, s);
        a += 1.0;
    }
    // Euler-Maclaurin remainder at a, scaled by a^s.
    double tail = a / (s - 1.0) + 0.5;
    double poch = s;  // s (s+1) ... (s+2j-2)
    double apow = 1.0 / a;  // a^{1-2j}
    double fact = 2.0;  // (2j)!
    for (int j = 1; j <= 12; ++j) {
        const double term = kBernoulliEven[j] / fact * poch * apow;
        tail += term;
        if (std::abs(term) < 1e-17 * tail) break;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        apow /= a * a;
        fact *= double(2 * j + 1) * double(2 * j + 2);
    }
    return sum + std::pow(q / a, s) * tail;
}

double hurwitz_zeta(double s, double q) { return std::pow(q, -s) * hurwitz_zeta_scaled(s, q); }

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace ultra
