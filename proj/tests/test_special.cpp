#include "doctest.h"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "ultra/special.hpp"

using namespace ultra;

namespace {

constexpr double kCatalan = 0.915965594177219015054603514932;

// Li2 oracle: -int_0^1 log(1 - z t)/t dt along the segment.
cplx dilog_quadrature(cplx z) {
    auto f = [z](double t) -> cplx {
        if (t == 0.0) return z;
        return -std::log(1.0 - z * t) / t;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 20, 1e-14);
}

// Ti2 oracle: int_0^1 atan(x t)/t dt, complex atan via logs.
cplx ti2_quadrature(cplx x) {
    auto f = [x](double t) -> cplx {
        if (t == 0.0) return x;
        const cplx w = x * t;
        const cplx i(0.0, 1.0);
        return (0.5 * i * (std::log(1.0 - i * w) - std::log(1.0 + i * w))) / t;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 20, 1e-14);
}

}  // namespace

TEST_CASE("dilog special values") {
    const double pi2 = kPi * kPi;
    CHECK(std::abs(dilog(1.0) - pi2 / 6) < 1e-15);
    CHECK(std::abs(dilog(-1.0) + pi2 / 12) < 1e-14);
    CHECK(std::abs(dilog(0.5) - (pi2 / 12 - 0.5 * std::log(2.0) * std::log(2.0))) < 1e-14);
    const cplx li_i = dilog(cplx(0.0, 1.0));
    CHECK(std::abs(li_i.real() + pi2 / 48) < 1e-14);
    CHECK(std::abs(li_i.imag() - kCatalan) < 1e-14);
}

TEST_CASE("dilog agrees with its integral representation off the cut") {
    for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.9), cplx(0.9, -0.3), cplx(-3.0, 2.0), cplx(0.2, -4.0)}) {
        const cplx a = dilog(z), b = dilog_quadrature(z);
        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("inverse tangent integral") {
    CHECK(std::abs(inverse_tangent_integral(1.0) - kCatalan) < 1e-14);
    for (double x : {0.1, 0.7, 2.5, 40.0}) {
        const double lhs = inverse_tangent_integral(x) - inverse_tangent_integral(1.0 / x);
        CHECK(std::abs(lhs - 0.5 * kPi * std::log(x)) < 1e-13);
    }
    for (cplx x : {cplx(0.2, 0.1), cplx(0.6, -0.5), cplx(0.3, 0.9), cplx(3.0, -2.0), cplx(0.05, 0.01)}) {
        const cplx a = inverse_tangent_integral(x), b = ti2_quadrature(x);
        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("Hurwitz zeta") {
    for (double s : {1.5, 2.0, 3.0, 7.25}) CHECK(std::abs(hurwitz_zeta(s, 1.0) - boost::math::zeta(s)) < 1e-13);
    // zeta(s, q) = zeta(s) - sum_{k<q} k^{-s} at integer q
    double partial = 0.0;
    for (int k = 1; k < 50; ++k) partial += std::pow(k, -2.0);
    CHECK(std::abs(hurwitz_zeta(2.0, 50.0) - (boost::math::zeta(2.0) - partial)) < 1e-14);
    // scaled variant stays finite where zeta underflows
    const double big = hurwitz_zeta_scaled(900.0, 1025.0);
    CHECK(big > 1.0);
    CHECK(big < 2.0);
    CHECK(std::abs(hurwitz_zeta_scaled(2.5, 0.3) - std::pow(0.3, 2.5) * hurwitz_zeta(2.5, 0.3)) < 1e-13);
}
