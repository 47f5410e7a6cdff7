#pragma once

#include <cmath>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ultra {

struct QuadratureConfig {
    double rel_tol = 1e-11;
    unsigned max_depth = 12;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
};

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    using T = decltype(f(a));
    QuadResult<T> r;
    double err = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, cfg.max_depth, cfg.rel_tol, &err);
    r.error = err * std::abs(r.value);  // boost reports a relative estimate
    return r;
}

// Integrates across consecutive break points; smooth pieces get a single adaptive pass each.
template <class F>
auto integrate_pieces(F&& f, std::span<const double> points, const QuadratureConfig& cfg = {}) {
    using T = decltype(f(points[0]));
    QuadResult<T> r;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        auto piece = integrate(f, points[i], points[i + 1], cfg);
        r.value += piece.value;
        r.error += piece.error;
    }
    return r;
}

}  // namespace ultra
