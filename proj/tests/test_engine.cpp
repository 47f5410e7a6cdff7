#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "ultra/engine.hpp"
#include "ultra/error.hpp"

using namespace ultra;

namespace {

const WeightFunction& sigma1() {
    static const auto w = weight_from_sequence(gevrey_sequence(1.0, 1024));
    return w;
}
const WeightFunction& omega2() {
    static const auto w = weight_from_sequence(gevrey_sequence(2.0, 1024));
    return w;
}

IndexEstimate bracket(double lo, double hi) {
    IndexEstimate b;
    b.r_lo = lo;
    b.r_hi = hi;
    b.estimate = 0.5 * (lo + hi);
    return b;
}

std::shared_ptr<const ExtensionSetup> smoke() {
    static const auto s = make_extension_setup(sigma1(), omega2(), bracket(2.0, 2.0), ExtensionConfig{});
    return s;
}

std::vector<double> factorials(std::size_t n) {
    std::vector<double> v(n);
    double f = 1.0;
    for (std::size_t p = 0; p < n; ++p) {
        v[p] = f;
        f *= double(p + 1);
    }
    return v;
}

}  // namespace

TEST_CASE("ramification parameters") {
    const auto p = choose_ramification(1.0, bracket(2.0, 2.1), 4.0);
    CHECK(p.delta == doctest::Approx(1.5));
    CHECK(p.s == doctest::Approx(4.0 / 7.0));
    CHECK(p.s * p.delta < 1.0);
    CHECK(p.s * p.Gamma > 1.0);
    CHECK_THROWS_AS(choose_ramification(2.0, bracket(2.0, 2.1), 4.0), PreconditionError);
    CHECK_THROWS_AS(choose_ramification(2.5, bracket(2.0, 2.1), 4.0), PreconditionError);
    CHECK_THROWS_AS(choose_ramification(0.0, bracket(2.0, 2.1), 4.0), InvalidInput);
}

TEST_CASE("calibration and held-out grids are disjoint and inside the sector") {
    auto [cal, held] = split_sector(1.0, 1e-3, 1e3, 13);
    for (cplx z : held.points()) {
        CHECK(held.contains(z));
        for (cplx w : cal.points()) CHECK(std::abs(z - w) > 1e-12 * std::abs(z));
    }
    CHECK_FALSE(cal.contains(cplx(-1.0, 0.0)));
    CHECK_THROWS_AS(make_sector(1.0, 1.0, 2.0, 3, {1.0}), InvalidInput);
}

TEST_CASE("minimal monotone constant") {
    CHECK(fit_min_constant([](double c) { return c >= 3.7; }) == doctest::Approx(3.7).epsilon(1e-9));
    CHECK(fit_min_constant([](double) { return true; }) == 1.0);
    CHECK(std::isinf(fit_min_constant([](double) { return false; })));
}

TEST_CASE("flat function is F_a composed with xi^s") {
    const auto& G = smoke()->G;
    const double s = G.params().s, a = G.params().a;
    OuterFunction F(power_weight(omega2(), 1.0 / s));
    for (cplx xi : {cplx(0.5, 0.0), cplx(0.1, 0.1), cplx(2.0, -1.0)}) {
        const cplx w = std::exp(s * std::log(xi));
        CHECK(std::abs(G.log_value(xi) - F.log_value_poisson(w, a).value) < 1e-7 * std::abs(G.log_value(xi)));
    }
    for (double x : geometric_grid(1e-3, 1e3, 7)) {
        const cplx v = G.log_value(cplx(x, 0.0));
        CHECK(std::isfinite(v.real()));
        CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real())));
    }
    const double edge = G.params().delta * kPi / 2.0;
    CHECK_THROWS_AS(G.log_value(std::polar(1.0, edge * 1.001)), PreconditionError);
}

TEST_CASE("sequence variant scales the logarithm by s") {
    const auto& G = smoke()->G;
    FlatFunction Gs(sigma1(), omega2(), G.params(), FlatVariant::sequences);
    CHECK(Gs.weight_factor() == doctest::Approx(G.params().s));
    for (cplx xi : {cplx(0.3, 0.0), cplx(0.05, 0.02)})
        CHECK(std::abs(Gs.log_value(xi) - G.params().s * G.log_value(xi)) < 1e-9 * std::abs(Gs.log_value(xi)));
}

TEST_CASE("flat-function sandwich, both variants") {
    const auto S = smoke();
    CHECK(S->flat.report.verdict == Verdict::holds);
    CHECK(std::isfinite(S->flat.K2));
    CHECK(std::isfinite(S->flat.K3));
    CHECK(S->flat.K2 > 0.0);
    FlatFunction Gs(sigma1(), omega2(), S->G.params(), FlatVariant::sequences);
    const auto fb = flat_sandwich(Gs, S->calibration, S->held_out);
    CHECK(fb.report.verdict == Verdict::holds);
    CHECK(fb.K4 == doctest::Approx(S->G.params().s));
}

TEST_CASE("flatness at the origin") {
    for (double p : {1.0, 2.0, 5.0}) {
        const auto r = flatness_report(smoke()->G, p);
        CHECK(r.verdict == Verdict::holds);
    }
}

TEST_CASE("kernel bound and integrability") {
    const auto S = smoke();
    const auto kb = kernel_bound(S->G, S->calibration, S->held_out);
    CHECK(kb.report.verdict == Verdict::holds);
    CHECK(std::isfinite(kb.C));
    const auto ki = kernel_integrability(S->G);
    CHECK(ki.verdict == Verdict::holds);
    CHECK(ki.witness > 0.0);
    for (double t : {1e-2, 1.0, 1e2}) CHECK(S->G.kernel(cplx(t, 0.0)).real() > 0.0);
}

TEST_CASE("moments against direct quadrature") {
    const auto S = smoke();
    const auto& G = S->G;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // m(p) = int_0^inf t^{p-1} e_a(t) dt in the variable t = e^y
    for (int p : {0, 3, 10}) {
        auto f = [&](double y) { return std::exp(p * y + G.log_kernel(cplx(std::exp(y), 0.0)).real()); };
        double total = 0.0;
        try {
            for (double y = -80.0; y < 80.0; y += 2.0) {
                total += GK::integrate(f, y, y + 2.0, 12, 1e-12);
                if (y > 0.0 && f(y + 2.0) < 1e-30 * total) break;
            }
        } catch (const OutOfHorizon&) {
        }
        CHECK(std::log(total) == doctest::Approx(S->moments.log_m[p]).epsilon(1e-8));
    }
    REQUIRE(S->moments.size() >= 21);
    CHECK(moment_log_convexity(S->moments).verdict == Verdict::holds);
    CHECK(S->moment_bounds.report.verdict == Verdict::holds);
    CHECK(S->moment_bounds.C1 > 0.0);
    CHECK(std::isfinite(S->moment_bounds.C2));
}

TEST_CASE("Borel coefficients") {
    const auto S = smoke();
    std::vector<double> unit{1.0};
    const auto f = extend(unit, S);
    CHECK(f.g.coefficients[0] == doctest::Approx(std::exp(-S->moments.log_m[0])));
    CHECK(f.g(0.3) == doctest::Approx(f.g(0.0)));
    const auto lam = factorials(S->moments.size());
    const auto g = extend(lam, S).g;
    CHECK(g.coefficient_check.verdict == Verdict::holds);
    CHECK(g.certified_radius == doctest::Approx(S->flat.K2 / 2.0));
    std::vector<double> too_long(S->moments.size() + 1, 1.0);
    CHECK_THROWS_AS(extend(too_long, S), PreconditionError);
}

TEST_CASE("extension is linear and holomorphic") {
    const auto S = smoke();
    const auto lam = factorials(S->moments.size());
    std::vector<double> twice(lam), mix(lam.size());
    for (std::size_t p = 0; p < lam.size(); ++p) {
        twice[p] *= 2.0;
        mix[p] = p % 2 ? -1.0 : 3.0;
    }
    std::vector<double> sum(lam.size());
    for (std::size_t p = 0; p < lam.size(); ++p) sum[p] = lam[p] + mix[p];
    const auto f = extend(lam, S), f2 = extend(twice, S), fm = extend(mix, S), fs = extend(sum, S);
    for (cplx z : {cplx(0.01, 0.0), cplx(0.02, 0.01), cplx(0.005, -0.004)}) {
        const auto a = f.evaluate(z), b = f2.evaluate(z);
        CHECK(std::abs(b.value - 2.0 * a.value) <= 2.0 * a.error + b.error + 1e-14);
        CHECK(std::abs(fs(z) - f(z) - fm(z)) < 1e-12);
        CHECK(cauchy_riemann_residual(f, z) < 1e-6);
    }
    CHECK(std::abs(f(cplx(0.01, 0.0)).imag()) < 1e-14);
    CHECK_THROWS_AS(f.evaluate(std::polar(0.01, 0.99 * kPi)), PreconditionError);
}

TEST_CASE("leading coefficients are recovered") {
    const auto S = smoke();
    const auto lam = factorials(S->moments.size());
    const auto [l0, l1] = recover_leading_coefficients(extend(lam, S));
    CHECK(l0 == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("remainder envelope") {
    const auto S = smoke();
    const auto f = extend(factorials(S->moments.size()), S);
    const std::vector<int> orders{1, 2, 4, 8};
    const auto cal = make_sector(1.0, 1e-3, 0.1, 5, {0.0, 0.5, -0.5}).points();
    const auto held = make_sector(1.0, 2e-3, 0.07, 4, {0.25, -0.75, 0.9}).points();
    const std::vector<double> ray{1e-4, 2e-4, 4e-4};
    const auto r = remainder_report(f, orders, cal, held, ray);
    CHECK(r.theoretical.verdict == Verdict::holds);
    CHECK(r.rows.size() == orders.size() * (cal.size() + held.size()));
    CHECK(r.slope.at(1) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.slope.at(2) == doctest::Approx(2.0).epsilon(0.05));
}
