#include "doctest.h"

#include <cmath>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/engine.hpp"
#include "ultra/outer.hpp"

using namespace ultra;

namespace {

const WeightSequence& g1() {
    static const auto s = gevrey_sequence(1.0, 1024);
    return s;
}
const WeightSequence& g2() {
    static const auto s = gevrey_sequence(2.0, 1024);
    return s;
}

std::vector<cplx> interior_points() {
    return {{1.0, 0.0},  {0.01, 0.0},  {0.3, 0.9},   {1e-3, 2e-3}, {5.0, -3.0},
            {0.2, -0.1}, {2.0, 7.0},   {0.05, 0.01}, {30.0, 1.0},  {0.7, -0.69}};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("kink closed form agrees with the literal Poisson integral") {
    OuterFunction F(weight_from_sequence(g2()));
    REQUIRE(F.closed_form());
    for (cplx w : interior_points()) {
        const auto q = F.log_value_poisson(w, 1.0);
        CHECK(rel(F.log_value(w, 1.0), q.value) < 1e-8);
    }
}

TEST_CASE("closed form agrees with the generic quadrature route") {
    const auto om = weight_from_sequence(g2());
    WeightFunction plain([om](double t) { return t <= 1.0 ? 0.0 : om.kinks()->evaluate(std::log(t), true); },
                         INFINITY, "plain omega_G2");
    OuterFunction generic(plain), kinks(om);
    REQUIRE_FALSE(generic.closed_form());
    for (cplx w : {cplx(1.0, 0.0), cplx(0.3, 0.9), cplx(5.0, -3.0), cplx(0.2, -0.1)})
        CHECK(rel(generic.log_value(w, 1.0), kinks.log_value(w, 1.0)) < 1e-7);
}

TEST_CASE("boundary modulus is exp(-a omega(1/|y|))") {
    const auto om = weight_from_sequence(g2());
    OuterFunction F(om);
    for (double y : {0.01, 0.1, 0.5})
        for (double a : {0.5, 1.0}) {
            const double eps = 1e-7;
            CHECK(F.log_value(cplx(eps, y), a).real() == doctest::Approx(-a * om(1.0 / y)).epsilon(1e-4));
        }
    const auto pw = normalized_weight(builtin_weight(BuiltinWeight::power, 2.0));
    OuterFunction P(pw);
    for (double y : {0.1, 0.5})
        CHECK(P.log_value(cplx(1e-7, y), 1.0).real() == doctest::Approx(-pw(1.0 / y)).epsilon(1e-4));
}

TEST_CASE("real and positive on the positive ray") {
    OuterFunction F(weight_from_sequence(g2()));
    for (double a : {0.5, 1.0})
        for (double x : geometric_grid(1e-4, 1e4, 17)) {
            const cplx v = F(cplx(x, 0.0), a);
            CHECK(v.real() > 0.0);
            CHECK(std::abs(v.imag()) < 1e-8 * std::abs(v));
        }
}

TEST_CASE("F_a equals F_1^a") {
    OuterFunction F(weight_from_sequence(g2()));
    for (double a : {0.5, 1.0, 2.0})
        for (cplx w : interior_points()) {
            const cplx fa = std::exp(F.log_value_poisson(w, a).value);
            const cplx f1a = std::exp(a * F.log_value(w, 1.0));
            CHECK(rel(fa, f1a) < 1e-6);
        }
}

TEST_CASE("holomorphic: Cauchy-Riemann on log F") {
    OuterFunction F(weight_from_sequence(g2()));
    for (cplx w : {cplx(0.4, 0.3), cplx(2.0, -1.0)}) {
        const double h = 1e-5 * std::abs(w);
        const cplx dx = (F.log_value(w + h, 1.0) - F.log_value(w - h, 1.0)) / (2.0 * h);
        const cplx dy = (F.log_value(w + cplx(0, h), 1.0) - F.log_value(w - cplx(0, h), 1.0)) / cplx(0, 2.0 * h);
        CHECK(std::abs(dx - dy) < 1e-6 * std::abs(dx));
    }
}

TEST_CASE("sandwich with sigma = omega_G1 on a held-out grid") {
    OuterFunction F(weight_from_sequence(g2()));
    const auto sigma = weight_from_sequence(g1());
    auto [cal, held] = split_sector(1.0, 1e-3, 1e3, 13);
    for (double a : {0.5, 1.0}) {
        const auto pc = cal.points(), ph = held.points();
        const auto b = outer_sandwich(F, sigma, a, pc, ph);
        CHECK(b.report.verdict == Verdict::holds);
        CHECK(std::isfinite(b.A));
        CHECK(std::isfinite(b.B));
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(OuterFunction(builtin_weight(BuiltinWeight::power, 2.0)), PreconditionError);
    CHECK_THROWS_AS(OuterFunction(normalized_weight(builtin_weight(BuiltinWeight::power, 0.5))), PreconditionError);
    OuterFunction F(weight_from_sequence(g2()));
    CHECK_THROWS_AS(F.log_value(cplx(-1.0, 0.0), 1.0), InvalidInput);
    CHECK_THROWS_AS(F.log_value(cplx(1.0, 0.0), 0.0), InvalidInput);
}
