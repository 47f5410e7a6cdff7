#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/weight.hpp"

using namespace ultra;

namespace {

double brute_omega(const WeightSequence& M, double t) {
    double best = 0.0;
    for (std::size_t p = 0; p <= M.horizon(); ++p) best = std::max(best, p * std::log(t) - M.log_value(p));
    return best;
}

double brute_log_h(const WeightSequence& M, double t) {
    double best = 0.0;
    for (std::size_t k = 0; k <= M.horizon(); ++k) best = std::min(best, M.log_value(k) + k * std::log(t));
    return best;
}

// piecewise-linear interpolation of log M: the exact conjugate of omega_M
double interp_log_M(const WeightSequence& M, double x) {
    const std::size_t k = std::size_t(std::floor(x));
    const double f = x - double(k);
    if (f == 0.0) return M.log_value(k);
    return (1.0 - f) * M.log_value(k) + f * M.log_value(k + 1);
}

}  // namespace

TEST_CASE("builtin weights") {
    auto s2 = builtin_weight(BuiltinWeight::logpower, 2.0);
    CHECK(s2(1.0) == 0.0);
    CHECK(s2(std::exp(2.0)) == doctest::Approx(4.0));
    CHECK(s2.normalized());
    auto p2 = builtin_weight(BuiltinWeight::power, 2.0);
    CHECK(p2(4.0) == doctest::Approx(2.0));
    CHECK_FALSE(p2.normalized());
    CHECK_THROWS_AS(builtin_weight(BuiltinWeight::logpower, 1.0), InvalidInput);
}

TEST_CASE("associated function of a sequence") {
    auto g1 = gevrey_sequence(1.0, 64);
    auto g2 = gevrey_sequence(2.0, 64);
    CHECK(omega_from_sequence(g1, std::exp(1.0)) == doctest::Approx(2.0 - std::log(2.0)).epsilon(1e-14));
    CHECK(omega_from_sequence(g1, std::exp(1.0)) == doctest::Approx(1.3069).epsilon(1e-4));
    CHECK(omega_from_sequence(g1, 0.7) == 0.0);
    for (double t : {1.5, 3.0, 17.0, 50.0, 63.9}) CHECK(omega_from_sequence(g1, t) == doctest::Approx(brute_omega(g1, t)));
    CHECK_THROWS_AS(omega_from_sequence(g1, 100.0), OutOfHorizon);

    // omega_{M^{1/r}}(t) = (1/r) omega_M(t^r) with M = G^2, r = 2
    CHECK(omega_from_sequence(g1, 3.0) == doctest::Approx(0.5 * omega_from_sequence(g2, 9.0)).epsilon(1e-13));

    auto w2 = weight_from_sequence(g2);
    // (omega_M)^r = r omega_{M^{1/r}} with r = 1/2: M^{1/r} = G^4
    auto g4 = gevrey_sequence(4.0, 64);
    auto w2r = power_weight(w2, 0.5);
    REQUIRE(w2r.kinks() != nullptr);
    for (double t : {2.0, 10.0, 40.0, 1e4}) {
        CHECK(w2r(t) == doctest::Approx(0.5 * omega_from_sequence(g4, t)));
        CHECK(w2r.kinks()->evaluate(std::log(t), false) == doctest::Approx(0.5 * omega_from_sequence(g4, t)));
    }
}

TEST_CASE("h and omega duality") {
    for (double r : {1.0, 2.0, 3.5}) {
        auto M = gevrey_sequence(r, 200);
        const double rad = std::exp(M.log_quotient(200));
        for (int i = 0; i < 50; ++i) {
            const double t = std::exp(-std::log(rad) * (i + 0.5) / 50.0);
            const double lh = log_h_from_sequence(M, t);
            CHECK(std::abs(lh + omega_from_sequence(M, 1.0 / t)) < 1e-10);
            CHECK(std::abs(lh - brute_log_h(M, t)) < 1e-9 * (1.0 + std::abs(lh)));
        }
        CHECK(log_h_from_sequence(M, 1.0) == 0.0);
        CHECK(log_h_from_sequence(M, 5.0) == 0.0);
    }
}

TEST_CASE("iota transform") {
    auto w = weight_from_sequence(gevrey_sequence(1.0, 64));
    auto ii = iota_weight(iota_weight(w));
    for (double t : {0.5, 2.0, 30.0}) CHECK(ii(t) == doctest::Approx(w(t)));
    auto i1 = iota_weight(w);
    CHECK(i1(1.0) == 0.0);
    CHECK(i1(7.0) == 0.0);
}

TEST_CASE("Legendre conjugate") {
    auto w = weight_from_sequence(gevrey_sequence(2.0, 256));
    CHECK(legendre_conjugate(w, 0.0).value == doctest::Approx(0.0));
    for (double x : {0.5, 1.0, 3.0, 7.25, 40.0, 100.5})
        CHECK(legendre_conjugate(w, x).value == doctest::Approx(interp_log_M(*w.kinks()->seq, x)).epsilon(1e-9));

    auto lin = WeightFunction([](double t) { return t; }, 1e300, "t");
    for (double x : {1.0, 2.0, 10.0, 300.0})
        CHECK(legendre_conjugate(lin, x).value == doctest::Approx(x * std::log(x) - x).epsilon(1e-10));

    auto root = normalized_weight(builtin_weight(BuiltinWeight::power, 2.0));
    for (auto* ww : {&w, &root})
        for (int i = 0; i < 20; ++i) {
            const double y = 0.25 + 0.4 * i;
            const double phi = (*ww)(std::exp(y));
            CHECK(std::abs(biconjugate(*ww, y) - phi) <= 1e-6 * std::max(1.0, phi));
        }
}

TEST_CASE("weight matrix") {
    auto g2 = gevrey_sequence(2.0, 1024);
    auto m = associated_matrix(weight_from_sequence(g2));
    for (double l : {0.5, 1.0, 4.0}) CHECK(m.log_entry(l, 0) == 0.0);
    for (std::size_t j = 1; j <= 20; ++j) {
        CHECK(m.log_entry(1.0, j) == doctest::Approx(g2.log_value(j)).epsilon(1e-10));
        CHECK(m.log_entry(1.0, j) <= m.log_entry(2.0, j) + 1e-10);
        CHECK(m.log_entry(2.0, j) <= m.log_entry(4.0, j) + 1e-10);
    }
    for (double l : {0.5, 1.0, 2.0})
        for (std::size_t j = 1; j <= 9; j += 2)
            for (std::size_t k = 1; k <= 9; k += 3)
                CHECK(m.log_entry(l, j + k) <= m.log_entry(2.0 * l, j) + m.log_entry(2.0 * l, k) + 1e-9);

    auto row = m.row(1.0, 60);
    CHECK(row.log_convex());
    CHECK(compare_sequences(row, gevrey_sequence(2.0, 60)).equivalent == Verdict::holds);
    auto row4 = m.row(4.0, 60);
    CHECK(row4.log_convex());
    CHECK(compare_sequences(row, row4).equivalent == Verdict::holds);  // mg: rows pairwise equivalent
}

TEST_CASE("h of matrix rows: h_{W^l}(s) <= h_{W^{2l}}(A s)^2") {
    auto m = associated_matrix(weight_from_sequence(gevrey_sequence(2.0, 1024)));
    auto w1 = m.row(1.0, 100), w2 = m.row(2.0, 100);
    const double rad = std::exp(w2.log_quotient(100));
    auto needed = [&](double s) {  // smallest A on a fine log grid
        for (double la = 0.0; la < 10.0; la += 0.01)
            if (log_h_from_sequence(w1, s) <= 2.0 * log_h_from_sequence(w2, std::exp(la) * s) + 1e-12)
                return std::exp(la);
        return 1e300;
    };
    double A = 1.0;
    for (int i = 0; i < 20; ++i) A = std::max(A, needed(std::exp(-std::log(rad / 4) * (i + 0.5) / 20.0)));
    CHECK(A < 100.0);
    for (int i = 0; i < 20; ++i) {
        const double s = std::exp(-std::log(rad / 4) * (i + 0.25) / 20.0);
        CHECK(log_h_from_sequence(w1, s) <= 2.0 * log_h_from_sequence(w2, 1.5 * A * s) + 1e-12);
    }
}

TEST_CASE("condition reports") {
    auto root = builtin_weight(BuiltinWeight::power, 2.0);
    auto nq = weight_condition_report(root, WeightCondition::nq_r, {1.0});
    CHECK(nq.verdict == Verdict::holds);
    CHECK(nq.witness == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(weight_condition_report(root, WeightCondition::nq_r, {2.5}).verdict == Verdict::fails);

    auto s2 = builtin_weight(BuiltinWeight::logpower, 2.0);
    CHECK(weight_condition_report(s2, WeightCondition::omega6).verdict == Verdict::fails);
    CHECK(weight_condition_report(s2, WeightCondition::omega1).verdict == Verdict::holds);
    CHECK(weight_condition_report(s2, WeightCondition::omega3).verdict == Verdict::holds);
    CHECK(weight_condition_report(s2, WeightCondition::omega4).verdict == Verdict::holds);
    CHECK(weight_condition_report(s2, WeightCondition::omega5).verdict == Verdict::holds);
    CHECK(weight_condition_report(s2, WeightCondition::nq_r, {5.0}).verdict == Verdict::holds);

    auto lin = WeightFunction([](double t) { return t; }, 1e300, "t");
    CHECK(weight_condition_report(lin, WeightCondition::omega5).verdict == Verdict::fails);
    CHECK(weight_condition_report(lin, WeightCondition::omega2).verdict == Verdict::holds);
    CHECK(weight_condition_report(root, WeightCondition::omega6).verdict == Verdict::holds);
    CHECK(weight_condition_report(root, WeightCondition::snq).verdict == Verdict::holds);

    // omega_M with (mg) has (omega_6)
    auto wg = weight_from_sequence(gevrey_sequence(2.0, 1024));
    CHECK(weight_condition_report(wg, WeightCondition::omega6).verdict == Verdict::holds);
    CHECK(weight_condition_report(wg, WeightCondition::omega4).verdict == Verdict::holds);
}

TEST_CASE("kink closed forms against quadrature") {
    auto g2 = gevrey_sequence(2.0, 1024);
    auto w = weight_from_sequence(g2);
    const KinkForm k = *w.kinks();
    // the same function without the kink shortcut, evaluated with extrapolated kinks
    auto plain = WeightFunction([k](double t) { return t <= 1.0 ? 0.0 : k.evaluate(std::log(t), true); },
                                std::numeric_limits<double>::infinity(), "plain");
    for (double alpha : {0.6, 0.8}) {
        for (double t : {1.0, 30.0, 5e4}) {
            const double a = weighted_tail_integral(w, t, alpha).value;
            const double b = weighted_tail_integral(plain, t, alpha).value;
            CHECK(a == doctest::Approx(b).epsilon(2e-4));
        }
    }
    // (nq_r) integral equals r^2 times the (nq_r) series
    const double r = 1.5;
    const double series = check_property(g2, {PropertyKind::nq_r, r}).witness;
    CHECK(weight_condition_report(w, WeightCondition::nq_r, {r}).witness == doctest::Approx(r * r * series).epsilon(1e-10));
    // extrapolated evaluation is continuous at the horizon
    const double edge = k.last_kink();
    CHECK(k.evaluate(edge + 1e-9, true) == doctest::Approx(k.evaluate(edge, false)).epsilon(1e-8));
}

TEST_CASE("heir") {
    auto root = builtin_weight(BuiltinWeight::power, 2.0);
    auto h = kappa_heir(root, 1.0);
    for (double t : {1.0, 10.0, 1e4}) CHECK(h(t) == doctest::Approx(2.0 * std::sqrt(t)).epsilon(1e-7));
    for (double t : {1.5, 20.0, 1e5}) CHECK(h(t) >= root(t));
    double ratio_max = 0.0;
    for (double t : geometric_grid(1.0, 1e8, 16)) ratio_max = std::max(ratio_max, h(t) / (root(t) + 1.0));
    CHECK(ratio_max < 2.0 + 1e-6);

    auto wg = weight_from_sequence(gevrey_sequence(2.0, 1024));
    auto hg = kappa_heir(wg, 1.0);
    for (double t : {3.0, 100.0, 1e5}) CHECK(hg(t) >= wg(t));
    CHECK_THROWS_AS(kappa_heir(wg, 2.0), Divergence);
}
