#include "doctest.h"

#include <cmath>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/sequence.hpp"

using namespace ultra;

namespace {

std::vector<double> gevrey_quotients(double r, std::size_t P) {
    std::vector<double> v(P + 1, 0.0);
    for (std::size_t p = 1; p <= P; ++p) v[p] = r * std::log(double(p));
    return v;
}

// sum_{k>=p} k^{-e} by brute force to K plus the Euler-Maclaurin tail at K
double zeta_tail_oracle(double e, std::size_t p) {
    const std::size_t K = 2000000;
    double s = 0.0;
    for (std::size_t k = K; k >= p; --k) s += std::pow(double(k), -e);
    const double Kd = double(K) + 0.5;
    return s + std::pow(Kd, 1.0 - e) / (e - 1.0);
}

}  // namespace

TEST_CASE("construction from quotients") {
    auto c = WeightSequence::from_log_quotients(std::vector<double>(10, 0.0), "const");
    for (std::size_t p = 0; p <= c.horizon(); ++p) CHECK(c.log_value(p) == 0.0);
    CHECK(c.normalized());
    CHECK(c.log_convex());

    auto g = WeightSequence::from_log_quotients(gevrey_quotients(2.0, 40), "g");
    CHECK(std::exp(g.log_value(3)) == doctest::Approx(36.0).epsilon(1e-12));

    CHECK_THROWS_AS(WeightSequence::from_log_quotients({0.0}, "x"), InvalidInput);
    CHECK_THROWS_AS(WeightSequence::from_log_quotients({0.1, 0.0}, "x"), InvalidInput);
    CHECK_THROWS_AS(WeightSequence::from_log_quotients({0.0, NAN}, "x"), InvalidInput);
}

TEST_CASE("Gevrey generator and transforms") {
    auto g1 = gevrey_sequence(1.0, 64);
    auto g2 = gevrey_sequence(2.0, 64);
    CHECK(std::exp(g2.log_value(3)) == doctest::Approx(36.0));
    CHECK(std::exp(g1.log_quotient(7)) == doctest::Approx(7.0));
    CHECK(g2.tail_exponent() == doctest::Approx(2.0).epsilon(1e-14));

    auto id = transform_sequence(g2, SequenceTransform::power, 1.0);
    auto half = transform_sequence(g2, SequenceTransform::power, 0.5);
    auto hat = transform_sequence(g1, SequenceTransform::hat);
    auto back = transform_sequence(hat, SequenceTransform::unhat);
    for (std::size_t p = 0; p <= 64; ++p) {
        CHECK(id.log_value(p) == doctest::Approx(g2.log_value(p)));
        CHECK(half.log_value(p) == doctest::Approx(g1.log_value(p)));
        CHECK(hat.log_value(p) == doctest::Approx(g2.log_value(p)));
        CHECK(back.log_value(p) == doctest::Approx(g1.log_value(p)));
    }
}

TEST_CASE("prefix sums and the root bound for log-convex sequences") {
    for (double r : {0.5, 1.0, 2.7}) {
        auto M = gevrey_sequence(r, 300);
        double prod = 0.0;
        for (std::size_t p = 1; p <= 300; ++p) {
            prod += M.log_quotient(p);
            CHECK(std::abs(prod - M.log_value(p)) < 1e-9);
            CHECK(M.log_value(p) / double(p) <= M.log_quotient(p) + 1e-12);
        }
    }
}

TEST_CASE("mg and nq on Gevrey") {
    auto g2 = gevrey_sequence(2.0, 1024);
    auto mg = check_property(g2, {PropertyKind::mg});
    CHECK(mg.verdict == Verdict::holds);
    CHECK(mg.witness == doctest::Approx(4.0));

    auto nq = check_property(g2, {PropertyKind::nq_r, 1.0});
    CHECK(nq.verdict == Verdict::holds);
    CHECK(nq.witness == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-10));

    CHECK(check_property(g2, {PropertyKind::nq_r, 2.0}).verdict == Verdict::fails);
    CHECK(check_property(gevrey_sequence(1.0, 1024), {PropertyKind::nq_r, 1.0}).verdict == Verdict::fails);
    CHECK(check_property(g2, {PropertyKind::lc}).verdict == Verdict::holds);
    CHECK(check_property(g2, {PropertyKind::slc}).verdict == Verdict::holds);
    CHECK(check_property(g2, {PropertyKind::beta1, 1.0, 2}).verdict == Verdict::holds);
    CHECK(check_property(gevrey_sequence(1.0, 1024), {PropertyKind::beta1, 1.0, 2}).verdict == Verdict::fails);
    CHECK(check_property(g2, {PropertyKind::beta3, 1.0, 2}).verdict == Verdict::holds);

    auto small = gevrey_sequence(2.0, 8);
    CHECK(check_property(small, {PropertyKind::mg}).verdict == Verdict::inconclusive);
}

TEST_CASE("mixed statistic against a brute-force oracle") {
    auto g2 = gevrey_sequence(2.0, 2048);
    auto t = mixed_gamma_statistic(g2, g2, 1.0);
    REQUIRE(t.report.trace.size() == 1024);
    CHECK(t.report.trace[1].value == doctest::Approx(2.0 * zeta_tail_oracle(2.0, 2)).epsilon(1e-9));
    CHECK(t.report.trace[1].value == doctest::Approx(1.2899).epsilon(1e-4));
    CHECK(t.report.verdict == Verdict::holds);
    CHECK(t.C == doctest::Approx(1.0));

    CHECK(mixed_gamma_statistic(g2, g2, 2.0).report.verdict == Verdict::fails);
    CHECK(mixed_gamma_statistic(g2, g2, 2.1).report.verdict == Verdict::fails);
    CHECK(mixed_gamma_statistic(g2, g2, 1.9).report.verdict == Verdict::holds);
}

TEST_CASE("ramification invariants") {
    auto g1 = gevrey_sequence(1.0, 1024);
    auto g2 = gevrey_sequence(2.0, 1024);
    for (double r : {0.5, 1.0, 1.5, 1.99, 2.0, 2.5, 3.0}) {
        auto root = transform_sequence(g2, SequenceTransform::power, 1.0 / r);
        CHECK(check_property(g2, {PropertyKind::nq_r, r}).verdict ==
              check_property(root, {PropertyKind::nq_r, 1.0}).verdict);

        auto a = mixed_gamma_statistic(g1, g2, r);
        auto b = mixed_gamma_statistic(transform_sequence(g1, SequenceTransform::power, 1.0 / r), root, 1.0);
        if (std::isfinite(a.report.witness))
            CHECK(a.report.witness == doctest::Approx(b.report.witness).epsilon(1e-10));
        else
            CHECK(std::isinf(b.report.witness));
        CHECK(a.report.verdict == b.report.verdict);
    }
}

TEST_CASE("monotonicity in r, per p") {
    auto M = gevrey_sequence(1.0, 512);
    auto N = gevrey_sequence(2.0, 512);
    const double r = 1.8;
    auto big = mixed_gamma_statistic(M, N, r);
    for (double rp : {0.6, 1.0, 1.5}) {
        auto small = mixed_gamma_statistic(M, N, rp);
        const double ex = (r - rp) / (rp * r);
        for (std::size_t i = 0; i < small.log_head.size(); ++i) {
            const std::size_t p = i + 1;
            double worst = -1e300;
            for (std::size_t k = p; k <= N.horizon(); ++k)
                worst = std::max(worst, M.log_quotient(p) - N.log_quotient(k));
            CHECK(small.log_head[i] <= big.log_head[i] + ex * worst + 1e-10);
        }
    }
}

TEST_CASE("comparisons") {
    auto g1 = gevrey_sequence(1.0, 1024);
    auto g2 = gevrey_sequence(2.0, 1024);
    auto same = compare_sequences(g2, g2);
    CHECK(same.le.verdict == Verdict::holds);
    CHECK(same.quotient_le.verdict == Verdict::holds);
    CHECK(same.equivalent == Verdict::holds);

    auto c = compare_sequences(g1, g2);
    CHECK(c.le.verdict == Verdict::holds);
    CHECK(c.preceq.verdict == Verdict::holds);
    CHECK(c.preceq_reverse.verdict == Verdict::fails);
    CHECK(c.equivalent == Verdict::fails);

    std::vector<double> lm(g2.log_quotients().begin(), g2.log_quotients().end());
    for (std::size_t p = 1; p < lm.size(); ++p) lm[p] += std::log(2.0);
    auto scaled = WeightSequence::from_log_quotients(lm, "2^p G^2");
    auto s = compare_sequences(g2, scaled);
    CHECK(s.equivalent == Verdict::holds);
    CHECK(s.preceq_reverse.witness == doctest::Approx(2.0));
}
