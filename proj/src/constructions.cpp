#include "ultra/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultra/error.hpp"
#include "ultra/special.hpp"

namespace ultra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

// x^n for small integer n, or -1 on overflow of the 128-bit range.
__int128 ipow(std::int64_t x, int n) {
    __int128 r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > (__int128(1) << 100) / x) return -1;
        r *= x;
    }
    return r;
}

// Largest integer k with k^den <= c^num, i.e. floor(c^{num/den}).
std::int64_t floor_root_power(std::int64_t c, double num, double den) {
    const long double target = (long double)num * std::log((long double)c);
    std::int64_t k = (std::int64_t)std::floor(std::pow((long double)c, (long double)num / den));
    const bool exact = near_integer(num) && near_integer(den);
    auto fits = [&](std::int64_t cand) {
        if (cand <= 0) return true;
        if (exact) {
            const __int128 lhs = ipow(cand, int(std::lround(den)));
            const __int128 rhs = ipow(c, int(std::lround(num)));
            if (lhs >= 0 && rhs >= 0) return lhs <= rhs;
        }
        return (long double)den * std::log((long double)cand) <= target + 1e-15L * (1.0L + target);
    };
    while (fits(k + 1)) ++k;
    while (!fits(k)) --k;
    return k;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

LangenbruchExample langenbruch_example(double gamma, LangenbruchVariant variant, std::size_t P) {
    if (!(gamma > 1.0)) throw InvalidInput("gamma must exceed 1");
    if (P < 2) throw InvalidInput("horizon too small");
    LangenbruchExample ex;
    const bool mg = variant == LangenbruchVariant::mg;
    ex.beta = mg ? 2.0 * gamma : 2.0 * gamma + 1.0;
    ex.alpha = ex.beta - 1.0;

    std::vector<double> lm(P + 1, 0.0);
    std::int64_t c = 1;
    std::size_t k = 1;
    while (k <= P) {
        const std::int64_t d = floor_root_power(c, ex.alpha, gamma) + 1;
        const std::int64_t cn = floor_root_power(d, gamma, 1.0) + 1;
        ex.c.push_back(c);
        ex.d.push_back(d);
        const double flat = ex.alpha * std::log(double(c));
        for (; k <= P && std::int64_t(k) <= d - 1; ++k) lm[k] = flat;
        const double ld = gamma * std::log(double(d));
        for (; k <= P && std::int64_t(k) <= cn - 1; ++k) lm[k] = ex.beta * std::log(double(k)) - ld;
        c = cn;
    }
    ex.seq = WeightSequence::from_log_quotients(
        std::move(lm), std::string("langenbruch(gamma=") + num(gamma) + (mg ? ",mg)" : ",no-mg)"));

    const double upper = mg ? gamma * (2.0 * gamma - 1.0) : 2.0 * gamma * gamma;
    PropertyReport lower_rep, upper_rep;
    lower_rep.tag = "mu_k >= k^gamma";
    upper_rep.tag = "mu_k <= k^" + num(upper);
    double worst_lo = kInf, worst_hi = kInf;
    for (std::size_t p = 1; p <= P; ++p) {
        const double lk = std::log(double(p));
        worst_lo = std::min(worst_lo, ex.seq.log_quotient(p) - gamma * lk);
        worst_hi = std::min(worst_hi, upper * lk - ex.seq.log_quotient(p));
    }
    lower_rep.witness = worst_lo;
    upper_rep.witness = worst_hi;
    lower_rep.verdict = worst_lo >= -1e-12 ? Verdict::holds : Verdict::fails;
    upper_rep.verdict = worst_hi >= -1e-12 ? Verdict::holds : Verdict::fails;
    ex.claims = {lower_rep, upper_rep, check_property(ex.seq, {PropertyKind::beta3, 1.0, 2}),
                 check_property(ex.seq, {PropertyKind::mg})};
    return ex;
}

WeightSequence factorial_block_example(std::size_t P) {
    std::vector<double> lm(P + 1, 0.0);
    // block p covers p! <= k < (p+1)!, nu_k = 2^p p! p
    std::size_t k = 1;
    std::uint64_t lo = 1;
    for (int p = 1; k <= P; ++p) {
        const std::uint64_t hi = lo * std::uint64_t(p + 1);
        const double v = p * std::log(2.0) + std::lgamma(p + 1.0) + std::log(double(p));
        for (; k <= P && k < hi; ++k) lm[k] = v;
        lo = hi;
    }
    return WeightSequence::from_log_quotients(std::move(lm), "factorial-block");
}

MixedPair mixed_pair_example(double gamma_prime, double gamma, LangenbruchVariant variant, std::size_t P) {
    if (!(gamma_prime > 1.0 && gamma_prime < gamma)) throw PreconditionError("need 1 < gamma' < gamma");
    const bool mg = variant == LangenbruchVariant::mg;
    const double lhs = mg ? gamma_prime * (2.0 * gamma_prime - 1.0) : 2.0 * gamma_prime * gamma_prime;
    if (lhs > gamma)
        throw PreconditionError(std::string(mg ? "gamma'(2gamma'-1)" : "2gamma'^2") + " = " + num(lhs) +
                                " exceeds gamma = " + num(gamma));
    MixedPair pair{langenbruch_example(gamma_prime, variant, P), langenbruch_example(gamma, variant, P), lhs, {}};
    const auto& M = pair.M.seq;
    const auto& N = pair.N.seq;
    for (std::size_t p = 1; p <= P; ++p)
        if (M.log_quotient(p) > N.log_quotient(p) + 1e-12)
            throw NumericFailure("mu_p <= nu_p violated at p=" + std::to_string(p));
    PropertyReport le;
    le.tag = "mu_p <= nu_p";
    le.verdict = Verdict::holds;
    le.witness = double(P);
    pair.diagnostics.push_back(le);
    for (double f : {0.5, 0.75, 0.95}) {
        auto rep = mixed_gamma_statistic(M, N, f * gamma).report;
        rep.tag = "mixed_gamma_r at r=" + num(f * gamma);
        pair.diagnostics.push_back(std::move(rep));
    }
    auto b3m = check_property(M, {PropertyKind::beta3, 1.0, 2});
    b3m.tag = "beta3(M)";
    auto b3n = check_property(N, {PropertyKind::beta3, 1.0, 2});
    b3n.tag = "beta3(N)";
    pair.diagnostics.push_back(std::move(b3m));
    pair.diagnostics.push_back(std::move(b3n));
    return pair;
}

namespace {

// tau_k with a given tail value folded into every suffix sum.
std::vector<double> tau_table(const WeightSequence& N, double r, double tail) {
    const std::size_t P = N.horizon();
    std::vector<double> a(P + 2, 0.0), tau(P + 1, 0.0);
    for (std::size_t k = 1; k <= P; ++k) a[k] = std::exp(-N.log_quotient(k) / r);
    tau[P] = double(P) * a[P] + a[P] + tail;
    // tau_k - tau_{k+1} = (k+1)(a_k - a_{k+1}) >= 0; the recursion keeps monotonicity exact
    for (std::size_t k = P - 1; k >= 1; --k) tau[k] = tau[k + 1] + double(k + 1) * (a[k] - a[k + 1]);
    return tau;
}

std::vector<double> sigma_quotients(const std::vector<double>& tau) {
    std::vector<double> lm(tau.size(), 0.0);
    const double l1 = std::log(tau[1]);
    for (std::size_t k = 1; k < tau.size(); ++k) lm[k] = l1 - std::log(tau[k]) + std::log(double(k));
    lm[1] = 0.0;
    return lm;
}

}  // namespace

DescendantResult descendant(const WeightSequence& N, double r) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    const TailSum tail = tail_sum(N, 1.0 / r);
    if (tail.divergent) throw Divergence("descendant undefined: (nq_r) fails for " + N.label());
    const std::size_t P = N.horizon();

    auto tau = tau_table(N, r, tail.value);
    auto lm = sigma_quotients(tau);
    const auto lm0 = sigma_quotients(tau_table(N, r, 0.0));
    double band = 0.0, C = 0.0;
    for (std::size_t k = 1; k <= P; ++k) {
        band = std::max(band, std::abs(lm[k] - lm0[k]));
        C = std::max(C, std::exp(lm[k] - N.log_quotient(k) / r));
    }
    auto S = WeightSequence::from_log_quotients(lm, "S^{" + N.label() + "," + num(r) + "}");
    auto L = transform_sequence(S, SequenceTransform::power, r);
    DescendantResult out{std::move(tau), S, L, C, band, {}};

    auto slc = check_property(S, {PropertyKind::slc});
    if (slc.verdict != Verdict::holds)
        throw NumericFailure("descendant is not strongly log-convex (worst step " + std::to_string(slc.witness) + ")");
    out.checks.push_back(std::move(slc));
    PropertyReport bound;
    bound.tag = "sigma_k <= C nu_k^{1/r}";
    bound.witness = C;
    bound.verdict = std::isfinite(C) ? Verdict::holds : Verdict::fails;
    out.checks.push_back(std::move(bound));
    auto mixed = mixed_gamma_statistic(S, transform_sequence(N, SequenceTransform::power, 1.0 / r), 1.0).report;
    mixed.tag = "(S, N^{1/r})_{gamma_1}";
    out.checks.push_back(std::move(mixed));
    auto mgN = check_property(N, {PropertyKind::mg});
    mgN.tag = "mg(N)";
    auto mgS = check_property(S, {PropertyKind::mg});
    mgS.tag = "mg(S)";
    out.checks.push_back(std::move(mgN));
    out.checks.push_back(std::move(mgS));
    return out;
}

std::pair<PropertyReport, PropertyReport> descendant_mg_check(const WeightSequence& N) {
    const TailSum tail = tail_sum(N, 1.0);
    if (tail.divergent) throw PreconditionError("(nq) fails for " + N.label());
    const std::size_t P = N.horizon();
    if (P < 32) throw PreconditionError("horizon too small for 2k indexing");
    std::vector<double> suffix(P + 2, 0.0);
    suffix[P + 1] = tail.value;
    for (std::size_t k = P; k >= 1; --k) suffix[k] = suffix[k + 1] + std::exp(-N.log_quotient(k));

    PropertyReport first, second;
    first.tag = "nu_2k/nu_k <= C + C (nu_2k/2k) sum_{j>=2k} 1/nu_j";
    second.tag = "liminf (nu_k/k) sum_{j>=2k} 1/nu_j > 0";
    double C = 0.0, low = kInf;
    for (std::size_t k = 1; 2 * k <= P; ++k) {
        const double l2k = N.log_quotient(2 * k), lk = N.log_quotient(k);
        const double q = std::exp(l2k - lk) / (1.0 + std::exp(l2k - std::log(2.0 * k)) * suffix[2 * k]);
        first.trace.push_back({double(k), q});
        C = std::max(C, q);
        const double ell = std::exp(lk - std::log(double(k))) * suffix[2 * k];
        second.trace.push_back({double(k), ell});
        if (double(k) * double(k) >= double(P) / 2.0) low = std::min(low, ell);
    }
    first.witness = C;
    first.stats["C"] = C;
    const TrendResult t1 = bounded_trend(first.trace);
    first.verdict = t1.verdict;
    first.notes.push_back(trend_note(t1));

    second.witness = low;
    PropertyReport inv;
    for (auto& tp : second.trace) inv.trace.push_back({tp.x, 1.0 / tp.value});
    const TrendResult t2 = bounded_trend(inv.trace);
    second.verdict = t2.verdict;
    second.notes.push_back("bounded trend of the reciprocal: " + trend_note(t2));
    return {first, second};
}

HeirPair heir_pair_for_sector(const WeightFunction& w, double r, const WeightGammaConfig& cfg) {
    auto mu = mu_of_weight(w);
    if (!(mu.r_lo > r))
        throw PreconditionError("heir needs mu(omega) > r; mu bracket [" + num(mu.r_lo) + ", " + num(mu.r_hi) +
                                "] vs r = " + num(r));
    auto sigma = normalized_weight(kappa_heir(w, r));
    auto cert = gamma_mixed_weights(sigma, w, cfg);
    auto at = mixed_weight_statistic(sigma, w, r, cfg);
    return {std::move(sigma), std::move(mu), std::move(cert), std::move(at)};
}

}  // namespace ultra
