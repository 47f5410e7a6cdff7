#include "ultra/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ultra/error.hpp"

namespace ultra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> weight_grid(const WeightFunction& a, const WeightFunction& b, const WeightGammaConfig& cfg) {
    const double T = std::min({a.domain_limit(), b.domain_limit(), cfg.t_max * 10.0}) / 10.0;
    if (!(T > 4.0)) throw PreconditionError("weight domains too small for a t-grid");
    return geometric_grid(1.0, T, cfg.grid);
}

}  // namespace

IndexEstimate bisect_index(const std::function<Verdict(double)>& verdict_at, BisectionConfig cfg, std::string method) {
    IndexEstimate est;
    est.method = std::move(method);
    auto eval = [&](double r) {
        const Verdict v = verdict_at(r);
        est.trace.emplace_back(r, v);
        return v;
    };
    if (eval(cfg.r_min) != Verdict::holds) {
        est.at_grid_minimum = true;
        est.r_lo = 0.0;
        est.r_hi = cfg.r_min;
        est.estimate = 0.5 * cfg.r_min;
        est.notes.push_back("property already fails at the grid minimum; index ~ 0");
        return est;
    }
    if (eval(cfg.r_max) == Verdict::holds) {
        est.unbounded = true;
        est.r_lo = est.r_hi = est.estimate = cfg.r_max;
        est.notes.push_back("property holds at the grid maximum; index unbounded on this grid");
        return est;
    }
    double lo = cfg.r_min, hi = cfg.r_max;
    for (int i = 0; i < cfg.max_iter && hi - lo > cfg.resolution; ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) == Verdict::holds ? lo : hi) = mid;
    }
    est.r_lo = lo;
    est.r_hi = hi;
    est.estimate = 0.5 * (lo + hi);
    for (const auto& [r, v] : est.trace)
        if (v == Verdict::inconclusive) {
            est.notes.push_back("inconclusive verdicts treated as not-holds");
            break;
        }
    return est;
}

IndexEstimate mu_of_sequence(const WeightSequence& N) {
    if (!N.log_convex()) throw PreconditionError("mu(N) estimator needs a log-convex sequence");
    IndexEstimate est;
    est.method = "liminf log(nu_p)/log(p)";
    const std::size_t P = N.horizon();
    const auto ln = N.log_quotients();
    double half_min = kInf;
    for (std::size_t p = std::max<std::size_t>(2, P / 2); p <= P; ++p)
        half_min = std::min(half_min, ln[p] / std::log(double(p)));
    const double e = N.tail_exponent();
    const double pad = P < 64 ? 0.5 : 0.01;
    est.estimate = e;
    est.r_lo = std::max(0.0, e - pad);
    est.r_hi = std::max(e, half_min) + pad;
    est.notes.push_back("estimate: minimum over 2 <= p <= P (flat blocks attain the liminf early)");
    est.notes.push_back("last-half minimum: " + std::to_string(half_min));
    if (P < 64) est.notes.push_back("horizon below 64: bracket widened");
    for (double r : {est.r_lo, est.r_hi})
        est.trace.emplace_back(r, check_property(N, {PropertyKind::nq_r, r}).verdict);
    return est;
}

IndexEstimate mu_of_weight(const WeightFunction& w, BisectionConfig cfg) {
    auto est = bisect_index(
        [&](double r) { return weight_condition_report(w, WeightCondition::nq_r, {r}).verdict; }, cfg,
        "bisection on (omega_nq_r)");
    return est;
}

IndexEstimate gamma_mixed_sequences(const WeightSequence& M, const WeightSequence& N, BisectionConfig cfg) {
    const std::size_t P = std::min(M.horizon(), N.horizon());
    PropertyReport ratio;
    std::size_t first = 0;
    for (std::size_t p = 1; p <= P; ++p) {
        const double d = M.log_quotient(p) - N.log_quotient(p);
        ratio.trace.push_back({double(p), std::exp(d)});
        if (d > 1e-12 && first == 0) first = p;
    }
    if (bounded_trend(ratio.trace).verdict == Verdict::fails)
        throw PreconditionError("mu_p <= C nu_p violated: ratio grows; first p with mu_p > nu_p is " +
                                std::to_string(first));
    auto est = bisect_index([&](double r) { return mixed_gamma_statistic(M, N, r).report.verdict; }, cfg,
                            "bisection on (M,N)_{gamma_r}");
    double C = 0.0;
    for (auto& t : ratio.trace) C = std::max(C, t.value);
    est.notes.push_back("C = max mu_p/nu_p = " + std::to_string(C));
    return est;
}

PropertyReport mixed_weight_statistic(const WeightFunction& sigma, const WeightFunction& omega, double r,
                                      const WeightGammaConfig& cfg) {
    PropertyReport rep;
    rep.tag = "mixed_gamma_r_weights";
    rep.stats["r"] = r;
    double num = 0.0, den = 0.0, sup = 0.0;
    for (double t : weight_grid(sigma, omega, cfg)) {
        const double I = mixed_integral(omega, t, r);
        if (!std::isfinite(I)) {
            rep.verdict = Verdict::fails;
            rep.witness = kInf;
            rep.notes.push_back("I_r(t) diverges");
            return rep;
        }
        const double s = sigma(t) + 1.0;
        rep.trace.push_back({t, I / s});
        num += I * s;
        den += s * s;
        sup = std::max(sup, I / s);
    }
    rep.witness = sup;
    rep.stats["C_least_squares"] = num / den;
    rep.stats["C_max"] = sup;
    const TrendResult tr = bounded_trend(rep.trace);
    rep.verdict = tr.verdict;
    rep.stats["trend_growth"] = tr.growth;
    rep.notes.push_back(trend_note(tr));
    return rep;
}

IndexEstimate gamma_mixed_weights(const WeightFunction& sigma, const WeightFunction& omega,
                                  const WeightGammaConfig& cfg) {
    PropertyReport pre;
    for (double t : weight_grid(sigma, omega, cfg)) pre.trace.push_back({t, omega(t) / (sigma(t) + 1.0)});
    if (bounded_trend(pre.trace).verdict == Verdict::fails)
        throw PreconditionError("omega(t) = O(sigma(t)) fails on the grid");
    return bisect_index([&](double r) { return mixed_weight_statistic(sigma, omega, r, cfg).verdict; },
                        cfg.bisection, "bisection on (sigma,omega)_{gamma_r}");
}

}  // namespace ultra
