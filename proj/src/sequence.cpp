#include "ultra/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ultra/error.hpp"
#include "ultra/special.hpp"

namespace ultra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

}  // namespace

WeightSequence WeightSequence::from_log_quotients(std::vector<double> log_mu, std::string label) {
    if (log_mu.size() < 2) throw InvalidInput("weight sequence needs at least two quotients");
    for (std::size_t p = 0; p < log_mu.size(); ++p)
        if (!std::isfinite(log_mu[p]))
            throw InvalidInput("non-finite log quotient at p=" + std::to_string(p));
    if (std::abs(log_mu[0]) > 1e-12) throw InvalidInput("log_quotients[0] must be 0 (mu_0 = 1)");
    log_mu[0] = 0.0;

    WeightSequence M;
    M.log_mu_ = std::move(log_mu);
    M.label_ = std::move(label);
    M.log_M_.resize(M.log_mu_.size());
    double acc = 0.0;
    for (std::size_t p = 0; p < M.log_mu_.size(); ++p) {
        acc += M.log_mu_[p];
        M.log_M_[p] = acc;
    }
    M.normalized_ = M.log_mu_[1] >= -kSlack;
    M.log_convex_ = true;
    for (std::size_t p = 2; p < M.log_mu_.size(); ++p)
        if (M.log_mu_[p] < M.log_mu_[p - 1] - kSlack) {
            M.log_convex_ = false;
            break;
        }
    const std::size_t P = M.horizon();
    double e = kInf;
    for (std::size_t k = 2; k <= P; ++k) e = std::min(e, M.log_mu_[k] / std::log(double(k)));
    M.tail_exponent_ = std::isfinite(e) ? e : 0.0;
    return M;
}

double WeightSequence::model_log_quotient(double k) const {
    const double P = double(horizon());
    if (k <= P) return log_mu_[std::size_t(k)];
    return log_mu_.back() + tail_exponent_ * std::log(k / P);
}

WeightSequence gevrey_sequence(double r, std::size_t P) {
    if (!(r > 0.0)) throw InvalidInput("Gevrey order must be positive");
    if (P < 1) throw InvalidInput("horizon must be positive");
    std::vector<double> lm(P + 1, 0.0);
    for (std::size_t p = 1; p <= P; ++p) lm[p] = r * std::log(double(p));
    char buf[64];
    std::snprintf(buf, sizeof buf, "G^%g", r);
    return WeightSequence::from_log_quotients(std::move(lm), buf);
}

WeightSequence transform_sequence(const WeightSequence& M, SequenceTransform mode, double rho) {
    std::vector<double> lm(M.log_quotients().begin(), M.log_quotients().end());
    std::string label = M.label();
    switch (mode) {
        case SequenceTransform::power:
            if (!(rho > 0.0)) throw InvalidInput("power transform needs rho > 0");
            for (auto& v : lm) v *= rho;
            label = "(" + label + ")^" + std::to_string(rho);
            break;
        case SequenceTransform::hat:
            for (std::size_t p = 1; p < lm.size(); ++p) lm[p] += std::log(double(p));
            label = "hat(" + label + ")";
            break;
        case SequenceTransform::unhat:
            for (std::size_t p = 1; p < lm.size(); ++p) lm[p] -= std::log(double(p));
            label = "unhat(" + label + ")";
            break;
    }
    return WeightSequence::from_log_quotients(std::move(lm), std::move(label));
}

TailSum tail_sum(const WeightSequence& M, double alpha) {
    TailSum t;
    const double e = M.tail_exponent();
    t.exponent = alpha * e;
    if (!(t.exponent > 1.0)) {
        t.divergent = true;
        t.value = kInf;
        return t;
    }
    const double P = double(M.horizon());
    const double log_pref = -alpha * M.log_quotients().back() + t.exponent * (std::log(P) - std::log(P + 1.0));
    t.value = std::exp(log_pref) * hurwitz_zeta_scaled(t.exponent, P + 1.0);
    return t;
}

namespace {

PropertyReport ratio_report(const WeightSequence& M, int Q, double threshold, std::string tag) {
    PropertyReport rep;
    rep.tag = std::move(tag);
    const auto lm = M.log_quotients();
    const std::size_t K = M.horizon() / std::size_t(Q);
    if (K < 4) {
        rep.notes.push_back("horizon too small for Q-indexing");
        return rep;
    }
    const double p0 = std::sqrt(double(K));
    double late_min = kInf;
    std::size_t at = 0;
    for (std::size_t p = 1; p <= K; ++p) {
        const double v = std::exp(lm[Q * p] - lm[p]);
        rep.trace.push_back({double(p), v});
        if (double(p) >= p0 && v < late_min) {
            late_min = v;
            at = p;
        }
    }
    rep.witness = late_min;
    rep.stats["liminf_estimate"] = late_min;
    rep.stats["attained_at"] = double(at);
    rep.stats["threshold"] = threshold;
    if (late_min <= threshold * (1.0 + 1e-9))
        rep.verdict = Verdict::fails;
    else if (late_min >= threshold * 1.01)
        rep.verdict = Verdict::holds;
    rep.notes.push_back("liminf estimated as the minimum over sqrt(P/Q) <= p <= P/Q");
    return rep;
}

}  // namespace

MixedGammaTrace mixed_gamma_statistic(const WeightSequence& M, const WeightSequence& N, double r) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    MixedGammaTrace out;
    const std::size_t P = std::min(M.horizon(), N.horizon());
    const auto lm = M.log_quotients();
    const auto ln = N.log_quotients();

    out.C = 0.0;
    for (std::size_t p = 1; p <= P; ++p) {
        const double d = lm[p] - ln[p];
        out.C = std::max(out.C, std::exp(d));
        if (d > kSlack && out.first_exceed == 0) out.first_exceed = p;
    }

    const TailSum tail = tail_sum(N, 1.0 / r);
    out.tail_divergent = tail.divergent;
    out.log_tail = tail.divergent ? kInf : std::log(tail.value);

    // log of sum_{p<=k<=P_N} nu_k^{-1/r}, built from the top down.
    const std::size_t PN = N.horizon();
    std::vector<double> suffix(PN + 2, -kInf);
    for (std::size_t k = PN; k >= 1; --k) suffix[k] = log_add_exp(-ln[k] / r, suffix[k + 1]);

    PropertyReport& rep = out.report;
    rep.tag = "mixed_gamma_r";
    rep.stats["r"] = r;
    rep.stats["C"] = out.C;
    rep.stats["tail_exponent"] = tail.exponent;
    const std::size_t half = P / 2;
    out.log_head.reserve(half);
    double sup = 0.0;
    for (std::size_t p = 1; p <= half; ++p) {
        const double base = lm[p] / r - std::log(double(p));
        out.log_head.push_back(base + suffix[p]);
        const double total = tail.divergent ? kInf : base + log_add_exp(suffix[p], out.log_tail);
        const double v = std::exp(total);
        rep.trace.push_back({double(p), v});
        sup = std::max(sup, v);
    }
    rep.witness = sup;
    if (P < 16) {
        rep.verdict = Verdict::inconclusive;
        rep.notes.push_back("horizon below 16");
        return out;
    }
    if (tail.divergent) {
        rep.verdict = Verdict::fails;
        rep.notes.push_back("tail of sum nu_k^{-1/r} diverges (tail exponent / r <= 1)");
        return out;
    }
    const TrendResult tr = bounded_trend(rep.trace);
    rep.verdict = tr.verdict;
    rep.stats["trend_growth"] = tr.growth;
    rep.notes.push_back(trend_note(tr));
    return out;
}

PropertyReport check_property(const WeightSequence& M, PropertyQuery q) {
    const auto lm = M.log_quotients();
    const std::size_t P = M.horizon();
    PropertyReport rep;
    switch (q.kind) {
        case PropertyKind::normalized:
            rep.tag = "normalized";
            rep.witness = std::exp(lm[1]);
            rep.verdict = M.normalized() ? Verdict::holds : Verdict::fails;
            return rep;
        case PropertyKind::lc:
        case PropertyKind::slc: {
            const bool strong = q.kind == PropertyKind::slc;
            rep.tag = strong ? "slc" : "lc";
            double worst = kInf;
            std::size_t at = 0;
            for (std::size_t p = 2; p <= P; ++p) {
                double d = lm[p] - lm[p - 1];
                if (strong) d -= std::log(double(p)) - std::log(double(p - 1));
                rep.trace.push_back({double(p), d});
                if (d < worst) {
                    worst = d;
                    at = p;
                }
            }
            rep.witness = worst;
            rep.stats["worst_p"] = double(at);
            rep.verdict = worst >= -1e-10 ? Verdict::holds : Verdict::fails;
            rep.notes.push_back("decided on p <= P");
            return rep;
        }
        case PropertyKind::mg: {
            rep.tag = "mg";
            double sup = 0.0;
            for (std::size_t p = 1; 2 * p <= P; ++p) {
                const double v = std::exp(lm[2 * p] - lm[p]);
                rep.trace.push_back({double(p), v});
                sup = std::max(sup, v);
            }
            rep.witness = sup;
            if (P < 16) {
                rep.notes.push_back("horizon below 16");
                return rep;
            }
            const TrendResult tr = bounded_trend(rep.trace);
            rep.verdict = tr.verdict;
            rep.stats["trend_growth"] = tr.growth;
            rep.notes.push_back(trend_note(tr));
            return rep;
        }
        case PropertyKind::nq_r: {
            rep.tag = "nq_r";
            rep.stats["r"] = q.r;
            double partial = 0.0;
            for (std::size_t p = 1; p <= P; ++p) {
                partial += std::exp(-lm[p] / q.r);
                rep.trace.push_back({double(p), partial});
            }
            const TailSum t = tail_sum(M, 1.0 / q.r);
            rep.stats["partial_sum"] = partial;
            rep.stats["tail_exponent"] = t.exponent;
            rep.stats["tail"] = t.value;
            rep.witness = partial + t.value;
            if (P < 16) {
                rep.notes.push_back("horizon below 16");
                return rep;
            }
            rep.verdict = t.divergent ? Verdict::fails : Verdict::holds;
            rep.notes.push_back("tail modelled as mu_P (k/P)^e with e the lower growth exponent");
            return rep;
        }
        case PropertyKind::gamma_r: {
            auto tr = mixed_gamma_statistic(M, M, q.r);
            tr.report.tag = "gamma_r";
            return tr.report;
        }
        case PropertyKind::beta1:
            if (q.Q < 2) throw InvalidInput("Q must be an integer >= 2");
            return ratio_report(M, q.Q, double(q.Q), "beta1");
        case PropertyKind::beta3:
            if (q.Q < 2) throw InvalidInput("Q must be an integer >= 2");
            return ratio_report(M, q.Q, 1.0, "beta3");
    }
    return rep;
}

namespace {

PropertyReport preceq_report(const WeightSequence& M, const WeightSequence& N, std::size_t P, std::string tag) {
    PropertyReport rep;
    rep.tag = std::move(tag);
    const auto a = M.log_values();
    const auto b = N.log_values();
    double sup = 0.0;
    for (std::size_t p = 1; p <= P; ++p) {
        const double v = std::exp((a[p] - b[p]) / double(p));
        rep.trace.push_back({double(p), v});
        sup = std::max(sup, v);
    }
    rep.witness = sup;
    if (P < 16) return rep;
    const TrendResult tr = bounded_trend(rep.trace);
    rep.verdict = tr.verdict;
    rep.stats["trend_growth"] = tr.growth;
    rep.notes.push_back(trend_note(tr));
    return rep;
}

}  // namespace

ComparisonReport compare_sequences(const WeightSequence& M, const WeightSequence& N) {
    ComparisonReport out;
    const std::size_t P = std::min(M.horizon(), N.horizon());
    double worst_v = -kInf, worst_q = -kInf;
    for (std::size_t p = 0; p <= P; ++p) {
        worst_v = std::max(worst_v, M.log_value(p) - N.log_value(p));
        worst_q = std::max(worst_q, M.log_quotient(p) - N.log_quotient(p));
    }
    out.le.tag = "le";
    out.le.witness = std::exp(worst_v);
    out.le.verdict = worst_v <= 1e-10 ? Verdict::holds : Verdict::fails;
    out.quotient_le.tag = "quotient_le";
    out.quotient_le.witness = std::exp(worst_q);
    out.quotient_le.verdict = worst_q <= 1e-10 ? Verdict::holds : Verdict::fails;
    for (auto* r : {&out.le, &out.quotient_le}) r->notes.push_back("decided on p <= " + std::to_string(P));
    out.preceq = preceq_report(M, N, P, "preceq");
    out.preceq_reverse = preceq_report(N, M, P, "preceq_reverse");
    const Verdict a = out.preceq.verdict, b = out.preceq_reverse.verdict;
    if (a == Verdict::holds && b == Verdict::holds)
        out.equivalent = Verdict::holds;
    else if (a == Verdict::fails || b == Verdict::fails)
        out.equivalent = Verdict::fails;
    return out;
}

}  // namespace ultra
