#include "ultra/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ultra/error.hpp"
#include "ultra/special.hpp"

namespace ultra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Number of extrapolated kinks p in (P, K] below x (x in the divisor-scaled log scale).
double extrapolated_count(const WeightSequence& s, double x) {
    const double e = s.tail_exponent();
    if (!(e > 0.0)) throw Divergence("tail exponent is not positive; kinks accumulate");
    const double P = double(s.horizon());
    const double lmP = s.log_quotients().back();
    if (x <= lmP) return P;
    const double ratio = (x - lmP) / e;
    if (ratio > 40.0) throw NumericFailure("extrapolated kink count overflows");
    return std::floor(P * std::exp(ratio));
}

}  // namespace

double KinkForm::evaluate(double log_t, bool extend) const {
    const auto lm = seq->log_quotients();
    const std::size_t P = seq->horizon();
    const double x = divisor * log_t;
    if (x > lm[P] && !extend)
        throw OutOfHorizon("argument beyond validity radius of " + seq->label());
    const auto it = std::upper_bound(lm.begin() + 1, lm.end(), x);
    const std::size_t k = std::size_t(it - (lm.begin() + 1));
    double v = double(k) * log_t - seq->log_value(k) / divisor;
    if (k == P && x > lm[P]) {
        const double K = extrapolated_count(*seq, x);
        const double Pd = double(P);
        const double e = seq->tail_exponent();
        const double n = K - Pd;
        v += n * (log_t - lm[P] / divisor) -
             (e / divisor) * (std::lgamma(K + 1.0) - std::lgamma(Pd + 1.0) - n * std::log(Pd));
    }
    return scale * v;
}

double KinkForm::tail_integral(double log_t, double alpha) const {
    return scaled_tail_integral(log_t, alpha) * std::exp(-alpha * log_t);
}

double KinkForm::scaled_tail_integral(double log_t, double alpha) const {
    const auto lm = seq->log_quotients();
    const std::size_t P = seq->horizon();
    const double a2 = 1.0 / (alpha * alpha);
    double below = 0.0, above = 0.0;
    for (std::size_t p = 1; p <= P; ++p) {
        const double kp = lm[p] / divisor;
        if (kp >= log_t)
            above += std::exp(-alpha * (kp - log_t));
        else
            below += (log_t - kp) / alpha + a2;
    }
    const double e = seq->tail_exponent();
    const double E = alpha * e / divisor;
    if (!(E > 1.0)) return kInf;
    const double Pd = double(P);
    const double lmP = lm[P];
    double K = Pd;
    if (divisor * log_t > lmP) {
        K = extrapolated_count(*seq, divisor * log_t);
        const double n = K - Pd;
        const double sum_log = std::lgamma(K + 1.0) - std::lgamma(Pd + 1.0) - n * std::log(Pd);
        below += n * (log_t - lmP / divisor) / alpha - (e / divisor) * sum_log / alpha + n * a2;
    }
    // sum_{p>K} exp(-alpha kink_p) = exp(-alpha lmP/divisor) P^E zeta(E, K+1)
    const double log_pref = alpha * (log_t - lmP / divisor) + E * (std::log(Pd) - std::log(K + 1.0));
    above += std::exp(log_pref) * hurwitz_zeta_scaled(E, K + 1.0);
    return scale * (below + a2 * above);
}

WeightFunction::WeightFunction(std::function<double(double)> f, double domain_limit, std::string provenance,
                               std::optional<KinkForm> kinks)
    : f_(std::move(f)), domain_(domain_limit), provenance_(std::move(provenance)), kinks_(std::move(kinks)) {
    normalized_ = true;
    try {
        for (double t : {1e-6, 0.1, 0.5, 0.9, 1.0})
            if (t <= domain_ && f_(t) != 0.0) normalized_ = false;
    } catch (const Error&) {
        normalized_ = false;
    }
}

double WeightFunction::operator()(double t) const {
    if (t > domain_ * (1.0 + 1e-14))
        throw OutOfHorizon("t=" + fmt_num(t) + " beyond domain of " + provenance_ + " (" + fmt_num(domain_) + ")");
    return f_(t);
}

WeightFunction builtin_weight(BuiltinWeight kind, double s) {
    if (kind == BuiltinWeight::power) {
        if (!(s > 0.0)) throw InvalidInput("power weight needs s > 0");
        return WeightFunction([s](double t) { return std::pow(t, 1.0 / s); }, kInf, "power s=" + fmt_num(s));
    }
    if (!(s > 1.0)) throw InvalidInput("log-power weight needs s > 1");
    return WeightFunction(
        [s](double t) { return t <= 1.0 ? 0.0 : std::pow(std::log(t), s); }, kInf, "logpower s=" + fmt_num(s));
}

WeightFunction weight_from_sequence(const WeightSequence& M) {
    if (!M.log_convex() || !M.normalized())
        throw PreconditionError("omega_M needs a normalized log-convex sequence (" + M.label() + ")");
    KinkForm k{std::make_shared<const WeightSequence>(M), 1.0, 1.0};
    const double domain = std::exp(k.last_kink());
    return WeightFunction(
        [k](double t) { return t <= 1.0 ? 0.0 : k.evaluate(std::log(t), false); }, domain, "omega[" + M.label() + "]",
        k);
}

WeightFunction power_weight(const WeightFunction& w, double r) {
    if (!(r > 0.0)) throw InvalidInput("power transform needs r > 0");
    std::optional<KinkForm> k;
    if (w.kinks()) k = KinkForm{w.kinks()->seq, w.kinks()->divisor * r, w.kinks()->scale * r};
    return WeightFunction([w, r](double t) { return w(std::pow(t, r)); }, std::pow(w.domain_limit(), 1.0 / r),
                          "(" + w.provenance() + ")^" + fmt_num(r), k);
}

WeightFunction iota_weight(const WeightFunction& w) {
    return WeightFunction([w](double t) { return t == 0.0 ? kInf : w(1.0 / t); }, kInf,
                          "iota(" + w.provenance() + ")");
}

WeightFunction scaled_weight(const WeightFunction& w, double c) {
    if (!(c > 0.0)) throw InvalidInput("scale must be positive");
    std::optional<KinkForm> k;
    if (w.kinks()) k = KinkForm{w.kinks()->seq, w.kinks()->divisor, w.kinks()->scale * c};
    return WeightFunction([w, c](double t) { return c * w(t); }, w.domain_limit(),
                          fmt_num(c) + "*" + w.provenance(), k);
}

WeightFunction normalized_weight(const WeightFunction& w) {
    if (w.normalized()) return w;
    const double base = w(1.0);
    return WeightFunction([w, base](double t) { return t <= 1.0 ? 0.0 : std::max(0.0, w(t) - base); },
                          w.domain_limit(), "norm(" + w.provenance() + ")");
}

double omega_from_sequence(const WeightSequence& M, double t) {
    if (!M.log_convex()) throw PreconditionError("omega_M needs a log-convex sequence");
    if (t <= 1.0) return 0.0;
    KinkForm k{std::shared_ptr<const WeightSequence>(&M, [](const WeightSequence*) {}), 1.0, 1.0};
    return k.evaluate(std::log(t), false);
}

double log_h_from_sequence(const WeightSequence& M, double t) {
    if (t >= 1.0) return 0.0;
    return -omega_from_sequence(M, 1.0 / t);
}

ConjugateResult legendre_conjugate(const WeightFunction& w, double x) {
    if (!(x >= 0.0)) throw InvalidInput("conjugate argument must be nonnegative");
    const double ymax = std::min(700.0, std::log(w.domain_limit()));
    auto g = [&](double y) { return x * y - w(std::exp(y)); };
    double hi = std::min(1.0, ymax);
    for (;;) {
        if (hi >= ymax) {
            const double step = 1e-6 * std::max(1.0, ymax);
            if (g(ymax) > g(ymax - step))
                throw OutOfHorizon("conjugate sup not attained inside the domain of " + w.provenance());
            break;
        }
        const double next = std::min(2.0 * hi, ymax);
        if (g(next) <= g(hi)) {
            hi = next;
            break;
        }
        hi = next;
    }
    // golden section on the concave objective over [0, hi]
    constexpr double phi = 0.6180339887498949;
    double a = 0.0, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > 1e-12 * (1.0 + b)) {
        if (gc < gd) {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
        } else {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
        }
    }
    ConjugateResult r;
    const double y = 0.5 * (a + b);
    r.value = g(y);
    r.argmax = y;
    if (g(0.0) > r.value) {
        r.value = g(0.0);
        r.argmax = 0.0;
    }
    return r;
}

double biconjugate(const WeightFunction& w, double y) {
    auto g = [&](double x) { return x * y - legendre_conjugate(w, x).value; };
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        double next = 2.0 * hi;
        double gn;
        try {
            gn = g(next);
        } catch (const OutOfHorizon&) {
            break;
        }
        if (gn <= g(hi)) {
            hi = next;
            break;
        }
        hi = next;
    }
    constexpr double phi = 0.6180339887498949;
    double a = 0.0, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > 1e-11 * (1.0 + b)) {
        if (gc < gd) {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
        } else {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
        }
    }
    return std::max(g(0.5 * (a + b)), g(0.0));
}

double WeightMatrix::log_entry(double l, std::size_t j) const {
    if (!(l > 0.0)) throw InvalidInput("matrix index l must be positive");
    if (j == 0) return 0.0;
    return legendre_conjugate(w_, l * double(j)).value / l;
}

WeightSequence WeightMatrix::row(double l, std::size_t J) const {
    std::vector<double> lm(J + 1, 0.0);
    double prev = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
        const double cur = log_entry(l, j);
        lm[j] = cur - prev;
        prev = cur;
    }
    return WeightSequence::from_log_quotients(std::move(lm), "W^" + fmt_num(l) + "[" + w_.provenance() + "]");
}

WeightMatrix associated_matrix(const WeightFunction& w) {
    if (!w.normalized()) throw PreconditionError("associated matrix needs a normalized weight");
    return WeightMatrix(w);
}

TailIntegral weighted_tail_integral(const WeightFunction& w, double t, double alpha, const QuadratureConfig& cfg) {
    TailIntegral r;
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
    const double lt = std::log(t);
    const double ta = std::exp(-alpha * lt);
    if (const KinkForm* k = w.kinks()) {
        r.scaled = k->scaled_tail_integral(lt, alpha);
        r.value = r.scaled * ta;
        r.divergent = !std::isfinite(r.value);
        r.tail_exponent = k->seq->tail_exponent() / k->divisor;
        r.head = r.value;
        return r;
    }
    double T = std::isfinite(w.domain_limit()) ? w.domain_limit() : std::max(t, 1.0) * 1e10;
    if (t >= T / 16.0) throw OutOfHorizon("tail integral start beyond the usable domain of " + w.provenance());
    const double V = std::log(T);
    // integrate in v = log(u/t) so that t^{-alpha} never multiplies inside the quadrature
    auto f = [&](double v) { return w(std::exp(lt + v)) * std::exp(-alpha * v); };
    std::vector<double> pts;
    for (double v = 0.0; v < V - lt; v += 1.0) pts.push_back(v);
    pts.push_back(V - lt);
    const double head_scaled = integrate_pieces(f, pts, cfg).value;
    const double wT = w(T), wT16 = w(T / 16.0);
    const double kappa = (wT > 0.0 && wT16 > 0.0) ? std::log(wT / wT16) / std::log(16.0) : 0.0;
    r.tail_exponent = kappa;
    if (!(alpha > kappa)) {
        r.divergent = true;
        r.value = r.tail = kInf;
        return r;
    }
    const double tail_scaled = wT * std::exp(-alpha * (V - lt)) / (alpha - kappa);
    r.scaled = head_scaled + tail_scaled;
    r.head = head_scaled * ta;
    r.tail = tail_scaled * ta;
    r.value = r.head + r.tail;
    return r;
}

double mixed_integral(const WeightFunction& w, double t, double r) {
    const double alpha = 1.0 / r;
    const TailIntegral ti = weighted_tail_integral(w, t, alpha);
    if (ti.divergent) return kInf;
    return ti.scaled;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / double(n - 1));
    return g;
}

PropertyReport weight_condition_report(const WeightFunction& w, WeightCondition c, ConditionParams p) {
    PropertyReport rep;
    const double T = std::min(w.domain_limit(), p.t_max);
    auto grid = geometric_grid(1.0, T, p.grid);
    auto finish_bounded = [&rep](std::string tag) {
        rep.tag = std::move(tag);
        double sup = 0.0;
        for (auto& tp : rep.trace) sup = std::max(sup, tp.value);
        rep.witness = sup;
        const TrendResult tr = bounded_trend(rep.trace);
        rep.verdict = tr.verdict;
        rep.stats["trend_growth"] = tr.growth;
        rep.notes.push_back(trend_note(tr));
    };
    auto finish_decay = [&rep](std::string tag) {
        rep.tag = std::move(tag);
        const TrendResult tr = decay_trend(rep.trace);
        rep.verdict = tr.verdict;
        rep.witness = rep.trace.empty() ? 0.0 : rep.trace.back().value;
        rep.stats["trend_growth"] = tr.growth;
        rep.notes.push_back(trend_note(tr));
    };
    switch (c) {
        case WeightCondition::omega1:
            for (double t : grid)
                if (2.0 * t <= T) rep.trace.push_back({t, w(2.0 * t) / (w(t) + 1.0)});
            finish_bounded("omega1");
            rep.stats["L"] = rep.witness;
            return rep;
        case WeightCondition::omega2:
            for (double t : grid) rep.trace.push_back({t, w(t) / t});
            finish_bounded("omega2");
            return rep;
        case WeightCondition::omega3:
            for (double t : grid) {
                if (t < std::exp(1.0)) continue;
                const double v = w(t);
                rep.trace.push_back({t, v > 0.0 ? std::log(t) / v : kInf});
            }
            finish_decay("omega3");
            return rep;
        case WeightCondition::omega5:
            for (double t : grid) rep.trace.push_back({t, w(t) / t});
            finish_decay("omega5");
            return rep;
        case WeightCondition::omega4: {
            rep.tag = "omega4";
            const double Y = std::log(T);
            const int n = 4 * p.grid;
            const double h = Y / n;
            double worst = kInf;
            for (int i = 1; i < n; ++i) {
                const double y = i * h;
                const double a = w(std::exp(y - h)), b = w(std::exp(y)), d = w(std::exp(y + h));
                const double second = (a - 2.0 * b + d) / (1.0 + std::abs(b));
                rep.trace.push_back({y, second});
                worst = std::min(worst, second);
            }
            rep.witness = worst;
            rep.verdict = worst >= -1e-9 ? Verdict::holds : Verdict::fails;
            rep.notes.push_back("second differences of phi(y) = omega(e^y) on [0, log T]");
            return rep;
        }
        case WeightCondition::omega6: {
            for (double t : grid) {
                if (t * t > T) break;
                const double target = 2.0 * w(t);
                auto ok = [&](double H) { return target <= w(std::min(H * t, T)) + H; };
                double H = 1.0;
                if (!ok(1.0)) {
                    double lo = 0.0, hi = std::log(T / t);
                    if (!ok(std::exp(hi))) {
                        rep.trace.push_back({t, kInf});
                        continue;
                    }
                    for (int i = 0; i < 60; ++i) {
                        const double mid = 0.5 * (lo + hi);
                        (ok(std::exp(mid)) ? hi : lo) = mid;
                    }
                    H = std::exp(hi);
                }
                rep.trace.push_back({t, H});
            }
            finish_bounded("omega6");
            rep.stats["H"] = rep.witness;
            rep.notes.push_back("trace: minimal H with 2 omega(t) <= omega(H t) + H");
            return rep;
        }
        case WeightCondition::nq_r: {
            rep.tag = "nq_r";
            rep.stats["r"] = p.r;
            const TailIntegral ti = weighted_tail_integral(w, 1.0, 1.0 / p.r);
            rep.stats["head"] = ti.head;
            rep.stats["tail"] = ti.tail;
            rep.stats["tail_exponent"] = ti.tail_exponent;
            rep.witness = ti.value;
            rep.verdict = ti.divergent ? Verdict::fails : Verdict::holds;
            if (ti.divergent) rep.notes.push_back("tail exponent reaches the integrability threshold 1/r");
            return rep;
        }
        case WeightCondition::snq: {
            for (double t : grid) {
                if (t * 16.0 > T && !w.kinks()) break;
                const TailIntegral ti = weighted_tail_integral(w, t, 1.0);
                rep.trace.push_back({t, ti.divergent ? kInf : t * ti.value / (w(t) + 1.0)});
            }
            finish_bounded("snq");
            rep.stats["C"] = rep.witness;
            return rep;
        }
    }
    return rep;
}

WeightFunction kappa_heir(const WeightFunction& w, double r) {
    if (!(r > 0.0)) throw InvalidInput("r must be positive");
    if (weighted_tail_integral(w, 1.0, 1.0 / r).divergent)
        throw Divergence("heir undefined: (omega_nq_r) fails for " + w.provenance());
    return WeightFunction([w, r](double t) { return t <= 0.0 ? 0.0 : mixed_integral(w, t, r) / r; },
                          w.domain_limit(), "kappa-heir r=" + fmt_num(r) + "[" + w.provenance() + "]");
}

}  // namespace ultra
