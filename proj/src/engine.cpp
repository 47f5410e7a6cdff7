#include "ultra/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultra/error.hpp"

namespace ultra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Kink weights are evaluated past their horizon through the tail model.
double weight_at(const WeightFunction& w, double t) {
    if (t <= 1.0 && w.normalized()) return 0.0;
    if (const KinkForm* k = w.kinks()) return k->evaluate(std::log(t), true);
    return w(t);
}

double slack(double v) { return 1e-9 * (1.0 + std::abs(v)); }

// log h_W(t) = min_k (log W_k + k log t); flags a minimizer at the end of the row.
double log_h_row(const WeightSequence& W, double log_t, bool* at_end = nullptr) {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 1; k <= W.horizon(); ++k) {
        const double v = W.log_value(k) + double(k) * log_t;
        if (v < best) {
            best = v;
            arg = k;
        }
    }
    if (at_end) *at_end = arg == W.horizon();
    return best;
}

std::vector<double> log_values(const WeightSequence& W) {
    std::vector<double> out(W.horizon() + 1);
    for (std::size_t k = 0; k <= W.horizon(); ++k) out[k] = W.log_value(k);
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double neville_at_zero(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) y[i] = (x[i] * y[i + 1] - x[i + m] * y[i]) / (x[i] - x[i + m]);
    return y[0];
}

}  // namespace

std::vector<cplx> SectorSpec::points() const {
    std::vector<cplx> out;
    for (double r : radii)
        for (double f : arg_fractions) out.push_back(std::polar(r, f * gamma * kPi / 2.0));
    return out;
}

bool SectorSpec::contains(cplx z) const { return std::abs(z) > 0.0 && std::abs(std::arg(z)) < gamma * kPi / 2.0; }

SectorSpec make_sector(double gamma, double r_lo, double r_hi, int n_radii, std::vector<double> fractions) {
    if (!(gamma > 0.0)) throw InvalidInput("sector opening must be positive");
    for (double f : fractions)
        if (!(std::abs(f) < 1.0)) throw InvalidInput("sample argument fraction must lie in (-1, 1)");
    return {gamma, geometric_grid(r_lo, r_hi, n_radii), std::move(fractions)};
}

std::pair<SectorSpec, SectorSpec> split_sector(double gamma, double r_lo, double r_hi, int n_radii) {
    auto calibration = make_sector(gamma, r_lo, r_hi, n_radii, {0.0, 0.45, -0.45, 0.9, -0.9});
    const double step = std::sqrt(calibration.radii[1] / calibration.radii[0]);
    auto held_out = make_sector(gamma, r_lo * step, r_hi / step, n_radii - 1, {0.2, -0.2, 0.7, -0.7, 0.95, -0.95});
    return {calibration, held_out};
}

RamificationParams choose_ramification(double gamma, const IndexEstimate& bracket, double a) {
    if (!(gamma > 0.0)) throw InvalidInput("opening must be positive");
    if (!(a > 0.0)) throw InvalidInput("a must be positive");
    const double G = bracket.r_lo;
    if (!(gamma < G))
        throw PreconditionError("no extension: opening " + num(gamma) + " is not below the index bracket [" +
                                num(bracket.r_lo) + ", " + num(bracket.r_hi) + "] of gamma(M,N)");
    RamificationParams p;
    p.a = a;
    p.gamma = gamma;
    p.Gamma = G;
    p.delta = 0.5 * (gamma + G);
    p.s = 2.0 / (p.delta + G);
    if (!(p.s * p.delta < 1.0 && 1.0 < p.s * G && gamma < p.delta && p.delta < G))
        throw NumericFailure("ramification constraints violated");
    return p;
}

FlatFunction::FlatFunction(WeightFunction sigma, WeightFunction omega, RamificationParams params, FlatVariant variant,
                           QuadratureConfig cfg)
    : sigma_(std::move(sigma)),
      omega_(std::move(omega)),
      params_(params),
      variant_(variant),
      factor_(variant == FlatVariant::sequences ? params.s : 1.0),
      cfg_(cfg) {
    auto ramified = power_weight(omega_, 1.0 / params_.s);
    if (factor_ != 1.0) ramified = scaled_weight(ramified, factor_);
    outer_ = std::make_shared<const OuterFunction>(ramified, cfg_);
}

cplx FlatFunction::log_value(cplx xi) const {
    if (!(std::abs(xi) > 0.0) || std::abs(std::arg(xi)) >= params_.delta * kPi / 2.0)
        throw PreconditionError("xi outside the sector S_delta");
    return outer_->log_value(std::exp(params_.s * std::log(xi)), params_.a);
}

QuadResult<double> FlatFunction::log_abs_moment(double N, double theta) const {
    const cplx rot = std::polar(1.0, theta);
    auto phi = [&](double v) { return (N + 1.0) * v + log_value(rot * std::exp(-v)).real(); };
    constexpr double kDrop = 60.0, kStep = 0.5;
    double fmax = phi(0.0);
    double right = 0.0;
    for (double v = kStep;; v += kStep) {
        double f;
        try {
            f = phi(v);
        } catch (const OutOfHorizon&) {
            break;
        }
        right = v;
        fmax = std::max(fmax, f);
        if (f < fmax - kDrop) break;
        if (v > 2000.0) throw NumericFailure("moment integrand does not decay");
    }
    double left = 0.0;
    for (double v = -kStep;; v -= kStep) {
        const double f = phi(v);
        left = v;
        fmax = std::max(fmax, f);
        if (f < fmax - kDrop) break;
    }
    std::vector<double> pts;
    for (double v = left; v < right; v += kStep) pts.push_back(v);
    pts.push_back(right);
    const double ref = fmax;
    auto r = integrate_pieces([&](double v) { return std::exp(phi(v) - ref); }, pts, cfg_);
    QuadResult<double> out;
    out.value = ref + std::log(r.value);
    out.error = r.error / r.value;
    return out;
}

double fit_min_constant(const std::function<bool(double)>& ok, double c_max) {
    if (ok(1.0)) return 1.0;
    if (!ok(c_max)) return kInf;
    double lo = 0.0, hi = std::log(c_max);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(std::exp(mid)) ? hi : lo) = mid;
    }
    return std::exp(hi);
}

namespace {

struct TwoSided {
    std::function<double(std::size_t, double)> lower;  // log lower bound at point i for constant B
    std::function<double(std::size_t, double)> upper;  // log upper bound at point i for constant A
};

// Fits the smallest constants on the calibration values and checks the inflated ones on held-out values.
void fit_two_sided(const TwoSided& cal, const std::vector<double>& Lc, const TwoSided& held,
                   const std::vector<double>& Lh, double& B, double& A, PropertyReport& rep) {
    B = fit_min_constant([&](double b) {
        for (std::size_t i = 0; i < Lc.size(); ++i)
            if (cal.lower(i, b) > Lc[i] + slack(Lc[i])) return false;
        return true;
    });
    A = fit_min_constant([&](double a) {
        for (std::size_t i = 0; i < Lc.size(); ++i)
            if (Lc[i] > cal.upper(i, a) + slack(Lc[i])) return false;
        return true;
    });
    rep.stats["B_fit"] = B;
    rep.stats["A_fit"] = A;
    if (!std::isfinite(B) || !std::isfinite(A)) {
        rep.verdict = Verdict::fails;
        rep.notes.push_back("no finite constant fits the calibration grid");
        return;
    }
    B *= kHeldOutMargin;
    A *= kHeldOutMargin;
    double worst = kInf;
    int violations = 0;
    for (std::size_t i = 0; i < Lh.size(); ++i) {
        const double lo = Lh[i] - held.lower(i, B), hi = held.upper(i, A) - Lh[i];
        worst = std::min({worst, lo, hi});
        if (lo < -slack(Lh[i]) || hi < -slack(Lh[i])) ++violations;
    }
    rep.witness = worst;
    rep.stats["held_out_points"] = double(Lh.size());
    rep.stats["violations"] = violations;
    rep.verdict = violations == 0 ? Verdict::holds : Verdict::fails;
}

}  // namespace

OuterBounds outer_sandwich(const OuterFunction& F, const WeightFunction& sigma, double a,
                           std::span<const cplx> calibration, std::span<const cplx> held_out) {
    const WeightFunction& omega = F.weight();
    auto make = [&](std::span<const cplx> pts, std::vector<double>& L) {
        L.clear();
        for (cplx w : pts) L.push_back(F.log_value(w, a).real());
        TwoSided t;
        t.lower = [&, pts](std::size_t i, double B) {
            return -a * std::log(B) - 2.0 * a * B * weight_at(sigma, B / pts[i].real());
        };
        t.upper = [&, pts](std::size_t i, double A) { return -0.5 * a * weight_at(omega, 1.0 / (A * std::abs(pts[i]))); };
        return t;
    };
    std::vector<double> Lc, Lh;
    auto cal = make(calibration, Lc);
    auto held = make(held_out, Lh);
    OuterBounds out;
    out.report.tag = "outer function sandwich";
    fit_two_sided(cal, Lc, held, Lh, out.B, out.A, out.report);
    return out;
}

FlatBounds flat_sandwich(const FlatFunction& G, const SectorSpec& calibration, const SectorSpec& held_out) {
    const auto& P = G.params();
    const double a = P.a, s = P.s, c = G.weight_factor();
    const double cosine = std::cos(s * P.delta * kPi / 2.0);
    const bool seq = G.variant() == FlatVariant::sequences;
    auto K2_of = [&](double B) { return std::pow(cosine / B, 1.0 / s); };
    auto make = [&](const std::vector<cplx>& pts, std::vector<double>& L) {
        L.clear();
        for (cplx xi : pts) L.push_back(G.log_value(xi).real());
        TwoSided t;
        t.lower = [&, pts](std::size_t i, double B) {
            const double sig = weight_at(G.sigma(), 1.0 / (K2_of(B) * std::abs(pts[i])));
            return -a * std::log(B) - 2.0 * a * (seq ? B * s : c) * sig;
        };
        t.upper = [&, pts](std::size_t i, double A) {
            return -0.5 * a * c * weight_at(G.omega(), 1.0 / (std::pow(A, 1.0 / s) * std::abs(pts[i])));
        };
        return t;
    };
    const auto pc = calibration.points(), ph = held_out.points();
    std::vector<double> Lc, Lh;
    auto cal = make(pc, Lc);
    auto held = make(ph, Lh);
    FlatBounds out;
    out.report.tag = seq ? "flat function sandwich (sequences)" : "flat function sandwich (weights)";
    fit_two_sided(cal, Lc, held, Lh, out.B, out.A, out.report);
    out.K1 = out.B;
    out.K2 = K2_of(out.B);
    out.K3 = std::pow(out.A, 1.0 / s);
    out.K4 = c;
    out.report.stats["K1"] = out.K1;
    out.report.stats["K2"] = out.K2;
    out.report.stats["K3"] = out.K3;
    out.report.stats["K4"] = out.K4;
    return out;
}

KernelBound kernel_bound(const FlatFunction& G, const SectorSpec& calibration, const SectorSpec& held_out,
                         std::size_t row_length) {
    KernelBound out;
    out.report.tag = "kernel bound |e_a(z)| <= C h_W(K/|z|)";
    out.row_length = row_length;
    const double a = G.params().a;
    const auto W = associated_matrix(G.omega()).row(4.0 / a, row_length);
    const auto pc = calibration.points(), ph = held_out.points();
    // the constant K is taken from the radial scale of the flat-function upper bound
    out.K = std::pow(fit_min_constant([&](double A) {
                         for (cplx z : pc) {
                             const double L = G.log_value(1.0 / z).real();
                             const double rhs = -0.5 * a * G.weight_factor() *
                                                weight_at(G.omega(), std::abs(z) / std::pow(A, 1.0 / G.params().s));
                             if (L > rhs + slack(L)) return false;
                         }
                         return true;
                     }),
                     1.0 / G.params().s);
    bool truncated = false;
    double logC = -kInf;
    for (cplx z : pc) {
        bool end = false;
        logC = std::max(logC, G.log_kernel(z).real() - log_h_row(W, std::log(out.K / std::abs(z)), &end));
        truncated = truncated || end;
    }
    out.C = std::exp(logC);
    out.report.stats["C"] = out.C;
    out.report.stats["K"] = out.K;
    const double logC_held = logC + std::log(kHeldOutMargin);
    double worst = kInf;
    int violations = 0;
    for (cplx z : ph) {
        bool end = false;
        const double L = G.log_kernel(z).real();
        const double m = logC_held + log_h_row(W, std::log(out.K / std::abs(z)), &end) - L;
        truncated = truncated || end;
        worst = std::min(worst, m);
        if (m < -slack(L)) ++violations;
    }
    if (truncated) out.report.notes.push_back("h_W minimizer reached the end of the row; bound may be loose");
    out.report.witness = worst;
    out.report.stats["violations"] = violations;
    out.report.verdict = violations == 0 ? Verdict::holds : Verdict::fails;
    return out;
}

PropertyReport flatness_report(const FlatFunction& G, double p, double r_hi, int decades) {
    PropertyReport rep;
    rep.tag = "|G_a(xi)|/|xi|^" + num(p) + " -> 0";
    const int n = 4 * decades + 1;
    bool decreasing = true;
    double prev = kInf;
    for (int i = 0; i < n; ++i) {
        const double r = r_hi * std::pow(10.0, -0.25 * i);
        const double stat = G.log_value(cplx(r, 0.0)).real() - p * std::log(r);
        rep.trace.push_back({r, stat});
        if (i >= n / 2 && stat >= prev) decreasing = false;
        prev = stat;
    }
    rep.witness = prev;
    rep.stats["log_ratio_at_smallest_radius"] = prev;
    rep.verdict = decreasing && prev < -30.0 ? Verdict::holds : Verdict::fails;
    rep.notes.push_back("trace values are log(|G_a(xi)|/|xi|^p) on the positive ray");
    return rep;
}

PropertyReport kernel_integrability(const FlatFunction& G, double t0) {
    PropertyReport rep;
    rep.tag = "int_0^t0 t^-1 sup|e_a(t e^{i tau})| dt";
    const double half = G.params().gamma * kPi / 2.0;
    std::vector<double> taus;
    for (double f : {0.0, 0.3, 0.6, 0.9, 0.99}) {
        taus.push_back(f * half);
        if (f > 0) taus.push_back(-f * half);
    }
    auto sup_abs = [&](double v) {
        double m = 0.0;
        for (double tau : taus) m = std::max(m, std::exp(G.log_kernel(std::polar(std::exp(v), tau)).real()));
        return m;
    };
    const double top = std::log(t0);
    std::vector<double> pts;
    for (double v = top - 40.0; v < top; v += 1.0) pts.push_back(v);
    pts.push_back(top);
    const auto r = integrate_pieces(sup_abs, pts);
    rep.witness = r.value;
    rep.stats["integral"] = r.value;
    rep.stats["error"] = r.error;
    rep.verdict = std::isfinite(r.value) ? Verdict::holds : Verdict::fails;
    return rep;
}

MomentTable moment_table(const FlatFunction& G, int depth) {
    MomentTable m;
    for (int p = 0; p <= depth; ++p) {
        try {
            const auto r = G.log_abs_moment(double(p), 0.0);
            if (!std::isfinite(r.value)) throw NumericFailure("non-finite moment");
            m.log_m.push_back(r.value);
            m.rel_error.push_back(r.error);
        } catch (const Error& e) {
            m.notes.push_back("table truncated at p=" + std::to_string(p) + ": " + e.what());
            break;
        }
    }
    return m;
}

PropertyReport moment_log_convexity(const MomentTable& m, double tol) {
    PropertyReport rep;
    rep.tag = "log m_a(p) convex";
    double worst = kInf;
    for (std::size_t p = 1; p + 1 < m.size(); ++p) {
        const double d2 = m.log_m[p + 1] - 2.0 * m.log_m[p] + m.log_m[p - 1];
        rep.trace.push_back({double(p), d2});
        worst = std::min(worst, d2);
    }
    rep.witness = worst;
    rep.verdict = worst >= -tol ? Verdict::holds : Verdict::fails;
    return rep;
}

MomentBounds moment_bounds(const FlatFunction& G, const MomentTable& m, const FlatBounds& fb,
                           std::span<const double> sector_args) {
    MomentBounds out;
    out.report.tag = "moment sandwich";
    const double a = G.params().a;
    const std::size_t n = m.size();
    if (n < 3) throw NumericFailure("moment table too short");
    out.log_S = log_values(associated_matrix(G.sigma()).row(1.0 / (2.0 * a), n - 1));
    out.log_W = log_values(associated_matrix(G.omega()).row(4.0 / a, n - 1));
    auto lower_ratio = [&](std::size_t p) { return m.log_m[p] - p * std::log(fb.K2 / 2.0) - out.log_S[p]; };
    auto upper_ratio = [&](std::size_t p, double log_val) { return log_val - p * std::log(fb.K3) - out.log_W[p]; };

    std::vector<std::vector<double>> sector(n);
    for (std::size_t p = 0; p < n; ++p)
        for (double th : sector_args)
            if (th != 0.0) sector[p].push_back(G.log_abs_moment(double(p), th).value);

    double logC1 = kInf, logC2 = -kInf;
    for (std::size_t p = 0; p < n; p += 2) {
        logC1 = std::min(logC1, lower_ratio(p));
        logC2 = std::max(logC2, upper_ratio(p, m.log_m[p]));
        for (double v : sector[p]) logC2 = std::max(logC2, upper_ratio(p, v));
    }
    logC1 -= std::log(kHeldOutMargin);
    logC2 += std::log(kHeldOutMargin);
    out.C1 = std::exp(logC1);
    out.C2 = std::exp(logC2);
    out.report.stats["C1"] = out.C1;
    out.report.stats["C2"] = out.C2;
    double worst = kInf;
    int violations = 0;
    for (std::size_t p = 1; p < n; p += 2) {
        const double tol = m.rel_error[p] + 1e-9;
        double margin = std::min(lower_ratio(p) - logC1, logC2 - upper_ratio(p, m.log_m[p]));
        for (double v : sector[p]) margin = std::min(margin, logC2 - upper_ratio(p, v));
        out.report.trace.push_back({double(p), margin});
        worst = std::min(worst, margin);
        if (margin < -tol) ++violations;
    }
    out.report.witness = worst;
    out.report.stats["violations"] = violations;
    out.report.verdict = violations == 0 ? Verdict::holds : Verdict::fails;
    return out;
}

double BorelSeries::operator()(double u) const {
    double s = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) s = s * u + *it;
    return s;
}

BorelSeries borel_series(std::span<const double> lambda, const MomentTable& m, const MomentBounds& mb,
                         const FlatBounds& fb, double h) {
    if (!(h > 0.0)) throw InvalidInput("h must be positive");
    if (lambda.size() > m.size())
        throw PreconditionError("moment table (" + std::to_string(m.size()) + " entries) shorter than lambda support (" +
                                std::to_string(lambda.size()) + ")");
    BorelSeries g;
    double log_norm = -kInf;
    for (std::size_t p = 0; p < lambda.size(); ++p) {
        const double lf = std::lgamma(double(p) + 1.0);
        g.coefficients.push_back(lambda[p] * std::exp(-lf - m.log_m[p]));
        if (lambda[p] != 0.0)
            log_norm = std::max(log_norm, std::log(std::abs(lambda[p])) - p * std::log(h) - lf - mb.log_S[p]);
    }
    g.lambda_norm = std::exp(log_norm);
    g.certified_radius = fb.K2 / (2.0 * h);
    // beyond the supplied terms the class bound gives ratio 1/2 on |u| <= R0
    g.truncation_bound = g.lambda_norm / mb.C1 * std::pow(0.5, double(lambda.size()) - 1.0);
    g.coefficient_check.tag = "|lambda_p/(p! m_a(p))| <= |lambda|/C1 (2h/K2)^p";
    double worst = kInf;
    for (std::size_t p = 0; p < lambda.size(); ++p) {
        if (g.coefficients[p] == 0.0) continue;
        const double bound = std::log(g.lambda_norm / mb.C1) + p * std::log(2.0 * h / fb.K2);
        worst = std::min(worst, bound - std::log(std::abs(g.coefficients[p])));
    }
    g.coefficient_check.witness = worst;
    g.coefficient_check.verdict = worst >= -1e-9 ? Verdict::holds : Verdict::fails;
    return g;
}

std::shared_ptr<const ExtensionSetup> make_extension_setup(const WeightFunction& sigma, const WeightFunction& omega,
                                                           const IndexEstimate& bracket, const ExtensionConfig& cfg) {
    if (!(cfg.x > 0.0)) throw InvalidInput("x must be positive");
    if (!(cfg.h > 0.0)) throw InvalidInput("h must be positive");
    const double a = 1.0 / (2.0 * cfg.x);
    const auto params = choose_ramification(cfg.gamma, bracket, a);
    FlatFunction G(sigma, omega, params, FlatVariant::weights, cfg.quad);
    auto [cal, held] = split_sector(cfg.gamma, cfg.r_lo, cfg.r_hi, cfg.n_radii);
    auto flat = flat_sandwich(G, cal, held);
    if (!std::isfinite(flat.K2) || !std::isfinite(flat.K3))
        throw NumericFailure("flat-function constants could not be fitted");
    auto moments = moment_table(G, cfg.moment_depth);
    std::vector<double> args;
    for (double f : cal.arg_fractions) args.push_back(f * cfg.gamma * kPi / 2.0);
    auto mb = moment_bounds(G, moments, flat, args);
    const double R0 = flat.K2 / (4.0 * cfg.h);
    return std::make_shared<const ExtensionSetup>(
        ExtensionSetup{cfg, std::move(G), cal, held, std::move(flat), std::move(moments), std::move(mb), R0});
}

ExtensionResult extend(std::span<const double> lambda, std::shared_ptr<const ExtensionSetup> setup) {
    auto g = borel_series(lambda, setup->moments, setup->moment_bounds, setup->flat, setup->cfg.h);
    return ExtensionResult{std::move(setup), std::vector<double>(lambda.begin(), lambda.end()), std::move(g)};
}

QuadResult<cplx> ExtensionResult::evaluate(cplx z) const {
    const auto& S = *setup;
    if (!(std::abs(z) > 0.0) || std::abs(std::arg(z)) >= S.G.params().delta * kPi / 2.0)
        throw PreconditionError("z outside the sector S_delta");
    const double top = std::log(S.R0);
    auto f = [&](double v) {
        const double u = std::exp(v);
        const cplx xi = z / u;
        return (u / z) * std::exp(S.G.log_value(xi)) * g(u);
    };
    // below u = |z| e^{-40} the kernel is e_a(t) ~ t and the piece is negligible
    const double bottom = std::min(top, std::log(std::abs(z))) - 40.0;
    std::vector<double> pts;
    for (double v = bottom; v < top; v += 0.5) pts.push_back(v);
    pts.push_back(top);
    auto r = integrate_pieces(f, pts, S.cfg.quad);
    r.value += f(bottom);
    return r;
}

RemainderReport remainder_report(const ExtensionResult& f, std::span<const int> orders,
                                 std::span<const cplx> calibration, std::span<const cplx> held_out,
                                 std::span<const double> ray_radii) {
    const auto& S = *f.setup;
    RemainderReport rep;
    int maxN = 0;
    for (int N : orders) maxN = std::max(maxN, N);
    if (maxN >= int(S.moment_bounds.log_W.size())) throw PreconditionError("order exceeds the moment table depth");
    rep.log_W8x = S.moment_bounds.log_W;  // row 8x = 4/a
    rep.rate = 4.0 * S.cfg.h * S.flat.K3 / S.flat.K2;
    rep.theoretical_front = 2.0 * S.moment_bounds.C2 * f.g.lambda_norm / S.moment_bounds.C1;

    auto partial = [&](cplx z, int N) {
        cplx s = 0.0, zp = 1.0;
        for (int p = 0; p < N; ++p) {
            if (p < int(f.lambda.size())) s += f.lambda[p] * zp / std::exp(std::lgamma(p + 1.0));
            zp *= z;
        }
        return s;
    };
    auto log_scale = [&](cplx z, int N) {
        return N * std::log(rep.rate) + rep.log_W8x[N] + N * std::log(std::abs(z));
    };
    struct Sample {
        cplx z;
        QuadResult<cplx> f;
    };
    auto sample = [&](std::span<const cplx> zs) {
        std::vector<Sample> out;
        for (cplx z : zs) out.push_back({z, f.evaluate(z)});
        return out;
    };
    const auto cal = sample(calibration), held = sample(held_out);

    rep.theoretical.tag = "remainder envelope, theoretical front constant";
    rep.fitted.tag = "remainder envelope, front constant fitted on calibration samples";
    int viol_th = 0, viol_fit = 0;
    double worst_th = kInf, worst_fit = kInf;
    for (int N : orders) {
        double front = 0.0;
        for (const auto& s : cal) {
            const double r = std::abs(s.f.value - partial(s.z, N));
            front = std::max(front, std::exp(std::log(r) - log_scale(s.z, N)));
        }
        front *= kHeldOutMargin;
        rep.fitted_front[N] = front;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& s : pass == 0 ? cal : held) {
                RemainderRow row;
                row.N = N;
                row.z = s.z;
                row.held_out = pass == 1;
                row.measured = std::abs(s.f.value - partial(s.z, N));
                const double scale = std::exp(log_scale(s.z, N));
                row.envelope = rep.theoretical_front * scale;
                row.fitted_envelope = front * scale;
                const double tol = s.f.error + f.g.truncation_bound + 1e-13;
                row.tolerance = tol;
                const double m_th = std::log(row.envelope + tol) - std::log(row.measured);
                worst_th = std::min(worst_th, m_th);
                if (m_th < 0) ++viol_th;
                if (row.held_out) {
                    const double m_fit = std::log(row.fitted_envelope + tol) - std::log(row.measured);
                    worst_fit = std::min(worst_fit, m_fit);
                    if (m_fit < 0) ++viol_fit;
                }
                rep.rows.push_back(row);
            }
        }
        if (ray_radii.size() >= 2) {
            std::vector<double> lx, ly;
            for (double r : ray_radii) {
                const cplx z(r, 0.0);
                const double rem = std::abs(f(z) - partial(z, N));
                lx.push_back(std::log(r));
                ly.push_back(std::log(rem));
            }
            rep.slope[N] = least_squares_slope(lx, ly);
        }
    }
    rep.theoretical.witness = worst_th;
    rep.theoretical.stats["violations"] = viol_th;
    rep.theoretical.stats["front"] = rep.theoretical_front;
    rep.theoretical.verdict = viol_th == 0 ? Verdict::holds : Verdict::fails;
    rep.fitted.witness = worst_fit;
    rep.fitted.stats["violations"] = viol_fit;
    rep.fitted.verdict = viol_fit == 0 ? Verdict::holds : Verdict::fails;
    return rep;
}

std::pair<double, double> recover_leading_coefficients(const ExtensionResult& f, double z0, int levels) {
    std::vector<double> x, y;
    for (int k = 0; k < levels; ++k) {
        const double z = z0 * std::pow(0.5, k);
        x.push_back(z);
        y.push_back(f(cplx(z, 0.0)).real());
    }
    const double l0 = neville_at_zero(x, y);
    std::vector<double> q;
    for (int k = 0; k < levels; ++k) q.push_back((y[k] - l0) / x[k]);
    return {l0, neville_at_zero(x, q)};
}

double cauchy_riemann_residual(const ExtensionResult& f, cplx z, double rel_step) {
    const double h = rel_step * std::abs(z);
    const cplx I(0.0, 1.0);
    const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
    const cplx dy = (f(z + I * h) - f(z - I * h)) / (2.0 * I * h);
    return std::abs(dx - dy) / std::max(std::abs(dx), 1e-300);
}

}  // namespace ultra
