#include "ultra/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ultra/constructions.hpp"
#include "ultra/engine.hpp"
#include "ultra/error.hpp"

namespace ultra {

namespace {

struct Check {
    CriterionResult& out;
    bool all = true;
    void operator()(bool ok, const std::string& what) {
        all = all && ok;
        out.details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string bracket(const IndexEstimate& e) { return fmt("[%.4f, %.4f]", e.r_lo, e.r_hi); }

const WeightFunction& smoke_sigma() {
    static const auto w = weight_from_sequence(gevrey_sequence(1.0, 1024));
    return w;
}

const WeightFunction& smoke_omega() {
    static const auto w = weight_from_sequence(gevrey_sequence(2.0, 1024));
    return w;
}

std::shared_ptr<const ExtensionSetup> smoke_setup(int depth, CriterionResult& out) {
    const auto br = gamma_mixed_weights(smoke_sigma(), smoke_omega());
    out.details.push_back("gamma(omega_G1, omega_G2) bracket " + bracket(br) + ", opening 1");
    ExtensionConfig cfg;
    cfg.moment_depth = depth;
    return make_extension_setup(smoke_sigma(), smoke_omega(), br, cfg);
}

void factorial_blocks(CriterionResult& out, Check& check) {
    const auto N = factorial_block_example(362879);
    double s = 0.0, smax = 0.0, carry = 0.0;
    // block p occupies p! <= k < (p+1)!
    std::size_t next_factorial = 2;
    int p = 1;
    for (std::size_t k = 1; k <= N.horizon(); ++k) {
        // compensated summation: 362879 terms would otherwise drift by ~1e-11
        const double y = std::exp(-N.log_quotient(k)) - carry, t = s + y;
        carry = (t - s) - y;
        s = t;
        smax = std::max(smax, s);
        if (k + 1 == next_factorial) {
            const double expect = 1.0 - std::ldexp(1.0, -p);
            check(std::abs(s - expect) < 1e-12, fmt("sum through block p=%.0f is %.15f (1 - 2^-p = %.15f)", p, s, expect));
            ++p;
            next_factorial *= std::size_t(p + 1);
        }
    }
    out.stats["final_sum"] = s;
    check(s >= 1.0 - std::ldexp(1.0, -8) - 1e-12, fmt("sum reaches 1 - 2^-8 by the p=8 block: %.15f", s));
    check(smax <= 1.0, fmt("partial sums never exceed 1: max %.15f", smax));
}

void gevrey_mu(CriterionResult& out, Check& check) {
    for (double r : {1.5, 2.0, 3.0}) {
        const auto G = gevrey_sequence(r, 1024);
        const auto e = mu_of_sequence(G);
        check(std::abs(e.estimate - r) <= 0.02, fmt("mu(G^%.1f) = %.4f", r, e.estimate));
        const auto h = mu_of_sequence(transform_sequence(G, SequenceTransform::hat));
        check(std::abs(h.estimate - (r + 1.0)) <= 0.05, fmt("mu(hat G^%.1f) = %.4f", r, h.estimate));
        out.stats["mu_G" + fmt("%.1f", r)] = e.estimate;
    }
}

void mixed_pair(CriterionResult& out, Check& check) {
    const auto pair = mixed_pair_example(1.2, 2.0, LangenbruchVariant::mg, 1024);
    const auto g = gamma_mixed_sequences(pair.M.seq, pair.N.seq);
    out.stats["gamma_lo"] = g.r_lo;
    out.stats["gamma_hi"] = g.r_hi;
    check(g.r_lo <= 2.0 && 2.0 <= g.r_hi && g.r_hi - g.r_lo <= 0.2, "gamma(M,N) bracket " + bracket(g) + " contains 2, width <= 0.2");
    check(check_property(pair.M.seq, {PropertyKind::beta3}).verdict == Verdict::fails, "beta3(M) fails");
    check(check_property(pair.N.seq, {PropertyKind::beta3}).verdict == Verdict::fails, "beta3(N) fails");
    bool le = true;
    for (std::size_t p = 1; p <= 1024; ++p) le = le && pair.M.seq.log_quotient(p) <= pair.N.seq.log_quotient(p);
    check(le, "mu_p <= nu_p for all p <= 1024");
}

void descendants(CriterionResult& out, Check& check) {
    const std::vector<std::pair<std::string, WeightSequence>> sources{
        {"G^2", gevrey_sequence(2.0, 1024)}, {"factorial blocks", factorial_block_example(362879)}};
    for (const auto& [name, N] : sources) {
        const auto D = descendant(N, 1.0);
        check(D.sigma.log_quotient(0) == 0.0 && D.sigma.log_quotient(1) == 0.0, name + ": sigma_0 = sigma_1 = 1 exactly");
        bool mono = true;
        for (std::size_t k = 1; k <= D.sigma.horizon(); ++k) mono = mono && D.sigma.log_quotient(k) >= D.sigma.log_quotient(k - 1);
        check(mono, name + ": sigma nondecreasing");
        check(std::isfinite(D.C), name + fmt(": sigma_k <= C nu_k with C = %.6g", D.C));
        const auto& mixed = D.checks[2];
        check(mixed.verdict == Verdict::holds, name + ": " + mixed.tag + " " + std::string(to_string(mixed.verdict)));
        out.stats[name + " C"] = D.C;
    }
    const auto N = sources[1].second;
    const auto D = descendant(N, 1.0);
    check(check_property(D.sigma, {PropertyKind::mg}).verdict == Verdict::holds, "descendant of factorial blocks has mg");
    check(check_property(N, {PropertyKind::mg}).verdict == Verdict::fails, "factorial blocks fail mg");
}

void duality(CriterionResult& out, Check& check) {
    const std::vector<WeightSequence> seqs{gevrey_sequence(1.0, 1024), gevrey_sequence(2.0, 1024),
                                           langenbruch_example(2.0, LangenbruchVariant::mg, 1024).seq};
    double worst = 0.0;
    for (const auto& M : seqs) {
        const double top = M.log_quotient(M.horizon());
        for (int i = 0; i < 50; ++i) {
            const double t = std::exp(-top + 0.5 + (top + 1.0) * i / 49.0);
            const double w = omega_from_sequence(M, 1.0 / t);
            worst = std::max(worst, std::abs(log_h_from_sequence(M, t) + w) / std::max(1.0, std::abs(w)));
        }
    }
    out.stats["duality_error"] = worst;
    check(worst <= 1e-10, fmt("log h_M(t) = -omega_M(1/t), worst error %.3g over 150 samples", worst));

    const std::vector<WeightFunction> weights{weight_from_sequence(gevrey_sequence(2.0, 256)),
                                              normalized_weight(builtin_weight(BuiltinWeight::power, 2.0))};
    double worst_bc = 0.0;
    for (const auto& w : weights)
        for (int i = 0; i < 20; ++i) {
            const double y = 0.25 + 0.4 * i, phi = w(std::exp(y));
            worst_bc = std::max(worst_bc, std::abs(biconjugate(w, y) - phi) / std::max(1.0, phi));
        }
    out.stats["biconjugate_error"] = worst_bc;
    check(worst_bc <= 1e-6, fmt("phi** = phi, worst relative error %.3g over 40 samples", worst_bc));

    const auto m = associated_matrix(weight_from_sequence(gevrey_sequence(2.0, 1024)));
    const std::pair<std::size_t, std::size_t> jk[] = {{1, 1}, {2, 5}, {7, 3}, {10, 10}, {25, 40}, {60, 4}};
    double margin = INFINITY;
    int count = 0;
    for (double l : {0.25, 0.5, 1.0, 2.0, 4.0})
        for (auto [j, k] : jk) {
            margin = std::min(margin, m.log_entry(2 * l, j) + m.log_entry(2 * l, k) - m.log_entry(l, j + k));
            ++count;
        }
    out.stats["matrix_margin"] = margin;
    check(margin >= -1e-9 && count == 30, fmt("W^l_{j+k} <= W^{2l}_j W^{2l}_k at %.0f samples, min log margin %.3g", count, margin));
}

void outer(CriterionResult&, Check& check) {
    OuterFunction F(smoke_omega());
    const cplx points[] = {{1.0, 0.0}, {0.01, 0.0}, {0.3, 0.9}, {1e-3, 2e-3}, {5.0, -3.0},
                           {0.2, -0.1}, {2.0, 7.0}, {0.05, 0.01}, {30.0, 1.0}, {0.7, -0.69}};
    auto [cal, held] = split_sector(1.0, 1e-3, 1e3, 13);
    const auto pc = cal.points(), ph = held.points();
    for (double a : {0.5, 1.0}) {
        double im = 0.0;
        for (double x : geometric_grid(1e-4, 1e4, 33)) {
            const cplx v = F(cplx(x, 0.0), a);
            im = std::max(im, std::abs(v.imag()) / std::abs(v));
        }
        check(im < 1e-8, fmt("a=%.1f: max Im F/|F| on the positive ray %.3g", a, im));
        double dev = 0.0;
        for (cplx w : points) {
            const cplx fa = std::exp(F.log_value_poisson(w, a).value);
            const cplx f1a = std::exp(a * F.log_value(w, 1.0));
            dev = std::max(dev, std::abs(fa - f1a) / std::abs(f1a));
        }
        check(dev < 1e-6, fmt("a=%.1f: |F_a - F_1^a| relative %.3g at 10 points", a, dev));
        const auto b = outer_sandwich(F, smoke_sigma(), a, pc, ph);
        check(b.report.verdict == Verdict::holds,
              fmt("a=%.1f: sandwich on held-out grid with A=%.4g, B=%.4g", a, b.A, b.B));
    }
}

void flat(CriterionResult& out, Check& check) {
    const auto S = smoke_setup(4, out);
    const auto& G = S->G;
    for (double p : {1.0, 2.0, 5.0}) {
        const auto r = flatness_report(G, p);
        check(r.verdict == Verdict::holds, fmt("|G(xi)|/|xi|^%.0f decreasing to exp(%.4g) over 4 decades", p, r.witness));
    }
    check(S->flat.report.verdict == Verdict::holds,
          fmt("weights form: both sides on held-out samples, K2=%.4g K3=%.4g", S->flat.K2, S->flat.K3));
    FlatFunction Gs(smoke_sigma(), smoke_omega(), G.params(), FlatVariant::sequences);
    const auto fs = flat_sandwich(Gs, S->calibration, S->held_out);
    check(fs.report.verdict == Verdict::holds,
          fmt("sequences form: both sides on held-out samples, K2=%.4g K3=%.4g", fs.K2, fs.K3));
    out.stats["K2"] = S->flat.K2;
    out.stats["K3"] = S->flat.K3;
}

void moments(CriterionResult& out, Check& check) {
    const auto S = smoke_setup(20, out);
    const auto& m = S->moments;
    check(m.size() == 21, fmt("moment table through p=%.0f", double(m.size()) - 1.0));
    bool finite = true;
    for (double v : m.log_m) finite = finite && std::isfinite(v);
    check(finite, "m_a(p) > 0 for p <= 20");
    const auto lc = moment_log_convexity(m);
    check(lc.verdict == Verdict::holds, fmt("log-convex, min second difference %.4g", lc.witness));
    check(S->moment_bounds.report.verdict == Verdict::holds,
          fmt("moment sandwich on odd p with C1=%.4g, C2=%.4g", S->moment_bounds.C1, S->moment_bounds.C2));
}

void extension(CriterionResult& out, Check& check) {
    const auto S = smoke_setup(30, out);
    const std::size_t n = S->moments.size();
    std::vector<double> unit{1.0}, lam(n), twice(n);
    double f = 1.0;
    for (std::size_t p = 0; p < n; ++p) {
        lam[p] = f;
        twice[p] = 2.0 * f;
        f *= double(p + 1);
    }
    const auto e1 = extend(unit, S);

    // remainder at N=1 for lambda = (1, 0, ...) along the bisecting ray, where it is resolvable
    std::vector<double> lx, ly;
    for (int k = 0; k < 4; ++k) {
        const double z = 4.0 * S->R0 * std::ldexp(1.0, -k);
        const double r = std::abs(e1(cplx(z, 0.0)) - 1.0);
        lx.push_back(std::log(z));
        ly.push_back(std::log(r));
        out.details.push_back(fmt("     |f(z) - 1| at z=%.4g: %.4g", z, r));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
    double sxy = 0, sxx = 0;
    for (int k = 0; k < 4; ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    const double slope = sxy / sxx;
    out.stats["unit_slope"] = slope;
    check(std::abs(slope - 1.0) <= 0.1, fmt("lambda=(1,0,...): log-log slope of |f - 1| is %.4g", slope));

    const auto fl = extend(lam, S), f2 = extend(twice, S);
    const auto cal = make_sector(1.0, 1e-3, 0.1, 5, {0.0, 0.5, -0.5}).points();
    const auto held = make_sector(1.0, 2e-3, 0.07, 4, {0.25, -0.75, 0.9}).points();
    bool linear = true;
    for (const auto* zs : {&cal, &held})
        for (cplx z : *zs) {
            const auto a = fl.evaluate(z), b = f2.evaluate(z);
            linear = linear && std::abs(b.value - 2.0 * a.value) <= 2.0 * a.error + b.error + 1e-15 * std::abs(b.value);
        }
    check(linear, "|f_{2 lambda} - 2 f_lambda| within quadrature tolerance at all samples");

    const std::vector<int> orders{1, 2, 4, 8};
    const std::vector<double> ray{1e-4, 2e-4, 4e-4};
    const auto rep = remainder_report(fl, orders, cal, held, ray);
    int held_rows = 0, held_ok = 0;
    for (const auto& row : rep.rows)
        if (row.held_out) {
            ++held_rows;
            held_ok += row.measured <= row.envelope + 1e-13;
        }
    check(held_ok == held_rows && held_rows > 0,
          fmt("envelope dominates %.0f of %.0f held-out rows, N in {1,2,4,8}", held_ok, held_rows));
    const auto [l0, l1] = recover_leading_coefficients(fl);
    out.stats["lambda0"] = l0;
    out.stats["lambda1"] = l1;
    check(std::abs(l0 - 1.0) <= 0.01 && std::abs(l1 - 1.0) <= 0.01, fmt("recovered lambda_0=%.6f, lambda_1=%.6f", l0, l1));
}

void cross_level(CriterionResult& out, Check& check) {
    const auto pair = mixed_pair_example(1.2, 2.0, LangenbruchVariant::mg, 1024);
    const auto s = gamma_mixed_sequences(pair.M.seq, pair.N.seq);
    const auto w = gamma_mixed_weights(weight_from_sequence(pair.M.seq), weight_from_sequence(pair.N.seq));
    out.stats["sequence_estimate"] = s.estimate;
    out.stats["weight_estimate"] = w.estimate;
    check(std::max(s.r_lo, w.r_lo) <= std::min(s.r_hi, w.r_hi),
          "sequence bracket " + bracket(s) + " overlaps weight bracket " + bracket(w));
}

struct Spec {
    const char* title;
    double budget;
    void (*run)(CriterionResult&, Check&);
};

const std::map<int, Spec>& table() {
    static const std::map<int, Spec> t{
        {1, {"factorial-block partial sums", 1.0, factorial_blocks}},
        {2, {"orders of quasianalyticity of Gevrey sequences", 1.0, gevrey_mu}},
        {3, {"mixed pair with gamma'=1.2, gamma=2", 10.0, mixed_pair}},
        {4, {"descendants of G^2 and the factorial blocks", 10.0, descendants}},
        {5, {"duality, biconjugate and matrix moderate growth", 5.0, duality}},
        {6, {"outer function", 60.0, outer}},
        {7, {"flat function", 60.0, flat}},
        {8, {"moments", 120.0, moments}},
        {9, {"extension end to end", 300.0, extension}},
        {10, {"sequence and weight levels of the mixed index", 60.0, cross_level}},
    };
    return t;
}

}  // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (const auto& [id, s] : table()) ids.push_back(id);
    return ids;
}

CriterionResult run_criterion(int id) {
    const auto it = table().find(id);
    if (it == table().end()) throw InvalidInput("no criterion " + std::to_string(id));
    CriterionResult out;
    out.id = id;
    out.title = it->second.title;
    out.budget = it->second.budget;
    Check check{out};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        it->second.run(out, check);
    } catch (const Error& e) {
        check(false, std::string("error: ") + e.what());
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.checks_pass = check.all;
    return out;
}

}  // namespace ultra
