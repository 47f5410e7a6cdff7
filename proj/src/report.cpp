#include "ultra/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ultra {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

struct Windows {
    double first_max = -std::numeric_limits<double>::infinity();
    double early_max = -std::numeric_limits<double>::infinity();
    double late_max = -std::numeric_limits<double>::infinity();
    double quarter = 0.0;  // log-length of each window
    bool ok = false;
};

Windows windows(std::span<const TracePoint> trace) {
    Windows w;
    if (trace.size() < 4) return w;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& t : trace) {
        if (t.x <= 0.0) continue;
        lo = std::min(lo, std::log(t.x));
        hi = std::max(hi, std::log(t.x));
    }
    if (!(hi > lo)) return w;
    w.quarter = 0.25 * (hi - lo);
    const double cut_late = hi - w.quarter;
    const double cut_early = hi - 2.0 * w.quarter;
    const double cut_first = hi - 3.0 * w.quarter;
    int ne = 0, nl = 0;
    for (const auto& t : trace) {
        if (t.x <= 0.0) continue;
        const double lx = std::log(t.x);
        if (lx > cut_late) {
            w.late_max = std::max(w.late_max, t.value);
            ++nl;
        } else if (lx > cut_early) {
            w.early_max = std::max(w.early_max, t.value);
            ++ne;
        } else if (lx > cut_first) {
            w.first_max = std::max(w.first_max, t.value);
        }
    }
    w.ok = ne > 0 && nl > 0;
    return w;
}

}  // namespace

TrendResult bounded_trend(std::span<const TracePoint> trace, TrendThresholds th) {
    TrendResult r;
    for (const auto& t : trace) {
        if (!std::isfinite(t.value)) {
            r.growth = std::numeric_limits<double>::infinity();
            r.verdict = Verdict::fails;
            return r;
        }
    }
    const Windows w = windows(trace);
    if (!w.ok || !(w.early_max > 0.0) || !(w.late_max > 0.0)) return r;
    r.early_max = w.early_max;
    r.late_max = w.late_max;
    r.growth = std::log(w.late_max / w.early_max) / w.quarter;
    if (w.first_max > 0.0) r.previous_growth = std::log(w.early_max / w.first_max) / w.quarter;
    // Growth that shrinks geometrically from one window to the next sums to a
    // finite amount: the statistic is converging, not diverging.
    const bool converging = r.previous_growth > 0.0 && r.growth <= th.decel * r.previous_growth;
    // Growth that barely slows down from one window to the next is read as divergence.
    const bool steady = r.previous_growth > th.hold && r.growth >= th.steady * r.previous_growth;
    if (r.growth <= th.hold || converging)
        r.verdict = Verdict::holds;
    else if (r.growth >= th.fail || steady)
        r.verdict = Verdict::fails;
    return r;
}

TrendResult decay_trend(std::span<const TracePoint> trace) {
    TrendResult r;
    const Windows w = windows(trace);
    if (!w.ok || !(w.early_max > 0.0)) return r;
    r.early_max = w.early_max;
    r.late_max = w.late_max;
    if (!(w.late_max > 0.0)) {
        r.growth = -std::numeric_limits<double>::infinity();
        r.verdict = Verdict::holds;
        return r;
    }
    r.growth = std::log(w.late_max / w.early_max) / w.quarter;
    if (r.growth <= -0.02)
        r.verdict = Verdict::holds;
    else if (r.growth >= -0.002)
        r.verdict = Verdict::fails;
    return r;
}

std::string trend_note(const TrendResult& t) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "trend: early max %.6g, late max %.6g, growth %.4g per log-unit (previous window %.4g)",
                  t.early_max, t.late_max, t.growth, t.previous_growth);
    return buf;
}

}  // namespace ultra
