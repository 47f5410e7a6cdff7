#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ultra {

enum class Verdict { holds, fails, inconclusive };

std::string_view to_string(Verdict v);

struct TracePoint {
    double x;
    double value;
};

struct PropertyReport {
    std::string tag;
    Verdict verdict = Verdict::inconclusive;
    double witness = 0.0;
    std::vector<TracePoint> trace;
    std::map<std::string, double> stats;
    std::vector<std::string> notes;
};

// Finite-horizon boundedness heuristic. The abscissa range is cut in log scale;
// the running max over the top quarter is compared with the quarter below it and
// the growth is expressed per unit of log x. Spikes that recur block after block
// (as in flat-block sequences) show up as positive growth. Growth that decays
// geometrically across the last three windows is read as convergence.
struct TrendResult {
    double early_max = 0.0;
    double late_max = 0.0;
    double growth = 0.0;
    double previous_growth = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

struct TrendThresholds {
    double hold = 0.02;
    double fail = 0.08;
    double decel = 0.6;
    double steady = 0.8;
};

TrendResult bounded_trend(std::span<const TracePoint> trace, TrendThresholds th = {});
// Same windows, but asks whether the statistic tends to 0.
TrendResult decay_trend(std::span<const TracePoint> trace);

std::string trend_note(const TrendResult& t);

}  // namespace ultra
