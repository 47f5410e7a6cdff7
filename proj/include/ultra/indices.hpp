#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/report.hpp"
#include "ultra/sequence.hpp"
#include "ultra/weight.hpp"

namespace ultra {

struct IndexEstimate {
    double estimate = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    bool unbounded = false;
    bool at_grid_minimum = false;
    std::string method;
    std::vector<std::pair<double, Verdict>> trace;
    std::vector<std::string> notes;
};

struct BisectionConfig {
    double r_min = 0.02;
    double r_max = 8.0;
    double resolution = 0.02;
    int max_iter = 12;
};

// Suprema of {r : property holds}; inconclusive verdicts count as "not holds".
IndexEstimate bisect_index(const std::function<Verdict(double)>& verdict_at, BisectionConfig cfg, std::string method);

IndexEstimate mu_of_sequence(const WeightSequence& N);
IndexEstimate mu_of_weight(const WeightFunction& w, BisectionConfig cfg = {});
IndexEstimate gamma_mixed_sequences(const WeightSequence& M, const WeightSequence& N, BisectionConfig cfg = {});

struct WeightGammaConfig {
    int grid = 24;
    double t_max = 1e8;
    BisectionConfig bisection{};
};

PropertyReport mixed_weight_statistic(const WeightFunction& sigma, const WeightFunction& omega, double r,
                                      const WeightGammaConfig& cfg = {});
IndexEstimate gamma_mixed_weights(const WeightFunction& sigma, const WeightFunction& omega,
                                  const WeightGammaConfig& cfg = {});

}  // namespace ultra
