#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ultra/indices.hpp"
#include "ultra/report.hpp"
#include "ultra/sequence.hpp"
#include "ultra/weight.hpp"

namespace ultra {

enum class LangenbruchVariant { mg, no_mg };

struct LangenbruchExample {
    WeightSequence seq;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<std::int64_t> c;
    std::vector<std::int64_t> d;
    std::vector<PropertyReport> claims;  // (i) lower Gevrey bound, (ii) upper bound, (iii) beta3, (iv) mg
};

LangenbruchExample langenbruch_example(double gamma, LangenbruchVariant variant, std::size_t P = 1024);

WeightSequence factorial_block_example(std::size_t P);

struct MixedPair {
    LangenbruchExample M;
    LangenbruchExample N;
    double constraint_lhs = 0.0;  // gamma'(2 gamma' - 1) or 2 gamma'^2
    std::vector<PropertyReport> diagnostics;
};

MixedPair mixed_pair_example(double gamma_prime, double gamma, LangenbruchVariant variant, std::size_t P = 1024);

struct DescendantResult {
    std::vector<double> tau;  // tau_k, k = 0..P (entry 0 unused)
    WeightSequence sigma;     // S^{N,r}, quotients sigma_k
    WeightSequence L;         // (S^{N,r})^r
    double C = 0.0;           // sigma_k <= C nu_k^{1/r}
    double tail_band = 0.0;   // max |log sigma_k| shift from dropping the tail estimate
    std::vector<PropertyReport> checks;
};

DescendantResult descendant(const WeightSequence& N, double r);

std::pair<PropertyReport, PropertyReport> descendant_mg_check(const WeightSequence& N);

struct HeirPair {
    WeightFunction sigma;
    IndexEstimate mu_omega;
    IndexEstimate certificate;
    PropertyReport at_r;
};

HeirPair heir_pair_for_sector(const WeightFunction& w, double r, const WeightGammaConfig& cfg = {});

}  // namespace ultra
