#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ultra/report.hpp"

namespace ultra {

class WeightSequence {
public:
    // log_mu[0] must be 0; entries p >= 1 are log of the quotients.
    static WeightSequence from_log_quotients(std::vector<double> log_mu, std::string label);

    std::size_t horizon() const noexcept { return log_mu_.size() - 1; }
    double log_value(std::size_t p) const { return log_M_.at(p); }
    double log_quotient(std::size_t p) const { return log_mu_.at(p); }
    std::span<const double> log_values() const noexcept { return log_M_; }
    std::span<const double> log_quotients() const noexcept { return log_mu_; }
    const std::string& label() const noexcept { return label_; }

    bool normalized() const noexcept { return normalized_; }
    bool log_convex() const noexcept { return log_convex_; }

    // Lower growth exponent min_{2<=k<=P} log mu_k / log k. Beyond the horizon the
    // quotients are modelled as mu_P (k/P)^e.
    double tail_exponent() const noexcept { return tail_exponent_; }
    double model_log_quotient(double k) const;

private:
    std::vector<double> log_mu_;
    std::vector<double> log_M_;
    std::string label_;
    bool normalized_ = false;
    bool log_convex_ = false;
    double tail_exponent_ = 0.0;
};

WeightSequence gevrey_sequence(double r, std::size_t P);

enum class SequenceTransform { power, hat, unhat };
WeightSequence transform_sequence(const WeightSequence& M, SequenceTransform mode, double rho = 1.0);

// sum_{k>P} mu_k^{-alpha} under the tail model; infinite if alpha*e <= 1.
struct TailSum {
    double value = 0.0;
    double exponent = 0.0;  // alpha * e
    bool divergent = false;
};
TailSum tail_sum(const WeightSequence& M, double alpha);

enum class PropertyKind { normalized, lc, slc, mg, nq_r, gamma_r, beta1, beta3 };

struct PropertyQuery {
    PropertyKind kind;
    double r = 1.0;
    int Q = 2;
};

PropertyReport check_property(const WeightSequence& M, PropertyQuery q);

struct MixedGammaTrace {
    double C = 0.0;  // max mu_p / nu_p
    std::size_t first_exceed = 0;  // first p with mu_p > nu_p, 0 if none
    bool tail_divergent = false;
    double log_tail = 0.0;
    std::vector<double> log_head;  // log of (mu_p)^{1/r}/p * sum_{p<=k<=P}, p = 1..P/2
    PropertyReport report;  // trace holds s_p, witness = sup
};

MixedGammaTrace mixed_gamma_statistic(const WeightSequence& M, const WeightSequence& N, double r);

struct ComparisonReport {
    PropertyReport le;
    PropertyReport quotient_le;
    PropertyReport preceq;
    PropertyReport preceq_reverse;
    Verdict equivalent = Verdict::inconclusive;
};

ComparisonReport compare_sequences(const WeightSequence& M, const WeightSequence& N);

}  // namespace ultra
