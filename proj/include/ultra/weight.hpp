#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ultra/quadrature.hpp"
#include "ultra/report.hpp"
#include "ultra/sequence.hpp"

namespace ultra {

// omega(t) = scale * sum_p max(0, log t - log(mu_p)/divisor), the shape shared by
// omega_M and all its power transforms and positive multiples.
struct KinkForm {
    std::shared_ptr<const WeightSequence> seq;
    double divisor = 1.0;
    double scale = 1.0;

    double kink(std::size_t p) const { return seq->log_quotient(p) / divisor; }
    double last_kink() const { return kink(seq->horizon()); }
    // Beyond the horizon the kinks follow the sequence's tail model.
    double evaluate(double log_t, bool extend) const;
    // int_t^inf omega(u) u^{-1-alpha} du in closed form; infinite when the model diverges.
    double tail_integral(double log_t, double alpha) const;
    double scaled_tail_integral(double log_t, double alpha) const;  // t^alpha * tail_integral
};

class WeightFunction {
public:
    WeightFunction(std::function<double(double)> f, double domain_limit, std::string provenance,
                   std::optional<KinkForm> kinks = std::nullopt);

    double operator()(double t) const;
    double domain_limit() const noexcept { return domain_; }
    bool normalized() const noexcept { return normalized_; }
    const std::string& provenance() const noexcept { return provenance_; }
    const KinkForm* kinks() const noexcept { return kinks_ ? &*kinks_ : nullptr; }

private:
    std::function<double(double)> f_;
    double domain_;
    std::string provenance_;
    std::optional<KinkForm> kinks_;
    bool normalized_ = false;
};

enum class BuiltinWeight { power, logpower };
WeightFunction builtin_weight(BuiltinWeight kind, double s);
WeightFunction weight_from_sequence(const WeightSequence& M);

WeightFunction power_weight(const WeightFunction& w, double r);  // t -> w(t^r)
WeightFunction iota_weight(const WeightFunction& w);              // t -> w(1/t)
WeightFunction scaled_weight(const WeightFunction& w, double c);
WeightFunction normalized_weight(const WeightFunction& w);        // 0 on [0,1], w - w(1) beyond

double omega_from_sequence(const WeightSequence& M, double t);
double log_h_from_sequence(const WeightSequence& M, double t);

struct ConjugateResult {
    double value = 0.0;
    double argmax = 0.0;
};
ConjugateResult legendre_conjugate(const WeightFunction& w, double x);
double biconjugate(const WeightFunction& w, double y);

class WeightMatrix {
public:
    explicit WeightMatrix(WeightFunction w) : w_(std::move(w)) {}
    double log_entry(double l, std::size_t j) const;
    WeightSequence row(double l, std::size_t J) const;
    const WeightFunction& source() const noexcept { return w_; }

private:
    WeightFunction w_;
};

WeightMatrix associated_matrix(const WeightFunction& w);

// int_t^inf omega(u) u^{-1-alpha} du with the tail contribution reported separately.
struct TailIntegral {
    double value = 0.0;
    double head = 0.0;
    double tail = 0.0;
    double tail_exponent = 0.0;
    double scaled = 0.0;  // t^alpha * value
    bool divergent = false;
};
TailIntegral weighted_tail_integral(const WeightFunction& w, double t, double alpha, const QuadratureConfig& cfg = {});
// I_r(t) = int_1^inf omega(t u) u^{-1-1/r} du
double mixed_integral(const WeightFunction& w, double t, double r);

enum class WeightCondition { omega1, omega2, omega3, omega4, omega5, omega6, nq_r, snq };

struct ConditionParams {
    double r = 1.0;
    double t_max = 1e12;
    int grid = 48;
};

PropertyReport weight_condition_report(const WeightFunction& w, WeightCondition c, ConditionParams p = {});

WeightFunction kappa_heir(const WeightFunction& w, double r);

std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace ultra
