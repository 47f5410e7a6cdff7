#pragma once

#include <memory>
#include <vector>

#include "ultra/quadrature.hpp"
#include "ultra/special.hpp"
#include "ultra/weight.hpp"

namespace ultra {

// F_a(w) = exp((1/pi) int -a omega(1/|t|)/(1+t^2) (itw-1)/(it-w) dt) on Re w > 0.
// log F_a(w) = -(2a/pi) w int_1^inf omega(u)/(1+w^2 u^2) du; for kink weights every kink
// at rho contributes Ti2(1/(w rho)), which gives a closed form.
class OuterFunction {
public:
    explicit OuterFunction(WeightFunction omega, QuadratureConfig cfg = {});

    cplx log_value(cplx w, double a) const;
    cplx operator()(cplx w, double a) const { return std::exp(log_value(w, a)); }
    // Quadrature of the two half-line Poisson integrals separately, sharing only the far tail.
    QuadResult<cplx> log_value_poisson(cplx w, double a) const;

    const WeightFunction& weight() const noexcept { return omega_; }
    bool closed_form() const noexcept { return kinks_ != nullptr; }

private:
    struct KinkData;
    cplx log_unit_kinks(cplx w) const;
    cplx log_unit_quadrature(cplx w) const;
    double omega_at(double u) const;
    cplx far_tail(cplx w, double U) const;

    WeightFunction omega_;
    QuadratureConfig cfg_;
    std::shared_ptr<const KinkData> kinks_;
};

cplx outer_function(const WeightFunction& omega, double a, cplx w);

}  // namespace ultra
