#include "ultra/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ultra/error.hpp"

namespace ultra {

namespace {

constexpr int kSeriesTerms = 30;    // |x| <= 1/2 leaves 2^-61 after this many odd powers
constexpr double kSeriesRadius = 2.0;
constexpr double kMaxExplicit = 5e6;

}  // namespace

struct OuterFunction::KinkData {
    double scale = 1.0;
    std::size_t P = 0;
    std::vector<double> log_rho;  // index p = 1..P
    double beta = 0.0;            // log rho_p ~ log rho_P + beta (log p - log P) beyond P
    // log sum_{j>=p} rho_j^{-(2k+1)}, tail model included; row k, column p = 1..P+1
    std::vector<std::vector<double>> log_suffix;

    double log_tail_power_sum(int k, double from) const {
        // sum_{p>=from} rho_P^{-(2k+1)} (p/P)^{-(2k+1)beta}, from > P
        const double E = (2 * k + 1) * beta;
        return -(2 * k + 1) * log_rho[P] + E * (std::log(double(P)) - std::log(from)) +
               std::log(hurwitz_zeta_scaled(E, from));
    }
};

OuterFunction::OuterFunction(WeightFunction omega, QuadratureConfig cfg) : omega_(std::move(omega)), cfg_(cfg) {
    if (!omega_.normalized()) throw PreconditionError("outer function needs a normalized weight");
    const KinkForm* k = omega_.kinks();
    if (!k) {
        if (weighted_tail_integral(omega_, 1.0, 1.0).divergent)
            throw PreconditionError("(omega_nq) fails for " + omega_.provenance());
        return;
    }
    auto d = std::make_shared<KinkData>();
    d->scale = k->scale;
    d->P = k->seq->horizon();
    d->beta = k->seq->tail_exponent() / k->divisor;
    if (!(d->beta > 1.0)) throw PreconditionError("(omega_nq) fails for " + omega_.provenance());
    d->log_rho.assign(d->P + 1, 0.0);
    for (std::size_t p = 1; p <= d->P; ++p) d->log_rho[p] = k->kink(p);
    d->log_suffix.assign(kSeriesTerms, std::vector<double>(d->P + 2, 0.0));
    for (int j = 0; j < kSeriesTerms; ++j) {
        auto& row = d->log_suffix[j];
        row[d->P + 1] = d->log_tail_power_sum(j, double(d->P + 1));
        for (std::size_t p = d->P; p >= 1; --p) row[p] = log_add_exp(row[p + 1], -(2 * j + 1) * d->log_rho[p]);
    }
    kinks_ = std::move(d);
}

cplx OuterFunction::log_unit_kinks(cplx w) const {
    const KinkData& d = *kinks_;
    const double lw = std::log(std::abs(w));
    const double threshold = std::log(kSeriesRadius) - lw;  // |w| rho >= 2  <=>  log rho >= threshold
    auto it = std::lower_bound(d.log_rho.begin() + 1, d.log_rho.end(), threshold);
    const std::size_t p0 = std::size_t(it - d.log_rho.begin());

    cplx total = 0.0;
    for (std::size_t p = 1; p < p0 && p <= d.P; ++p) total += inverse_tangent_integral(1.0 / (w * std::exp(d.log_rho[p])));

    const cplx lwc = std::log(w);
    auto series = [&](auto&& log_sum) {
        cplx s = 0.0;
        for (int k = 0; k < kSeriesTerms; ++k) {
            const double n = 2 * k + 1;
            const cplx term = std::exp(-n * lwc + log_sum(k)) / (n * n);
            s += (k % 2 == 0) ? term : -term;
        }
        return s;
    };

    if (p0 <= d.P) {
        total += series([&](int k) { return d.log_suffix[k][p0]; });
    } else {
        // explicit extrapolated kinks until |w| rho_p reaches the series radius
        const double need = std::ceil(double(d.P) * std::exp((threshold - d.log_rho[d.P]) / d.beta));
        if (need - double(d.P) > kMaxExplicit)
            throw OutOfHorizon("|w| too small for the kink horizon of " + omega_.provenance());
        const std::size_t p1 = std::max<std::size_t>(d.P + 1, std::size_t(need));
        const double lP = std::log(double(d.P));
        for (std::size_t p = d.P + 1; p < p1; ++p) {
            const double lr = d.log_rho[d.P] + d.beta * (std::log(double(p)) - lP);
            total += inverse_tangent_integral(1.0 / (w * std::exp(lr)));
        }
        total += series([&](int k) { return d.log_tail_power_sum(k, double(p1)); });
    }
    return -(2.0 / kPi) * d.scale * total;
}

double OuterFunction::omega_at(double u) const {
    if (const KinkForm* k = omega_.kinks()) return k->evaluate(std::log(u), true);
    return omega_(u);
}

// int_U^inf omega(u)/(1+w^2u^2) du = w^-2 int omega u^-2 - w^-4 int omega u^-4 + O((|w|U)^-6)
cplx OuterFunction::far_tail(cplx w, double U) const {
    const double t1 = weighted_tail_integral(omega_, U, 1.0).value;
    const double t3 = weighted_tail_integral(omega_, U, 3.0).value;
    const cplx w2 = w * w;
    return t1 / w2 - t3 / (w2 * w2);
}

namespace {

// Unit grid on [0, V], refined near the pole at u = 1/|w| when w approaches the imaginary axis.
std::vector<double> log_breakpoints(cplx w, double V) {
    std::vector<double> pts;
    for (double v = 0.0; v < V; v += 1.0) pts.push_back(v);
    pts.push_back(V);
    const double d = kPi / 2.0 - std::abs(std::arg(w)), v0 = -std::log(std::abs(w));
    if (d < 1.0)
        for (int k = -12; k <= 12; ++k) {
            const double v = v0 + k * d;
            if (v > 0.0 && v < V) pts.push_back(v);
        }
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace

cplx OuterFunction::log_unit_quadrature(cplx w) const {
    const double U = std::max(1e4 / std::abs(w), 1e4);
    const double V = std::log(U);
    auto f = [&](double v) {
        const double u = std::exp(v);
        return omega_at(u) * u / (1.0 + w * w * u * u);
    };
    const auto pts = log_breakpoints(w, V);
    const cplx head = integrate_pieces(f, pts, cfg_).value;
    return -(2.0 / kPi) * w * (head + far_tail(w, U));
}

cplx OuterFunction::log_value(cplx w, double a) const {
    if (!(w.real() > 0.0)) throw InvalidInput("outer function needs Re w > 0");
    if (!(a > 0.0)) throw InvalidInput("a must be positive");
    return a * (kinks_ ? log_unit_kinks(w) : log_unit_quadrature(w));
}

QuadResult<cplx> OuterFunction::log_value_poisson(cplx w, double a) const {
    if (!(w.real() > 0.0)) throw InvalidInput("outer function needs Re w > 0");
    const cplx I(0.0, 1.0);
    const double U = std::max(1e4 / std::abs(w), 1e4);
    const double V = std::log(U);
    const auto pts = log_breakpoints(w, V);
    // t = 1/u on t > 0 and t = -1/u on t < 0, each with its own rational factor
    QuadResult<cplx> out;
    for (double sign : {1.0, -1.0}) {
        auto f = [&](double v) {
            const double u = std::exp(v);
            const cplx rational = (sign * I * w - u) / ((u * u + 1.0) * (sign * I - w * u));
            return -a / kPi * omega_at(u) * rational * u;
        };
        auto half = integrate_pieces(f, pts, cfg_);
        out.value += half.value;
        out.error += half.error;
    }
    out.value += -(2.0 * a / kPi) * w * far_tail(w, U);
    return out;
}

cplx outer_function(const WeightFunction& omega, double a, cplx w) { return OuterFunction(omega)(w, a); }

}  // namespace ultra
