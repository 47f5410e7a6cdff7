#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ultra/indices.hpp"
#include "ultra/outer.hpp"
#include "ultra/report.hpp"
#include "ultra/weight.hpp"

namespace ultra {

// Points r e^{i f gamma pi/2} with |f| < 1: strictly inside S_gamma.
struct SectorSpec {
    double gamma = 1.0;
    std::vector<double> radii;
    std::vector<double> arg_fractions;

    std::vector<cplx> points() const;
    bool contains(cplx z) const;
};

SectorSpec make_sector(double gamma, double r_lo, double r_hi, int n_radii, std::vector<double> fractions);
// Calibration and held-out grids interleave in radius and argument.
std::pair<SectorSpec, SectorSpec> split_sector(double gamma, double r_lo, double r_hi, int n_radii);

struct RamificationParams {
    double a = 1.0;
    double s = 1.0;
    double delta = 1.0;
    double gamma = 1.0;
    double Gamma = 1.0;  // lower end of the index bracket
};

RamificationParams choose_ramification(double gamma, const IndexEstimate& bracket, double a);

// Sequence variant applies the outer function to omega_{N^s} = s omega_N(t^{1/s});
// the weight variant to omega(t^{1/s}).
enum class FlatVariant { weights, sequences };

// G_a(xi) = F_a(xi^s) on S_delta.
class FlatFunction {
public:
    FlatFunction(WeightFunction sigma, WeightFunction omega, RamificationParams params,
                 FlatVariant variant = FlatVariant::weights, QuadratureConfig cfg = {});

    cplx log_value(cplx xi) const;
    cplx operator()(cplx xi) const { return std::exp(log_value(xi)); }
    // e_a(z) = z G_a(1/z)
    cplx log_kernel(cplx z) const { return std::log(z) + log_value(1.0 / z); }
    cplx kernel(cplx z) const { return std::exp(log_kernel(z)); }
    // log int_0^inf |e_a(u e^{-i theta})| u^{N-1} du; at theta = 0 this is log m_a(N).
    QuadResult<double> log_abs_moment(double N, double theta) const;

    const RamificationParams& params() const noexcept { return params_; }
    FlatVariant variant() const noexcept { return variant_; }
    double weight_factor() const noexcept { return factor_; }
    const WeightFunction& sigma() const noexcept { return sigma_; }
    const WeightFunction& omega() const noexcept { return omega_; }
    const OuterFunction& outer() const noexcept { return *outer_; }

private:
    WeightFunction sigma_;
    WeightFunction omega_;
    RamificationParams params_;
    FlatVariant variant_;
    double factor_;
    QuadratureConfig cfg_;
    std::shared_ptr<const OuterFunction> outer_;
};

// Smallest c >= 1 (up to c_max) with ok(c); ok must be monotone. Infinite when none.
double fit_min_constant(const std::function<bool(double)>& ok, double c_max = 1e8);

constexpr double kHeldOutMargin = 1.5;

struct OuterBounds {
    double A = 1.0;
    double B = 1.0;
    PropertyReport report;
};
// B^{-a} exp(-2aB sigma(B/Re w)) <= |F_a(w)| <= exp(-(a/2) omega(1/(A|w|)))
OuterBounds outer_sandwich(const OuterFunction& F, const WeightFunction& sigma, double a,
                           std::span<const cplx> calibration, std::span<const cplx> held_out);

struct FlatBounds {
    double B = 1.0;   // lower-side constant of the outer function
    double A = 1.0;   // upper-side constant of the outer function
    double K1 = 1.0;
    double K2 = 1.0;  // (cos(s delta pi/2)/B)^{1/s}
    double K3 = 1.0;  // A^{1/s}
    double K4 = 1.0;
    PropertyReport report;
};
// weights:   K1^{-a} exp(-2a c sigma(1/(K2|xi|)))       <= |G_a| <= exp(-(a c/2) omega(1/(K3|xi|)))
// sequences: B^{-a} h_M(K2|xi|)^{2aBs}                  <= |G_a| <= h_N(K3|xi|)^{a s/2}
FlatBounds flat_sandwich(const FlatFunction& G, const SectorSpec& calibration, const SectorSpec& held_out);

struct KernelBound {
    double C = 1.0;
    double K = 1.0;
    std::size_t row_length = 0;
    PropertyReport report;
};
// |e_a(z)| <= C h_{W^{4/a}}(K/|z|)
KernelBound kernel_bound(const FlatFunction& G, const SectorSpec& calibration, const SectorSpec& held_out,
                         std::size_t row_length = 256);

PropertyReport flatness_report(const FlatFunction& G, double p, double r_hi = 1e-1, int decades = 4);
PropertyReport kernel_integrability(const FlatFunction& G, double t0 = 1.0);

struct MomentTable {
    std::vector<double> log_m;
    std::vector<double> rel_error;
    std::vector<std::string> notes;
    std::size_t size() const { return log_m.size(); }
};

MomentTable moment_table(const FlatFunction& G, int depth);
PropertyReport moment_log_convexity(const MomentTable& m, double tol = 1e-6);

struct MomentBounds {
    double C1 = 0.0;
    double C2 = 0.0;
    std::vector<double> log_S;  // row x = 1/(2a) of the matrix of sigma
    std::vector<double> log_W;  // row 4/a of the matrix of omega
    PropertyReport report;
};
// C1 (K2/2)^p S^{1/(2a)}_p <= m_a(p) <= C2 K3^p W^{4/a}_p; C2 also covers the sector absolute moments.
MomentBounds moment_bounds(const FlatFunction& G, const MomentTable& m, const FlatBounds& fb,
                           std::span<const double> sector_args);

struct BorelSeries {
    std::vector<double> coefficients;  // lambda_p / (p! m_a(p))
    double lambda_norm = 0.0;          // sup |lambda_p| / (h^p p! S^x_p)
    double certified_radius = 0.0;     // K2 / (2h)
    double truncation_bound = 0.0;     // on |u| <= R0
    PropertyReport coefficient_check;

    double operator()(double u) const;
};

BorelSeries borel_series(std::span<const double> lambda, const MomentTable& m, const MomentBounds& mb,
                         const FlatBounds& fb, double h);

struct ExtensionConfig {
    double gamma = 1.0;
    double h = 1.0;
    double x = 0.125;
    int moment_depth = 30;
    double r_lo = 1e-3;
    double r_hi = 1e3;
    int n_radii = 13;
    QuadratureConfig quad{};
};

// Everything that does not depend on lambda.
struct ExtensionSetup {
    ExtensionConfig cfg;
    FlatFunction G;
    SectorSpec calibration;
    SectorSpec held_out;
    FlatBounds flat;
    MomentTable moments;
    MomentBounds moment_bounds;
    double R0 = 0.0;
};

std::shared_ptr<const ExtensionSetup> make_extension_setup(const WeightFunction& sigma, const WeightFunction& omega,
                                                           const IndexEstimate& bracket, const ExtensionConfig& cfg);

struct ExtensionResult {
    std::shared_ptr<const ExtensionSetup> setup;
    std::vector<double> lambda;
    BorelSeries g;

    // f(z) = int_0^{R0} e_a(u/z) g(u) du/u
    QuadResult<cplx> evaluate(cplx z) const;
    cplx operator()(cplx z) const { return evaluate(z).value; }
};

ExtensionResult extend(std::span<const double> lambda, std::shared_ptr<const ExtensionSetup> setup);

struct RemainderRow {
    int N = 0;
    cplx z;
    double measured = 0.0;
    double envelope = 0.0;        // theoretical front constant 2 C2 |lambda| / C1
    double fitted_envelope = 0.0; // front constant fitted on calibration samples
    double tolerance = 0.0;       // quadrature error plus Borel truncation
    bool held_out = false;
};

struct RemainderReport {
    std::vector<RemainderRow> rows;
    std::map<int, double> slope;      // log-log slope on the bisecting ray
    std::map<int, double> fitted_front;
    double theoretical_front = 0.0;
    double rate = 0.0;                // 4 h K3 / K2
    std::vector<double> log_W8x;
    PropertyReport theoretical;
    PropertyReport fitted;
};

RemainderReport remainder_report(const ExtensionResult& f, std::span<const int> orders,
                                 std::span<const cplx> calibration, std::span<const cplx> held_out,
                                 std::span<const double> ray_radii);

// Neville extrapolation to z = 0 along the positive ray: recovered lambda_0, lambda_1.
std::pair<double, double> recover_leading_coefficients(const ExtensionResult& f, double z0 = 0.05, int levels = 6);

double cauchy_riemann_residual(const ExtensionResult& f, cplx z, double rel_step = 1e-4);

}  // namespace ultra
