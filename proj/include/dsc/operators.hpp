#pragma once

// Quantities around composition operators: the Schwarz-type constant of a
// symbol, the Littlewood bound, the boundary ratio profiles for compactness
// and boundedness, disk Nevanlinna functions and the half-strip transfer.

#include <string>
#include <vector>

#include "dsc/counting.hpp"
#include "dsc/symbol_function.hpp"

namespace dsc {

/// Hyperbolic distance on C_0.
double hyperbolic_distance_halfplane(cplx z, cplx w);

// -- Schwarz constant -------------------------------------------------------

struct SchwarzGrid {
    int n_sigma = 60;         // geometric in Re s
    int n_t = 64;             // uniform in Im s
    double sigma_min = 1e-4;
    double sigma_max = 1e2;
    double window = 0.0;      // Im s window length; 0 selects period_scale(phi)
    double t_start = 0.0;

    SchwarzGrid refined(int factor) const;
};

struct SchwarzResult {
    double constant = 0.0;
    cplx argmax = 0.0;
    double coarse = 0.0; // grid maximum before local refinement
};

/// sup of Re s / (((Re s)^2 + 1)(Re phi(s) - 1/2)) over the grid, then refined
/// locally around the best grid points. Throws class_violation when a grid
/// point has Re phi(s) <= 1/2.
SchwarzResult schwarz_constant(const SymbolFunction& phi, const SchwarzGrid& grid = {});

struct SchwarzValidation {
    std::size_t points = 0;
    std::size_t violations = 0; // Re s > C ((Re s)^2 + 1)(Re phi(s) - 1/2)
    double liminf_proxy = 0.0;  // min of (Re phi(s) - 1/2) / Re s over grid points with Re s < 1e-2
};

SchwarzValidation schwarz_validate(const SymbolFunction& phi, double C, const SchwarzGrid& grid);

// -- Littlewood bound -------------------------------------------------------

struct LittlewoodCheck {
    double lhs = 0.0; // M_{phi,1}(w)
    double rhs = 0.0; // log |(conj(w) + phi(+inf) - 1) / (w - phi(+inf))|
    bool holds = false;
    bool inconclusive = false;
};

LittlewoodCheck littlewood_bound_check(const SymbolFunction& phi, cplx w, double tol = 1e-6);

/// The sigma -> 0+ limit of M_{phi,a}(w), through the closed form whenever phi
/// (or the polynomial) is periodic.
CountingEstimate counting_limit(const SymbolFunction& phi, double a, cplx w);

// -- ratio profiles ---------------------------------------------------------

enum class Verdict { bounded, vanishing, growing, inconclusive };
std::string to_string(Verdict v);

struct RatioProfile {
    double a = 0.0;
    double exponent = 0.0;
    std::vector<cplx> boundary_points;
    std::vector<double> ratios;
    std::vector<std::size_t> line_starts; // first index of each Re w -> 1/2 line
    Verdict verdict = Verdict::inconclusive;
    double sup = 0.0;
    cplx argsup = 0.0;
    std::vector<std::string> diagnostics;
};

/// Lines w = 1/2 + x + iy with x = x_start 2^{-k} down to x_min.
struct BoundarySchedule {
    std::vector<double> imag_parts{0.0, 0.5, 2.0};
    double x_start = 0.5;
    double x_min = 1e-3;

    std::vector<double> x_values() const;
};

/// Re w - 1/2 geometric in [x_min, x_max], Im w uniform in [y_min, y_max].
struct RegionGrid {
    double x_min = 1e-3;
    double x_max = 2.0;
    int nx = 12;
    double y_min = -2.0;
    double y_max = 2.0;
    int ny = 9;

    RegionGrid refined(int factor) const;
};

/// Tail verdict of one line of ratios ordered toward the boundary.
Verdict line_verdict(const std::vector<double>& ratios);

/// M_{phi,1+a}(w) / (Re w - 1/2)^{1+a} along the schedule.
RatioProfile compactness_ratio(const SymbolFunction& phi, double a, const BoundarySchedule& schedule = {},
                               unsigned jobs = 1);

/// M_{phi,1-a}(w) / (Re w - 1/2)^{1-a} over the grid outside D(phi(+inf), delta);
/// sup is the constant estimate and the verdict reads each fixed-Im column.
RatioProfile boundedness_profile(const SymbolFunction& phi, double a, double delta, const RegionGrid& grid = {},
                                 unsigned jobs = 1);

/// sup over the profile points outside D(phi(+inf), delta) of
/// ratio |w - phi(+inf)|^2 / (Re phi(+inf) - 1/2).
double decay_bound_constant(const RatioProfile& profile, cplx phi_inf, double delta);

// -- disk Nevanlinna functions ----------------------------------------------

enum class NevanlinnaKind { generalized, classical };

struct NevanlinnaValue {
    double value = 0.0;
    double tail_bound = 0.0;
    std::size_t terms = 0;
    bool divergent = false;
};

/// generalized: sum of (1 - |z|^2)^alpha over preimages z of w in D (z = 0
/// included). classical: sum of log 1/|z|; w = g(0) is an excluded point.
NevanlinnaValue nevanlinna_disk(const DiskMap& g, double alpha, cplx w,
                                NevanlinnaKind kind = NevanlinnaKind::generalized);

// -- half-strip transfer ----------------------------------------------------

/// Inverse of the conformal map of D onto {Re s > sigma, |Im s| < 2T} sending 0 to sigma + 2T.
cplx halfstrip_inverse(cplx s, double sigma, double T);

struct TransferenceResult {
    double lower = 0.0; // M_{phi,a}(w, 2 sigma, T)
    double mid = 0.0;   // T^{a-1} N_{phi o Theta, a}(w)
    double upper = 0.0; // M_{phi,a}(w, sigma, 2T)
    double lower_constant = 0.0; // lower / mid
    double upper_constant = 0.0; // upper / mid
    std::size_t solutions = 0;
};

TransferenceResult transference_check(const SymbolFunction& phi, double a, cplx w, double sigma, double T);

} // namespace dsc
