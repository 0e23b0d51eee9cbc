#pragma once

// Weighted mean counting functions M_{phi,a}(w, sigma, T), their limits, the
// Jessen function and the identities linking them.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsc/symbol_function.hpp"
#include "dsc/zeros.hpp"

namespace dsc {

struct LimitSchedule {
    std::vector<double> T_values;     // strictly increasing
    std::vector<double> sigma_values; // strictly decreasing toward 0
    double rel_tol = 1e-2;
    double abs_tol = 1e-12;

    /// T_0 2^k (k = 0..kt) and sigma_0 2^{-k} (k = 0..ks).
    static LimitSchedule geometric(double T0, int kt, double sigma0 = 1.0, int ks = 30);
    /// Default schedule for phi: T_0 is one period scale, T_max = 256 T_0.
    static LimitSchedule for_symbol(const SymbolFunction& phi);
    void validate() const;
};

struct CountingEstimate {
    double value = 0.0;
    double a = 0.0;
    cplx w = 0.0;
    double sigma = 0.0;
    std::vector<double> T_schedule;
    std::vector<double> per_T_values;
    std::vector<double> sigma_schedule; // filled by the sigma limit
    std::vector<double> per_sigma_values;
    bool converged = false;
    bool divergent = false;
    double error_estimate = 0.0;
    std::vector<std::string> diagnostics;
};

/// phi itself, or its periodic form when phi is a single-base polynomial, so
/// that counting runs on the closed-form preimage lattice.
SymbolFunction counting_form(const SymbolFunction& phi);

/// Zero data of phi - w shared by all counting queries on one (phi, w).
/// Polynomials: one certified zero set, grown on demand. Periodic symbols:
/// the closed-form preimage lattice.
class CountingContext {
public:
    CountingContext(SymbolFunction phi, cplx w);

    const SymbolFunction& phi() const noexcept { return phi_; }
    cplx w() const noexcept { return w_; }
    /// Zero-free abscissa: no solutions with Re s >= cap().
    double cap() const noexcept { return cap_; }

    /// Sum of multiplicity * (Re s)^a over solutions with sigma < Re s, |Im s| < T.
    double weighted_sum(double a, double sigma, double T);
    /// (pi / T) weighted_sum.
    double finite(double a, double sigma, double T);
    /// T -> infinity limit (2 pi / p) * sum over one period, for symbols with period p.
    double period_mean(double a, double sigma);
    /// Real parts of solutions above sigma (one period for periodic symbols), ascending.
    std::vector<double> abscissae(double sigma);
    /// Solutions of phi(s) = w with sigma < Re s and |Im s| < T, with multiplicity.
    std::vector<Zero> solutions(double sigma, double T);
    bool has_period() const noexcept { return period_.has_value(); }
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    struct Root {
        double re, im;
        int multiplicity;
    };
    void ensure(double sigma, double T);
    std::vector<Root> one_period(double sigma);

    SymbolFunction phi_;
    cplx w_;
    double cap_;
    std::optional<double> period_;
    // polynomial cache: roots in [lo_sigma_, cap_] x [-lo_T_, lo_T_]
    std::vector<Root> roots_;
    double lo_sigma_ = 0.0, lo_T_ = 0.0;
    bool cached_ = false;
    std::vector<std::string> diagnostics_;
};

/// Closed-form T -> infinity limit for a periodic symbol:
/// (log q)^{1-a} sum over disk preimages z of w with |z| < q^{-sigma} of (log 1/|z|)^a.
/// `truncated` reports an infinite preimage set cut at the disk-map search limit.
double periodic_mean_count(const PeriodicSymbol& phi, double a, cplx w, double sigma = 0.0,
                           bool* truncated = nullptr);

double weighted_count_finite(const SymbolFunction& phi, double a, cplx w, double sigma, double T);

CountingEstimate mean_count(CountingContext& ctx, double a, double sigma, const LimitSchedule& schedule);
CountingEstimate mean_count(const SymbolFunction& phi, double a, cplx w, double sigma, const LimitSchedule& schedule);

/// sigma -> 0+ limit. Uses the exact period mean where a period exists and
/// mean_count otherwise; reports divergence instead of a value when the
/// increments do not decay geometrically.
CountingEstimate mean_count_limit(CountingContext& ctx, double a, const LimitSchedule& schedule);
CountingEstimate mean_count_limit(const SymbolFunction& phi, double a, cplx w, const LimitSchedule& schedule);

// -- Jessen function --------------------------------------------------------

enum class JessenMode { vertical, montecarlo };

struct JessenOptions {
    JessenMode mode = JessenMode::vertical;
    /// Half-height of the vertical window; 0 selects one exact period (or 200
    /// period-scale units for symbols without a period).
    double T = 0.0;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct JessenValue {
    double value = 0.0;
    double error = 0.0; // quadrature error or Monte Carlo standard error
    std::vector<std::string> diagnostics;
};

JessenValue jessen_full(const SymbolFunction& phi, cplx w, double sigma, const JessenOptions& opt = {});
double jessen(const SymbolFunction& phi, cplx w, double sigma, const JessenOptions& opt = {});

struct DerivativeEstimate {
    double value = 0.0;
    double step = 0.0;
    bool flagged = false; // step halving never settled
};

/// -J'(sigma+) by one-sided differences with Richardson step halving.
DerivativeEstimate count_from_jessen(const SymbolFunction& phi, cplx w, double sigma, double h = 1e-2);

// -- identities -------------------------------------------------------------

struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0; // |lhs - rhs|
    double scale = 0.0;    // magnitude of the terms cancelling in rhs, when any
    double relative() const noexcept;
};

/// M_a(sigma) against M_0(sigma) sigma^a + a int_sigma^cap t^{a-1} M_0(t) dt.
IdentityResidual verify_weight_identity(CountingContext& ctx, double a, double sigma);
/// M_a(sigma) - M_0(sigma) sigma^a against the Jessen-function form.
IdentityResidual verify_jessen_identity(CountingContext& ctx, double a, double sigma);

// -- vertical limits --------------------------------------------------------

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
    std::size_t resampled = 0;
};

/// Mean over uniformly sampled characters chi of M_{phi_chi,a}(w, 0, 1).
MonteCarloEstimate polytorus_average(const SymbolFunction& phi, double a, cplx w, std::size_t samples,
                                     std::uint64_t seed, unsigned jobs = 1);

/// T-limit of (pi / T) sum over solutions of phi_chi = w with Re s > 0; a >= 1.
CountingEstimate direct_T_limit(const SymbolFunction& phi, double a, cplx w, const Character& chi,
                                const LimitSchedule& schedule);

Character random_character(const std::vector<Frequency>& primes, std::mt19937_64& rng);

// -- submean property -------------------------------------------------------

struct SubmeanResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool inconclusive = false;
};

/// M_{phi,a}(w) against the area mean of M_{phi,a} over the disk D(w, r).
SubmeanResult submean_check(const SymbolFunction& phi, double a, cplx w, double r, int n_grid = 24);

} // namespace dsc
