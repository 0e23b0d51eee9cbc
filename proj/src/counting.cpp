#include "dsc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dsc/error.hpp"
#include "dsc/parallel.hpp"
#include "dsc/quadrature.hpp"

namespace dsc {

namespace {

constexpr double pi = std::numbers::pi;

// Number of integers k with -T < y + k p < T.
long lattice_count(double y, double p, double T) {
    const double hi = (T - y) / p, lo = (-T - y) / p;
    return static_cast<long>(std::ceil(hi)) - static_cast<long>(std::floor(lo)) - 1;
}

double weight(double re, double a) { return a == 0.0 ? 1.0 : std::pow(re, a); }

ZeroSet certified_zeros(const SymbolFunction& phi, cplx w, const Rectangle& rect, std::vector<std::string>& diag) {
    double delta = default_delta(w);
    for (int attempt = 0;; ++attempt) {
        try {
            const Rectangle safe = safe_rectangle(phi, w, rect, delta);
            if (safe.t_min != rect.t_min || safe.t_max != rect.t_max || safe.sigma_min != rect.sigma_min)
                diag.push_back("edges-nudged");
            ZeroOptions opt;
            opt.delta = delta;
            ZeroSet z = locate_zeros(phi, w, safe, 1e-6, opt);
            for (const auto& d : z.diagnostics) diag.push_back(d);
            return z;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::no_zero_free_edge || attempt >= 5) throw;
            delta *= 0.1;
            diag.push_back("delta-reduced");
        }
    }
}

} // namespace

SymbolFunction counting_form(const SymbolFunction& phi) {
    if (const auto* f = phi.polynomial())
        if (auto per = periodic_form(*f)) return SymbolFunction(*per);
    return phi;
}

// -- schedules ---------------------------------------------------------------

LimitSchedule LimitSchedule::geometric(double T0, int kt, double sigma0, int ks) {
    require(T0 > 0.0 && kt >= 0 && sigma0 > 0.0 && ks >= 0, "schedule: positive T0, sigma0 and counts");
    LimitSchedule s;
    for (int k = 0; k <= kt; ++k) s.T_values.push_back(std::ldexp(T0, k));
    for (int k = 0; k <= ks; ++k) s.sigma_values.push_back(std::ldexp(sigma0, -k));
    return s;
}

LimitSchedule LimitSchedule::for_symbol(const SymbolFunction& phi) { return geometric(period_scale(phi), 8); }

void LimitSchedule::validate() const {
    require(!T_values.empty(), "schedule: at least one T value");
    for (std::size_t i = 0; i < T_values.size(); ++i)
        require(T_values[i] > 0.0 && (i == 0 || T_values[i] > T_values[i - 1]), "schedule: T values increase");
    for (std::size_t i = 0; i < sigma_values.size(); ++i)
        require(sigma_values[i] > 0.0 && (i == 0 || sigma_values[i] < sigma_values[i - 1]),
                "schedule: sigma values decrease");
    require(rel_tol >= 0.0 && abs_tol >= 0.0, "schedule: tolerances are non-negative");
}

// -- counting context --------------------------------------------------------

CountingContext::CountingContext(SymbolFunction phi, cplx w)
    : phi_(std::move(phi)), w_(w), cap_(zero_free_abscissa(phi_, w)), period_(phi_.period()) {}

void CountingContext::ensure(double sigma, double T) {
    if (cached_ && sigma >= lo_sigma_ && T <= lo_T_) return;
    const double s_lo = cached_ ? std::min(sigma, lo_sigma_) : sigma;
    const double t_hi = cached_ ? std::max(T, lo_T_) : T;
    const Rectangle rect(s_lo, cap_ + 0.5, -t_hi, t_hi);
    const ZeroSet z = certified_zeros(phi_, w_, rect, diagnostics_);
    roots_.clear();
    for (const auto& x : z.zeros) roots_.push_back({x.location.real(), x.location.imag(), x.multiplicity});
    lo_sigma_ = s_lo;
    lo_T_ = t_hi;
    cached_ = true;
}

double CountingContext::weighted_sum(double a, double sigma, double T) {
    require(T > 0.0, "counting: T > 0");
    require(sigma >= 0.0, "counting: sigma >= 0");
    if (sigma >= cap_) return 0.0;
    double total = 0.0;
    if (const auto* per = phi_.periodic()) {
        for (const auto& r : one_period(sigma)) total += r.multiplicity * weight(r.re, a) * lattice_count(r.im, per->period(), T);
        return total;
    }
    ensure(sigma, T);
    for (const auto& r : roots_)
        if (r.re > sigma && std::abs(r.im) < T) total += r.multiplicity * weight(r.re, a);
    return total;
}

double CountingContext::finite(double a, double sigma, double T) { return pi / T * weighted_sum(a, sigma, T); }

std::vector<CountingContext::Root> CountingContext::one_period(double sigma) {
    require(period_.has_value(), "period_mean: symbol has no vertical period");
    const double p = *period_;
    std::vector<Root> out;
    if (sigma >= cap_) return out;
    if (const auto* per = phi_.periodic()) {
        const double r_max = std::min(1.0, std::exp(-sigma * per->log_base()));
        const PreimageSet pre = per->map().preimages(w_, r_max);
        if (pre.truncated) diagnostics_.push_back("preimage-set-truncated");
        for (const auto& z : pre.points) {
            const cplx s = -std::log(z.z / per->rotation()) / per->log_base();
            if (s.real() > sigma) out.push_back({s.real(), s.imag(), z.multiplicity});
        }
        return out;
    }
    // Polynomial with a period: certified zeros over a window of height p whose
    // lower edge keeps away from every zero ordinate.
    ensure(sigma, p);
    std::vector<double> phases;
    for (const auto& r : roots_) phases.push_back(r.im - p * std::floor(r.im / p));
    double t0 = -0.5 * p;
    for (int j = 0; j < 97; ++j) {
        const double c = -0.5 * p + j * p / 97.0;
        const double cm = c - p * std::floor(c / p);
        bool clear = true;
        for (double ph : phases) {
            const double d = std::abs(ph - cm);
            if (std::min(d, p - d) < 1e-6 * p) clear = false;
        }
        if (clear) {
            t0 = c;
            break;
        }
    }
    for (const auto& r : roots_)
        if (r.re > sigma && r.im >= t0 && r.im < t0 + p) out.push_back(r);
    return out;
}

double CountingContext::period_mean(double a, double sigma) {
    double total = 0.0;
    for (const auto& r : one_period(sigma)) total += r.multiplicity * weight(r.re, a);
    return 2.0 * pi / *period_ * total;
}

std::vector<Zero> CountingContext::solutions(double sigma, double T) {
    require(T > 0.0, "counting: T > 0");
    std::vector<Zero> out;
    if (sigma >= cap_) return out;
    if (const auto* per = phi_.periodic()) {
        const double p = per->period();
        for (const auto& r : one_period(sigma)) {
            const long k0 = static_cast<long>(std::floor((-T - r.im) / p)) + 1;
            for (long k = k0; r.im + k * p < T; ++k)
                if (std::abs(r.im + k * p) < T) out.push_back({cplx(r.re, r.im + k * p), r.multiplicity, true});
        }
        return out;
    }
    ensure(sigma, T);
    for (const auto& r : roots_)
        if (r.re > sigma && std::abs(r.im) < T) out.push_back({cplx(r.re, r.im), r.multiplicity, true});
    return out;
}

std::vector<double> CountingContext::abscissae(double sigma) {
    std::vector<double> out;
    if (period_) {
        for (const auto& r : one_period(sigma)) out.push_back(r.re);
    } else if (cached_) {
        for (const auto& r : roots_)
            if (r.re > sigma) out.push_back(r.re);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double periodic_mean_count(const PeriodicSymbol& phi, double a, cplx w, double sigma, bool* truncated) {
    const double lq = phi.log_base();
    const PreimageSet pre = phi.map().preimages(w, std::min(1.0, std::exp(-sigma * lq)));
    if (truncated) *truncated = pre.truncated;
    double total = 0.0;
    for (const auto& z : pre.points) {
        const double re = std::log(1.0 / std::abs(z.z)) / lq;
        if (re > sigma) total += z.multiplicity * weight(re, a);
    }
    return lq * total;
}

double weighted_count_finite(const SymbolFunction& phi, double a, cplx w, double sigma, double T) {
    require(sigma > 0.0, "weighted_count_finite: sigma > 0");
    CountingContext ctx(phi, w);
    return ctx.finite(a, sigma, T);
}

// -- limits ------------------------------------------------------------------

CountingEstimate mean_count(CountingContext& ctx, double a, double sigma, const LimitSchedule& schedule) {
    schedule.validate();
    CountingEstimate est;
    est.a = a;
    est.w = ctx.w();
    est.sigma = sigma;
    est.T_schedule = schedule.T_values;
    for (double T : schedule.T_values) est.per_T_values.push_back(ctx.finite(a, sigma, T));
    est.value = est.per_T_values.back();
    if (est.per_T_values.size() >= 2) {
        est.error_estimate = std::abs(est.value - est.per_T_values[est.per_T_values.size() - 2]);
        est.converged = est.error_estimate < std::max(schedule.abs_tol, schedule.rel_tol * std::abs(est.value));
    } else {
        est.diagnostics.push_back("single-T-value");
    }
    est.diagnostics.insert(est.diagnostics.end(), ctx.diagnostics().begin(), ctx.diagnostics().end());
    return est;
}

CountingEstimate mean_count(const SymbolFunction& phi, double a, cplx w, double sigma, const LimitSchedule& schedule) {
    CountingContext ctx(phi, w);
    return mean_count(ctx, a, sigma, schedule);
}

CountingEstimate mean_count_limit(CountingContext& ctx, double a, const LimitSchedule& schedule) {
    schedule.validate();
    require(schedule.sigma_values.size() >= 3, "mean_count_limit: at least three sigma values");
    CountingEstimate est;
    est.a = a;
    est.w = ctx.w();
    est.sigma = 0.0;
    est.sigma_schedule = schedule.sigma_values;
    const bool exact = ctx.phi().periodic() != nullptr;
    bool all_T_converged = true;
    if (!exact) ctx.weighted_sum(a, schedule.sigma_values.back(), schedule.T_values.back()); // one zero scan
    for (double s : schedule.sigma_values) {
        if (exact) {
            est.per_sigma_values.push_back(ctx.period_mean(a, s));
        } else {
            auto m = mean_count(ctx, a, s, schedule);
            all_T_converged = all_T_converged && m.converged;
            est.per_sigma_values.push_back(m.value);
            est.T_schedule = m.T_schedule;
            est.per_T_values = m.per_T_values;
        }
    }
    const auto& v = est.per_sigma_values;
    const std::size_t n = v.size();
    const double last = v.back();
    const double d = v[n - 1] - v[n - 2];
    const double floor_tol = std::max(schedule.abs_tol, 1e-12 * std::abs(last));
    if (d <= floor_tol) {
        est.value = last;
        est.error_estimate = std::max(d, 0.0);
        est.converged = all_T_converged;
    } else {
        // Mean ratio of successive increments over the tail of the schedule.
        double ratio_sum = 0.0;
        int ratios = 0;
        for (std::size_t k = n - 1; k >= 2 && ratios < 3; --k) {
            const double dk = v[k] - v[k - 1], dprev = v[k - 1] - v[k - 2];
            if (dprev <= floor_tol) break;
            ratio_sum += dk / dprev;
            ++ratios;
        }
        const double r = ratios > 0 ? ratio_sum / ratios : 1.0;
        if (r >= 0.95) {
            est.divergent = true;
            est.converged = false;
            est.value = last;
            est.error_estimate = std::numeric_limits<double>::infinity();
            est.diagnostics.push_back("divergent: increment ratio " + std::to_string(r));
        } else {
            const double tail = d * r / (1.0 - r);
            est.value = last + tail;
            est.error_estimate = tail;
            est.converged =
                all_T_converged && tail <= std::max(schedule.abs_tol, schedule.rel_tol * std::abs(est.value));
        }
    }
    if (!all_T_converged) est.diagnostics.push_back("T-limit-not-converged");
    est.diagnostics.insert(est.diagnostics.end(), ctx.diagnostics().begin(), ctx.diagnostics().end());
    return est;
}

CountingEstimate mean_count_limit(const SymbolFunction& phi, double a, cplx w, const LimitSchedule& schedule) {
    CountingContext ctx(phi, w);
    return mean_count_limit(ctx, a, schedule);
}

// -- Jessen function ---------------------------------------------------------

Character random_character(const std::vector<Frequency>& primes, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    std::map<Frequency, cplx> values;
    for (auto p : primes) values[p] = std::polar(1.0, angle(rng));
    return Character(values);
}

namespace {

// Ordinates in [0, p) of solutions within 0.25 of the line Re s = sigma.
std::vector<double> near_ordinates(const PeriodicSymbol& per, cplx w, double sigma, double p, double& closest) {
    std::vector<double> out;
    closest = std::numeric_limits<double>::infinity();
    const double r_max = std::min(1.0, std::exp(-(sigma - 0.25) * per.log_base()));
    const PreimageSet pre = per.map().preimages(w, r_max);
    for (const auto& z : pre.points) {
        const cplx s = -std::log(z.z / per.rotation()) / per.log_base();
        if (std::abs(s.real() - sigma) > 0.25) continue;
        closest = std::min(closest, std::abs(s.real() - sigma));
        if (out.size() < 256) out.push_back(s.imag() - p * std::floor(s.imag() / p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

JessenValue vertical_mean(const SymbolFunction& phi, cplx w, double sigma, double T) {
    JessenValue out;
    const auto period = phi.period();
    double t0 = 0.0, t1 = 0.0;
    std::vector<double> breaks;
    if (T == 0.0 && period) {
        t1 = *period;
        if (const auto* per = phi.periodic()) {
            double closest = 0.0;
            breaks = near_ordinates(*per, w, sigma, *period, closest);
            if (closest < 1e-12) {
                sigma += std::max(sigma, 1.0) * 1e-9;
                out.diagnostics.push_back("line-nudged");
                breaks = near_ordinates(*per, w, sigma, *period, closest);
            }
        }
    } else {
        const double half = T > 0.0 ? T : 200.0 * period_scale(phi);
        t0 = -half;
        t1 = half;
        const double panel = 0.5 * period_scale(phi);
        for (double t = t0 + panel; t < t1; t += panel) breaks.push_back(t);
    }
    auto f = [&](double t) { return std::log(std::abs(phi(cplx(sigma, t)) - w)); };
    quad::Options opt{1e-13 * (t1 - t0), 1e-12, 200000};
    auto r = quad::integrate(f, t0, t1, breaks, opt);
    if (!std::isfinite(r.value)) {
        sigma += std::max(sigma, 1.0) * 1e-9;
        out.diagnostics.push_back("line-nudged");
        r = quad::integrate(f, t0, t1, breaks, opt);
    }
    if (!r.converged) out.diagnostics.push_back("quadrature-not-converged");
    out.value = r.value / (t1 - t0);
    out.error = r.error / (t1 - t0);
    return out;
}

JessenValue monte_carlo_mean(const SymbolFunction& phi, cplx w, double sigma, const JessenOptions& opt) {
    require(opt.samples >= 2, "jessen: at least two samples");
    std::vector<double> values(opt.samples);
    const auto primes = phi.primes();
    parallel_for(opt.samples, opt.jobs, [&](std::size_t i) {
        auto rng = sample_rng(opt.seed, i);
        const Character chi = random_character(primes, rng);
        values[i] = std::log(std::abs(phi.twisted(chi)(cplx(sigma, 0.0)) - w));
    });
    JessenValue out;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.value = mean;
    out.error = std::sqrt(ss / (n - 1.0) / n);
    return out;
}

} // namespace

JessenValue jessen_full(const SymbolFunction& phi, cplx w, double sigma, const JessenOptions& opt) {
    require(sigma > 0.0, "jessen: sigma > 0");
    require(opt.T >= 0.0, "jessen: T >= 0");
    return opt.mode == JessenMode::vertical ? vertical_mean(phi, w, sigma, opt.T) : monte_carlo_mean(phi, w, sigma, opt);
}

double jessen(const SymbolFunction& phi, cplx w, double sigma, const JessenOptions& opt) {
    return jessen_full(phi, w, sigma, opt).value;
}

DerivativeEstimate count_from_jessen(const SymbolFunction& phi, cplx w, double sigma, double h) {
    require(sigma > 0.0 && h > 0.0, "count_from_jessen: sigma > 0 and h > 0");
    const double j0 = jessen(phi, w, sigma);
    std::vector<double> d;
    double prev_richardson = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k <= 16; ++k) {
        const double hk = std::ldexp(h, -k);
        d.push_back(-(jessen(phi, w, sigma + hk) - j0) / hk);
        if (k == 0) continue;
        const double dk = d[k], dp = d[k - 1];
        const double scale = std::max(1.0, std::abs(dk));
        // Piecewise linear J: consecutive differences agree exactly.
        if (std::abs(dk - dp) <= 1e-9 * scale) return {dk, hk, false};
        const double rich = 2.0 * dk - dp;
        if (std::isfinite(prev_richardson) && std::abs(rich - prev_richardson) <= 1e-6 * scale) return {rich, hk, false};
        prev_richardson = rich;
    }
    return {d.back(), std::ldexp(h, -16), true};
}

// -- identities ---------------------------------------------------------------

double IdentityResidual::relative() const noexcept {
    const double rounding = 1e-12 * scale; // rounding level of the summed terms
    return residual / std::max({std::abs(lhs), std::abs(rhs), rounding, 1e-300});
}

namespace {

double limit_count(CountingContext& ctx, double a, double sigma) {
    if (ctx.has_period()) return ctx.period_mean(a, sigma);
    return ctx.finite(a, sigma, 100.0 * period_scale(ctx.phi()));
}

std::vector<double> interior_breaks(CountingContext& ctx, double lo, double hi) {
    std::vector<double> b;
    if (!ctx.has_period()) limit_count(ctx, 0.0, lo);
    for (double x : ctx.abscissae(lo))
        if (x > lo && x < hi) b.push_back(x);
    return b;
}

} // namespace

IdentityResidual verify_weight_identity(CountingContext& ctx, double a, double sigma) {
    require(sigma > 0.0, "verify_weight_identity: sigma > 0");
    IdentityResidual out;
    out.lhs = limit_count(ctx, a, sigma);
    const double m0 = limit_count(ctx, 0.0, sigma);
    double integral = 0.0;
    const double cap = ctx.cap();
    if (a != 0.0 && cap > sigma) {
        const auto breaks = interior_breaks(ctx, sigma, cap);
        auto f = [&](double t) { return std::pow(t, a - 1.0) * limit_count(ctx, 0.0, t); };
        integral = quad::integrate(f, sigma, cap, breaks, {1e-13, 1e-12, 20000}).value;
    }
    out.rhs = m0 * weight(sigma, a) + a * integral;
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

IdentityResidual verify_jessen_identity(CountingContext& ctx, double a, double sigma) {
    require(sigma > 0.0, "verify_jessen_identity: sigma > 0");
    IdentityResidual out;
    out.lhs = limit_count(ctx, a, sigma) - limit_count(ctx, 0.0, sigma) * weight(sigma, a);
    if (a == 0.0) {
        out.rhs = 0.0;
        out.residual = std::abs(out.lhs);
        return out;
    }
    const SymbolFunction& phi = ctx.phi();
    const cplx w = ctx.w();
    const double cap = std::max(ctx.cap(), sigma);
    const double log_inf = std::log(std::abs(phi.at_infinity() - w));
    double integral = 0.0;
    if (a != 1.0 && cap > sigma) {
        const auto breaks = interior_breaks(ctx, sigma, cap);
        auto f = [&](double t) { return std::pow(t, a - 2.0) * jessen(phi, w, t); };
        integral = quad::integrate(f, sigma, cap, breaks, {1e-12, 1e-11, 4000}).value;
    }
    const double terms[] = {a * std::pow(sigma, a - 1.0) * jessen(phi, w, sigma), a * std::pow(cap, a - 1.0) * log_inf,
                            a * (1.0 - a) * integral};
    out.rhs = terms[0] - terms[1] - terms[2];
    out.scale = std::abs(terms[0]) + std::abs(terms[1]) + std::abs(terms[2]);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

// -- vertical limits ---------------------------------------------------------

MonteCarloEstimate polytorus_average(const SymbolFunction& phi, double a, cplx w, std::size_t samples,
                                     std::uint64_t seed, unsigned jobs) {
    require(samples >= 2, "polytorus_average: at least two samples");
    zero_free_abscissa(phi, w); // rejects w = phi(+inf)
    const auto primes = phi.primes();
    std::vector<double> values(samples);
    std::vector<int> retries(samples, 0);
    parallel_for(samples, jobs, [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        for (;;) {
            const Character chi = random_character(primes, rng);
            try {
                CountingContext ctx(phi.twisted(chi), w);
                values[i] = pi * ctx.weighted_sum(a, 0.0, 1.0);
                return;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::contour_unresolved && e.code() != ErrorCode::no_zero_free_edge) throw;
                if (++retries[i] > 20) throw;
            }
        }
    });
    MonteCarloEstimate out;
    out.samples = samples;
    out.resampled = static_cast<std::size_t>(std::accumulate(retries.begin(), retries.end(), 0));
    const double n = static_cast<double>(samples);
    out.estimate = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - out.estimate) * (v - out.estimate);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    return out;
}

CountingEstimate direct_T_limit(const SymbolFunction& phi, double a, cplx w, const Character& chi,
                                const LimitSchedule& schedule) {
    require(a >= 1.0, "direct_T_limit: a >= 1");
    CountingContext ctx(phi.twisted(chi), w);
    return mean_count(ctx, a, 0.0, schedule);
}

// -- submean property --------------------------------------------------------

SubmeanResult submean_check(const SymbolFunction& phi, double a, cplx w, double r, int n_grid) {
    require(a > 0.0, "submean_check: a > 0");
    require(r > 0.0 && n_grid >= 2, "submean_check: r > 0 and n_grid >= 2");
    require(w.real() - r > 0.5, "submean_check: the disk lies in Re w > 1/2");
    require(std::abs(phi.at_infinity() - w) > r, "submean_check: phi(+inf) lies outside the disk");

    SubmeanResult out;
    const SymbolFunction f = counting_form(phi);
    const LimitSchedule schedule = LimitSchedule::for_symbol(f);
    auto limit_at = [&](cplx z) {
        auto e = mean_count_limit(f, a, z, schedule);
        if (e.divergent) out.inconclusive = true;
        return e.value;
    };
    out.lhs = limit_at(w);
    const quad::Rule gl = quad::gauss_legendre(n_grid);
    double total = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double rho = 0.5 * r * (gl.nodes[i] + 1.0);
        const double wr = 0.5 * r * gl.weights[i] * rho;
        for (int j = 0; j < n_grid; ++j) {
            const double theta = 2.0 * pi * (j + 0.5) / n_grid;
            total += wr * (2.0 * pi / n_grid) * limit_at(w + std::polar(rho, theta));
        }
    }
    out.rhs = total / (pi * r * r);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

} // namespace dsc
