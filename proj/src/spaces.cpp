#include "dsc/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "dsc/counting.hpp"
#include "dsc/error.hpp"
#include "dsc/quadrature.hpp"

namespace dsc {

namespace {

constexpr double pi = std::numbers::pi;

void require_weight(double a) { require(a <= 1.0, "weight exponent a must be <= 1"); }

// int_L^inf u^{-a} e^{-k u} du for k > 0, a <= 1.
double log_power_tail(double a, double k, double L) {
    if (a == 1.0) return boost::math::expint(1, k * L);
    return std::pow(k, a - 1.0) * boost::math::tgamma(1.0 - a, k * L);
}

double sigma_integral(const std::vector<std::pair<double, double>>& terms, double a) {
    // terms: (log n, |a_n|^2); integrand 2 sum |a_n|^2 log(n)^2 n^{-2 sigma} sigma^{1-a}.
    auto g = [&](double sigma) {
        double s = 0.0;
        for (const auto& [l, c] : terms) s += c * l * l * std::exp(-2.0 * sigma * l);
        return 2.0 * s * std::pow(sigma, 1.0 - a);
    };
    // sigma = v / (1 - v)
    auto mapped = [&](double v) {
        const double d = 1.0 - v;
        return g(v / d) / (d * d);
    };
    std::vector<double> breaks;
    for (const auto& [l, c] : terms)
        for (double m : {0.25, 1.0, 4.0}) {
            const double sigma = m / (2.0 * l);
            breaks.push_back(sigma / (1.0 + sigma));
        }
    return quad::integrate(mapped, 0.0, 1.0, breaks, {1e-15, 1e-13, 20000}).value;
}

} // namespace

SpaceWeight::SpaceWeight(double a_) : a(a_) { require_weight(a); }

std::string SpaceWeight::kind() const { return a < 0.0 ? "bergman" : (a == 0.0 ? "hardy" : "dirichlet"); }

double norm_Da(const DirichletPolynomial& f, double a) {
    require_weight(a);
    double s = 0.0;
    for (const auto& [n, c] : f.terms())
        s += std::norm(c) * (n == 1 ? 1.0 : std::pow(std::log(static_cast<double>(n)), a));
    return std::sqrt(s);
}

cplx inner_product(const DirichletPolynomial& f, const DirichletPolynomial& g, double a) {
    cplx s = 0.0;
    for (const auto& [n, c] : f.terms()) {
        const cplx d = g.coeff(n);
        if (d == cplx(0.0)) continue;
        s += c * std::conj(d) * (n == 1 ? 1.0 : std::pow(std::log(static_cast<double>(n)), a));
    }
    return s;
}

double parseval_mean(const DirichletPolynomial& f, double sigma) {
    double s = 0.0;
    for (const auto& [n, c] : f.terms()) {
        if (n < 2) continue;
        const double l = std::log(static_cast<double>(n));
        s += std::norm(c) * l * l * std::exp(-2.0 * sigma * l);
    }
    return s;
}

double vertical_mean_derivative(const DirichletPolynomial& f, double sigma, double T) {
    require(T > 0.0, "vertical_mean_derivative: T > 0");
    const auto df = derivative(f);
    auto g = [&](double t) { return std::norm(eval(df, cplx(sigma, t))); };
    std::vector<double> breaks;
    for (double t = -T + 1.0; t < T; t += 1.0) breaks.push_back(t);
    return quad::integrate(g, -T, T, breaks, {1e-12, 1e-12, 400000}).value / (2.0 * T);
}

double littlewood_paley_norm(const DirichletPolynomial& f, double a) {
    require_weight(a);
    std::vector<std::pair<double, double>> terms;
    for (const auto& [n, c] : f.terms())
        if (n >= 2) terms.emplace_back(std::log(static_cast<double>(n)), std::norm(c));
    double s = std::norm(f.at_infinity());
    if (!terms.empty()) s += std::pow(2.0, 1.0 - a) / std::tgamma(2.0 - a) * sigma_integral(terms, a);
    return std::sqrt(s);
}

// -- kernels ---------------------------------------------------------------------

SeriesValue kernel_eval(cplx s, double a, cplx w, std::size_t N) {
    require(s.real() > 0.5 && w.real() > 0.5, "kernel_eval: Re s > 1/2 and Re w > 1/2");
    require(N >= 2, "kernel_eval: N >= 2");
    const cplx z = std::conj(s) + w;
    SeriesValue out;
    out.value = 1.0;
    for (std::size_t n = 2; n <= N; ++n) {
        const double l = std::log(static_cast<double>(n));
        out.value += std::pow(l, -a) * std::exp(-z * l);
    }
    out.tail_bound = log_power_tail(a, z.real() - 1.0, std::log(static_cast<double>(N)));
    return out;
}

SeriesValue kernel_norm_sq(cplx s, double a, std::size_t N) {
    require(s.real() > 0.5, "kernel_norm: Re s > 1/2");
    require(N >= 3, "kernel_norm: N >= 3");
    const double c = 2.0 * s.real();
    double sum = 1.0;
    for (std::size_t n = 2; n <= N; ++n) {
        const double l = std::log(static_cast<double>(n));
        sum += std::pow(l, -a) * std::exp(-c * l);
    }
    const double x = static_cast<double>(N), l = std::log(x);
    const double f = std::pow(l, -a) * std::pow(x, -c);
    const double fp = f / x * (-a / l - c);
    const double tail = log_power_tail(a, c - 1.0, l) - 0.5 * f - fp / 12.0;
    SeriesValue out;
    out.value = sum + tail;
    out.tail_bound = std::abs(f) * c * c * c / (720.0 * x * x);
    return out;
}

double kernel_norm(cplx s, double a, std::size_t N) { return std::sqrt(kernel_norm_sq(s, a, N).value.real()); }

DirichletPolynomial kernel_polynomial(cplx s, double a, Frequency N) {
    DirichletPolynomial::Terms t{{1, 1.0}};
    for (Frequency n = 2; n <= N; ++n) {
        const double l = std::log(static_cast<double>(n));
        t[n] = std::pow(l, -a) * std::exp(-std::conj(s) * l);
    }
    return DirichletPolynomial(t);
}

JaValue Ja_eval(cplx w, double a, std::size_t N) {
    require(w.real() > 1.0, "Ja_eval: Re w > 1");
    require(a < 2.0, "Ja_eval: a < 2");
    require(N >= 3, "Ja_eval: N >= 3");
    const double e = 1.0 - a;
    auto f = [&](double x) {
        const double l = std::log(x);
        return (e == 0.0 ? 1.0 : std::pow(l, e)) * std::exp(-w * l);
    };
    cplx partial = e == 0.0 ? 1.0 : 0.0;
    for (std::size_t n = 2; n <= N; ++n) partial += f(static_cast<double>(n));
    const double x = static_cast<double>(N), l = std::log(x);
    const cplx fN = f(x);
    const cplx fpN = std::exp(-(w + 1.0) * l) * (e * std::pow(l, e - 1.0) - w * std::pow(l, e));
    auto g = [&](double u) { return (e == 0.0 ? 1.0 : std::pow(u, e)) * std::exp(-(w - 1.0) * u); };
    const cplx head = quad::integrate(g, 0.0, l, {1e-15, 1e-14, 20000}).value;

    JaValue out;
    out.main_term = boost::math::tgamma(2.0 - a) / std::pow(w - 1.0, 2.0 - a);
    out.Ea = partial - 0.5 * fN - fpN / 12.0 - head;
    out.value = out.Ea + out.main_term;
    out.tail_bound = std::abs(fN) * std::pow(std::abs(w) + 1.0, 3) / (720.0 * x * x);
    return out;
}

// -- change of variables ---------------------------------------------------------

namespace {

// Power series of exp(-beta (g(z) - g(0))) to `order`.
std::vector<cplx> exp_series(const DiskMap& g, double beta, std::size_t order) {
    std::vector<cplx> h(order + 1, 0.0);
    h[0] = 1.0;
    if (const auto* m = dynamic_cast<const MobiusMap*>(&g)) {
        // (1 - z)^2 h' = -gamma h with gamma = beta (2 Re nu - 1).
        const double gamma = beta * (2.0 * m->nu().real() - 1.0);
        for (std::size_t k = 0; k < order; ++k) {
            const double kd = static_cast<double>(k);
            const cplx prev = k >= 1 ? h[k - 1] : cplx(0.0);
            h[k + 1] = ((2.0 * kd - gamma) * h[k] - (kd - 1.0) * prev) / (kd + 1.0);
        }
        return h;
    }
    std::size_t degree = order;
    if (dynamic_cast<const AffineMap*>(&g)) degree = 1;
    if (const auto* p = dynamic_cast<const PolynomialMap*>(&g)) degree = p->coefficients().size() - 1;
    if (degree == order) {
        degree = order = std::min<std::size_t>(order, 4096);
        h.resize(order + 1);
    }
    const auto c = g.taylor(degree);
    // h' = -beta g' h
    for (std::size_t m = 0; m < order; ++m) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < degree && j <= m; ++j) s += static_cast<double>(j + 1) * c[j + 1] * h[m - j];
        h[m + 1] = -beta * s / static_cast<double>(m + 1);
    }
    return h;
}

std::optional<PeriodicSymbol> as_periodic(const SymbolFunction& phi) {
    if (const auto* p = phi.periodic()) return *p;
    return periodic_form(*phi.polynomial());
}

void require_maps_into_half_plane(const PeriodicSymbol& per) {
    for (int k = 0; k < 512; ++k) {
        const cplx z = std::polar(1.0 - 1e-9, 2.0 * pi * (k + 0.5) / 512.0);
        if (per.map().value(z).real() < 0.5 - 1e-9)
            throw Error(ErrorCode::class_violation, "symbol does not map C_0 into C_{1/2}");
    }
}

} // namespace

std::vector<cplx> composed_power_series(const DirichletPolynomial& f, const PeriodicSymbol& phi, std::size_t order) {
    std::vector<cplx> c;
    const cplx g0 = phi.at_infinity();
    for (const auto& [n, b] : f.terms()) {
        if (n == 1) {
            if (c.empty()) c.assign(1, 0.0);
            c[0] += b;
            continue;
        }
        const double beta = std::log(static_cast<double>(n));
        const auto h = exp_series(phi.map(), beta, order);
        if (c.size() < h.size()) c.resize(h.size(), 0.0);
        const cplx scale = b * std::exp(-beta * g0);
        cplx u_pow = 1.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            c[m] += scale * h[m] * u_pow;
            u_pow *= phi.rotation();
        }
    }
    return c;
}

StantonSide stanton_lhs(const DirichletPolynomial& f, const SymbolFunction& phi, double a, std::size_t order) {
    require_weight(a);
    StantonSide out;
    if (auto per = as_periodic(phi)) {
        const auto c = composed_power_series(f, *per, order);
        const double lq = per->log_base();
        const std::size_t M = c.size() - 1;
        std::vector<double> checkpoints;
        double s = c.empty() ? 0.0 : std::norm(c[0]);
        for (std::size_t m = 1; m <= M; ++m) {
            s += std::norm(c[m]) * std::pow(static_cast<double>(m) * lq, a);
            if (m == M / 100 || m == M / 10) checkpoints.push_back(s);
        }
        out.value = s;
        if (checkpoints.size() == 2) {
            const double d1 = checkpoints[1] - checkpoints[0], d2 = s - checkpoints[1];
            if (d2 > 1e-15 * s) {
                const double rho = d1 / d2;
                if (rho > 1.05) {
                    out.error = d2 / (rho - 1.0);
                    out.value += out.error;
                    out.diagnostics.push_back("power-law-tail");
                } else {
                    out.divergent = true;
                    out.error = std::numeric_limits<double>::infinity();
                    out.diagnostics.push_back("coefficient-tail-not-decaying");
                }
            }
        }
        return out;
    }
    const Frequency N = std::min<Frequency>(order, 200000);
    const auto h = compose_truncated(f, Symbol(0, *phi.polynomial()), N);
    out.value = std::pow(norm_Da(h, a), 2);
    out.diagnostics.push_back("truncated-at-" + std::to_string(N));
    return out;
}

StantonSide stanton_rhs(const DirichletPolynomial& f, const SymbolFunction& phi, double a, double tol) {
    require_weight(a);
    auto per = as_periodic(phi);
    if (!per) throw Error(ErrorCode::precondition, "stanton_rhs: needs a periodic or single-base symbol");
    require_maps_into_half_plane(*per);

    StantonSide out;
    const cplx g0 = per->at_infinity();
    out.value = std::norm(eval(f, g0));
    const auto df = derivative(f);
    if (df.empty()) return out;

    const double b = 1.0 - a;
    bool truncated = false;
    auto density = [&](cplx w) {
        if (w == g0) return 0.0;
        bool tr = false;
        const double m = periodic_mean_count(*per, b, w, 0.0, &tr);
        truncated = truncated || tr;
        return m == 0.0 ? 0.0 : std::norm(eval(df, w)) * m;
    };

    // Conjugate symmetry when f, g and u are real.
    bool symmetric = per->rotation().imag() == 0.0;
    for (const auto& c : per->map().taylor(16)) symmetric = symmetric && c.imag() == 0.0;
    for (const auto& [n, c] : f.terms()) symmetric = symmetric && c.imag() == 0.0;

    const double reach = per->map().deviation_bound(1.0);
    const double x0 = g0.real() - 0.5, y0 = g0.imag();
    quad::Options inner_opt{tol * 1e-3, tol, 4000};
    quad::Options outer_opt{tol * 1e-2, tol, 4000};

    auto inner = [&](double x) {
        const double re = 0.5 + x;
        // y = y0 + tan(theta)
        auto h = [&](double theta) {
            const double t = std::tan(theta), sec2 = 1.0 + t * t;
            return density(cplx(re, y0 + t)) * sec2;
        };
        std::vector<double> breaks{0.0};
        if (std::isfinite(reach) && std::abs(re - g0.real()) < reach) {
            const double half = std::sqrt(reach * reach - (re - g0.real()) * (re - g0.real()));
            breaks.push_back(std::atan(half));
            breaks.push_back(-std::atan(half));
        }
        const double lo = symmetric ? 0.0 : -0.5 * pi;
        auto r = quad::integrate(h, lo, 0.5 * pi, breaks, inner_opt);
        return symmetric ? 2.0 * r.value : r.value;
    };
    // x = v / (1 - v), geometric breakpoints toward the boundary line
    auto outer = [&](double v) {
        const double d = 1.0 - v;
        return inner(v / d) / (d * d);
    };
    std::vector<double> breaks;
    auto add_x = [&](double x) {
        if (x > 0.0) breaks.push_back(x / (1.0 + x));
    };
    for (int k = 1; k <= 12; ++k) add_x(std::ldexp(1.0, -k));
    add_x(x0);
    if (std::isfinite(reach)) {
        add_x(x0 - reach);
        add_x(x0 + reach);
    }
    auto r = quad::integrate(outer, 0.0, 1.0, breaks, outer_opt);
    const double factor = std::pow(2.0, 1.0 - a) / (std::tgamma(2.0 - a) * pi);
    out.value += factor * r.value;
    out.error = factor * r.error;
    if (!r.converged) out.diagnostics.push_back("quadrature-not-converged");
    if (truncated) {
        out.divergent = true;
        out.diagnostics.push_back("rhs-divergent");
    }
    return out;
}

StantonResult stanton_verify(const DirichletPolynomial& f, const SymbolFunction& phi, double a) {
    StantonResult r;
    r.lhs = stanton_lhs(f, phi, a);
    r.rhs = stanton_rhs(f, phi, a);
    r.rel_err = std::abs(r.lhs.value - r.rhs.value) / std::abs(r.lhs.value);
    return r;
}

} // namespace dsc
