#include "dsc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsc/error.hpp"
#include "dsc/parallel.hpp"
#include "dsc/zeros.hpp"

namespace dsc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double margin(const SymbolFunction& phi, cplx s) {
    const double m = phi(s).real() - 0.5;
    if (!(m > 0.0))
        throw Error(ErrorCode::class_violation, "Re phi(s) <= 1/2 at s = " + std::to_string(s.real()) + " + " +
                                                    std::to_string(s.imag()) + "i");
    return m;
}

double schwarz_ratio(const SymbolFunction& phi, double x, double t) {
    return x / ((x * x + 1.0) * margin(phi, cplx(x, t)));
}

struct GridAxes {
    std::vector<double> x, t;
};

GridAxes axes(const SymbolFunction& phi, const SchwarzGrid& g) {
    require(g.n_sigma >= 2 && g.n_t >= 1, "schwarz grid: n_sigma >= 2, n_t >= 1");
    require(g.sigma_min > 0.0 && g.sigma_max > g.sigma_min, "schwarz grid: 0 < sigma_min < sigma_max");
    const double W = g.window > 0.0 ? g.window : period_scale(phi);
    GridAxes a;
    const double lr = std::log(g.sigma_max / g.sigma_min);
    for (int i = 0; i < g.n_sigma; ++i) a.x.push_back(g.sigma_min * std::exp(lr * i / (g.n_sigma - 1)));
    for (int j = 0; j < g.n_t; ++j) a.t.push_back(g.t_start + W * j / g.n_t);
    return a;
}

// Pattern search in (log x, t) from a grid point.
std::pair<double, cplx> climb(const SymbolFunction& phi, double x, double t, double hl, double ht, double lo,
                              double hi) {
    double best = schwarz_ratio(phi, x, t);
    double l = std::log(x);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 400 && (hl > 1e-13 || ht > 1e-13 * (1.0 + std::abs(t))); ++it) {
        bool moved = false;
        for (int dl = -1; dl <= 1; ++dl)
            for (int dt = -1; dt <= 1; ++dt) {
                if (dl == 0 && dt == 0) continue;
                const double nl = std::clamp(l + dl * hl, llo, lhi), nt = t + dt * ht;
                const double v = schwarz_ratio(phi, std::exp(nl), nt);
                if (v > best) {
                    best = v;
                    l = nl;
                    t = nt;
                    moved = true;
                }
            }
        if (!moved) {
            hl *= 0.5;
            ht *= 0.5;
        }
    }
    return {best, cplx(std::exp(l), t)};
}

} // namespace

double hyperbolic_distance_halfplane(cplx z, cplx w) {
    require(z.real() > 0.0 && w.real() > 0.0, "hyperbolic distance: points must lie in Re > 0");
    const double num = std::abs(z + std::conj(w)) + std::abs(z - w);
    return std::log(num * num / (4.0 * z.real() * w.real()));
}

// -- Schwarz constant --------------------------------------------------------

SchwarzGrid SchwarzGrid::refined(int factor) const {
    SchwarzGrid g = *this;
    g.n_sigma = (n_sigma - 1) * factor + 1;
    g.n_t = n_t * factor;
    return g;
}

SchwarzResult schwarz_constant(const SymbolFunction& phi, const SchwarzGrid& grid) {
    const GridAxes ax = axes(phi, grid);
    struct Cand {
        double v;
        std::size_t i, j;
    };
    std::vector<Cand> cand;
    for (std::size_t i = 0; i < ax.x.size(); ++i)
        for (std::size_t j = 0; j < ax.t.size(); ++j) cand.push_back({schwarz_ratio(phi, ax.x[i], ax.t[j]), i, j});
    const std::size_t keep = std::min<std::size_t>(6, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(), [](const Cand& a, const Cand& b) { return a.v > b.v; });

    SchwarzResult out;
    out.coarse = cand.front().v;
    out.constant = cand.front().v;
    out.argmax = cplx(ax.x[cand.front().i], ax.t[cand.front().j]);
    const double hl = std::log(grid.sigma_max / grid.sigma_min) / (grid.n_sigma - 1);
    const double ht = ax.t.size() > 1 ? ax.t[1] - ax.t[0] : period_scale(phi);
    for (std::size_t k = 0; k < keep; ++k) {
        const auto [v, s] = climb(phi, ax.x[cand[k].i], ax.t[cand[k].j], hl, ht, grid.sigma_min, grid.sigma_max);
        if (v > out.constant) {
            out.constant = v;
            out.argmax = s;
        }
    }
    return out;
}

SchwarzValidation schwarz_validate(const SymbolFunction& phi, double C, const SchwarzGrid& grid) {
    const GridAxes ax = axes(phi, grid);
    SchwarzValidation out;
    out.liminf_proxy = inf;
    for (double x : ax.x)
        for (double t : ax.t) {
            const double m = margin(phi, cplx(x, t));
            ++out.points;
            // relative slack covers rounding in the quotient that defined C
            if (x > C * (x * x + 1.0) * m * (1.0 + 1e-12)) ++out.violations;
            if (x < 1e-2) out.liminf_proxy = std::min(out.liminf_proxy, m / x);
        }
    return out;
}

// -- Littlewood --------------------------------------------------------------

CountingEstimate counting_limit(const SymbolFunction& phi, double a, cplx w) {
    const SymbolFunction f = counting_form(phi);
    CountingContext ctx(f, w);
    return mean_count_limit(ctx, a, LimitSchedule::for_symbol(f));
}

LittlewoodCheck littlewood_bound_check(const SymbolFunction& phi, cplx w, double tol) {
    require(w.real() > 0.5, "littlewood: w in C_{1/2}");
    const cplx nu = phi.at_infinity();
    if (w == nu) throw Error(ErrorCode::excluded_point, "w = phi(+inf) is excluded");
    LittlewoodCheck out;
    const CountingEstimate m = counting_limit(phi, 1.0, w);
    out.lhs = m.value;
    out.rhs = std::log(std::abs((std::conj(w) + nu - 1.0) / (w - nu)));
    out.inconclusive = m.divergent || !m.converged;
    out.holds = !out.inconclusive && out.lhs <= out.rhs + tol;
    return out;
}

// -- ratio profiles ----------------------------------------------------------

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::vanishing: return "vanishing";
    case Verdict::growing: return "growing";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<double> BoundarySchedule::x_values() const {
    require(x_start > 0.0 && x_min > 0.0 && x_min <= x_start, "boundary schedule: 0 < x_min <= x_start");
    std::vector<double> x;
    for (double v = x_start; v >= x_min * (1.0 + 1e-12); v *= 0.5) x.push_back(v);
    if (x.empty() || x.back() > x_min * (1.0 + 1e-12)) x.push_back(x_min);
    return x;
}

RegionGrid RegionGrid::refined(int factor) const {
    RegionGrid g = *this;
    g.nx = (nx - 1) * factor + 1;
    g.ny = (ny - 1) * factor + 1;
    return g;
}

Verdict line_verdict(const std::vector<double>& r) {
    if (r.empty()) return Verdict::inconclusive;
    const double mx = *std::max_element(r.begin(), r.end());
    if (mx <= 0.0) return Verdict::vanishing;
    const double last = r.back();
    if (last < 0.05 * mx) return Verdict::vanishing;
    const double first_half = *std::max_element(r.begin(), r.begin() + static_cast<long>((r.size() + 1) / 2));
    if (last > 2.0 * first_half) return Verdict::growing;
    return Verdict::bounded;
}

namespace {

// Evaluates the ratio at every point; lines are consecutive index ranges.
void fill_profile(const SymbolFunction& phi, RatioProfile& p, unsigned jobs) {
    const SymbolFunction f = counting_form(phi);
    const std::size_t n = p.boundary_points.size();
    p.ratios.assign(n, 0.0);
    std::vector<char> bad(n, 0);
    parallel_for(n, jobs, [&](std::size_t i) {
        const cplx w = p.boundary_points[i];
        CountingContext ctx(f, w);
        const CountingEstimate m = mean_count_limit(ctx, p.exponent, LimitSchedule::for_symbol(f));
        if (m.divergent || !m.converged) bad[i] = 1;
        p.ratios[i] = m.value / std::pow(w.real() - 0.5, p.exponent);
    });

    bool any_bad = false, any_growing = false, any_bounded = false;
    for (std::size_t l = 0; l < p.line_starts.size(); ++l) {
        const std::size_t b = p.line_starts[l];
        const std::size_t e = l + 1 < p.line_starts.size() ? p.line_starts[l + 1] : n;
        std::vector<double> line(p.ratios.begin() + static_cast<long>(b), p.ratios.begin() + static_cast<long>(e));
        bool line_bad = false;
        for (std::size_t i = b; i < e; ++i) line_bad = line_bad || bad[i];
        const Verdict v = line_bad ? Verdict::inconclusive : line_verdict(line);
        any_bad = any_bad || v == Verdict::inconclusive;
        any_growing = any_growing || v == Verdict::growing;
        any_bounded = any_bounded || v == Verdict::bounded;
    }
    p.verdict = any_bad       ? Verdict::inconclusive
                : any_growing ? Verdict::growing
                : any_bounded ? Verdict::bounded
                              : Verdict::vanishing;
    if (any_bad) p.diagnostics.push_back("divergent-or-unconverged-points");
    for (std::size_t i = 0; i < n; ++i)
        if (p.ratios[i] > p.sup) {
            p.sup = p.ratios[i];
            p.argsup = p.boundary_points[i];
        }
}

} // namespace

RatioProfile compactness_ratio(const SymbolFunction& phi, double a, const BoundarySchedule& schedule, unsigned jobs) {
    require(a >= 0.0, "compactness_ratio: a >= 0");
    RatioProfile p;
    p.a = a;
    p.exponent = 1.0 + a;
    const cplx nu = phi.at_infinity();
    const auto xs = schedule.x_values();
    for (double y : schedule.imag_parts) {
        p.line_starts.push_back(p.boundary_points.size());
        for (double x : xs) {
            const cplx w(0.5 + x, nu.imag() + y);
            if (std::abs(w - nu) < 1e-9) {
                p.diagnostics.push_back("skipped-phi-infinity");
                continue;
            }
            p.boundary_points.push_back(w);
        }
    }
    fill_profile(phi, p, jobs);
    return p;
}

RatioProfile boundedness_profile(const SymbolFunction& phi, double a, double delta, const RegionGrid& grid,
                                 unsigned jobs) {
    require(a > 0.0 && a < 1.0, "boundedness_profile: 0 < a < 1");
    require(delta > 0.0, "boundedness_profile: delta > 0");
    require(grid.nx >= 2 && grid.ny >= 1 && grid.x_min > 0.0 && grid.x_max > grid.x_min, "region grid: bad axes");
    RatioProfile p;
    p.a = a;
    p.exponent = 1.0 - a;
    const cplx nu = phi.at_infinity();
    const double lr = std::log(grid.x_max / grid.x_min);
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.ny == 1 ? grid.y_min : grid.y_min + (grid.y_max - grid.y_min) * j / (grid.ny - 1);
        p.line_starts.push_back(p.boundary_points.size());
        for (int i = grid.nx - 1; i >= 0; --i) {
            const cplx w(0.5 + grid.x_min * std::exp(lr * i / (grid.nx - 1)), nu.imag() + y);
            if (std::abs(w - nu) < delta) continue;
            p.boundary_points.push_back(w);
        }
    }
    fill_profile(phi, p, jobs);
    if (p.sup <= 0.0 || p.verdict == Verdict::inconclusive) return p;

    // The grid maximum typically sits next to the excluded disk; refine it by
    // pattern search over the admissible region.
    const SymbolFunction f = counting_form(phi);
    auto ratio = [&](double l, double y) {
        const cplx w(0.5 + std::exp(l), y);
        if (std::abs(w - nu) < delta) return -1.0;
        CountingContext ctx(f, w);
        const CountingEstimate m = mean_count_limit(ctx, p.exponent, LimitSchedule::for_symbol(f));
        if (m.divergent || !m.converged) return -1.0;
        return m.value / std::pow(w.real() - 0.5, p.exponent);
    };
    const double llo = std::log(grid.x_min), lhi = std::log(grid.x_max);
    double l = std::log(p.argsup.real() - 0.5), y = p.argsup.imag(), best = p.sup;
    double hl = lr / (grid.nx - 1), hy = grid.ny > 1 ? (grid.y_max - grid.y_min) / (grid.ny - 1) : 1.0;
    for (int it = 0; it < 200 && hl > 1e-6; ++it) {
        bool moved = false;
        for (int dl = -1; dl <= 1; ++dl)
            for (int dy = -1; dy <= 1; ++dy) {
                if (dl == 0 && dy == 0) continue;
                const double nl = std::clamp(l + dl * hl, llo, lhi);
                const double ny = std::clamp(y + dy * hy, nu.imag() + grid.y_min, nu.imag() + grid.y_max);
                const double v = ratio(nl, ny);
                if (v > best) {
                    best = v;
                    l = nl;
                    y = ny;
                    moved = true;
                }
            }
        if (!moved) {
            hl *= 0.5;
            hy *= 0.5;
        }
    }
    p.sup = best;
    p.argsup = cplx(0.5 + std::exp(l), y);
    return p;
}

double decay_bound_constant(const RatioProfile& profile, cplx phi_inf, double delta) {
    const double m = phi_inf.real() - 0.5;
    require(m > 0.0, "decay_bound_constant: Re phi(+inf) > 1/2");
    double c = 0.0;
    for (std::size_t i = 0; i < profile.ratios.size(); ++i) {
        const double d = std::abs(profile.boundary_points[i] - phi_inf);
        if (d >= delta) c = std::max(c, profile.ratios[i] * d * d / m);
    }
    return c;
}

// -- Nevanlinna --------------------------------------------------------------

namespace {

NevanlinnaValue nevanlinna_expcusp(double alpha, cplx w, NevanlinnaKind kind) {
    const double r = std::abs(w);
    require(r > 0.0 && r < 1.0, "nevanlinna: 0 < |w| < 1 for the exp cusp map");
    const double b = -std::log(r), theta = std::arg(w);
    constexpr long N = 1000000;
    NevanlinnaValue out;
    auto term = [&](long n) {
        const double al = theta + 2.0 * pi * static_cast<double>(n);
        if (kind == NevanlinnaKind::generalized) return std::pow(4.0 * b / ((1.0 + b) * (1.0 + b) + al * al), alpha);
        const double den = (1.0 - b) * (1.0 - b) + al * al;
        if (den == 0.0) throw Error(ErrorCode::excluded_point, "w = g(0) is excluded for the classical sum");
        return 0.5 * std::log1p(4.0 * b / den);
    };
    // smallest terms first
    for (long k = N; k >= 1; --k) out.value += term(k) + term(-k);
    out.value += term(0);
    out.terms = 2 * N + 1;
    const double h = static_cast<double>(N) - 0.5;
    if (kind == NevanlinnaKind::generalized) {
        if (alpha <= 0.5) {
            out.divergent = true;
            out.tail_bound = inf;
        } else {
            out.tail_bound = 2.0 * std::pow(b / (pi * pi), alpha) * std::pow(h, 1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0);
        }
    } else {
        out.tail_bound = 2.0 * b / (2.0 * pi * pi) / h;
    }
    return out;
}

int origin_multiplicity(const DiskMap& g) {
    const auto c = g.taylor(16);
    for (std::size_t k = 1; k < c.size(); ++k)
        if (std::abs(c[k]) > 1e-14) return static_cast<int>(k);
    throw Error(ErrorCode::precondition, "nevanlinna: g is constant near 0");
}

} // namespace

NevanlinnaValue nevanlinna_disk(const DiskMap& g, double alpha, cplx w, NevanlinnaKind kind) {
    require(alpha > 0.0, "nevanlinna: alpha > 0");
    if (dynamic_cast<const ExpCuspMap*>(&g)) return nevanlinna_expcusp(alpha, w, kind);
    const PreimageSet pre = g.preimages(w, 1.0);
    NevanlinnaValue out;
    if (pre.excluded_origin) {
        if (kind == NevanlinnaKind::classical)
            throw Error(ErrorCode::excluded_point, "w = g(0) is excluded for the classical sum");
        out.value += origin_multiplicity(g);
        ++out.terms;
    }
    for (const auto& z : pre.points) {
        const double r = std::abs(z.z);
        out.value += z.multiplicity *
                     (kind == NevanlinnaKind::generalized ? std::pow(1.0 - r * r, alpha) : std::log(1.0 / r));
        ++out.terms;
    }
    if (pre.truncated) {
        out.tail_bound = inf;
        out.divergent = true;
    }
    return out;
}

// -- half-strip --------------------------------------------------------------

cplx halfstrip_inverse(cplx s, double sigma, double T) {
    require(T > 0.0, "halfstrip_inverse: T > 0");
    require(s.real() > sigma && std::abs(s.imag()) < 2.0 * T, "halfstrip_inverse: s outside the half-strip");
    const cplx v = (s - sigma) / (2.0 * T) * (pi / 2.0);
    const double sh = std::sinh(pi / 2.0);
    const cplx r = v.real() > 30.0 ? 2.0 * sh * std::exp(-v) : sh / std::sinh(v);
    return (1.0 - r) / (1.0 + r);
}

TransferenceResult transference_check(const SymbolFunction& phi, double a, cplx w, double sigma, double T) {
    require(a > 0.0 && a <= 1.0, "transference: 0 < a <= 1");
    require(sigma > 0.0 && T > 0.0, "transference: sigma > 0, T > 0");
    CountingContext ctx(counting_form(phi), w);
    TransferenceResult out;
    out.lower = ctx.finite(a, 2.0 * sigma, T);
    out.upper = ctx.finite(a, sigma, 2.0 * T);
    double n = 0.0;
    for (const auto& z : ctx.solutions(sigma, 2.0 * T)) {
        const double r = std::abs(halfstrip_inverse(z.location, sigma, T));
        n += z.multiplicity * std::pow(1.0 - r * r, a);
        ++out.solutions;
    }
    out.mid = std::pow(T, a - 1.0) * n;
    if (out.mid > 0.0) {
        out.lower_constant = out.lower / out.mid;
        out.upper_constant = out.upper / out.mid;
    }
    return out;
}

} // namespace dsc
