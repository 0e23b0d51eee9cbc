#include "dsc/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "dsc/error.hpp"
#include "dsc/quadrature.hpp"

namespace dsc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool interval_clears(const SymbolFunction& phi, cplx w, cplx a, cplx b, double fa, double fb, double lipschitz,
                     double delta, int depth) {
    if (fa < delta || fb < delta) return false;
    const double h = std::abs(b - a);
    // |f| is L-Lipschitz, so on [a, b] it stays above (fa + fb - L h) / 2.
    if (0.5 * (fa + fb - lipschitz * h) >= delta) return true;
    if (depth > 40) return false;
    const cplx m = 0.5 * (a + b);
    const double fm = std::abs(phi(m) - w);
    return interval_clears(phi, w, a, m, fa, fm, lipschitz, delta, depth + 1) &&
           interval_clears(phi, w, m, b, fm, fb, lipschitz, delta, depth + 1);
}

struct Edge {
    cplx from, to;
};

std::array<Edge, 4> boundary(const Rectangle& r) {
    const cplx a(r.sigma_min, r.t_min), b(r.sigma_max, r.t_min), c(r.sigma_max, r.t_max), d(r.sigma_min, r.t_max);
    return {Edge{a, b}, Edge{b, c}, Edge{c, d}, Edge{d, a}};
}

bool boundary_clears(const SymbolFunction& phi, cplx w, const Rectangle& r, double delta) {
    for (const auto& e : boundary(r))
        if (!segment_clears(phi, w, e.from, e.to, delta)) return false;
    return true;
}

struct NewtonResult {
    cplx s;
    bool converged;
};

NewtonResult newton(const SymbolFunction& phi, cplx w, cplx start, const Rectangle& cell) {
    const double scale = std::max(1.0, std::abs(w));
    const double reach = 2.0 * cell.diameter() + 1.0;
    cplx s = start;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        auto [f, fp] = phi.value_and_derivative(s);
        const cplx r = f - w;
        residual = std::abs(r);
        if (!std::isfinite(residual) || fp == cplx(0.0)) return {s, false};
        if (residual <= 1e-14 * scale) break;
        const cplx step = r / fp;
        s -= step;
        if (std::abs(s - start) > reach) return {s, false};
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) {
            residual = std::abs(phi(s) - w);
            break;
        }
    }
    return {s, residual <= 1e-9 * scale && cell.contains_strictly(s)};
}

} // namespace

// ---------------------------------------------------------------------------

Rectangle::Rectangle(double smin, double smax, double tmin, double tmax)
    : sigma_min(smin), sigma_max(smax), t_min(tmin), t_max(tmax) {
    require(smin < smax, "rectangle: sigma_min < sigma_max");
    require(tmin < tmax, "rectangle: t_min < t_max");
}

double Rectangle::diameter() const noexcept { return std::hypot(width(), height()); }

bool Rectangle::contains_strictly(cplx s) const noexcept {
    return s.real() > sigma_min && s.real() < sigma_max && s.imag() > t_min && s.imag() < t_max;
}

int ZeroSet::total_multiplicity() const noexcept {
    int n = 0;
    for (const auto& z : zeros) n += z.multiplicity;
    return n;
}

double period_scale(const SymbolFunction& phi) {
    if (auto p = phi.period()) return *p;
    if (const auto* poly = phi.polynomial()) {
        const Frequency n = poly->min_nonconstant_frequency();
        if (n >= 2) return two_pi / std::log(static_cast<double>(n));
    }
    return 1.0;
}

double default_delta(cplx w) { return 1e-3 * (1.0 + std::abs(w)); }

bool segment_clears(const SymbolFunction& phi, cplx w, cplx a, cplx b, double delta) {
    const double lipschitz = phi.derivative_bound(std::min(a.real(), b.real()));
    if (!std::isfinite(lipschitz)) return false;
    const double len = std::abs(b - a);
    const int pieces = std::clamp(static_cast<int>(std::ceil(len * (lipschitz + 1.0))), 8, 1 << 16);
    cplx prev = a;
    double fprev = std::abs(phi(a) - w);
    for (int i = 1; i <= pieces; ++i) {
        const cplx next = a + (b - a) * (static_cast<double>(i) / pieces);
        const double fnext = std::abs(phi(next) - w);
        if (!interval_clears(phi, w, prev, next, fprev, fnext, lipschitz, delta, 0)) return false;
        prev = next;
        fprev = fnext;
    }
    return true;
}

double segment_min_modulus(const SymbolFunction& phi, cplx w, cplx a, cplx b, int samples) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) m = std::min(m, std::abs(phi(a + (b - a) * (double(i) / samples)) - w));
    return m;
}

Rectangle safe_rectangle(const SymbolFunction& phi, cplx w, const Rectangle& rect, double delta) {
    require(delta > 0.0, "safe_rectangle: delta > 0");
    const double budget = period_scale(phi);
    const double lipschitz = phi.derivative_bound(rect.sigma_min);
    double step = std::isfinite(lipschitz) && lipschitz > 0.0 ? delta / (4.0 * lipschitz) : budget / 2000.0;
    step = std::clamp(step, budget / 2000.0, budget);
    const int max_steps = static_cast<int>(std::ceil(budget / step));

    // Search outward offsets k * step for one edge; `make` builds the edge for an offset.
    auto search = [&](auto make) -> double {
        for (int k = 0; k <= max_steps; ++k) {
            const double off = k * step;
            auto [a, b] = make(off);
            if (segment_clears(phi, w, a, b, delta)) return off;
        }
        throw Error(ErrorCode::no_zero_free_edge,
                    "no edge with |phi - w| >= " + std::to_string(delta) + " within the search budget");
    };

    Rectangle r = rect;
    for (int pass = 0; pass < 3; ++pass) {
        const Rectangle before = r;
        const double left = search([&](double off) {
            return std::pair{cplx(r.sigma_min - off, r.t_min), cplx(r.sigma_min - off, r.t_max)};
        });
        r.sigma_min -= left;
        const double right = search([&](double off) {
            return std::pair{cplx(r.sigma_max + off, r.t_min), cplx(r.sigma_max + off, r.t_max)};
        });
        r.sigma_max += right;
        const double bottom = search([&](double off) {
            return std::pair{cplx(r.sigma_min, r.t_min - off), cplx(r.sigma_max, r.t_min - off)};
        });
        r.t_min -= bottom;
        const double top = search([&](double off) {
            return std::pair{cplx(r.sigma_min, r.t_max + off), cplx(r.sigma_max, r.t_max + off)};
        });
        r.t_max += top;
        if (r.sigma_min == before.sigma_min && r.sigma_max == before.sigma_max && r.t_min == before.t_min &&
            r.t_max == before.t_max)
            return r;
    }
    if (boundary_clears(phi, w, r, delta)) return r;
    throw Error(ErrorCode::no_zero_free_edge, "edge search did not stabilize");
}

cplx winding_integral(const SymbolFunction& phi, cplx w, const Rectangle& rect, double tol) {
    cplx total = 0.0;
    quad::Options opt{tol, 0.0, 20000};
    for (const auto& e : boundary(rect)) {
        const cplx d = e.to - e.from;
        auto integrand = [&](double u) {
            auto [f, fp] = phi.value_and_derivative(e.from + d * u);
            return fp / (f - w) * d;
        };
        total += quad::integrate(integrand, 0.0, 1.0, opt).value;
    }
    return total / cplx(0.0, two_pi);
}

int winding_number(const SymbolFunction& phi, cplx w, const Rectangle& rect, const ZeroOptions& opt) {
    double tol = 1e-5;
    cplx last = 0.0;
    for (int level = 0; level <= opt.max_refinements; ++level, tol *= 1e-2) {
        cplx total = 0.0;
        bool converged = true;
        quad::Options qopt{tol, 0.0, 20000};
        for (const auto& e : boundary(rect)) {
            const cplx d = e.to - e.from;
            auto integrand = [&](double u) {
                auto [f, fp] = phi.value_and_derivative(e.from + d * u);
                return fp / (f - w) * d;
            };
            auto res = quad::integrate(integrand, 0.0, 1.0, qopt);
            converged = converged && res.converged;
            total += res.value;
        }
        last = total / cplx(0.0, two_pi);
        const double n = std::round(last.real());
        const double dist = std::max(std::abs(last.real() - n), std::abs(last.imag()));
        if (std::isfinite(dist) && ((converged && dist <= 0.25) || dist <= 1e-3)) return static_cast<int>(n);
    }
    throw Error(ErrorCode::contour_unresolved, "winding value " + std::to_string(last.real()) + " + " +
                                                    std::to_string(last.imag()) + "i is not near an integer");
}

ZeroSet locate_zeros(const SymbolFunction& phi, cplx w, const Rectangle& rect, double tol, const ZeroOptions& opt) {
    const double delta = opt.delta > 0.0 ? opt.delta : default_delta(w);
    if (!boundary_clears(phi, w, rect, delta))
        throw Error(ErrorCode::precondition, "locate_zeros: boundary is not zero-free (use safe_rectangle)");

    ZeroSet out;
    out.rect = rect;
    out.min_boundary_modulus = std::numeric_limits<double>::infinity();
    for (const auto& e : boundary(rect))
        out.min_boundary_modulus = std::min(out.min_boundary_modulus, segment_min_modulus(phi, w, e.from, e.to));
    out.winding_total = winding_number(phi, w, rect, opt);

    int fallbacks = 0, clusters = 0;
    std::function<void(const Rectangle&, int, int)> process = [&](const Rectangle& cell, int count, int depth) {
        if (count <= 0) return;
        const bool tiny = cell.diameter() < tol || depth >= opt.max_depth;
        if (count == 1) {
            auto nr = newton(phi, w, cell.center(), cell);
            if (nr.converged) {
                out.zeros.push_back({nr.s, 1, true});
                return;
            }
            if (tiny) {
                ++fallbacks;
                out.zeros.push_back({cell.center(), 1, false});
                return;
            }
        } else if (tiny) {
            ++clusters;
            out.zeros.push_back({cell.center(), count, false});
            return;
        }
        const bool vertical_cut = cell.width() >= cell.height();
        static constexpr std::array<double, 11> offsets = {0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3, 0.05, -0.05, 0.15, -0.15};
        for (double cut_delta = delta; cut_delta > 1e-12; cut_delta *= 0.1) {
            for (double f : offsets) {
                Rectangle lo = cell, hi = cell;
                cplx a, b;
                if (vertical_cut) {
                    const double x = cell.sigma_min + (0.5 + f) * cell.width();
                    a = {x, cell.t_min};
                    b = {x, cell.t_max};
                    lo.sigma_max = hi.sigma_min = x;
                } else {
                    const double y = cell.t_min + (0.5 + f) * cell.height();
                    a = {cell.sigma_min, y};
                    b = {cell.sigma_max, y};
                    lo.t_max = hi.t_min = y;
                }
                if (!segment_clears(phi, w, a, b, cut_delta)) continue;
                int n_lo = 0, n_hi = 0;
                try {
                    n_lo = winding_number(phi, w, lo, opt);
                    n_hi = winding_number(phi, w, hi, opt);
                } catch (const Error&) {
                    continue;
                }
                if (n_lo + n_hi != count || n_lo < 0 || n_hi < 0) continue;
                process(lo, n_lo, depth + 1);
                process(hi, n_hi, depth + 1);
                return;
            }
        }
        throw Error(ErrorCode::contour_unresolved, "no admissible split line for a cell");
    };
    process(rect, out.winding_total, 0);

    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& x, const Zero& y) {
        return x.location.imag() != y.location.imag() ? x.location.imag() < y.location.imag()
                                                      : x.location.real() < y.location.real();
    });
    if (fallbacks > 0) out.diagnostics.push_back("newton-fallback:" + std::to_string(fallbacks));
    if (clusters > 0) out.diagnostics.push_back("unresolved-cluster:" + std::to_string(clusters));
    return out;
}

ZeroSet zeros_periodic_symbol(const PeriodicSymbol& phi, cplx w, const Rectangle& rect) {
    ZeroSet out;
    out.rect = rect;
    const double log_q = phi.log_base();
    const double period = phi.period();
    // Re s > sigma_min  <=>  |z| < q^{-sigma_min}.
    const double r_max = std::min(1.0, std::exp(-rect.sigma_min * log_q));
    const PreimageSet pre = phi.map().preimages(w, r_max);
    if (pre.excluded_origin) out.diagnostics.push_back("excluded-origin-preimage");
    if (pre.excluded_boundary > 0) out.diagnostics.push_back("excluded-boundary-preimage");
    if (pre.truncated) out.diagnostics.push_back("infinite-preimage-set-truncated");

    for (const auto& p : pre.points) {
        const cplx base = -std::log(p.z / phi.rotation()) / log_q;
        if (!(base.real() > rect.sigma_min && base.real() < rect.sigma_max)) continue;
        const auto k_lo = static_cast<long>(std::ceil((rect.t_min - base.imag()) / period));
        const auto k_hi = static_cast<long>(std::floor((rect.t_max - base.imag()) / period));
        for (long k = k_lo; k <= k_hi; ++k) {
            const cplx s(base.real(), base.imag() + period * static_cast<double>(k));
            if (rect.contains_strictly(s)) out.zeros.push_back({s, p.multiplicity, true});
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& x, const Zero& y) {
        return x.location.imag() != y.location.imag() ? x.location.imag() < y.location.imag()
                                                      : x.location.real() < y.location.real();
    });
    out.winding_total = out.total_multiplicity();
    const SymbolFunction f(phi);
    out.min_boundary_modulus = std::numeric_limits<double>::infinity();
    for (const auto& e : boundary(rect))
        out.min_boundary_modulus = std::min(out.min_boundary_modulus, segment_min_modulus(f, w, e.from, e.to));
    return out;
}

} // namespace dsc
