#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "dsc/error.hpp"
#include "dsc/operators.hpp"

using namespace dsc;

namespace {

const double ln2 = std::numbers::ln2;
const double pi = std::numbers::pi;

SymbolFunction two_s() { return SymbolFunction(DirichletPolynomial::monomial(2)); }
SymbolFunction phi2() { return SymbolFunction(DirichletPolynomial{{1, 1.5}, {2, 0.5}}); }
SymbolFunction inner_disk() { return SymbolFunction(DirichletPolynomial{{1, 2.0}, {2, 0.5}}); }
SymbolFunction mobius(cplx nu = 1.0) { return SymbolFunction(PeriodicSymbol(std::make_shared<MobiusMap>(nu))); }

double mobius_log(cplx nu, cplx w) { return std::log(std::abs((w + std::conj(nu) - 1.0) / (w - nu))); }

// sup over x in [lo, hi] of f by a dense log-spaced scan and golden refinement.
template <class F>
double sup_1d(F f, double lo, double hi) {
    const int n = 200000;
    double best = -1.0, bx = lo;
    for (int i = 0; i <= n; ++i) {
        const double x = lo * std::pow(hi / lo, double(i) / n);
        if (f(x) > best) best = f(x), bx = x;
    }
    double a = bx / 1.0001, b = bx * 1.0001;
    a = std::max(a, lo), b = std::min(b, hi);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) > f(d)) b = d; else a = c;
    }
    return std::max(best, f(0.5 * (a + b)));
}

template <class F>
void expect_error(ErrorCode code, F f) {
    try {
        f();
        CHECK_MESSAGE(false, "no error thrown");
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("hyperbolic distance") {
    CHECK(hyperbolic_distance_halfplane(cplx(0.7, 0.2), cplx(0.7, 0.2)) == doctest::Approx(0.0));
    CHECK(std::abs(hyperbolic_distance_halfplane(1.0, 2.0) - ln2) < 1e-14);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(0.01, 3.0), im(-3.0, 3.0), lam(0.1, 10.0);
    for (int k = 0; k < 200; ++k) {
        const cplx z(re(rng), im(rng)), w(re(rng), im(rng));
        const double d = hyperbolic_distance_halfplane(z, w);
        CHECK(std::abs(d - hyperbolic_distance_halfplane(w, z)) < 1e-12);
        // isometries s -> lambda s + i tau
        const double l = lam(rng), tau = im(rng);
        CHECK(std::abs(d - hyperbolic_distance_halfplane(l * z + cplx(0, tau), l * w + cplx(0, tau))) <
              1e-10 * (1.0 + d));
    }
    expect_error(ErrorCode::precondition, [] { hyperbolic_distance_halfplane(cplx(0.0, 1.0), 1.0); });
}

TEST_CASE("schwarz constant against one-dimensional oracles") {
    // phi2: worst t puts 2^{-s} on the negative axis.
    const double c2 = sup_1d([](double x) { return x / ((x * x + 1.0) * (1.0 - 0.5 * std::exp2(-x))); }, 1e-4, 1e2);
    const SchwarzResult r2 = schwarz_constant(phi2());
    CHECK(r2.constant <= 1.0);
    CHECK(std::abs(r2.constant - c2) < 1e-7 * c2);

    // Mobius: Re g - 1/2 = (Re nu - 1/2)(1 - |z|^2) / |1 - z|^2, worst at z = -r.
    for (cplx nu : {cplx(1.0), cplx(0.8, 0.3)}) {
        const double m = nu.real() - 0.5;
        const double cm = sup_1d(
            [m](double x) {
                const double r = std::exp2(-x);
                return x * (1.0 + r) / ((x * x + 1.0) * m * (1.0 - r));
            },
            1e-4, 1e2);
        const SchwarzResult rm = schwarz_constant(mobius(nu));
        CHECK(std::abs(rm.constant - cm) < 1e-7 * cm);
    }

    const cplx nu(0.9, 0.3);
    const SchwarzResult rc = schwarz_constant(SymbolFunction(DirichletPolynomial::constant(nu)));
    CHECK(std::abs(rc.constant - 1.0 / (2.0 * (nu.real() - 0.5))) < 1e-9);
    CHECK(std::abs(rc.argmax.real() - 1.0) < 1e-4);
}

TEST_CASE("schwarz constant is stable, validated and has a positive liminf proxy") {
    for (const auto& phi : {phi2(), mobius(), mobius(cplx(0.8, 0.3)), inner_disk()}) {
        const SchwarzGrid g;
        const SchwarzResult r = schwarz_constant(phi, g);
        CHECK(std::isfinite(r.constant));
        const SchwarzResult r2 = schwarz_constant(phi, g.refined(2));
        CHECK(std::abs(r2.constant - r.constant) < 0.05 * r.constant);
        const SchwarzValidation v = schwarz_validate(phi, r.constant, g.refined(10));
        CHECK(v.points == static_cast<std::size_t>((g.n_sigma - 1) * 10 + 1) * static_cast<std::size_t>(g.n_t * 10));
        CHECK(v.violations == 0);
        CHECK(v.liminf_proxy > 0.0);
    }
    expect_error(ErrorCode::class_violation, [] { schwarz_constant(two_s()); });
}

TEST_CASE("littlewood bound examples") {
    const LittlewoodCheck c = littlewood_bound_check(phi2(), 13.0 / 8.0);
    CHECK(std::abs(c.lhs - 2.0 * ln2) < 1e-9);
    CHECK(std::abs(c.rhs - std::log(17.0)) < 1e-12);
    CHECK(c.holds);

    const LittlewoodCheck far = littlewood_bound_check(phi2(), cplx(5.0, 1.0));
    CHECK(far.lhs == 0.0);
    CHECK(far.holds);

    // Mobius symbols attain the bound.
    const cplx nu(0.8, -0.3), w(1.1, 0.7);
    const LittlewoodCheck m = littlewood_bound_check(mobius(nu), w);
    CHECK(std::abs(m.lhs - mobius_log(nu, w)) < 1e-9);
    CHECK(std::abs(m.lhs - m.rhs) < 1e-9);

    expect_error(ErrorCode::excluded_point, [] { littlewood_bound_check(phi2(), 1.5); });
}

TEST_CASE("littlewood bound holds at random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(0.501, 3.0), im(-3.0, 3.0);
    for (const auto& phi : {phi2(), mobius(), mobius(cplx(0.7, -0.4))}) {
        for (int k = 0; k < 100; ++k) {
            const cplx w(re(rng), im(rng));
            const LittlewoodCheck c = littlewood_bound_check(phi, w);
            CHECK_FALSE(c.inconclusive);
            CHECK(c.lhs <= c.rhs + 1e-6);
        }
    }
}

TEST_CASE("line verdicts") {
    CHECK(line_verdict({1.0, 1.1, 1.0, 1.05}) == Verdict::bounded);
    CHECK(line_verdict({1.0, 0.5, 0.2, 0.01}) == Verdict::vanishing);
    CHECK(line_verdict({0.0, 0.0, 0.0}) == Verdict::vanishing);
    CHECK(line_verdict({1.0, 1.5, 3.0, 9.0}) == Verdict::growing);
    CHECK(line_verdict({}) == Verdict::inconclusive);
}

TEST_CASE("compactness ratio of the Mobius symbol") {
    const cplx nu(1.0);
    for (double a : {0.0, 1.0}) {
        const RatioProfile p = compactness_ratio(mobius(nu), a);
        CHECK(p.exponent == 1.0 + a);
        CHECK(p.verdict == Verdict::bounded);
        for (std::size_t i = 0; i < p.ratios.size(); ++i) {
            const cplx w = p.boundary_points[i];
            const double x = w.real() - 0.5;
            const double closed = std::pow(ln2, -a) * std::pow(mobius_log(nu, w), 1.0 + a) / std::pow(x, 1.0 + a);
            CHECK(std::abs(p.ratios[i] - closed) < 1e-6 * closed);
        }
        // boundary limit (log 2)^{-a} (2 (Re nu - 1/2) / |w + conj(nu) - 1|^2)^{1+a}
        for (std::size_t l = 0; l < p.line_starts.size(); ++l) {
            const std::size_t last = (l + 1 < p.line_starts.size() ? p.line_starts[l + 1] : p.ratios.size()) - 1;
            const cplx w(0.5, p.boundary_points[last].imag());
            const double lim = std::pow(ln2, -a) * std::pow(2.0 * (nu.real() - 0.5) / std::norm(w + std::conj(nu) - 1.0), 1.0 + a);
            CHECK(std::abs(p.ratios[last] - lim) < 0.02 * lim);
        }
        const double c = decay_bound_constant(p, nu, 0.1);
        CHECK(std::isfinite(c));
        if (a == 0.0) CHECK(c <= 2.0 + 1e-9);
    }
}

TEST_CASE("compactness ratio vanishes when the image stays away from the boundary") {
    const RatioProfile p = compactness_ratio(inner_disk(), 0.5);
    CHECK(p.verdict == Verdict::vanishing);
    for (double r : p.ratios) CHECK(r == 0.0);
}

TEST_CASE("decay constant at a = 0 never exceeds 2") {
    BoundarySchedule s;
    s.imag_parts = {-1.0, 0.3, 1.7};
    for (const auto& phi : {phi2(), mobius(cplx(0.8, 0.3))}) {
        const RatioProfile p = compactness_ratio(phi, 0.0, s);
        CHECK(decay_bound_constant(p, phi.at_infinity(), 1e-3) <= 2.0 + 1e-9);
    }
}

TEST_CASE("boundedness profile of the Mobius symbol") {
    const cplx nu(1.0);
    const double a = 0.5, delta = 0.1;
    const RatioProfile p = boundedness_profile(mobius(nu), a, delta);
    CHECK(p.exponent == doctest::Approx(0.5));
    CHECK(std::isfinite(p.sup));
    CHECK(p.sup > 0.0);
    for (std::size_t i = 0; i < p.ratios.size(); ++i) {
        const cplx w = p.boundary_points[i];
        CHECK(std::abs(w - nu) >= delta);
        const double x = w.real() - 0.5;
        const double closed = std::pow(ln2, a) * std::pow(mobius_log(nu, w), 1.0 - a) / std::pow(x, 1.0 - a);
        CHECK(std::abs(p.ratios[i] - closed) < 1e-2 * closed);
    }
    const RatioProfile p2 = boundedness_profile(mobius(nu), a, delta, RegionGrid{}.refined(2));
    CHECK(std::abs(p2.sup - p.sup) < 0.05 * p.sup);

    const RatioProfile z = boundedness_profile(inner_disk(), a, delta);
    for (std::size_t i = 0; i < z.ratios.size(); ++i)
        if (z.boundary_points[i].real() < 1.5) CHECK(z.ratios[i] == 0.0);
}

TEST_CASE("disk Nevanlinna functions") {
    AffineMap id(0.0, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7), al(0.2, 3.0);
    for (int k = 0; k < 50; ++k) {
        const cplx w(u(rng), u(rng));
        const double alpha = al(rng);
        CHECK(std::abs(nevanlinna_disk(id, alpha, w).value - std::pow(1.0 - std::norm(w), alpha)) < 1e-13);
    }

    ExpCuspMap cusp;
    const double e1 = std::exp(-1.0);
    const NevanlinnaValue c = nevanlinna_disk(cusp, 1.0, e1);
    CHECK(std::abs(c.value - 1.0 / std::tanh(1.0)) <= c.tail_bound + 1e-10);
    CHECK(c.tail_bound < 1e-6);
    const NevanlinnaValue l = nevanlinna_disk(cusp, 1.0, -e1, NevanlinnaKind::classical);
    CHECK(std::abs(l.value - std::log(std::cosh(1.0))) <= l.tail_bound + 1e-10);
    CHECK(nevanlinna_disk(cusp, 0.5, -e1).divergent);
    expect_error(ErrorCode::excluded_point, [&] { nevanlinna_disk(cusp, 1.0, e1, NevanlinnaKind::classical); });

    // Mobius maps onto a half-plane, so the preimage is unique.
    MobiusMap mob(cplx(0.8, 0.2));
    const cplx w(1.3, -0.4);
    CHECK(std::abs(nevanlinna_disk(mob, 1.0, w, NevanlinnaKind::classical).value - mobius_log(cplx(0.8, 0.2), w)) < 1e-12);

    // Littlewood inequality for a self-map of the disk.
    PolynomialMap g({0.1, 0.3, 0.4});
    for (int k = 0; k < 50; ++k) {
        const cplx w(0.6 * u(rng), 0.6 * u(rng));
        if (std::abs(w - 0.1) < 1e-3) continue;
        const double n = nevanlinna_disk(g, 1.0, w, NevanlinnaKind::classical).value;
        const double bound = std::log(std::abs((1.0 - 0.1 * w) / (w - 0.1)));
        CHECK(n <= bound + 1e-12);
    }
}

TEST_CASE("half-strip inverse") {
    const double sigma = 0.5, T = 50.0;
    CHECK(std::abs(halfstrip_inverse(sigma + 2.0 * T, sigma, T)) < 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> re(sigma + 1e-3, T / 2.0), im(-T / 2.0, T / 2.0);
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const cplx s(re(rng), im(rng));
        const cplx z = halfstrip_inverse(s, sigma, T);
        CHECK(std::abs(z) < 1.0);
        CHECK(std::abs(halfstrip_inverse(std::conj(s), sigma, T) - std::conj(z)) < 1e-14);
        const double q = (1.0 - std::norm(z)) / ((s.real() - sigma) / (2.0 * T));
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    CHECK(lo > 0.1);
    CHECK(hi < 10.0);
    // boundary goes to the circle
    CHECK(std::abs(halfstrip_inverse(cplx(sigma + 1e-9, 31.0), sigma, T)) > 1.0 - 1e-7);
    CHECK(std::abs(halfstrip_inverse(cplx(7.0, 2.0 * T - 1e-9), sigma, T)) > 1.0 - 1e-7);
    expect_error(ErrorCode::precondition, [] { halfstrip_inverse(cplx(0.4, 0.0), 0.5, 50.0); });
    expect_error(ErrorCode::precondition, [] { halfstrip_inverse(cplx(1.0, 101.0), 0.5, 50.0); });
}

TEST_CASE("transference sandwich") {
    const TransferenceResult r = transference_check(two_s(), 1.0, 0.25, 0.5, 50.0);
    CHECK(r.lower > 0.0);
    CHECK(r.mid > 0.0);
    CHECK(r.upper > 0.0);
    CHECK(std::abs(r.lower - pi / 50.0 * 2.0 * 11.0) < 1e-9);
    CHECK(std::abs(r.upper - pi / 100.0 * 2.0 * 23.0) < 1e-9);
    CHECK(r.lower_constant >= 0.1);
    CHECK(r.lower_constant <= 10.0);
    CHECK(r.upper_constant >= 0.1);
    CHECK(r.upper_constant <= 10.0);

    const TransferenceResult r2 = transference_check(two_s(), 1.0, 0.25, 0.5, 100.0);
    CHECK(std::abs(r2.upper_constant - r.upper_constant) < 0.1 * r.upper_constant);

    const TransferenceResult e = transference_check(two_s(), 1.0, 2.0, 0.5, 50.0);
    CHECK(e.lower == 0.0);
    CHECK(e.mid == 0.0);
    CHECK(e.upper == 0.0);
}
