#include "dsc/symbol_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dsc/error.hpp"

namespace dsc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool on_unit_circle(double r) { return std::abs(r - 1.0) <= 1e-12; }

void classify(PreimageSet& out, cplx z, double r_max, int multiplicity = 1) {
    const double r = std::abs(z);
    if (r <= 1e-300) {
        out.excluded_origin = true;
        return;
    }
    if (on_unit_circle(r)) {
        ++out.excluded_boundary;
        return;
    }
    if (r < r_max && r < 1.0) out.points.push_back({z, multiplicity});
}

std::vector<cplx> series_exp(const std::vector<cplx>& a) {
    // b = exp(a) with a[0] = 0: b_k = (1/k) sum_{j=1}^k j a_j b_{k-j}.
    std::vector<cplx> b(a.size(), 0.0);
    if (b.empty()) return b;
    b[0] = 1.0;
    for (std::size_t k = 1; k < a.size(); ++k) {
        cplx sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) sum += static_cast<double>(j) * a[j] * b[k - j];
        b[k] = sum / static_cast<double>(k);
    }
    return b;
}

} // namespace

// --- AffineMap --------------------------------------------------------------

AffineMap::AffineMap(cplx c0, cplx c1) : c0_(c0), c1_(c1) {
    require(c1 != cplx(0.0), "affine disk map needs a nonzero linear coefficient");
}

PreimageSet AffineMap::preimages(cplx w, double r_max) const {
    PreimageSet out;
    classify(out, (w - c0_) / c1_, r_max);
    return out;
}

std::vector<cplx> AffineMap::taylor(std::size_t order) const {
    std::vector<cplx> c(order + 1, 0.0);
    c[0] = c0_;
    if (order >= 1) c[1] = c1_;
    return c;
}

// --- PolynomialMap ----------------------------------------------------------

PolynomialMap::PolynomialMap(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
    require(c_.size() >= 2, "polynomial disk map needs degree >= 1");
}

cplx PolynomialMap::value(cplx z) const {
    cplx v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
    return v;
}

cplx PolynomialMap::derivative(cplx z) const {
    cplx v = 0.0;
    for (std::size_t k = c_.size() - 1; k >= 1; --k) v = v * z + static_cast<double>(k) * c_[k];
    return v;
}

PreimageSet PolynomialMap::preimages(cplx w, double r_max) const {
    PreimageSet out;
    const std::size_t d = c_.size() - 1;
    std::vector<cplx> p = c_;
    p[0] -= w;
    auto eval = [&](cplx z, cplx& dp) {
        cplx v = 0.0;
        dp = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            dp = dp * z + v;
            v = v * z + *it;
        }
        return v;
    };
    // Aberth iteration from points on a circle enclosing all roots.
    double bound = 0.0;
    for (std::size_t k = 0; k < d; ++k) bound = std::max(bound, std::abs(p[k] / p[d]));
    const double radius = 1.0 + bound;
    std::vector<cplx> z(d);
    for (std::size_t k = 0; k < d; ++k) z[k] = std::polar(0.5 * radius, two_pi * (k + 0.25) / static_cast<double>(d));
    for (int it = 0; it < 500; ++it) {
        double biggest = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            cplx dp;
            const cplx v = eval(z[k], dp);
            if (v == cplx(0.0)) continue;
            const cplx ratio = v / dp;
            cplx repel = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) repel += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repel);
            z[k] -= step;
            biggest = std::max(biggest, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (biggest < 1e-15) break;
    }
    // Merge coincident roots into multiplicities.
    std::vector<bool> used(d, false);
    for (std::size_t k = 0; k < d; ++k) {
        if (used[k]) continue;
        int mult = 1;
        cplx sum = z[k];
        for (std::size_t j = k + 1; j < d; ++j)
            if (!used[j] && std::abs(z[j] - z[k]) < 1e-6 * (1.0 + std::abs(z[k]))) {
                used[j] = true;
                sum += z[j];
                ++mult;
            }
        classify(out, sum / static_cast<double>(mult), r_max, mult);
    }
    return out;
}

double PolynomialMap::deviation_bound(double r) const {
    double s = 0.0, rk = 1.0;
    for (std::size_t k = 1; k < c_.size(); ++k) s += std::abs(c_[k]) * (rk *= r);
    return s;
}

double PolynomialMap::derivative_bound(double r) const {
    double s = 0.0, rk = 1.0;
    for (std::size_t k = 1; k < c_.size(); ++k) {
        s += static_cast<double>(k) * std::abs(c_[k]) * rk;
        rk *= r;
    }
    return s;
}

std::vector<cplx> PolynomialMap::taylor(std::size_t order) const {
    std::vector<cplx> t(order + 1, 0.0);
    for (std::size_t k = 0; k <= order && k < c_.size(); ++k) t[k] = c_[k];
    return t;
}

std::vector<double> PolynomialMap::parameters() const {
    std::vector<double> out;
    for (const auto& c : c_) {
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

// --- MobiusMap --------------------------------------------------------------

MobiusMap::MobiusMap(cplx nu) : nu_(nu) {
    require(nu.real() > 0.5, "Mobius disk map needs Re nu > 1/2");
}

cplx MobiusMap::value(cplx z) const { return ((std::conj(nu_) - 1.0) * z + nu_) / (1.0 - z); }

cplx MobiusMap::derivative(cplx z) const {
    const cplx d = 1.0 - z;
    return (2.0 * nu_.real() - 1.0) / (d * d);
}

PreimageSet MobiusMap::preimages(cplx w, double r_max) const {
    PreimageSet out;
    const cplx denom = w + std::conj(nu_) - 1.0;
    if (denom == cplx(0.0)) return out;
    classify(out, (w - nu_) / denom, r_max);
    return out;
}

double MobiusMap::deviation_bound(double r) const {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return std::abs(2.0 * nu_.real() - 1.0) * r / (1.0 - r);
}

double MobiusMap::derivative_bound(double r) const {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return std::abs(2.0 * nu_.real() - 1.0) / ((1.0 - r) * (1.0 - r));
}

std::vector<cplx> MobiusMap::taylor(std::size_t order) const {
    std::vector<cplx> c(order + 1, 2.0 * nu_.real() - 1.0);
    c[0] = nu_;
    return c;
}

// --- ExpCuspMap -------------------------------------------------------------

cplx ExpCuspMap::value(cplx z) const { return std::exp(-(1.0 + z) / (1.0 - z)); }

cplx ExpCuspMap::derivative(cplx z) const {
    const cplx d = 1.0 - z;
    return -2.0 * value(z) / (d * d);
}

cplx ExpCuspMap::preimage(double b, double theta, long n) {
    const double alpha = theta + two_pi * static_cast<double>(n);
    return cplx(1.0 - b, alpha) / cplx(-b - 1.0, alpha);
}

PreimageSet ExpCuspMap::preimages(cplx w, double r_max) const {
    PreimageSet out;
    if (w == cplx(0.0)) return out;
    const double b = -std::log(std::abs(w));
    if (b <= 0.0) {
        // |w| >= 1 is not attained in the open disk; |w| = 1 comes from |z| = 1.
        if (on_unit_circle(std::abs(w))) out.excluded_boundary = 1;
        return out;
    }
    const double theta = std::arg(w);
    const bool infinite = r_max >= 1.0;
    constexpr long cap = 10'000'000;
    // |z_n| increases with |theta + 2 pi n|, so walk outward from n = 0 in both directions.
    auto walk = [&](long start, long step) {
        for (long n = start; std::labs(n) <= cap; n += step) {
            const cplx z = preimage(b, theta, n);
            if (std::abs(z) >= r_max) return;
            classify(out, z, r_max);
        }
        out.truncated = true;
    };
    walk(0, 1);
    walk(-1, -1);
    if (infinite) out.truncated = true;
    return out;
}

double ExpCuspMap::deviation_bound(double r) const {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(-1.0) * std::expm1(2.0 * r / (1.0 - r));
}

double ExpCuspMap::derivative_bound(double r) const {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 / ((1.0 - r) * (1.0 - r));
}

std::vector<cplx> ExpCuspMap::taylor(std::size_t order) const {
    // g(z) = e^{-1} exp(-2z / (1 - z)), and -2z/(1 - z) = -2 sum_{k>=1} z^k.
    std::vector<cplx> a(order + 1, -2.0);
    a[0] = 0.0;
    auto b = series_exp(a);
    for (auto& c : b) c *= std::exp(-1.0);
    return b;
}

// --- PeriodicSymbol ---------------------------------------------------------

PeriodicSymbol::PeriodicSymbol(std::shared_ptr<const DiskMap> g, Frequency base, cplx rotation)
    : g_(std::move(g)), base_(base), rotation_(rotation),
      log_base_(std::log(static_cast<double>(base))) {
    require(g_ != nullptr, "periodic symbol needs a disk map");
    require(base >= 2, "periodic symbol base must be >= 2");
    require(std::abs(std::abs(rotation) - 1.0) <= 1e-12, "rotation must be unimodular");
}

double PeriodicSymbol::period() const noexcept { return two_pi / log_base_; }

cplx PeriodicSymbol::operator()(cplx s) const { return g_->value(rotation_ * std::exp(-s * log_base_)); }

std::pair<cplx, cplx> PeriodicSymbol::value_and_derivative(cplx s) const {
    const cplx z = rotation_ * std::exp(-s * log_base_);
    return {g_->value(z), -log_base_ * z * g_->derivative(z)};
}

double PeriodicSymbol::tail_bound(double sigma) const {
    if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
    return g_->deviation_bound(std::exp(-sigma * log_base_));
}

double PeriodicSymbol::derivative_bound(double sigma) const {
    if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
    const double r = std::exp(-sigma * log_base_);
    return log_base_ * r * g_->derivative_bound(r);
}

PeriodicSymbol PeriodicSymbol::twisted(const Character& chi) const {
    cplx u = rotation_ * chi(base_);
    return PeriodicSymbol(g_, base_, u / std::abs(u));
}

DirichletPolynomial PeriodicSymbol::expansion(std::size_t order) const {
    const auto c = g_->taylor(order);
    DirichletPolynomial::Terms terms;
    Frequency n = 1;
    cplx u = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        terms.emplace(n, c[k] * u);
        if (n > (Frequency{1} << 62) / base_) break;
        n *= base_;
        u *= rotation_;
    }
    return DirichletPolynomial(std::move(terms));
}

// --- SymbolFunction ---------------------------------------------------------

SymbolFunction::SymbolFunction(DirichletPolynomial f) : f_(std::move(f)) {
    const auto& poly = std::get<DirichletPolynomial>(f_);
    constant_ = poly.at_infinity();
    for (const auto& [n, c] : poly.terms())
        if (n >= 2) log_terms_.emplace_back(std::log(static_cast<double>(n)), c);
}

SymbolFunction::SymbolFunction(PeriodicSymbol f) : f_(std::move(f)) {}

cplx SymbolFunction::operator()(cplx s) const { return value_and_derivative(s).first; }

std::pair<cplx, cplx> SymbolFunction::value_and_derivative(cplx s) const {
    if (const auto* p = periodic()) return p->value_and_derivative(s);
    cplx value = constant_;
    cplx deriv = 0.0;
    for (const auto& [log_n, c] : log_terms_) {
        const cplx term = c * std::exp(-s * log_n);
        value += term;
        deriv -= log_n * term;
    }
    return {value, deriv};
}

cplx SymbolFunction::at_infinity() const {
    return std::visit([](const auto& f) { return f.at_infinity(); }, f_);
}

double SymbolFunction::tail_bound(double sigma) const {
    return std::visit([sigma](const auto& f) { return f.tail_bound(sigma); }, f_);
}

double SymbolFunction::derivative_bound(double sigma) const {
    return std::visit([sigma](const auto& f) { return f.derivative_bound(sigma); }, f_);
}

std::optional<double> SymbolFunction::period() const {
    if (const auto* p = periodic()) return p->period();
    const Frequency b = common_base(*polynomial());
    if (b == 0) return std::nullopt;
    return two_pi / std::log(static_cast<double>(b));
}

std::vector<Frequency> SymbolFunction::primes() const {
    if (const auto* p = periodic()) {
        std::vector<Frequency> out;
        for (const auto& [q, e] : factorize(p->base())) out.push_back(q);
        return out;
    }
    return support_primes(*polynomial());
}

SymbolFunction SymbolFunction::twisted(const Character& chi) const {
    if (const auto* p = periodic()) return SymbolFunction(p->twisted(chi));
    return SymbolFunction(twist(*polynomial(), chi));
}

Frequency common_base(const DirichletPolynomial& f) {
    const Frequency q0 = f.min_nonconstant_frequency();
    if (q0 == 0) return 0;
    auto is_power_of = [](Frequency n, Frequency b) {
        while (n % b == 0) n /= b;
        return n == 1;
    };
    Frequency base = q0;
    for (int j = 62; j >= 2; --j) {
        const auto b = static_cast<Frequency>(std::llround(std::pow(static_cast<double>(q0), 1.0 / j)));
        if (b >= 2 && is_power_of(q0, b)) {
            base = b;
            break;
        }
    }
    for (const auto& [n, c] : f.terms())
        if (n >= 2 && !is_power_of(n, base)) return 0;
    return base;
}

std::optional<PeriodicSymbol> periodic_form(const DirichletPolynomial& f) {
    const Frequency b = common_base(f);
    if (b == 0) return std::nullopt;
    std::vector<cplx> c{f.at_infinity()};
    for (const auto& [n, a] : f.terms()) {
        if (n < 2) continue;
        std::size_t k = 0;
        for (Frequency m = n; m > 1; m /= b) ++k;
        if (c.size() <= k) c.resize(k + 1, 0.0);
        c[k] = a;
    }
    if (c.size() == 2) return PeriodicSymbol(std::make_shared<AffineMap>(c[0], c[1]), b);
    return PeriodicSymbol(std::make_shared<PolynomialMap>(c), b);
}

double zero_free_abscissa(const SymbolFunction& phi, cplx w) {
    const double gap = std::abs(w - phi.at_infinity());
    if (gap == 0.0)
        throw Error(ErrorCode::excluded_point, "w equals phi(+inf); the counting function is undefined there");
    const double target = 0.5 * gap;
    if (phi.tail_bound(0.0) < target) return 0.0;
    double hi = 1.0;
    while (phi.tail_bound(hi) >= target) {
        hi *= 2.0;
        require(hi < 1e6, "zero_free_abscissa: tail bound does not decay");
    }
    double lo = 0.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (phi.tail_bound(mid) < target ? hi : lo) = mid;
    }
    return hi;
}

} // namespace dsc
