#include "dsc/series.hpp"

#include <algorithm>
#include <cmath>

#include "dsc/error.hpp"

namespace dsc {

namespace {

const std::vector<Frequency>& small_primes() {
    static const std::vector<Frequency> primes = primes_up_to(1'000'000);
    return primes;
}

void add_term(DirichletPolynomial::Terms& terms, Frequency n, cplx c) {
    auto [it, inserted] = terms.try_emplace(n, c);
    if (!inserted) it->second += c;
}

DirichletPolynomial::Terms drop_zeros(DirichletPolynomial::Terms terms) {
    std::erase_if(terms, [](const auto& kv) { return kv.second == cplx(0.0); });
    return terms;
}

DirichletPolynomial scale_frequencies(const DirichletPolynomial& f, Frequency m) {
    DirichletPolynomial::Terms out;
    for (const auto& [n, c] : f.terms()) out.emplace(n * m, c);
    return DirichletPolynomial(std::move(out));
}

} // namespace

DirichletPolynomial::DirichletPolynomial(Terms terms) : terms_(drop_zeros(std::move(terms))) {
    require(terms_.empty() || terms_.begin()->first >= 1, "Dirichlet frequencies must be >= 1");
}

DirichletPolynomial::DirichletPolynomial(std::initializer_list<std::pair<const Frequency, cplx>> terms)
    : DirichletPolynomial(Terms(terms)) {}

DirichletPolynomial DirichletPolynomial::constant(cplx c) { return DirichletPolynomial({{1, c}}); }

DirichletPolynomial DirichletPolynomial::monomial(Frequency n, cplx c) {
    return DirichletPolynomial({{n, c}});
}

cplx DirichletPolynomial::coeff(Frequency n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

Frequency DirichletPolynomial::max_frequency() const noexcept {
    return terms_.empty() ? 0 : terms_.rbegin()->first;
}

Frequency DirichletPolynomial::min_nonconstant_frequency() const noexcept {
    auto it = terms_.upper_bound(1);
    return it == terms_.end() ? 0 : it->first;
}

cplx DirichletPolynomial::operator()(cplx s) const {
    cplx sum = 0.0;
    for (const auto& [n, c] : terms_) {
        if (n == 1)
            sum += c;
        else
            sum += c * std::exp(-s * std::log(static_cast<double>(n)));
    }
    return sum;
}

double DirichletPolynomial::tail_bound(double sigma) const {
    double sum = 0.0;
    for (const auto& [n, c] : terms_)
        if (n >= 2) sum += std::abs(c) * std::pow(static_cast<double>(n), -sigma);
    return sum;
}

double DirichletPolynomial::derivative_bound(double sigma) const {
    double sum = 0.0;
    for (const auto& [n, c] : terms_) {
        if (n < 2) continue;
        const double x = static_cast<double>(n);
        sum += std::abs(c) * std::log(x) * std::pow(x, -sigma);
    }
    return sum;
}

DirichletPolynomial operator+(const DirichletPolynomial& f, const DirichletPolynomial& g) {
    auto terms = f.terms();
    for (const auto& [n, c] : g.terms()) add_term(terms, n, c);
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial operator-(const DirichletPolynomial& f, const DirichletPolynomial& g) {
    return f + cplx(-1.0) * g;
}

DirichletPolynomial operator*(cplx c, const DirichletPolynomial& f) {
    DirichletPolynomial::Terms terms;
    for (const auto& [n, a] : f.terms()) terms.emplace(n, c * a);
    return DirichletPolynomial(std::move(terms));
}

double max_coeff_distance(const DirichletPolynomial& f, const DirichletPolynomial& g) {
    double d = 0.0;
    for (const auto& [n, c] : (f - g).terms()) d = std::max(d, std::abs(c));
    return d;
}

// ---------------------------------------------------------------------------

std::vector<Frequency> primes_up_to(Frequency n) {
    std::vector<Frequency> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (Frequency p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (Frequency q = p * p; q <= n; q += p) composite[q] = true;
    }
    return out;
}

std::vector<Frequency> first_primes(std::size_t count) {
    const auto& cached = small_primes();
    if (count <= cached.size()) return {cached.begin(), cached.begin() + count};
    Frequency bound = 2 * cached.back();
    while (true) {
        auto primes = primes_up_to(bound);
        if (primes.size() >= count) {
            primes.resize(count);
            return primes;
        }
        bound *= 2;
    }
}

std::vector<std::pair<Frequency, unsigned>> factorize(Frequency n) {
    require(n >= 1, "factorize: n >= 1");
    std::vector<std::pair<Frequency, unsigned>> out;
    auto strip = [&](Frequency p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    for (Frequency p : small_primes()) {
        if (p * p > n) break;
        strip(p);
    }
    if (n > 1) {
        const Frequency last = small_primes().back();
        for (Frequency p = last + 2; p * p <= n; p += 2) strip(p);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<Frequency> support_primes(const DirichletPolynomial& f) {
    std::vector<Frequency> primes;
    for (const auto& [n, c] : f.terms())
        for (const auto& [p, e] : factorize(n)) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

// ---------------------------------------------------------------------------

Character::Character(std::map<Frequency, cplx> prime_values) : values_(std::move(prime_values)) {
    for (const auto& [p, v] : values_) {
        require(std::abs(std::abs(v) - 1.0) <= 1e-12, "character values must be unimodular");
        require(p >= 2 && factorize(p).size() == 1 && factorize(p)[0].second == 1,
                "character support must consist of primes");
    }
}

Character Character::vertical(double tau, const std::vector<Frequency>& primes) {
    std::map<Frequency, cplx> values;
    for (Frequency p : primes)
        values.emplace(p, std::polar(1.0, -tau * std::log(static_cast<double>(p))));
    return Character(std::move(values));
}

cplx Character::at_prime(Frequency p) const {
    auto it = values_.find(p);
    return it == values_.end() ? cplx(1.0) : it->second;
}

cplx Character::operator()(Frequency n) const {
    cplx v = 1.0;
    for (const auto& [p, e] : factorize(n)) {
        const cplx c = at_prime(p);
        for (unsigned k = 0; k < e; ++k) v *= c;
    }
    return v;
}

Character Character::pow(unsigned k) const {
    std::map<Frequency, cplx> values;
    for (const auto& [p, v] : values_) {
        cplx r = 1.0;
        for (unsigned i = 0; i < k; ++i) r *= v;
        values.emplace(p, r / std::abs(r));
    }
    return Character(std::move(values));
}

// ---------------------------------------------------------------------------

const char* to_string(SymbolClass c) noexcept {
    switch (c) {
    case SymbolClass::G0: return "G0";
    case SymbolClass::Gge1: return "Gge1";
    case SymbolClass::untagged: return "untagged";
    }
    return "untagged";
}

SymbolClass symbol_class_from_string(const std::string& s) {
    if (s == "G0") return SymbolClass::G0;
    if (s == "Gge1") return SymbolClass::Gge1;
    if (s == "untagged" || s.empty()) return SymbolClass::untagged;
    throw Error(ErrorCode::config, "unknown symbol class '" + s + "'");
}

namespace {

// min of Re phi over a geometric-in-sigma, uniform-in-t grid of C_0.
double min_real_part_on_grid(const DirichletPolynomial& phi) {
    const Frequency base = std::max<Frequency>(phi.min_nonconstant_frequency(), 2);
    const double window = 2.0 * std::acos(-1.0) / std::log(static_cast<double>(base));
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 48; ++i) {
        const double sigma = 1e-6 * std::pow(5e7, i / 48.0);
        for (int j = 0; j < 256; ++j) {
            const double t = window * j / 256.0;
            lowest = std::min(lowest, phi(cplx(sigma, t)).real());
        }
    }
    return lowest;
}

} // namespace

Symbol::Symbol(unsigned c0, DirichletPolynomial phi, SymbolClass tag)
    : c0_(c0), phi_(std::move(phi)), tag_(tag) {
    if (tag_ == SymbolClass::G0) {
        if (c0_ != 0) throw Error(ErrorCode::class_violation, "G0 symbols have c0 = 0");
        const double guaranteed = phi_.at_infinity().real() - phi_.tail_bound(0.0);
        if (guaranteed <= 0.5 && min_real_part_on_grid(phi_) <= 0.5)
            throw Error(ErrorCode::class_violation, "phi(C_0) is not contained in C_{1/2}");
    } else if (tag_ == SymbolClass::Gge1) {
        if (c0_ < 1) throw Error(ErrorCode::class_violation, "Gge1 symbols have c0 >= 1");
        const bool imaginary_constant =
            phi_.size() <= 1 && phi_.min_nonconstant_frequency() == 0 && phi_.at_infinity().real() == 0.0;
        const double guaranteed = phi_.at_infinity().real() - phi_.tail_bound(0.0);
        if (!imaginary_constant && guaranteed < 0.0 && min_real_part_on_grid(phi_) < 0.0)
            throw Error(ErrorCode::class_violation, "phi(C_0) is not contained in C_0");
    }
}

// ---------------------------------------------------------------------------

cplx eval(const DirichletPolynomial& f, cplx s) { return f(s); }

DirichletPolynomial derivative(const DirichletPolynomial& f) {
    DirichletPolynomial::Terms terms;
    for (const auto& [n, c] : f.terms())
        if (n >= 2) terms.emplace(n, -c * std::log(static_cast<double>(n)));
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial shift(const DirichletPolynomial& f, double sigma) {
    DirichletPolynomial::Terms terms;
    for (const auto& [n, c] : f.terms())
        terms.emplace(n, c * std::pow(static_cast<double>(n), -sigma));
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial twist(const DirichletPolynomial& f, const Character& chi) {
    DirichletPolynomial::Terms terms;
    for (const auto& [n, c] : f.terms()) terms.emplace(n, c * chi(n));
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial truncate(const DirichletPolynomial& f, Frequency n_max) {
    DirichletPolynomial::Terms terms;
    for (const auto& [n, c] : f.terms())
        if (n <= n_max) terms.emplace(n, c);
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial multiply_truncated(const DirichletPolynomial& f, const DirichletPolynomial& g,
                                       Frequency n_max) {
    require(n_max >= 1, "multiply_truncated: N >= 1");
    DirichletPolynomial::Terms terms;
    for (const auto& [n, a] : f.terms()) {
        if (n > n_max) break;
        const Frequency limit = n_max / n;
        for (const auto& [m, b] : g.terms()) {
            if (m > limit) break;
            add_term(terms, n * m, a * b);
        }
    }
    return DirichletPolynomial(std::move(terms));
}

DirichletPolynomial exp_truncated(const DirichletPolynomial& g, Frequency n_max) {
    require(n_max >= 1, "exp_truncated: N >= 1");
    require(g.at_infinity() == cplx(0.0), "exp_truncated: g(+inf) must be 0 (factor it out)");
    DirichletPolynomial result = DirichletPolynomial::constant(1.0);
    DirichletPolynomial power = result;
    // g^k has minimal frequency >= 2^k, so the loop ends once it passes n_max.
    for (unsigned k = 1; !power.empty(); ++k) {
        power = cplx(1.0 / k) * multiply_truncated(power, g, n_max);
        result = result + power;
    }
    return result;
}

DirichletPolynomial compose_truncated(const DirichletPolynomial& f, const Symbol& psi, Frequency n_max) {
    require(n_max >= 1, "compose_truncated: N >= 1");
    const cplx a1 = psi.phi().at_infinity();
    const DirichletPolynomial tail = psi.phi() - DirichletPolynomial::constant(a1);
    DirichletPolynomial result;
    for (const auto& [n, c] : f.terms()) {
        const double log_n = std::log(static_cast<double>(n));
        // Frequency multiplier n^{c0}; terms whose multiplier already exceeds N vanish.
        Frequency multiplier = 1;
        bool overflow = false;
        for (unsigned k = 0; k < psi.c0(); ++k) {
            if (multiplier > n_max / n) {
                overflow = true;
                break;
            }
            multiplier *= n;
        }
        if (overflow) continue;
        const cplx scale = c * std::exp(-a1 * log_n);
        DirichletPolynomial factor = exp_truncated(cplx(-log_n) * tail, n_max / multiplier);
        result = result + scale * scale_frequencies(factor, multiplier);
    }
    return result;
}

Symbol twist(const Symbol& psi, const Character& chi) {
    return Symbol(psi.c0(), twist(psi.phi(), chi), psi.class_tag());
}

DirichletPolynomial gh_test_series(double a, std::size_t count) {
    DirichletPolynomial::Terms terms;
    for (Frequency p : first_primes(count)) {
        const double x = static_cast<double>(p);
        terms.emplace(p, 1.0 / (std::sqrt(x) * std::pow(std::log(x), 1.0 + 0.5 * a)));
    }
    return DirichletPolynomial(std::move(terms));
}

} // namespace dsc
