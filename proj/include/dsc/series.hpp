#pragma once

// Dirichlet polynomials, characters on the infinite polytorus, and
// composition symbols psi(s) = c0 * s + phi(s).

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace dsc {

using cplx = std::complex<double>;
using Frequency = std::uint64_t;

inline constexpr Frequency default_truncation = 10000;

/// Finite Dirichlet series sum a_n n^{-s} with sparse integer frequencies n >= 1.
/// Zero coefficients are never stored.
class DirichletPolynomial {
public:
    using Terms = std::map<Frequency, cplx>;

    DirichletPolynomial() = default;
    explicit DirichletPolynomial(Terms terms);
    DirichletPolynomial(std::initializer_list<std::pair<const Frequency, cplx>> terms);

    static DirichletPolynomial constant(cplx c);
    static DirichletPolynomial monomial(Frequency n, cplx c = 1.0);

    const Terms& terms() const noexcept { return terms_; }
    cplx coeff(Frequency n) const;
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    Frequency max_frequency() const noexcept;
    /// Smallest frequency >= 2 in the support, 0 if there is none.
    Frequency min_nonconstant_frequency() const noexcept;

    /// phi(+inf), the coefficient at frequency 1.
    cplx at_infinity() const { return coeff(1); }
    /// The abscissa of uniform convergence of a polynomial is -inf.
    static constexpr double sigma_u = -std::numeric_limits<double>::infinity();

    cplx operator()(cplx s) const;

    /// sup over Re s >= sigma of |f(s) - f(+inf)|, bounded by sum_{n>=2} |a_n| n^{-sigma}.
    double tail_bound(double sigma) const;
    /// sup over Re s >= sigma of |f'(s)|, bounded by sum |a_n| log(n) n^{-sigma}.
    double derivative_bound(double sigma) const;

    friend DirichletPolynomial operator+(const DirichletPolynomial& f, const DirichletPolynomial& g);
    friend DirichletPolynomial operator-(const DirichletPolynomial& f, const DirichletPolynomial& g);
    friend DirichletPolynomial operator*(cplx c, const DirichletPolynomial& f);
    friend bool operator==(const DirichletPolynomial&, const DirichletPolynomial&) = default;

private:
    Terms terms_;
};

/// Largest coefficient difference between two polynomials.
double max_coeff_distance(const DirichletPolynomial& f, const DirichletPolynomial& g);

/// Point of T^infinity, stored on finitely many primes; chi(p) = 1 off the support.
class Character {
public:
    Character() = default;
    explicit Character(std::map<Frequency, cplx> prime_values);

    /// Vertical translation chi(n) = n^{-i tau}, restricted to the given primes.
    static Character vertical(double tau, const std::vector<Frequency>& primes);

    const std::map<Frequency, cplx>& values() const noexcept { return values_; }
    cplx at_prime(Frequency p) const;
    /// Completely multiplicative extension over the factorization of n.
    cplx operator()(Frequency n) const;
    Character pow(unsigned k) const;

private:
    std::map<Frequency, cplx> values_;
};

enum class SymbolClass { G0, Gge1, untagged };

const char* to_string(SymbolClass c) noexcept;
SymbolClass symbol_class_from_string(const std::string& s);

/// psi(s) = c0 * s + phi(s).
class Symbol {
public:
    /// Validates the class tag; G0 requires c0 = 0 and Re phi > 1/2 on a
    /// sample grid in C_0, Gge1 requires c0 >= 1 and Re phi >= 0 there.
    Symbol(unsigned c0, DirichletPolynomial phi, SymbolClass tag = SymbolClass::untagged);

    unsigned c0() const noexcept { return c0_; }
    const DirichletPolynomial& phi() const noexcept { return phi_; }
    SymbolClass class_tag() const noexcept { return tag_; }
    cplx phi_at_infinity() const { return phi_.at_infinity(); }

    cplx operator()(cplx s) const { return static_cast<double>(c0_) * s + phi_(s); }

private:
    unsigned c0_;
    DirichletPolynomial phi_;
    SymbolClass tag_;
};

// Primes and factorization.
std::vector<Frequency> primes_up_to(Frequency n);
std::vector<Frequency> first_primes(std::size_t count);
/// (prime, exponent) pairs.
std::vector<std::pair<Frequency, unsigned>> factorize(Frequency n);
/// Primes dividing some frequency >= 2 of the support.
std::vector<Frequency> support_primes(const DirichletPolynomial& f);

// Operations.
cplx eval(const DirichletPolynomial& f, cplx s);
DirichletPolynomial derivative(const DirichletPolynomial& f);
DirichletPolynomial shift(const DirichletPolynomial& f, double sigma);
DirichletPolynomial twist(const DirichletPolynomial& f, const Character& chi);
DirichletPolynomial truncate(const DirichletPolynomial& f, Frequency n_max);
DirichletPolynomial multiply_truncated(const DirichletPolynomial& f, const DirichletPolynomial& g,
                                       Frequency n_max);
/// exp(g) truncated at n_max; requires g(+inf) = 0.
DirichletPolynomial exp_truncated(const DirichletPolynomial& g, Frequency n_max);
/// Coefficients of f o psi up to frequency n_max.
DirichletPolynomial compose_truncated(const DirichletPolynomial& f, const Symbol& psi,
                                      Frequency n_max = default_truncation);
/// Twist of a symbol: c0 s + phi_chi.
Symbol twist(const Symbol& psi, const Character& chi);
/// sum_{j <= count} (sqrt(p_j) log(p_j)^{1 + a/2})^{-1} p_j^{-s}.
DirichletPolynomial gh_test_series(double a, std::size_t count);

} // namespace dsc
