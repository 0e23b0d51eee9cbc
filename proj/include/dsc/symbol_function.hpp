#pragma once

// Holomorphic symbols phi on C_0 that the zero finder and the counting
// functions operate on: Dirichlet polynomials, and periodic symbols
// phi(s) = g(u * q^{-s}) built from a disk map g with explicit preimages.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dsc/series.hpp"

namespace dsc {

struct DiskPreimage {
    cplx z;
    int multiplicity = 1;
};

struct PreimageSet {
    std::vector<DiskPreimage> points; // 0 < |z| < r_max
    bool excluded_origin = false;     // w = g(0) has the preimage z = 0
    int excluded_boundary = 0;        // preimages with |z| >= 1 that were dropped
    bool truncated = false;           // the preimage set is infinite inside |z| < 1
};

/// Holomorphic map g on the unit disk with an explicit inverse.
class DiskMap {
public:
    virtual ~DiskMap() = default;
    virtual std::string kind() const = 0;
    virtual cplx value(cplx z) const = 0;
    virtual cplx derivative(cplx z) const = 0;
    /// All preimages of w with 0 < |z| < r_max (r_max <= 1).
    virtual PreimageSet preimages(cplx w, double r_max) const = 0;
    /// sup over |z| <= r of |g(z) - g(0)|.
    virtual double deviation_bound(double r) const = 0;
    /// sup over |z| <= r of |g'(z)|.
    virtual double derivative_bound(double r) const = 0;
    /// Taylor coefficients c_0..c_order.
    virtual std::vector<cplx> taylor(std::size_t order) const = 0;
    /// Parameters for serialization (kind-specific).
    virtual std::vector<double> parameters() const = 0;
};

/// g(z) = c0 + c1 z.
class AffineMap final : public DiskMap {
public:
    AffineMap(cplx c0, cplx c1);
    std::string kind() const override { return "affine"; }
    cplx value(cplx z) const override { return c0_ + c1_ * z; }
    cplx derivative(cplx) const override { return c1_; }
    PreimageSet preimages(cplx w, double r_max) const override;
    double deviation_bound(double r) const override { return std::abs(c1_) * r; }
    double derivative_bound(double) const override { return std::abs(c1_); }
    std::vector<cplx> taylor(std::size_t order) const override;
    std::vector<double> parameters() const override {
        return {c0_.real(), c0_.imag(), c1_.real(), c1_.imag()};
    }

private:
    cplx c0_, c1_;
};

/// g(z) = c_0 + c_1 z + ... + c_d z^d; preimages by simultaneous (Aberth) iteration.
class PolynomialMap final : public DiskMap {
public:
    explicit PolynomialMap(std::vector<cplx> coeffs);
    std::string kind() const override { return "polynomial"; }
    const std::vector<cplx>& coefficients() const noexcept { return c_; }
    cplx value(cplx z) const override;
    cplx derivative(cplx z) const override;
    PreimageSet preimages(cplx w, double r_max) const override;
    double deviation_bound(double r) const override;
    double derivative_bound(double r) const override;
    std::vector<cplx> taylor(std::size_t order) const override;
    std::vector<double> parameters() const override;

private:
    std::vector<cplx> c_;
};

/// g_nu(z) = ((conj(nu) - 1) z + nu) / (1 - z), mapping D onto C_{1/2} for Re nu > 1/2.
class MobiusMap final : public DiskMap {
public:
    explicit MobiusMap(cplx nu);
    std::string kind() const override { return "mobius"; }
    cplx nu() const noexcept { return nu_; }
    cplx value(cplx z) const override;
    cplx derivative(cplx z) const override;
    PreimageSet preimages(cplx w, double r_max) const override;
    double deviation_bound(double r) const override;
    double derivative_bound(double r) const override;
    std::vector<cplx> taylor(std::size_t order) const override;
    std::vector<double> parameters() const override { return {nu_.real(), nu_.imag()}; }

private:
    cplx nu_;
};

/// g(z) = exp(-(1 + z) / (1 - z)); infinitely many preimages accumulating at z = 1.
class ExpCuspMap final : public DiskMap {
public:
    std::string kind() const override { return "expcusp"; }
    cplx value(cplx z) const override;
    cplx derivative(cplx z) const override;
    PreimageSet preimages(cplx w, double r_max) const override;
    double deviation_bound(double r) const override;
    double derivative_bound(double r) const override;
    std::vector<cplx> taylor(std::size_t order) const override;
    std::vector<double> parameters() const override { return {}; }

    /// z_n = (1 - b + i(theta + 2 pi n)) / (i(theta + 2 pi n) - b - 1) for w = e^{-b} e^{i theta}.
    static cplx preimage(double b, double theta, long n);
};

/// phi(s) = g(u q^{-s}), vertically periodic with period 2 pi / log q.
class PeriodicSymbol {
public:
    PeriodicSymbol(std::shared_ptr<const DiskMap> g, Frequency base = 2, cplx rotation = 1.0);

    const DiskMap& map() const noexcept { return *g_; }
    std::shared_ptr<const DiskMap> map_ptr() const noexcept { return g_; }
    Frequency base() const noexcept { return base_; }
    cplx rotation() const noexcept { return rotation_; }
    double log_base() const noexcept { return log_base_; }
    double period() const noexcept;

    cplx operator()(cplx s) const;
    std::pair<cplx, cplx> value_and_derivative(cplx s) const;
    cplx at_infinity() const { return g_->value(0.0); }
    double tail_bound(double sigma) const;
    double derivative_bound(double sigma) const;
    PeriodicSymbol twisted(const Character& chi) const;
    /// Dirichlet expansion sum_k c_k u^k q^{-ks}, k <= order.
    DirichletPolynomial expansion(std::size_t order) const;

private:
    std::shared_ptr<const DiskMap> g_;
    Frequency base_;
    cplx rotation_;
    double log_base_;
};

/// A symbol phi for counting and zero localization (value semantics).
class SymbolFunction {
public:
    SymbolFunction(DirichletPolynomial f);
    SymbolFunction(PeriodicSymbol f);

    cplx operator()(cplx s) const;
    std::pair<cplx, cplx> value_and_derivative(cplx s) const;
    cplx at_infinity() const;
    double tail_bound(double sigma) const;
    double derivative_bound(double sigma) const;
    /// Vertical period when one is known (periodic symbols, single-base polynomials).
    std::optional<double> period() const;
    /// Primes on which twisting by a character acts.
    std::vector<Frequency> primes() const;
    SymbolFunction twisted(const Character& chi) const;

    const DirichletPolynomial* polynomial() const noexcept { return std::get_if<DirichletPolynomial>(&f_); }
    const PeriodicSymbol* periodic() const noexcept { return std::get_if<PeriodicSymbol>(&f_); }

private:
    std::variant<DirichletPolynomial, PeriodicSymbol> f_;
    std::vector<std::pair<double, cplx>> log_terms_; // (log n, a_n), n >= 2
    cplx constant_ = 0.0;
};

/// Smallest b >= 2 with every frequency >= 2 of f a power of b; 0 if none exists.
Frequency common_base(const DirichletPolynomial& f);

/// f(s) = P(b^{-s}) as a periodic symbol when f has a common base b.
std::optional<PeriodicSymbol> periodic_form(const DirichletPolynomial& f);

/// Smallest sigma (to 1e-9) with tail_bound(sigma) < |w - phi(+inf)| / 2, so that
/// phi - w has no zeros on Re s >= sigma. Throws excluded_point when w = phi(+inf).
double zero_free_abscissa(const SymbolFunction& phi, cplx w);

} // namespace dsc
