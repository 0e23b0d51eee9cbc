#pragma once

// Weighted Dirichlet spaces D_a: norms, reproducing kernels, the J_a series
// and the change-of-variables formula for composition operators.

#include <string>
#include <vector>

#include "dsc/symbol_function.hpp"

namespace dsc {

/// Weight exponent a <= 1 of D_a (norm weight log(n)^a).
struct SpaceWeight {
    double a;

    explicit SpaceWeight(double a);
    /// "bergman" (a < 0), "hardy" (a = 0) or "dirichlet" (a > 0).
    std::string kind() const;
};

/// ||f||_a = sqrt(|a_1|^2 + sum_{n >= 2} |a_n|^2 log(n)^a).
double norm_Da(const DirichletPolynomial& f, double a);

/// <f, g>_a = a_1 conj(b_1) + sum_{n >= 2} a_n conj(b_n) log(n)^a.
cplx inner_product(const DirichletPolynomial& f, const DirichletPolynomial& g, double a);

/// lim (1 / 2T) int_{-T}^{T} |f'(sigma + it)|^2 dt = sum |a_n|^2 log(n)^2 n^{-2 sigma}.
double parseval_mean(const DirichletPolynomial& f, double sigma);
/// Finite-window mean (1 / 2T) int_{-T}^{T} |f'(sigma + it)|^2 dt by quadrature.
double vertical_mean_derivative(const DirichletPolynomial& f, double sigma, double T);

/// Norm from the Littlewood-Paley form: the t-mean is exact (parseval_mean) and
/// the sigma-integral over (0, inf) is adaptive.
double littlewood_paley_norm(const DirichletPolynomial& f, double a);

struct SeriesValue {
    cplx value = 0.0;
    double tail_bound = 0.0; // bound (or estimate) of the neglected remainder
};

/// k_{s,a}(w) = 1 + sum_{n >= 2} log(n)^{-a} n^{-conj(s) - w}, partial sum to N plus tail bound.
SeriesValue kernel_eval(cplx s, double a, cplx w, std::size_t N = 100000);
/// ||k_{s,a}||^2 = k_{s,a}(s): partial sum plus Euler-Maclaurin tail.
SeriesValue kernel_norm_sq(cplx s, double a, std::size_t N = 10000);
double kernel_norm(cplx s, double a, std::size_t N = 10000);
/// Coefficients of k_{s,a} up to N as a Dirichlet polynomial.
DirichletPolynomial kernel_polynomial(cplx s, double a, Frequency N);

struct JaValue {
    cplx value = 0.0;     // J_a(w) = sum_n log(n)^{1-a} n^{-w}
    cplx main_term = 0.0; // Gamma(2 - a) / (w - 1)^{2 - a}
    cplx Ea = 0.0;        // value - main_term
    double tail_bound = 0.0;
};

JaValue Ja_eval(cplx w, double a, std::size_t N = 10000);

// -- change of variables ---------------------------------------------------------

struct StantonSide {
    double value = 0.0;
    double error = 0.0; // truncation tail (lhs) or quadrature error (rhs)
    bool divergent = false;
    std::vector<std::string> diagnostics;
};

struct StantonResult {
    StantonSide lhs, rhs;
    double rel_err = 0.0;
};

/// Coefficients c_m of f(phi(s)) = sum_m c_m q^{-ms} for a periodic symbol
/// phi(s) = g(u q^{-s}), m = 0..order.
std::vector<cplx> composed_power_series(const DirichletPolynomial& f, const PeriodicSymbol& phi, std::size_t order);

/// ||f o phi||_a^2 from the composed coefficients. Periodic and single-base
/// symbols use the power series in q^{-s} (with a fitted power-law tail);
/// other polynomials use compose_truncated up to `order`.
StantonSide stanton_lhs(const DirichletPolynomial& f, const SymbolFunction& phi, double a, std::size_t order = 1 << 22);

/// |f(phi(+inf))|^2 + 2^{1-a} / (Gamma(2-a) pi) int_{C_{1/2}} |f'(w)|^2 M_{phi,1-a}(w) dA(w).
StantonSide stanton_rhs(const DirichletPolynomial& f, const SymbolFunction& phi, double a, double tol = 1e-7);

StantonResult stanton_verify(const DirichletPolynomial& f, const SymbolFunction& phi, double a);

} // namespace dsc
