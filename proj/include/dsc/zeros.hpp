#pragma once

// Certified localization of solutions of phi(s) = w in rectangles.

#include <string>
#include <vector>

#include "dsc/symbol_function.hpp"

namespace dsc {

struct Rectangle {
    double sigma_min, sigma_max, t_min, t_max;

    Rectangle(double sigma_min, double sigma_max, double t_min, double t_max);

    double width() const noexcept { return sigma_max - sigma_min; }
    double height() const noexcept { return t_max - t_min; }
    double diameter() const noexcept;
    bool contains_strictly(cplx s) const noexcept;
    cplx center() const noexcept { return {0.5 * (sigma_min + sigma_max), 0.5 * (t_min + t_max)}; }
};

struct Zero {
    cplx location;
    int multiplicity = 1;
    bool refined = true; // false: Newton failed and the cell center is reported
};

struct ZeroSet {
    std::vector<Zero> zeros; // sorted by (Im, Re)
    int winding_total = 0;
    Rectangle rect{0.0, 1.0, 0.0, 1.0};
    double min_boundary_modulus = 0.0;
    std::vector<std::string> diagnostics;

    int total_multiplicity() const noexcept;
};

struct ZeroOptions {
    /// Required |phi - w| on cell edges; <= 0 selects 1e-3 * (1 + |w|).
    double delta = 0.0;
    int max_refinements = 4;
    int max_depth = 60;
};

double default_delta(cplx w);

/// Vertical period of phi, else 2 pi / log of its least frequency >= 2, else 1.
double period_scale(const SymbolFunction& phi);

/// True when |phi - w| >= delta is certified along the segment [a, b], using the
/// Lipschitz envelope of sampled values with adaptive bisection.
bool segment_clears(const SymbolFunction& phi, cplx w, cplx a, cplx b, double delta);

/// Minimum of |phi - w| over `samples` equispaced points of [a, b].
double segment_min_modulus(const SymbolFunction& phi, cplx w, cplx a, cplx b, int samples = 64);

/// Moves the edges of rect outward (within one period-scale unit) until
/// |phi - w| >= delta on all four edges. Throws no_zero_free_edge.
Rectangle safe_rectangle(const SymbolFunction& phi, cplx w, const Rectangle& rect, double delta);

/// Unrounded (1 / 2 pi i) contour integral of phi' / (phi - w) over the boundary.
cplx winding_integral(const SymbolFunction& phi, cplx w, const Rectangle& rect, double tol);

/// Winding number of phi - w around rect; throws contour_unresolved.
int winding_number(const SymbolFunction& phi, cplx w, const Rectangle& rect, const ZeroOptions& opt = {});

/// Zeros of phi - w in rect (whose edges must be zero-free; see safe_rectangle).
ZeroSet locate_zeros(const SymbolFunction& phi, cplx w, const Rectangle& rect, double tol = 1e-6,
                     const ZeroOptions& opt = {});

/// Closed-form zeros for phi(s) = g(u q^{-s}): every disk preimage z of w gives
/// the lattice s = -Log(z / u) / log q + i (2 pi / log q) k.
ZeroSet zeros_periodic_symbol(const PeriodicSymbol& phi, cplx w, const Rectangle& rect);

} // namespace dsc
