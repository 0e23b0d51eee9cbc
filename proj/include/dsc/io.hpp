#pragma once

// JSON (de)serialization of symbols and CSV writers for results.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsc/operators.hpp"
#include "dsc/series.hpp"
#include "dsc/symbol_function.hpp"
#include "dsc/zeros.hpp"

static_assert(NLOHMANN_JSON_VERSION_MAJOR == 3 && NLOHMANN_JSON_VERSION_MINOR >= 11,
              "the vendored nlohmann json must be found before the system copy");

namespace dsc::io {

using json = nlohmann::ordered_json;

/// A number, [re, im] or {"re": x, "im": y}.
cplx complex_from_json(const json& j);
json to_json(cplx z);

/// {"coeffs": [[n, re, im], ...]} with n ascending.
json to_json(const DirichletPolynomial& f);
DirichletPolynomial polynomial_from_json(const json& j);

/// {"c0": k, "phi": <poly>, "class": "G0" | "Gge1"}.
json to_json(const Symbol& s);
Symbol symbol_from_json(const json& j);

/// {"kind": "affine" | "polynomial" | "mobius" | "expcusp", ...}.
json to_json(const DiskMap& g);
std::shared_ptr<const DiskMap> disk_map_from_json(const json& j);

/// {"map": <disk map>, "base": q, "rotation": u}.
json to_json(const PeriodicSymbol& p);
PeriodicSymbol periodic_from_json(const json& j);

/// Accepts a polynomial, a Symbol (its phi is used) or a periodic symbol.
SymbolFunction symbol_function_from_json(const json& j);
json to_json(const SymbolFunction& f);

/// Shortest round-trip decimal form; identical bits give identical text.
std::string format_double(double x);

// -- CSV --------------------------------------------------------------------

/// Comment line "# <text>".
void write_comment(std::ostream& os, const std::string& text);

/// Units comment, one JSON comment with the winding certificate, then (re, im, multiplicity).
void write_zero_set_csv(std::ostream& os, const ZeroSet& z, cplx w);

struct EstimateRow {
    double a = 0.0;
    cplx w = 0.0;
    double sigma = 0.0;
    double T = 0.0;
    double value = 0.0;
    bool converged = false;
    double error_estimate = 0.0;
    std::uint64_t seed = 0;
};

/// Columns (a, w_re, w_im, sigma, T, value, converged, error_estimate, seed).
void write_estimates_csv(std::ostream& os, const std::string& quantity, const std::vector<EstimateRow>& rows);

/// Columns (a, exponent, w_re, w_im, ratio, verdict); point rows leave the
/// verdict empty and a final row per profile carries the sup point and the verdict.
void write_profile_csv(std::ostream& os, const std::string& quantity, const std::vector<RatioProfile>& profiles);

} // namespace dsc::io
