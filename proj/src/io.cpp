#include "dsc/io.hpp"

#include <charconv>
#include <ostream>

#include "dsc/error.hpp"

namespace dsc::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::config, what); }

template <class F>
auto guarded(const char* what, F f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

} // namespace

cplx complex_from_json(const json& j) {
    return guarded("complex", [&] {
        if (j.is_number()) return cplx(j.get<double>(), 0.0);
        if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
        if (j.is_object()) return cplx(field(j, "re").get<double>(), j.value("im", 0.0));
        bad("complex value must be a number, [re, im] or {re, im}");
    });
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const DirichletPolynomial& f) {
    json c = json::array();
    for (const auto& [n, a] : f.terms()) c.push_back(json::array({n, a.real(), a.imag()}));
    return json{{"coeffs", c}};
}

DirichletPolynomial polynomial_from_json(const json& j) {
    return guarded("polynomial", [&] {
        const json& c = field(j, "coeffs");
        if (!c.is_array()) bad("\"coeffs\" must be an array");
        DirichletPolynomial f;
        for (const auto& t : c) {
            if (!t.is_array() || t.size() < 2 || t.size() > 3) bad("coefficient entries are [n, re] or [n, re, im]");
            const auto n = t[0].get<std::int64_t>();
            if (n < 1) bad("frequencies must be >= 1");
            const cplx a(t[1].get<double>(), t.size() == 3 ? t[2].get<double>() : 0.0);
            f = f + DirichletPolynomial::monomial(static_cast<Frequency>(n), a);
        }
        return f;
    });
}

json to_json(const Symbol& s) {
    json j{{"c0", s.c0()}, {"phi", to_json(s.phi())}};
    if (s.class_tag() != SymbolClass::untagged) j["class"] = to_string(s.class_tag());
    return j;
}

Symbol symbol_from_json(const json& j) {
    return guarded("symbol", [&] {
        const auto c0 = j.value("c0", 0);
        if (c0 < 0) bad("c0 must be a non-negative integer");
        const SymbolClass tag =
            j.contains("class") ? symbol_class_from_string(j.at("class").get<std::string>()) : SymbolClass::untagged;
        return Symbol(static_cast<unsigned>(c0), polynomial_from_json(field(j, "phi")), tag);
    });
}

json to_json(const DiskMap& g) {
    json j{{"kind", g.kind()}};
    if (const auto* a = dynamic_cast<const AffineMap*>(&g)) {
        const auto p = a->parameters();
        j["c0"] = to_json(cplx(p[0], p[1]));
        j["c1"] = to_json(cplx(p[2], p[3]));
    } else if (const auto* m = dynamic_cast<const MobiusMap*>(&g)) {
        j["nu"] = to_json(m->nu());
    } else if (const auto* q = dynamic_cast<const PolynomialMap*>(&g)) {
        json c = json::array();
        for (const auto& x : q->coefficients()) c.push_back(to_json(x));
        j["coeffs"] = c;
    }
    return j;
}

std::shared_ptr<const DiskMap> disk_map_from_json(const json& j) {
    return guarded("disk map", [&]() -> std::shared_ptr<const DiskMap> {
        const auto kind = field(j, "kind").get<std::string>();
        if (kind == "affine") return std::make_shared<AffineMap>(complex_from_json(field(j, "c0")), complex_from_json(field(j, "c1")));
        if (kind == "mobius") return std::make_shared<MobiusMap>(complex_from_json(field(j, "nu")));
        if (kind == "expcusp") return std::make_shared<ExpCuspMap>();
        if (kind == "polynomial") {
            std::vector<cplx> c;
            for (const auto& x : field(j, "coeffs")) c.push_back(complex_from_json(x));
            return std::make_shared<PolynomialMap>(std::move(c));
        }
        bad("unknown disk map kind \"" + kind + "\"");
    });
}

json to_json(const PeriodicSymbol& p) {
    return json{{"map", to_json(p.map())}, {"base", p.base()}, {"rotation", to_json(p.rotation())}};
}

PeriodicSymbol periodic_from_json(const json& j) {
    return guarded("periodic symbol", [&] {
        const auto base = j.value("base", std::int64_t{2});
        if (base < 2) bad("base must be >= 2");
        const cplx u = j.contains("rotation") ? complex_from_json(j.at("rotation")) : cplx(1.0);
        return PeriodicSymbol(disk_map_from_json(field(j, "map")), static_cast<Frequency>(base), u);
    });
}

SymbolFunction symbol_function_from_json(const json& j) {
    if (!j.is_object()) bad("symbol must be a JSON object");
    if (j.contains("map")) return SymbolFunction(periodic_from_json(j));
    if (j.contains("phi")) return SymbolFunction(symbol_from_json(j).phi());
    if (j.contains("coeffs")) return SymbolFunction(polynomial_from_json(j));
    bad("symbol needs \"coeffs\", \"phi\" or \"map\"");
}

json to_json(const SymbolFunction& f) {
    if (const auto* p = f.periodic()) return to_json(*p);
    return to_json(*f.polynomial());
}

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void write_comment(std::ostream& os, const std::string& text) { os << "# " << text << '\n'; }

void write_zero_set_csv(std::ostream& os, const ZeroSet& z, cplx w) {
    write_comment(os, "quantity: solutions s of phi(s) = w in the rectangle; units: re, im dimensionless, multiplicity integer");
    json h{{"w", to_json(w)},
           {"rect", {{"sigma_min", z.rect.sigma_min}, {"sigma_max", z.rect.sigma_max}, {"t_min", z.rect.t_min}, {"t_max", z.rect.t_max}}},
           {"winding_total", z.winding_total},
           {"min_boundary_modulus", z.min_boundary_modulus},
           {"diagnostics", z.diagnostics}};
    write_comment(os, h.dump());
    os << "re,im,multiplicity\n";
    for (const auto& x : z.zeros)
        os << format_double(x.location.real()) << ',' << format_double(x.location.imag()) << ',' << x.multiplicity << '\n';
}

void write_estimates_csv(std::ostream& os, const std::string& quantity, const std::vector<EstimateRow>& rows) {
    write_comment(os, "quantity: " + quantity + "; units: a, sigma, T, w dimensionless, value in counting units");
    os << "a,w_re,w_im,sigma,T,value,converged,error_estimate,seed\n";
    for (const auto& r : rows)
        os << format_double(r.a) << ',' << format_double(r.w.real()) << ',' << format_double(r.w.imag()) << ','
           << format_double(r.sigma) << ',' << format_double(r.T) << ',' << format_double(r.value) << ','
           << (r.converged ? 1 : 0) << ',' << format_double(r.error_estimate) << ',' << r.seed << '\n';
}

void write_profile_csv(std::ostream& os, const std::string& quantity, const std::vector<RatioProfile>& profiles) {
    write_comment(os, "quantity: " + quantity + "; units: ratio dimensionless, exponent of (Re w - 1/2)");
    os << "a,exponent,w_re,w_im,ratio,verdict\n";
    for (const auto& p : profiles) {
        const std::string head = format_double(p.a) + ',' + format_double(p.exponent) + ',';
        for (std::size_t i = 0; i < p.ratios.size(); ++i)
            os << head << format_double(p.boundary_points[i].real()) << ','
               << format_double(p.boundary_points[i].imag()) << ',' << format_double(p.ratios[i]) << ",\n";
        os << head << format_double(p.argsup.real()) << ',' << format_double(p.argsup.imag()) << ','
           << format_double(p.sup) << ',' << to_string(p.verdict) << '\n';
    }
}

} // namespace dsc::io
