#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dsc/error.hpp"
#include "dsc/io.hpp"

using namespace dsc;
using io::json;

namespace {

template <class F>
void expect_config_error(F f) {
    try {
        f();
        CHECK_MESSAGE(false, "no error thrown");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
}

} // namespace

TEST_CASE("complex values") {
    CHECK(io::complex_from_json(json(0.25)) == cplx(0.25, 0.0));
    CHECK(io::complex_from_json(json::parse("[1.5, -2]")) == cplx(1.5, -2.0));
    CHECK(io::complex_from_json(json::parse(R"({"re": 1, "im": 3})")) == cplx(1.0, 3.0));
    expect_config_error([] { io::complex_from_json(json::parse("[1, 2, 3]")); });
    expect_config_error([] { io::complex_from_json(json("x")); });
}

TEST_CASE("polynomial round trip") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> n(1, 500);
    std::normal_distribution<double> c;
    for (int k = 0; k < 30; ++k) {
        DirichletPolynomial f;
        for (int i = 0; i < 8; ++i) f = f + DirichletPolynomial::monomial(n(rng), cplx(c(rng), c(rng)));
        const json j = io::to_json(f);
        CHECK(io::polynomial_from_json(json::parse(j.dump())) == f);
    }
    const auto f = io::polynomial_from_json(json::parse(R"({"coeffs": [[1, 1.5], [2, 0.5, 0]]})"));
    CHECK(f.coeff(1) == cplx(1.5));
    CHECK(f.coeff(2) == cplx(0.5));
    expect_config_error([] { io::polynomial_from_json(json::parse(R"({"coeffs": [[0, 1]]})")); });
    expect_config_error([] { io::polynomial_from_json(json::parse(R"({"terms": []})")); });
    expect_config_error([] { io::polynomial_from_json(json::parse(R"({"coeffs": [["a", 1]]})")); });
}

TEST_CASE("symbols") {
    const Symbol s = io::symbol_from_json(json::parse(R"({"c0": 0, "phi": {"coeffs": [[1, 1.5], [2, 0.5]]}, "class": "G0"})"));
    CHECK(s.class_tag() == SymbolClass::G0);
    const Symbol t = io::symbol_from_json(json::parse(io::to_json(s).dump()));
    CHECK(t.phi() == s.phi());
    CHECK(t.c0() == 0);
    CHECK(t.class_tag() == SymbolClass::G0);
    try {
        io::symbol_from_json(json::parse(R"({"c0": 0, "phi": {"coeffs": [[2, 1]]}, "class": "G0"})"));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::class_violation);
    }
}

TEST_CASE("disk maps and periodic symbols") {
    const char* maps[] = {R"({"kind": "affine", "c0": [0.1, 0], "c1": 0.5})", R"({"kind": "mobius", "nu": [0.8, 0.3]})",
                          R"({"kind": "expcusp"})", R"({"kind": "polynomial", "coeffs": [0.1, [0.3, 0.1], 0.4]})"};
    for (const char* m : maps) {
        const auto g = io::disk_map_from_json(json::parse(m));
        const auto h = io::disk_map_from_json(json::parse(io::to_json(*g).dump()));
        CHECK(g->kind() == h->kind());
        for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.0)}) CHECK(std::abs(g->value(z) - h->value(z)) < 1e-15);
    }
    expect_config_error([] { io::disk_map_from_json(json::parse(R"({"kind": "blaschke"})")); });

    const auto p = io::periodic_from_json(json::parse(R"({"map": {"kind": "mobius", "nu": 1}, "base": 3})"));
    CHECK(p.base() == 3);
    const auto q = io::periodic_from_json(json::parse(io::to_json(p).dump()));
    CHECK(std::abs(p(cplx(0.3, 1.0)) - q(cplx(0.3, 1.0))) < 1e-15);
    expect_config_error([] { io::periodic_from_json(json::parse(R"({"map": {"kind": "expcusp"}, "base": 1})")); });

    const SymbolFunction a = io::symbol_function_from_json(json::parse(R"({"coeffs": [[2, 1]]})"));
    CHECK(a.polynomial() != nullptr);
    const SymbolFunction b = io::symbol_function_from_json(json::parse(R"({"map": {"kind": "expcusp"}})"));
    CHECK(b.periodic() != nullptr);
    const SymbolFunction c = io::symbol_function_from_json(json::parse(R"({"phi": {"coeffs": [[1, 1.5], [2, 0.5]]}})"));
    CHECK(c.polynomial() != nullptr);
    expect_config_error([] { io::symbol_function_from_json(json::parse("[]")); });
}

TEST_CASE("double formatting round trips") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(k % 40) - 20);
        CHECK(std::stod(io::format_double(x)) == x);
    }
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(2.0) == "2");
}

TEST_CASE("csv writers carry a units header") {
    std::ostringstream est;
    io::write_estimates_csv(est, "mean counting function", {{1.0, cplx(0.25, 0), 0.0, 100.0, 1.3862943611198906, true, 0.0, 7}});
    const std::string e = est.str();
    CHECK(e.rfind("# quantity: mean counting function", 0) == 0);
    CHECK(e.find("a,w_re,w_im,sigma,T,value,converged,error_estimate,seed\n1,0.25,0,0,100,1.3862943611198906,1,0,7\n") !=
          std::string::npos);

    ZeroSet z;
    z.zeros.push_back({cplx(2.0, 0.0), 1, true});
    z.winding_total = 1;
    std::ostringstream zs;
    io::write_zero_set_csv(zs, z, 0.25);
    CHECK(zs.str().rfind("# quantity:", 0) == 0);
    CHECK(zs.str().find("\"winding_total\":1") != std::string::npos);
    CHECK(zs.str().find("re,im,multiplicity\n2,0,1\n") != std::string::npos);

    RatioProfile p;
    p.a = 0.5;
    p.exponent = 1.5;
    p.boundary_points = {cplx(0.6, 0.0)};
    p.ratios = {0.0};
    p.verdict = Verdict::vanishing;
    std::ostringstream ps;
    io::write_profile_csv(ps, "compactness ratio", {p});
    CHECK(ps.str().find("0.5,1.5,0.6,0,0,\n0.5,1.5,0,0,0,vanishing\n") != std::string::npos);
}
