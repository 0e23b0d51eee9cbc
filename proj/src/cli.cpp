#include "dsc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "dsc/error.hpp"
#include "dsc/operators.hpp"
#include "dsc/spaces.hpp"
#include "dsc/zeros.hpp"

#ifndef DSC_VERSION
#define DSC_VERSION "unknown"
#endif

namespace dsc::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::config, what); }

std::string show(cplx w) { return "(" + io::format_double(w.real()) + ", " + io::format_double(w.imag()) + ")"; }

bool uses_targets(const std::string& e) {
    return e == "count" || e == "jessen" || e == "identity" || e == "identity3" || e == "identity24" ||
           e == "polytorus" || e == "littlewood" || e == "submean" || e == "transfer";
}

LimitSchedule schedule_from_json(const json& j, const SymbolFunction& phi) {
    LimitSchedule s;
    if (j.contains("T_values")) {
        s.T_values = j.at("T_values").get<std::vector<double>>();
        s.sigma_values = j.value("sigma_values", LimitSchedule::geometric(1.0, 0).sigma_values);
    } else {
        s = LimitSchedule::geometric(j.value("T0", period_scale(phi)), j.value("kt", 8), j.value("sigma0", 1.0),
                                     j.value("ks", 30));
    }
    s.rel_tol = j.value("rel_tol", s.rel_tol);
    s.abs_tol = j.value("abs_tol", s.abs_tol);
    s.validate();
    return s;
}

json schedule_to_json(const LimitSchedule& s) {
    return json{{"T_values", s.T_values}, {"sigma_values", s.sigma_values}, {"rel_tol", s.rel_tol}, {"abs_tol", s.abs_tol}};
}

json estimate_json(const CountingEstimate& e) {
    return json{{"a", e.a},
                {"w", io::to_json(e.w)},
                {"value", e.value},
                {"converged", e.converged},
                {"divergent", e.divergent},
                {"error_estimate", e.error_estimate},
                {"T_schedule", e.T_schedule},
                {"per_T_values", e.per_T_values},
                {"per_sigma_values", e.per_sigma_values},
                {"diagnostics", e.diagnostics}};
}

// Accumulates files and flags for one run.
struct Sink {
    const ExperimentConfig& cfg;
    fs::path dir;
    RunResult& res;
    bool nonconverged = false;

    void write(const std::string& suffix, const std::string& text) {
        const std::string name = cfg.output + suffix;
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw Error(ErrorCode::config, "cannot write " + (dir / name).string());
        f << text;
        res.outputs.push_back(name);
        spdlog::debug("wrote {}", (dir / name).string());
    }
    void flag(const std::string& f) {
        res.flags.push_back(f);
        spdlog::info("flag: {}", f);
    }
    void note(const CountingEstimate& e) {
        const std::string where = "a=" + io::format_double(e.a) + " w=" + show(e.w);
        if (e.divergent)
            flag("divergent " + where);
        else if (!e.converged) {
            flag("not-converged " + where);
            nonconverged = true;
        }
    }
};

double param(const ExperimentConfig& c, const char* key, double def) { return c.params.value(key, def); }

std::vector<double> param_list(const ExperimentConfig& c, const char* key, std::vector<double> def) {
    if (!c.params.contains(key)) return def;
    const json& j = c.params.at(key);
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

// -- experiments -------------------------------------------------------------

void run_count(const ExperimentConfig& c, Sink& out) {
    const SymbolFunction phi = counting_form(*c.symbol);
    const double sigma = param(c, "sigma", 0.0);
    std::vector<io::EstimateRow> rows;
    json js = json::array();
    for (cplx w : c.targets) {
        CountingContext ctx(phi, w);
        for (double a : c.weights) {
            const CountingEstimate e = sigma > 0.0 ? mean_count(ctx, a, sigma, c.schedule) : mean_count_limit(ctx, a, c.schedule);
            out.note(e);
            rows.push_back({a, w, sigma, c.schedule.T_values.back(), e.value, e.converged, e.error_estimate, c.seed});
            js.push_back(estimate_json(e));
        }
    }
    std::ostringstream csv;
    io::write_estimates_csv(csv, sigma > 0.0 ? "mean counting function M_{phi,a}(w, sigma), T -> infinity"
                                              : "mean counting function M_{phi,a}(w), sigma -> 0+",
                            rows);
    out.write(".csv", csv.str());
    out.write(".json", json{{"estimates", js}}.dump(2) + "\n");
}

void run_jessen(const ExperimentConfig& c, Sink& out, unsigned jobs) {
    JessenOptions opt;
    const std::string mode = c.params.value("mode", std::string("vertical"));
    if (mode == "montecarlo")
        opt.mode = JessenMode::montecarlo;
    else if (mode != "vertical")
        bad("jessen mode must be \"vertical\" or \"montecarlo\"");
    opt.T = param(c, "T", 0.0);
    opt.samples = c.params.value("samples", std::size_t{10000});
    opt.seed = c.seed;
    opt.jobs = jobs;
    std::vector<io::EstimateRow> rows;
    for (cplx w : c.targets)
        for (double s : param_list(c, "sigmas", {0.5})) {
            const JessenValue v = jessen_full(*c.symbol, w, s, opt);
            for (const auto& d : v.diagnostics) out.flag(d);
            rows.push_back({0.0, w, s, opt.T, v.value, true, v.error, c.seed});
        }
    std::ostringstream csv;
    io::write_estimates_csv(csv, "Jessen function, mean of log|phi(sigma+it) - w| (a column unused)", rows);
    out.write(".csv", csv.str());
}

void run_identity(const ExperimentConfig& c, Sink& out) {
    std::string kind = c.params.value("kind", std::string("weight"));
    if (c.experiment == "identity24") kind = "jessen";
    if (c.experiment == "identity3") kind = "weight";
    if (kind != "weight" && kind != "jessen") bad("identity kind must be \"weight\" or \"jessen\"");
    const SymbolFunction phi = counting_form(*c.symbol);
    json rows = json::array();
    double worst = 0.0;
    for (cplx w : c.targets) {
        CountingContext ctx(phi, w);
        for (double a : c.weights)
            for (double s : param_list(c, "sigmas", {0.05, 0.1, 0.25, 0.5, 1.0})) {
                const IdentityResidual r = kind == "weight" ? verify_weight_identity(ctx, a, s) : verify_jessen_identity(ctx, a, s);
                worst = std::max(worst, r.relative());
                rows.push_back({{"a", a}, {"w", io::to_json(w)}, {"sigma", s}, {"lhs", r.lhs}, {"rhs", r.rhs},
                                {"rel_err", r.relative()}});
            }
    }
    out.write(".json", json{{"kind", kind}, {"max_rel_err", worst}, {"rows", rows}}.dump(2) + "\n");
}

void run_polytorus(const ExperimentConfig& c, Sink& out, unsigned jobs) {
    const auto samples = c.params.value("samples", std::size_t{10000});
    std::vector<io::EstimateRow> rows;
    json js = json::array();
    for (cplx w : c.targets)
        for (double a : c.weights) {
            const MonteCarloEstimate m = polytorus_average(*c.symbol, a, w, samples, c.seed, jobs);
            const CountingEstimate lim = counting_limit(*c.symbol, a, w);
            out.note(lim);
            rows.push_back({a, w, 0.0, 1.0, m.estimate, true, m.stderr_, c.seed});
            js.push_back({{"a", a}, {"w", io::to_json(w)}, {"estimate", m.estimate}, {"stderr", m.stderr_},
                          {"samples", m.samples}, {"resampled", m.resampled}, {"mean_count_limit", lim.value},
                          {"z_score", m.stderr_ > 0.0 ? std::abs(m.estimate - lim.value) / m.stderr_ : 0.0}});
        }
    std::ostringstream csv;
    io::write_estimates_csv(csv, "polytorus average of M_{phi_chi,a}(w, 0, 1) (error_estimate = standard error)", rows);
    out.write(".csv", csv.str());
    out.write(".json", json{{"rows", js}}.dump(2) + "\n");
}

void run_stanton(const ExperimentConfig& c, Sink& out) {
    if (!c.function) bad("stanton needs \"function\"");
    json rows = json::array();
    for (double a : c.weights) {
        const StantonResult r = stanton_verify(*c.function, *c.symbol, a);
        if (r.lhs.divergent || r.rhs.divergent) out.flag("divergent a=" + io::format_double(a));
        rows.push_back({{"a", a},
                        {"lhs", r.lhs.value},
                        {"rhs", r.rhs.value},
                        {"rel_err", r.rel_err},
                        {"truncation_bounds", {{"lhs", r.lhs.error}, {"rhs", r.rhs.error}}},
                        {"diagnostics", {{"lhs", r.lhs.diagnostics}, {"rhs", r.rhs.diagnostics}}}});
    }
    out.write(".json", json{{"rows", rows}}.dump(2) + "\n");
}

void run_kernel(const ExperimentConfig& c, Sink& out) {
    if (!c.params.contains("points")) bad("kernel needs \"points\"");
    const auto N = c.params.value("N", std::size_t{10000});
    json rows = json::array();
    for (const auto& p : c.params.at("points")) {
        const cplx s = io::complex_from_json(p);
        if (!(s.real() > 0.5)) bad("kernel points need Re s > 1/2");
        for (double a : c.weights) {
            const SeriesValue v = kernel_norm_sq(s, a, N);
            rows.push_back({{"s", io::to_json(s)},
                            {"a", a},
                            {"norm_sq", v.value.real()},
                            {"tail_bound", v.tail_bound},
                            {"scaled", v.value.real() * std::pow(2.0 * s.real() - 1.0, 1.0 - a)}});
        }
    }
    out.write(".json", json{{"rows", rows}}.dump(2) + "\n");
}

SchwarzGrid grid_from(const json& j) {
    SchwarzGrid g;
    g.n_sigma = j.value("n_sigma", g.n_sigma);
    g.n_t = j.value("n_t", g.n_t);
    g.sigma_min = j.value("sigma_min", g.sigma_min);
    g.sigma_max = j.value("sigma_max", g.sigma_max);
    g.window = j.value("window", g.window);
    g.t_start = j.value("t_start", g.t_start);
    return g;
}

void run_schwarz(const ExperimentConfig& c, Sink& out) {
    const SchwarzGrid g = grid_from(c.params.value("grid", json::object()));
    const int factor = c.params.value("validation_factor", 10);
    const SchwarzResult r = schwarz_constant(*c.symbol, g);
    const SchwarzValidation v = schwarz_validate(*c.symbol, r.constant, g.refined(factor));
    if (v.violations > 0) out.flag("validation-violations");
    out.write(".json", json{{"constant", r.constant},
                            {"coarse", r.coarse},
                            {"argmax", io::to_json(r.argmax)},
                            {"validation", {{"factor", factor}, {"points", v.points}, {"violations", v.violations}, {"liminf_proxy", v.liminf_proxy}}}}
                               .dump(2) + "\n");
}

void run_littlewood(const ExperimentConfig& c, Sink& out) {
    std::vector<cplx> ws = c.targets;
    const int n_random = c.params.value("random", 0);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> re(0.5, 3.0), im(-3.0, 3.0);
    const cplx nu = c.symbol->at_infinity();
    while (static_cast<int>(ws.size()) < static_cast<int>(c.targets.size()) + n_random) {
        const cplx w(re(rng), im(rng));
        if (w.real() > 0.5 && std::abs(w - nu) > 1e-9) ws.push_back(w);
    }
    json rows = json::array();
    bool all = true;
    for (cplx w : ws) {
        const LittlewoodCheck l = littlewood_bound_check(*c.symbol, w);
        if (l.inconclusive) out.flag("inconclusive w=" + show(w));
        all = all && (l.holds || l.inconclusive);
        rows.push_back({{"w", io::to_json(w)}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"holds", l.holds}, {"inconclusive", l.inconclusive}});
    }
    out.write(".json", json{{"all_hold", all}, {"rows", rows}}.dump(2) + "\n");
}

void run_ratio(const ExperimentConfig& c, Sink& out, unsigned jobs) {
    const std::string kind = c.params.value("kind", std::string("compactness"));
    const double delta = param(c, "delta", 0.1);
    const cplx nu = c.symbol->at_infinity();
    std::vector<RatioProfile> ps;
    json js = json::array();
    for (double a : c.weights) {
        RatioProfile p;
        if (kind == "compactness") {
            BoundarySchedule s;
            s.imag_parts = c.params.value("imag_parts", s.imag_parts);
            s.x_start = c.params.value("x_start", s.x_start);
            s.x_min = c.params.value("x_min", s.x_min);
            p = compactness_ratio(*c.symbol, a, s, jobs);
        } else if (kind == "boundedness") {
            RegionGrid g;
            g.x_min = c.params.value("x_min", g.x_min);
            g.x_max = c.params.value("x_max", g.x_max);
            g.nx = c.params.value("nx", g.nx);
            g.y_min = c.params.value("y_min", g.y_min);
            g.y_max = c.params.value("y_max", g.y_max);
            g.ny = c.params.value("ny", g.ny);
            p = boundedness_profile(*c.symbol, a, delta, g, jobs);
        } else {
            bad("ratio kind must be \"compactness\" or \"boundedness\"");
        }
        if (p.verdict == Verdict::inconclusive) out.flag("inconclusive a=" + io::format_double(a));
        json e{{"a", a}, {"exponent", p.exponent}, {"verdict", to_string(p.verdict)}, {"sup", p.sup},
               {"argsup", io::to_json(p.argsup)}, {"diagnostics", p.diagnostics}};
        if (nu.real() > 0.5) e["decay_bound_constant"] = decay_bound_constant(p, nu, delta);
        js.push_back(e);
        ps.push_back(std::move(p));
    }
    std::ostringstream csv;
    io::write_profile_csv(csv,
                          kind == "compactness" ? "M_{phi,1+a}(w) / (Re w - 1/2)^{1+a} toward Re w = 1/2"
                                                : "M_{phi,1-a}(w) / (Re w - 1/2)^{1-a} outside D(phi(+inf), delta)",
                          ps);
    out.write(".csv", csv.str());
    out.write(".json", json{{"kind", kind}, {"profiles", js}}.dump(2) + "\n");
}

void run_submean(const ExperimentConfig& c, Sink& out) {
    const int n_grid = c.params.value("n_grid", 24);
    json rows = json::array();
    for (cplx w : c.targets)
        for (double a : c.weights)
            for (double r : param_list(c, "radii", {0.05})) {
                const SubmeanResult s = submean_check(*c.symbol, a, w, r, n_grid);
                if (s.inconclusive) out.flag("inconclusive a=" + io::format_double(a) + " w=" + show(w));
                rows.push_back({{"a", a}, {"w", io::to_json(w)}, {"r", r}, {"lhs", s.lhs}, {"rhs", s.rhs},
                                {"ratio", s.ratio}, {"inconclusive", s.inconclusive}});
            }
    out.write(".json", json{{"rows", rows}}.dump(2) + "\n");
}

void run_transfer(const ExperimentConfig& c, Sink& out) {
    const double sigma = param(c, "sigma", 0.5), T = param(c, "T", 50.0);
    json rows = json::array();
    for (cplx w : c.targets)
        for (double a : c.weights) {
            const TransferenceResult t = transference_check(*c.symbol, a, w, sigma, T);
            rows.push_back({{"a", a}, {"w", io::to_json(w)}, {"sigma", sigma}, {"T", T}, {"lower", t.lower},
                            {"mid", t.mid}, {"upper", t.upper}, {"lower_constant", t.lower_constant},
                            {"upper_constant", t.upper_constant}, {"solutions", t.solutions}});
        }
    out.write(".json", json{{"rows", rows}}.dump(2) + "\n");
}

int status_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::config:
    case ErrorCode::precondition:
    case ErrorCode::excluded_point:
    case ErrorCode::class_violation: return exit_config;
    case ErrorCode::no_zero_free_edge:
    case ErrorCode::contour_unresolved:
    case ErrorCode::tail_too_large: return exit_nonconvergence;
    }
    return exit_internal;
}

} // namespace

const std::vector<std::string>& experiments() {
    static const std::vector<std::string> e{"count",     "jessen",  "identity", "identity3", "identity24",
                                            "polytorus", "stanton", "kernel",   "schwarz",   "littlewood",
                                            "ratio",     "submean", "transfer"};
    return e;
}

const char* version() noexcept { return DSC_VERSION; }

ExperimentConfig parse_config(const json& config, const std::string& subcommand, std::optional<std::uint64_t> seed_override) {
    if (!config.is_object()) bad("config must be a JSON object");
    ExperimentConfig c;
    try {
        c.experiment = config.value("experiment", subcommand);
        if (c.experiment.empty()) bad("no experiment given");
        const auto& known = experiments();
        if (std::find(known.begin(), known.end(), c.experiment) == known.end()) bad("unknown experiment \"" + c.experiment + "\"");
        const bool id_alias = subcommand == "identity" && c.experiment.rfind("identity", 0) == 0;
        if (!subcommand.empty() && subcommand != c.experiment && !id_alias)
            bad("subcommand \"" + subcommand + "\" does not match config experiment \"" + c.experiment + "\"");

        c.seed = seed_override ? *seed_override : config.value("seed", std::uint64_t{1});
        c.output = config.value("output", c.experiment);
        if (c.output.empty() || c.output.find('/') != std::string::npos) bad("output must be a plain file stem");
        c.params = config.value("params", json::object());

        if (c.experiment != "kernel") {
            if (!config.contains("symbol")) bad("config needs \"symbol\"");
            c.symbol_json = config.at("symbol");
            c.symbol = io::symbol_function_from_json(c.symbol_json);
        }
        if (config.contains("function")) c.function = io::polynomial_from_json(config.at("function"));

        if (config.contains("a")) {
            const json& a = config.at("a");
            c.weights = a.is_number() ? std::vector<double>{a.get<double>()} : a.get<std::vector<double>>();
        } else {
            c.weights = {1.0};
        }
        if (config.contains("targets"))
            for (const auto& t : config.at("targets")) c.targets.push_back(io::complex_from_json(t));

        if (uses_targets(c.experiment) && c.experiment != "littlewood" && c.targets.empty()) bad("config needs \"targets\"");
        if (c.symbol) {
            const cplx nu = c.symbol->at_infinity();
            for (cplx w : c.targets)
                if (w == nu) bad("target w = " + show(w) + " is the excluded point phi(+inf)");
            c.schedule = schedule_from_json(config.value("schedule", json::object()), counting_form(*c.symbol));
        }
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("config: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::precondition) bad(e.what());
        throw;
    }

    c.resolved = config;
    c.resolved["experiment"] = c.experiment;
    c.resolved["seed"] = c.seed;
    c.resolved["output"] = c.output;
    c.resolved["a"] = c.weights;
    if (c.symbol) {
        c.resolved["symbol"] = io::to_json(*c.symbol);
        c.resolved["schedule"] = schedule_to_json(c.schedule);
    }
    c.resolved["params"] = c.params;
    return c;
}

RunResult run(const ExperimentConfig& cfg, unsigned jobs, const std::string& out_dir) {
    RunResult res;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    Sink out{cfg, fs::path(out_dir), res};
    const auto t0 = std::chrono::steady_clock::now();
    spdlog::info("{}: start ({} jobs)", cfg.experiment, jobs);
    const std::string& e = cfg.experiment;
    if (e == "count") run_count(cfg, out);
    else if (e == "jessen") run_jessen(cfg, out, jobs);
    else if (e == "identity" || e == "identity3" || e == "identity24") run_identity(cfg, out);
    else if (e == "polytorus") run_polytorus(cfg, out, jobs);
    else if (e == "stanton") run_stanton(cfg, out);
    else if (e == "kernel") run_kernel(cfg, out);
    else if (e == "schwarz") run_schwarz(cfg, out);
    else if (e == "littlewood") run_littlewood(cfg, out);
    else if (e == "ratio") run_ratio(cfg, out, jobs);
    else if (e == "submean") run_submean(cfg, out);
    else if (e == "transfer") run_transfer(cfg, out);
    const auto t1 = std::chrono::steady_clock::now();
    if (out.nonconverged) res.status = exit_nonconvergence;

    std::vector<std::string> files = res.outputs;
    json manifest{{"version", version()},
                  {"experiment", cfg.experiment},
                  {"config", cfg.resolved},
                  {"jobs", jobs},
                  {"outputs", files},
                  {"flags", res.flags},
                  {"exit_status", res.status},
                  {"timings_seconds", {{"compute", std::chrono::duration<double>(t1 - t0).count()}}}};
    out.write(".manifest.json", manifest.dump(2) + "\n");
    return res;
}

RunResult run(const RunOptions& opt) {
    RunResult res;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        std::ifstream f(opt.config_path);
        if (!f) bad("cannot read config " + opt.config_path);
        json j;
        try {
            j = json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            bad(std::string("config is not valid JSON: ") + e.what());
        }
        const ExperimentConfig cfg = parse_config(j, opt.subcommand, opt.seed);
        spdlog::debug("config parsed in {:.3f} s",
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        return run(cfg, std::max(1u, opt.jobs), opt.out_dir);
    } catch (const Error& e) {
        res.status = status_for(e.code());
        res.message = e.what();
    } catch (const std::exception& e) {
        res.status = exit_internal;
        res.message = std::string("internal error: ") + e.what();
    }
    return res;
}

} // namespace dsc::cli
