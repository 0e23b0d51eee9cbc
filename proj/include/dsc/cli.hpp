#pragma once

// Batch driver behind the `dsc` executable: one JSON config in, CSV/JSON
// results and a run manifest out.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsc/counting.hpp"
#include "dsc/io.hpp"

namespace dsc::cli {

enum ExitStatus : int { exit_ok = 0, exit_internal = 1, exit_config = 2, exit_nonconvergence = 3 };

const std::vector<std::string>& experiments();

/// Parsed and defaulted experiment description.
struct ExperimentConfig {
    std::string experiment;
    io::json symbol_json;
    std::optional<SymbolFunction> symbol;
    std::optional<DirichletPolynomial> function;
    std::vector<double> weights;
    std::vector<cplx> targets;
    LimitSchedule schedule;
    std::uint64_t seed = 1;
    std::string output = "result";
    io::json params = io::json::object(); // experiment-specific options
    io::json resolved;                    // echo of the full config after defaults
};

/// Validates `config` for `subcommand` (which may be empty to take the
/// config's "experiment"). Throws Error(config) on any problem.
ExperimentConfig parse_config(const io::json& config, const std::string& subcommand,
                              std::optional<std::uint64_t> seed_override);

struct RunOptions {
    std::string subcommand;
    std::string config_path;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

struct RunResult {
    int status = exit_ok;
    std::vector<std::string> outputs;   // files written, relative to out_dir
    std::vector<std::string> flags;     // divergence and other non-fatal flags
    std::string message;
};

RunResult run(const ExperimentConfig& cfg, unsigned jobs, const std::string& out_dir);
/// Reads the config file and maps errors onto exit statuses.
RunResult run(const RunOptions& opt);

const char* version() noexcept;

} // namespace dsc::cli
