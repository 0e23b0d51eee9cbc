// dsc: run one experiment from a JSON config.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dsc/cli.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("dsc");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("DSC_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else if (level == "info")
        spdlog::set_level(spdlog::level::info);
    else
        spdlog::set_level(spdlog::level::err);
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Counting functions and composition operators for Dirichlet series"};
    app.set_version_flag("--version", dsc::cli::version());

    dsc::cli::RunOptions opt;
    opt.jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    app.add_option("--config", opt.config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--out", opt.out_dir, "output directory");

    const char* names[] = {"count", "jessen", "identity", "polytorus", "stanton", "kernel",
                           "schwarz", "littlewood", "ratio", "submean", "transfer"};
    for (const char* n : names) app.add_subcommand(n, std::string("run the ") + n + " experiment")->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dsc::cli::exit_config;
    }
    opt.subcommand = app.get_subcommands().front()->get_name();
    if (seed_opt->count() > 0) opt.seed = seed;

    const dsc::cli::RunResult r = dsc::cli::run(opt);
    if (!r.message.empty()) std::cerr << "dsc: " << r.message << '\n';
    for (const auto& f : r.flags) std::cerr << "dsc: flag " << f << '\n';
    return r.status;
}
