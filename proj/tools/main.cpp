// stefanlab: solve the regularized nonlinear diffusion problem, run epsilon
// sweeps, and verify the limiting free-boundary behavior.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stefanlab/config.hpp"
#include "stefanlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the vanishing-viscosity melting limit"};

    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--config", config_path, "configuration file (key = value sections)")
        ->required();
    app.add_option("--out", out_dir, "output directory (overrides out_dir from the config)");
    app.add_flag("--quiet", quiet, "suppress progress output");
    app.set_version_flag("--version", stefanlab::kArtifactVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    stefanlab::ParseResult parsed = stefanlab::parse_config(buffer.str());
    if (!parsed.ok()) {
        std::cerr << "config errors in " << config_path << ":\n";
        for (const std::string& e : parsed.errors) std::cerr << "  - " << e << "\n";
        return 2;
    }

    stefanlab::Config cfg = *parsed.config;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (quiet) cfg.quiet = true;

    return stefanlab::run(cfg, std::cout);
}
