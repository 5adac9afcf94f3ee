#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
    using namespace viscsgn::cli;
    CLI::App app{"visc-sgn: depth-averaged dispersive waves over a viscous bottom boundary layer"};
    std::string config_path, out_dir = "out", mode;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "run configuration (sectioned key = value)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--mode", mode, "overrides run.mode")->check(CLI::IsMember({"simulate", "verify", "both"}));
    app.add_option("--override", overrides, "section.key=value, applied before validation");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }
    if (!mode.empty()) overrides.push_back("run.mode=" + mode);

    RunConfig config;
    try {
        config = load_config(config_path, overrides);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kConfigError;
    }
    try {
        return run(config, out_dir, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeAbort;
    }
}
