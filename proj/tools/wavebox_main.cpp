// wavebox: spectral Galerkin runs and identity audits for the damped wave
// equation u_tt + sigma(u) u_t - Lap u + f(u) = phi on a box.
//
// Usage: wavebox <command> --config <file> [--output-dir <dir>]
// Exit codes: 0 all audits pass, 1 error, 2 audit failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wavebox/commands.hpp"
#include "wavebox/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spectral Galerkin simulator and audit lab for the displacement-damped wave equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;

    for (const auto& name : wavebox::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config,-c", config_path, "config file")->required();
        sub->add_option("--output-dir,-o", output_dir, "override [run] output_dir");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << config_path << "'\n";
            return wavebox::kExitError;
        }
        std::stringstream text;
        text << in.rdbuf();

        wavebox::Config cfg = wavebox::parse_config(text.str());
        if (!output_dir.empty()) cfg.output_dir = output_dir;

        const int code = wavebox::run_command(command, cfg, std::cout);
        std::cout << (code == wavebox::kExitPass ? "PASS" : "FAIL") << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wavebox::kExitError;
    }
}
