// rabichaos command-line front end. Usage: rabichaos <subcommand> <config> [options]

#include "rabichaos/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace rabichaos;

    CLI::App app{"Semiclassical diagnostics for the generalized Rabi model"};
    app.set_version_flag("--version", std::string(RABICHAOS_VERSION));

    std::string subcommand;
    std::string config_path;
    Overrides o;
    app.add_option("subcommand", subcommand, "Diagnostic to run")
        ->required()
        ->check(CLI::IsMember(subcommands()));
    app.add_option("config", config_path, "Run configuration file")->required();
    app.add_option("--grid", o.grid, "Grid points per axis (entropy map, or Husimi grid for `husimi`)");
    app.add_option("--np", o.np, "Fock cutoff");
    app.add_option("--t-end", o.t_end, "End time of the diagnostic");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--workers", o.workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        RunConfig cfg = load_config(config_path);
        apply_overrides(cfg, subcommand, o);
        return run(subcommand, cfg, config_path, std::cerr);
    } catch (const NumericalGateError& e) {
        std::cerr << "numerical gate failed: " << e.what() << '\n';
        return kExitNumericalGate;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    }
}
