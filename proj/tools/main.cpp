#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using pathsum::cli::RunConfig;
    CLI::App app{"pathsum: exact evolution of periodically driven two-level systems"};
    app.set_version_flag("--version", PATHSUM_VERSION);
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", cfg.spec_path, "JSON drive spec (sweep spec for rabi-map/avg-map)");
        sub->add_option("--preset", cfg.preset, "built-in spec name instead of --spec");
        sub->add_option("--out", cfg.out, "output CSV path; a .manifest.json sidecar is written next to it")->required();
        sub->add_option("--grid", cfg.grid, "sample points per period")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "series/Neumann truncation tolerance")->capture_default_str();
        sub->add_option("--kmax", cfg.kmax, "maximum series order")->capture_default_str();
        sub->add_option("--t-max", cfg.t_max, "time span in periods")->capture_default_str();
        sub->add_option("--res", cfg.res, "map resolution <n1>x<n2>")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "worker threads (0 = runtime default)")->capture_default_str();
        sub->add_option("--frame", cfg.frame, "lab or rotated")->capture_default_str();
        sub->add_option("--engine", cfg.engine, "series, grid or oracle")->capture_default_str();
    };

    const std::pair<const char*, const char*> commands[] = {
        {"kernel", "two-time kernel K(t,s) on the triangle"},
        {"evolve", "U(t,0) and p(t) over [0, t-max periods]"},
        {"prob-map", "two-time transition probability p(t,s) from the grid engine"},
        {"rabi-map", "|J_l| over a two-amplitude sweep"},
        {"avg-map", "RWA long-time average probability over a two-amplitude sweep"},
        {"quasi", "quasienergies from the one-period propagator"},
        {"heff", "effective Hamiltonian (rotated frame) by quadrature"},
        {"validate", "series and grid engines against the time-stepping oracle"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (std::string(name) == "kernel") sub->add_option("--gbf-table", cfg.gbf_table, "also write l,re,im,modulus");
        if (std::string(name) == "rabi-map") {
            sub->add_option_function<int>("--l", [&](int l) { cfg.l = l, cfg.l_set = true; },
                                          "channel index (default: nearest resonance)");
        }
        if (std::string(name) == "avg-map") {
            sub->add_flag("--paper-sign", cfg.paper_sign, "detuning l*omega - eps0");
            sub->add_flag("--paper-rabi-scale", cfg.paper_rabi_scale, "Omega = sqrt(|J|^2 + det^2)");
        }
        sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }
    return pathsum::cli::run(cfg);
}
