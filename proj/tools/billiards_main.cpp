#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "billiards/errors.hpp"
#include "billiards/experiments.hpp"

namespace bexp = billiards::experiments;

int main(int argc, char** argv) {
    CLI::App app{"stochastic billiard simulation and verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    int replicas_override = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment and write its report");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_override, "override the RNG seed");
    CLI::Option* out_opt =
        run->add_option("--out", out_override, "override the output directory");
    CLI::Option* rep_opt =
        run->add_option("--replicas", replicas_override, "override the replica count");

    CLI::App* validate =
        app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "experiment config (JSON)")
        ->required();

    CLI::App* domains = app.add_subcommand("domains", "list built-in domains");

    CLI11_PARSE(app, argc, argv);

    if (domains->parsed()) {
        for (const auto& name : bexp::builtin_domain_names()) {
            const auto spec = bexp::builtin_domain_json(name);
            std::cout << name << "  " << spec["type"].get<std::string>() << '\n';
        }
        return 0;
    }

    bexp::CliOverrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed_override;
    if (out_opt->count() > 0) overrides.out_dir = out_override;
    if (rep_opt->count() > 0) overrides.replicas = replicas_override;

    try {
        if (validate->parsed()) {
            const bexp::ExperimentConfig cfg = bexp::load_config(config_path);
            std::cout << "ok: " << cfg.experiment << " on "
                      << cfg.domain.shape_name() << '\n';
            return 0;
        }
        const bexp::ExperimentConfig cfg = bexp::load_config(config_path, overrides);
        const bexp::RunReport report = bexp::run_experiment(cfg);
        std::cout << report.document.dump(2) << '\n';
        if (!report.all_pass) {
            std::cerr << "FAIL: one or more checks rejected (see report.json)\n";
            return 1;
        }
        return 0;
    } catch (const billiards::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const billiards::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
