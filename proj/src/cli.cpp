#include "spdcsim/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spdcsim/config.hpp"
#include "spdcsim/ensemble.hpp"
#include "spdcsim/oracle.hpp"
#include "spdcsim/output.hpp"

namespace spdcsim {
namespace {

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> kappa;
    std::optional<std::string> target;
    std::optional<std::string> inject;
    std::optional<std::string> delta_phi;
    std::optional<int> grid_points;
    std::optional<int> min_real;
    std::optional<double> tol;
    std::optional<int> cap;
    std::optional<std::string> format;
    std::optional<std::string> monitor;
    std::uint64_t realization = 1;
    unsigned workers = 0;
    bool quiet = false;
    bool dump_config = false;
};

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

void add_experiment_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config_path, "Experiment config file")->check(CLI::ExistingFile);
    app->add_option("--seed", f.seed, "Master seed of the disorder streams");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--kappa", f.kappa, "Disorder strength(s), comma separated, in [0, 1]");
    app->add_option("--target", f.target, "Disorder target(s): coupling, amplitude, phase");
    app->add_option("--inject", f.inject,
                    "Injected guides, 1-based; ranges allowed (1-9); ';' separates sets");
    app->add_option("--delta-phi", f.delta_phi,
                    "Phase of odd guides minus even guides [rad], comma separated");
    app->add_option("--grid-points", f.grid_points, "Number of zeta grid points");
    app->add_option("--min-real", f.min_real, "Minimum realizations per ensemble");
    app->add_option("--tol", f.tol, "Relative change of the running mean that ends a run");
    app->add_option("--cap", f.cap, "Hard cap on realizations per ensemble");
    app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--monitor", f.monitor, "Monitored scalar")->check(CLI::IsMember({"pr", "sigma"}));
    app->add_option("--workers", f.workers, "Worker threads (0: all cores)");
    app->add_flag("--quiet", f.quiet, "No progress on standard error");
    app->add_flag("--dump-config", f.dump_config, "Print the resolved config and exit");
}

ExperimentConfig resolve(ExperimentConfig c, const Flags& f) {
    if (f.seed) c.seed = *f.seed;
    if (f.out) c.output_dir = *f.out;
    if (f.kappa) {
        c.kappas.clear();
        for (auto part : CLI::detail::split(*f.kappa, ',')) {
            try {
                c.kappas.push_back(std::stod(part));
            } catch (const std::exception&) {
                throw UsageError("bad --kappa value '" + part + "'");
            }
        }
    }
    if (f.target) {
        c.targets.clear();
        for (auto part : CLI::detail::split(*f.target, ',')) c.targets.push_back(parse_target(CLI::detail::trim_copy(part)));
    }
    if (f.inject) {
        c.injections.clear();
        for (auto part : CLI::detail::split(*f.inject, ';')) c.injections.push_back(parse_guide_set(part));
    }
    if (f.delta_phi) {
        c.delta_phi.clear();
        for (auto part : CLI::detail::split(*f.delta_phi, ',')) {
            try {
                c.delta_phi.push_back(std::stod(part));
            } catch (const std::exception&) {
                throw UsageError("bad --delta-phi value '" + part + "'");
            }
        }
    }
    if (f.grid_points) c.constants.n_z = *f.grid_points;
    if (f.min_real) c.protocol.min_realizations = *f.min_real;
    if (f.tol) c.protocol.tolerance = *f.tol;
    if (f.cap) c.protocol.hard_cap = *f.cap;
    if (f.format) c.format = parse_format(*f.format);
    if (f.monitor) c.protocol.monitor = parse_monitor(*f.monitor);
    c.validate();
    return c;
}

void require_single(const ExperimentConfig& c, const std::string& command) {
    auto check = [&](std::size_t n, const char* what) {
        if (n != 1) {
            throw UsageError("'" + command + "' takes exactly one " + what + " (got " +
                             std::to_string(n) + ")");
        }
    };
    check(c.kappas.size(), "--kappa value");
    check(c.targets.size(), "--target");
    check(c.injections.size(), "--inject set");
    check(c.delta_phi.size(), "--delta-phi value");
}

EnsembleOptions ensemble_options(const ExperimentConfig& c, const Flags& f, std::string label) {
    EnsembleOptions opt;
    opt.simulation.m_cut = c.m_cut;
    opt.simulation.window = c.window;
    opt.workers = f.workers;
    if (!f.quiet) {
        opt.progress = [label = std::move(label)](int count, double mean) {
            if (count % 10 == 0) {
                std::fprintf(stderr, "  %s: %d realizations, running mean %.6f\n", label.c_str(),
                             count, mean);
            }
        };
    }
    return opt;
}

std::vector<ScenarioResult> run_sweep(const ExperimentConfig& c, const Flags& f) {
    std::vector<ScenarioResult> results;
    for (const auto& injection : c.injections) {
        for (double dphi : c.delta_phi) {
            const auto base = scenario_lattice(c, injection, dphi);
            for (auto target : c.targets) {
                ScenarioResult sr{{injection, dphi, target}, {}};
                for (double kappa : c.kappas) {
                    const std::string label =
                        scenario_label(sr.scenario) + " kappa=" + format_double(kappa);
                    if (!f.quiet) std::fprintf(stderr, "%s\n", label.c_str());
                    DisorderSpec spec{target, kappa, base, c.seed, c.phase_mode};
                    auto res = run_ensemble(spec, c.protocol, ensemble_options(c, f, label));
                    if (!f.quiet) {
                        std::fprintf(stderr, "  done: %d realizations (%s), PR=%.6f sigma=%.6f\n",
                                     res.n_realizations,
                                     res.converged ? "converged" : "hit cap", res.pr_bar.mean,
                                     res.sigma_bar.mean);
                    }
                    if (res.max_top_level_population > kTopLevelWarning) {
                        std::fprintf(stderr,
                                     "  warning: population %.3g in truncation-edge states "
                                     "(threshold %.0e)\n",
                                     res.max_top_level_population, kTopLevelWarning);
                    }
                    sr.per_kappa.push_back(std::move(res));
                }
                results.push_back(std::move(sr));
            }
        }
    }
    return results;
}

int finish_sweep(const ExperimentConfig& c, const Flags& f) {
    const auto results = run_sweep(c, f);
    for (const auto& path : write_sweep_outputs(c, results)) std::cout << path << "\n";
    return 0;
}

int cmd_run(const ExperimentConfig& c, const Flags& f) {
    require_single(c, "run");
    const Scenario scenario{c.injections.front(), c.delta_phi.front(), c.targets.front()};
    const DisorderSpec spec{scenario.target, c.kappas.front(),
                            scenario_lattice(c, scenario.injection, scenario.delta_phi), c.seed,
                            c.phase_mode};
    const auto lattice = sample_realization(spec, f.realization);
    SimulationSettings settings;
    settings.m_cut = c.m_cut;
    settings.window = c.window;
    const auto t0 = std::chrono::steady_clock::now();
    const auto outcome = simulate_realization(lattice, settings);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!f.quiet) {
        std::fprintf(stderr, "realization %llu: PR=%.6f sigma=%.6f norm drift %.2e (%.2f s)\n",
                     static_cast<unsigned long long>(f.realization), outcome.pr_bar,
                     outcome.sigma_bar, outcome.norm_drift, secs);
    }
    if (outcome.top_level_population > kTopLevelWarning) {
        std::fprintf(stderr, "warning: population %.3g in truncation-edge states\n",
                     outcome.top_level_population);
    }
    for (const auto& path : write_run_outputs(c, scenario, spec.kappa, f.realization, outcome)) {
        std::cout << path << "\n";
    }
    return 0;
}

int cmd_selfcheck() {
    bool ok = true;
    for (const auto& item : run_selfcheck()) {
        std::printf("%s  %-58s %.3e < %.0e\n", item.passed ? "PASS" : "FAIL", item.name.c_str(),
                    item.measured, item.threshold);
        ok = ok && item.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Two-photon propagation in disordered nonlinear waveguide arrays"};
    app.require_subcommand(1);

    Flags f;
    auto* run = app.add_subcommand("run", "Single realization with its full zeta trace");
    add_experiment_flags(run, f);
    run->add_option("--realization", f.realization, "Realization index (1-based)")
        ->check(CLI::PositiveNumber);
    auto* ens = app.add_subcommand("ensemble", "One disorder ensemble (one kappa, one target)");
    add_experiment_flags(ens, f);
    auto* sweep = app.add_subcommand("sweep", "Ensembles over the kappa grid and targets");
    add_experiment_flags(sweep, f);
    std::string preset_name;
    auto* pre = app.add_subcommand("preset", "Run a figure preset (fig2, fig3, fig4, fig5)");
    pre->add_option("name", preset_name, "Preset name")->required();
    add_experiment_flags(pre, f);
    auto* self = app.add_subcommand("selfcheck", "Compare the pipeline against reference oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (self->parsed()) return cmd_selfcheck();

        ExperimentConfig base;
        if (pre->parsed()) {
            if (!f.config_path.empty()) throw UsageError("preset and --config are exclusive");
            base = preset(preset_name);
        } else if (!f.config_path.empty()) {
            base = load_config_file(f.config_path);
        }
        const auto config = resolve(base, f);
        if (f.dump_config) {
            std::cout << serialize_config(config);
            return 0;
        }
        if (run->parsed()) return cmd_run(config, f);
        if (ens->parsed()) {
            require_single(config, "ensemble");
            return finish_sweep(config, f);
        }
        return finish_sweep(config, f);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spdcsim
