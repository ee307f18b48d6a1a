// Plot-ready output files. Every file embeds the resolved configuration and
// seed; floating-point values are written with 17 significant digits.
//
//   heatmap CSV  columns zeta,guide,n   (one row per grid point per guide)
//   curve CSV    columns kappa,quantity,mean,stderr,n_realizations,converged
//   gamma JSON   objects with kappa, delta_phi and a row-major N x N array

#pragma once

#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdcsim/config.hpp"
#include "spdcsim/ensemble.hpp"

namespace spdcsim {

using Json = nlohmann::ordered_json;

struct Scenario {
    std::set<int> injection;
    double delta_phi = 0.0;
    DisorderTarget target = DisorderTarget::Coupling;
};

struct ScenarioResult {
    Scenario scenario;
    std::vector<EnsembleResult> per_kappa;
};

// Filename-safe label, e.g. "inject-1-9_dphi-0_coupling".
std::string scenario_label(const Scenario& s);

void write_json(std::ostream& os, const Json& value);

// `# `-prefixed copy of the serialized config.
std::string config_comment(const ExperimentConfig& config);

void write_heatmap_csv(std::ostream& os, const ExperimentConfig& config,
                       std::span<const double> zeta,
                       std::span<const std::optional<std::vector<double>>> n);

void write_curve_csv(std::ostream& os, const ExperimentConfig& config,
                     std::span<const EnsembleResult> results);

Json matrix_json(const Eigen::MatrixXd& m);
Json gamma_json(const EnsembleResult& result, double delta_phi);
Json ensemble_json(const EnsembleResult& result, const Scenario& scenario);

// Writes every sweep file under config.output_dir; returns the paths written.
std::vector<std::string> write_sweep_outputs(const ExperimentConfig& config,
                                             std::span<const ScenarioResult> results);

// Single realization: trace, heatmap and gamma files.
std::vector<std::string> write_run_outputs(const ExperimentConfig& config, const Scenario& scenario,
                                           double kappa, std::uint64_t index,
                                           const RealizationOutcome& outcome);

}  // namespace spdcsim
