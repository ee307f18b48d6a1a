// Experiment configuration, its text format, and the figure presets.
//
// Text format: `key = value` lines grouped under `[section]` headers, `#`
// comments. Guides are numbered from 1 in the file; injection sets are
// separated by `;` and accept ranges (`1-9`). Every key maps to one field of
// ExperimentConfig and unknown keys are rejected.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spdcsim/disorder.hpp"
#include "spdcsim/ensemble.hpp"
#include "spdcsim/lattice.hpp"
#include "spdcsim/observables.hpp"

namespace spdcsim {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_format(std::string_view s);

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string name = "custom";
    PhysicalConstants constants{};
    int n_guides = 9;
    int m_cut = 3;
    std::vector<std::set<int>> injections{{4}};  // 0-based guide indices
    // Phase of odd-numbered guides minus that of even-numbered guides; the
    // even guides sit at phase 0.
    std::vector<double> delta_phi{0.0};
    std::vector<DisorderTarget> targets{DisorderTarget::Coupling};
    std::vector<double> kappas{0.0};
    PhaseMode phase_mode = PhaseMode::Replace;
    std::uint64_t seed = 1;
    StoppingProtocol protocol{};
    ZetaWindow window{};
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

// Known names: fig2, fig3, fig4, fig5.
ExperimentConfig preset(std::string_view name);

// 11 evenly spaced values on [0, 1].
std::vector<double> default_kappa_grid();

// Base lattice for one injection set and phase difference.
LatticeRealization scenario_lattice(const ExperimentConfig& config, const std::set<int>& injection,
                                    double delta_phi);

// Formatting helpers shared by the config and output writers.
std::string format_double(double x);
std::string format_guide_set(const std::set<int>& guides);
std::set<int> parse_guide_set(std::string_view text);

}  // namespace spdcsim
