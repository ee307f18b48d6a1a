// Disorder ensembles: run realizations in index order, average observables,
// stop once the running mean of a monitored scalar settles.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "spdcsim/disorder.hpp"
#include "spdcsim/lattice.hpp"
#include "spdcsim/observables.hpp"
#include "spdcsim/propagator.hpp"

namespace spdcsim {

enum class MonitoredScalar { ParticipationRatio, Sigma };

std::string_view to_string(MonitoredScalar m);
MonitoredScalar parse_monitor(std::string_view s);

struct StoppingProtocol {
    int min_realizations = 150;
    double tolerance = 0.0075;  // relative change of the running mean
    int hard_cap = 2000;
    MonitoredScalar monitor = MonitoredScalar::ParticipationRatio;

    void validate() const;
    bool operator==(const StoppingProtocol&) const = default;
};

// Running-mean stopping rule. After the i-th value the mean m_i is updated;
// the run stops at the first i >= min_realizations with
// |m_i - m_{i-1}| / |m_i| < tolerance (absolute change when |m_i| < 1e-12),
// or unconverged at the hard cap.
class StoppingRule {
  public:
    explicit StoppingRule(StoppingProtocol protocol);

    // Returns true when no further values are needed.
    bool push(double value);

    int count() const { return count_; }
    bool converged() const { return converged_; }
    bool finished() const { return finished_; }
    double running_mean() const { return count_ ? sum_ / count_ : 0.0; }

  private:
    StoppingProtocol protocol_;
    int count_ = 0;
    double sum_ = 0.0;
    double previous_mean_ = 0.0;
    bool converged_ = false;
    bool finished_ = false;
};

struct MeanWithError {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean and standard error of the mean; exact zero spread for constant input.
MeanWithError mean_with_error(std::span<const double> values);

struct SimulationSettings {
    int m_cut = 3;
    ZetaWindow window{};
    PropagatorOptions propagator{};
};

// Observables of one realization.
struct RealizationOutcome {
    ZTrace trace;
    double sigma_bar = 0.0;
    double pr_bar = 0.0;
    double norm_drift = 0.0;
    double top_level_population = 0.0;
};

// Propagates the vacuum through `lattice` on its constants' zeta grid.
RealizationOutcome simulate_realization(const LatticeRealization& lattice,
                                        const SimulationSettings& settings);

struct MeanTrace {
    std::vector<double> zeta;
    std::vector<std::optional<double>> sigma;
    std::vector<std::optional<double>> pr;
    std::vector<std::optional<std::vector<double>>> n;
};

struct EnsembleResult {
    double kappa = 0.0;
    DisorderTarget target = DisorderTarget::Coupling;
    std::uint64_t master_seed = 0;
    MonitoredScalar monitor = MonitoredScalar::ParticipationRatio;
    int n_realizations = 0;
    bool converged = false;
    MeanWithError sigma_bar;
    MeanWithError pr_bar;
    Eigen::MatrixXd mean_gamma;  // at the last grid point
    MeanTrace mean_trace;
    double max_norm_drift = 0.0;
    double max_top_level_population = 0.0;
};

struct EnsembleOptions {
    SimulationSettings simulation{};
    unsigned workers = 0;  // 0: hardware concurrency
    std::function<void(int count, double running_mean)> progress;
};

// Realization i (1-based) uses counter index i of the disorder stream, so the
// result is independent of worker count and scheduling.
EnsembleResult run_ensemble(const DisorderSpec& spec, const StoppingProtocol& protocol,
                            const EnsembleOptions& options = {});

}  // namespace spdcsim
