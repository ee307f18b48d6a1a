// Integration of d psi / dz = i K psi on a grid of zeta = C0 z.
//
// Substeps satisfy ||K||_1 h <= step_norm; exp(i K h) is a Taylor series
// truncated once the remainder bound drops below `tolerance`, and every grid
// point inside a substep is read off the same series. When the initial state has definite photon-number
// parity the integration runs inside that parity sector, which K preserves.

#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "spdcsim/fock.hpp"
#include "spdcsim/generator.hpp"

namespace spdcsim {

class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SectorMode { Auto, Full };

struct PropagatorOptions {
    double tolerance = 1e-15;    // remainder bound per substep, absolute
    double step_norm = 6.0;      // max ||K||_1 * h per substep
    int max_terms = 80;          // Taylor terms per substep
    long max_substeps = 10'000'000;  // per run
    int refinement = 1;          // extra substep multiplier (step-halving checks use 2)
    SectorMode sector = SectorMode::Auto;
};

struct PropagationSummary {
    double norm_drift = 0.0;            // max over grid of | ||psi|| - 1 |
    double top_level_population = 0.0;  // at the last grid point
    long substeps = 0;
    long matvecs = 0;
    bool sector_restricted = false;
};

struct PropagationResult {
    std::vector<double> zeta_grid;
    std::vector<StateVector> states;
    PropagationSummary summary;
};

// Warning threshold for population in truncation-edge states.
inline constexpr double kTopLevelWarning = 1e-3;

using StateObserver = std::function<void(std::size_t index, double zeta, const StateVector& psi)>;

std::vector<double> uniform_zeta_grid(double zeta_max, int n_points);

// Streams the state at each grid point to `observer`.
PropagationSummary propagate(const EvolutionGenerator& gen, const StateVector& psi0,
                             std::span<const double> zeta_grid, const StateObserver& observer,
                             const PropagatorOptions& options = {});

// Collects every state. Memory is n_points * dim complex values.
PropagationResult evolve(const EvolutionGenerator& gen, const StateVector& psi0,
                         std::span<const double> zeta_grid, const PropagatorOptions& options = {});

// Population in basis states with at least one mode at its top level.
double top_level_population(const FockBasis& basis, const StateVector& psi);

// Total probability in odd-photon-number basis states.
double odd_parity_population(const FockBasis& basis, const StateVector& psi);

}  // namespace spdcsim
