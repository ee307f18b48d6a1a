#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "spdcsim/lattice.hpp"

namespace spdcsim {

enum class DisorderTarget { Coupling, Amplitude, Phase };

// Replace: phi_j drawn from [0, 2 pi kappa). Additive: that draw is added to
// the base phase and wrapped.
enum class PhaseMode { Replace, Additive };

std::string_view to_string(DisorderTarget t);
DisorderTarget parse_target(std::string_view s);
std::string_view to_string(PhaseMode m);
PhaseMode parse_phase_mode(std::string_view s);

struct DisorderSpec {
    DisorderTarget target = DisorderTarget::Coupling;
    double kappa = 0.0;
    LatticeRealization base;
    std::uint64_t master_seed = 0;
    PhaseMode phase_mode = PhaseMode::Replace;

    void validate() const;
};

// Draws realization `index` of the disordered ensemble. Only the target
// profile changes; each entry is the base value times a deviate from
// [1 - kappa, 1 + kappa) (coupling, amplitude) or a phase from [0, 2 pi kappa).
// Guides with zero base amplitude stay dark.
LatticeRealization sample_realization(const DisorderSpec& spec, std::uint64_t index);

// Uniform on [lo, hi); returns lo exactly when hi == lo.
double uniform_in(double lo, double hi, double u);

}  // namespace spdcsim
