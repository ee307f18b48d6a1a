#include "spdcsim/disorder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdcsim/rng.hpp"

namespace spdcsim {

std::string_view to_string(DisorderTarget t) {
    switch (t) {
        case DisorderTarget::Coupling: return "coupling";
        case DisorderTarget::Amplitude: return "amplitude";
        case DisorderTarget::Phase: return "phase";
    }
    return "?";
}

DisorderTarget parse_target(std::string_view s) {
    if (s == "coupling") return DisorderTarget::Coupling;
    if (s == "amplitude") return DisorderTarget::Amplitude;
    if (s == "phase") return DisorderTarget::Phase;
    throw std::invalid_argument("unknown disorder target '" + std::string(s) +
                                "' (expected coupling, amplitude or phase)");
}

std::string_view to_string(PhaseMode m) {
    return m == PhaseMode::Replace ? "replace" : "additive";
}

PhaseMode parse_phase_mode(std::string_view s) {
    if (s == "replace") return PhaseMode::Replace;
    if (s == "additive") return PhaseMode::Additive;
    throw std::invalid_argument("unknown phase mode '" + std::string(s) + "'");
}

void DisorderSpec::validate() const {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw std::invalid_argument("disorder strength kappa must lie in [0, 1]");
    }
    base.validate();
}

double uniform_in(double lo, double hi, double u) {
    if (hi == lo) return lo;
    const double x = lo + (hi - lo) * u;
    return x < hi ? x : std::nextafter(hi, lo);
}

LatticeRealization sample_realization(const DisorderSpec& spec, std::uint64_t index) {
    spec.validate();
    LatticeRealization lat = spec.base;
    CounterStream rng(spec.master_seed, index, static_cast<std::uint32_t>(spec.target));
    const double k = spec.kappa;
    switch (spec.target) {
        case DisorderTarget::Coupling:
            for (double& c : lat.coupling) c = uniform_in(c * (1.0 - k), c * (1.0 + k), rng.uniform());
            break;
        case DisorderTarget::Amplitude:
            for (double& a : lat.pump_amplitude) {
                const double u = rng.uniform();
                if (a != 0.0) a = uniform_in(a * (1.0 - k), a * (1.0 + k), u);
            }
            break;
        case DisorderTarget::Phase: {
            const double width = 2.0 * std::numbers::pi * k;
            for (double& phi : lat.pump_phase) {
                const double draw = uniform_in(0.0, width, rng.uniform());
                phi = spec.phase_mode == PhaseMode::Replace ? draw : wrap_phase(phi + draw);
            }
            break;
        }
    }
    return lat;
}

}  // namespace spdcsim
