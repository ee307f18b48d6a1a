#include "spdcsim/lattice.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace spdcsim {

void PhysicalConstants::validate() const {
    if (!(coupling0 > 0.0)) throw std::invalid_argument("coupling0 must be > 0");
    if (!(nonlinearity >= 0.0)) throw std::invalid_argument("nonlinearity must be >= 0");
    if (!(pump_amplitude0 >= 0.0)) throw std::invalid_argument("pump amplitude must be >= 0");
    if (!(zeta_max > 0.0)) throw std::invalid_argument("zeta_max must be > 0");
    if (n_z < 2) throw std::invalid_argument("grid needs at least 2 points");
}

void LatticeRealization::validate() const {
    constants.validate();
    const std::size_t n = pump_amplitude.size();
    if (n < 1) throw std::invalid_argument("lattice needs at least one guide");
    if (coupling.size() + 1 != n || pump_phase.size() != n) {
        throw std::invalid_argument("lattice profile lengths inconsistent: coupling " +
                                    std::to_string(coupling.size()) + ", amplitude " +
                                    std::to_string(n) + ", phase " +
                                    std::to_string(pump_phase.size()));
    }
    for (double c : coupling)
        if (!(c >= 0.0)) throw std::invalid_argument("coupling entries must be >= 0");
    for (double a : pump_amplitude)
        if (!(a >= 0.0)) throw std::invalid_argument("pump amplitudes must be >= 0");
}

LatticeRealization homogeneous_lattice(const PhysicalConstants& constants, int n_guides,
                                       const std::set<int>& injected) {
    constants.validate();
    if (n_guides < 1) throw std::invalid_argument("n_guides must be >= 1");
    if (injected.empty()) throw std::invalid_argument("no injected guides: the pump is off");
    LatticeRealization lat;
    lat.constants = constants;
    lat.coupling.assign(static_cast<std::size_t>(n_guides - 1), constants.coupling0);
    lat.pump_amplitude.assign(static_cast<std::size_t>(n_guides), 0.0);
    lat.pump_phase.assign(static_cast<std::size_t>(n_guides), 0.0);
    for (int j : injected) {
        if (j < 0 || j >= n_guides) {
            throw std::out_of_range("injected guide " + std::to_string(j + 1) + " outside 1.." +
                                    std::to_string(n_guides));
        }
        lat.pump_amplitude[j] = constants.pump_amplitude0;
    }
    return lat;
}

std::vector<std::complex<double>> eta_profile(const LatticeRealization& lattice) {
    const double g = lattice.constants.nonlinearity;
    std::vector<std::complex<double>> eta(lattice.pump_amplitude.size());
    for (std::size_t j = 0; j < eta.size(); ++j) {
        eta[j] = std::polar(g * lattice.pump_amplitude[j], lattice.pump_phase[j]);
    }
    return eta;
}

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

}  // namespace spdcsim
