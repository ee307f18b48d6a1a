#pragma once

#include <cmath>
#include <complex>
#include <set>
#include <vector>

namespace spdcsim {

struct PhysicalConstants {
    double coupling0 = 250.0;               // C0 [1/m]
    double nonlinearity = 70.0;             // g [W^-1/2 / m]
    double pump_amplitude0 = std::sqrt(5e-4);  // alpha0 [W^1/2]
    double zeta_max = 20.0;                 // propagation length as C0 * z
    int n_z = 401;                          // grid samples over [0, zeta_max]
    double sample_length = 0.8;             // nominal device length [m], metadata only

    double z_max() const { return zeta_max / coupling0; }
    void validate() const;

    bool operator==(const PhysicalConstants&) const = default;
};

// One concrete array: constants plus the coupling, pump amplitude and pump
// phase profiles. Phases are kept in [0, 2*pi).
struct LatticeRealization {
    PhysicalConstants constants;
    std::vector<double> coupling;        // N-1 entries [1/m]
    std::vector<double> pump_amplitude;  // N entries [W^1/2]
    std::vector<double> pump_phase;      // N entries [rad]

    int n_guides() const { return static_cast<int>(pump_amplitude.size()); }
    void validate() const;

    bool operator==(const LatticeRealization&) const = default;
};

// `injected` holds 0-based guide indices.
LatticeRealization homogeneous_lattice(const PhysicalConstants& constants, int n_guides,
                                       const std::set<int>& injected);

// eta_j = g * |alpha_j| * exp(i phi_j)  [1/m]
std::vector<std::complex<double>> eta_profile(const LatticeRealization& lattice);

double wrap_phase(double phi);

}  // namespace spdcsim
