#include "spdcsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "spdcsim/disorder.hpp"
#include "spdcsim/observables.hpp"
#include "spdcsim/propagator.hpp"

namespace spdcsim {

SingleParticlePropagator tridiagonal_propagator(std::span<const double> coupling, double z) {
    if (z < 0.0) throw std::invalid_argument("tridiagonal_propagator: z must be >= 0");
    const int n = static_cast<int>(coupling.size()) + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) h(j, j + 1) = h(j + 1, j) = coupling[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (int k = 0; k < n; ++k) phases[k] = std::polar(1.0, es.eigenvalues()[k] * z);
    SingleParticlePropagator out;
    out.n = n;
    out.u = v.cast<cplx>() * phases.asDiagonal() * v.transpose().cast<cplx>();
    return out;
}

StateVector dense_reference_evolve(const EvolutionGenerator& gen, const StateVector& psi0, double z,
                                   std::size_t max_dim) {
    const std::size_t dim = gen.basis().total_dim();
    if (dim > max_dim) {
        throw ResourceLimitError("dense_reference_evolve: dimension " + std::to_string(dim) +
                                 " exceeds the dense cap of " + std::to_string(max_dim));
    }
    if (psi0.dim() != dim) throw std::invalid_argument("dense_reference_evolve: dimension mismatch");
    const Eigen::MatrixXcd k = Eigen::MatrixXcd(gen.op().matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::VectorXcd coeff = v.adjoint() * psi0.amplitudes();
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff[i] *= std::polar(1.0, es.eigenvalues()[i] * z);
    return StateVector(Amplitudes(v * coeff));
}

namespace {

PhysicalConstants desk_constants(double zeta_max, int n_z) {
    PhysicalConstants c;
    c.zeta_max = zeta_max;
    c.n_z = n_z;
    return c;
}

SelfCheckItem item(std::string name, double measured, double threshold) {
    return {std::move(name), measured < threshold, measured, threshold};
}

SelfCheckItem check_generator_symmetry() {
    auto base = homogeneous_lattice(desk_constants(20, 2), 3, {0, 1, 2});
    DisorderSpec spec{DisorderTarget::Phase, 0.7, base, 11};
    auto lattice = sample_realization(spec, 1);
    spec.target = DisorderTarget::Coupling;
    spec.base = lattice;
    lattice = sample_realization(spec, 2);
    const auto basis = build_basis(3, 3);
    const auto gen = build_generator(basis, lattice);
    const auto& k = gen.op();
    const auto p = parity_op(basis);
    const double err = std::max((k - k.adjoint()).norm(), commutator(k, p).norm());
    return item("generator hermiticity and parity (N=3, m=3)", err, 1e-12);
}

SelfCheckItem check_squeezer() {
    auto constants = desk_constants(20, 401);
    const auto lattice = homogeneous_lattice(constants, 1, {0});
    const auto basis = build_basis(1, 3);
    const auto gen = build_generator(basis, lattice);
    const double eta = eta_profile(lattice)[0].real();
    const auto grid = uniform_zeta_grid(constants.zeta_max, constants.n_z);
    double worst = 0.0;
    propagate(gen, vacuum_state(basis), grid, [&](std::size_t, double zeta, const StateVector& psi) {
        const double z = zeta / constants.coupling0;
        const double expected = std::pow(std::sin(std::numbers::sqrt2 * eta * z), 2);
        worst = std::max(worst, std::abs(std::norm(psi[2]) - expected));
    });
    return item("single-mode squeezer follows sin^2(sqrt2 eta z)", worst, 1e-6);
}

SelfCheckItem check_linear_limit() {
    auto constants = desk_constants(10, 101);
    constants.nonlinearity = 0.0;
    const int n = 5;
    const auto basis = build_basis(n, 3);
    const auto grid = uniform_zeta_grid(constants.zeta_max, constants.n_z);
    auto base = homogeneous_lattice(constants, n, {0});
    double worst = 0.0;
    for (std::uint64_t r = 0; r < 3; ++r) {
        const auto lattice =
            r == 0 ? base : sample_realization({DisorderTarget::Coupling, 0.6, base, 5}, r);
        const auto gen = build_generator(basis, lattice);
        for (int j0 : {0, 2}) {
            std::vector<int> occ(n, 0);
            occ[j0] = 1;
            propagate(gen, fock_state(basis, occ), grid,
                      [&](std::size_t, double zeta, const StateVector& psi) {
                          const auto u = tridiagonal_propagator(lattice.coupling,
                                                                zeta / constants.coupling0);
                          const auto numbers = photon_numbers(psi, basis);
                          for (int q = 0; q < n; ++q) {
                              worst = std::max(worst,
                                               std::abs(numbers[q] - std::norm(u.u(q, j0))));
                          }
                      });
        }
    }
    return item("g = 0 photon numbers match the single-particle propagator", worst, 1e-8);
}

SelfCheckItem check_dense_reference() {
    auto constants = desk_constants(5, 21);
    constants.nonlinearity = 70.0 * 40.0;  // strong pairing so every sector is exercised
    const auto basis = build_basis(3, 3);
    const auto base = homogeneous_lattice(constants, 3, {0, 1, 2});
    const auto grid = uniform_zeta_grid(constants.zeta_max, constants.n_z);
    double worst = 0.0;
    for (std::uint64_t r = 1; r <= 3; ++r) {
        DisorderSpec spec{DisorderTarget::Coupling, 0.8, base, 17};
        auto lattice = sample_realization(spec, r);
        spec = {DisorderTarget::Phase, 1.0, lattice, 19};
        lattice = sample_realization(spec, r);
        const auto gen = build_generator(basis, lattice);
        const auto psi0 = vacuum_state(basis);
        propagate(gen, psi0, grid, [&](std::size_t, double zeta, const StateVector& psi) {
            const auto ref = dense_reference_evolve(gen, psi0, zeta / constants.coupling0);
            worst = std::max(worst, (psi.amplitudes() - ref.amplitudes()).norm());
        });
    }
    return item("propagator matches dense diagonalization (N=3, m=3)", worst, 1e-8);
}

SelfCheckItem check_unitarity() {
    const auto constants = desk_constants(20, 401);
    const auto basis = build_basis(5, 3);
    const auto lattice = homogeneous_lattice(constants, 5, {2});
    const auto gen = build_generator(basis, lattice);
    const auto grid = uniform_zeta_grid(constants.zeta_max, constants.n_z);
    PropagatorOptions opt;
    opt.sector = SectorMode::Full;
    double odd = 0.0;
    const auto summary =
        propagate(gen, vacuum_state(basis), grid,
                  [&](std::size_t, double, const StateVector& psi) {
                      odd = std::max(odd, odd_parity_population(basis, psi));
                  },
                  opt);
    return item("norm drift and odd-parity leakage (N=5, full space)",
                std::max(summary.norm_drift, odd), 1e-9);
}

}  // namespace

std::vector<SelfCheckItem> run_selfcheck() {
    return {check_generator_symmetry(), check_squeezer(), check_linear_limit(),
            check_dense_reference(), check_unitarity()};
}

}  // namespace spdcsim
