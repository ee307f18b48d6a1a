// Independent reference computations for validating the main pipeline.
//
// Neither routine shares code with the Taylor propagator: both go through a
// dense Hermitian eigendecomposition.

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spdcsim/fock.hpp"
#include "spdcsim/generator.hpp"

namespace spdcsim {

// U(z) = exp(i H z) with H the real symmetric tridiagonal single-photon
// hopping matrix (off-diagonals C_j).
struct SingleParticlePropagator {
    int n = 0;
    Eigen::MatrixXcd u;
};

SingleParticlePropagator tridiagonal_propagator(std::span<const double> coupling, double z);

inline constexpr std::size_t kDenseReferenceMaxDim = 4096;

// exp(i K z) psi0 by full diagonalization of K.
StateVector dense_reference_evolve(const EvolutionGenerator& gen, const StateVector& psi0, double z,
                                   std::size_t max_dim = kDenseReferenceMaxDim);

struct SelfCheckItem {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

// Runs the oracle comparisons at desk scale (a few seconds).
std::vector<SelfCheckItem> run_selfcheck();

}  // namespace spdcsim
