// Generator of spatial evolution, K = M / hbar, for one lattice realization:
//
//   K = sum_{j<N} C_j (A_{j+1} A_j^dag + A_j A_{j+1}^dag)
//     + sum_j (eta_j A_j^dag^2 + conj(eta_j) A_j^2)
//
// with open boundaries (no wrap-around bond).

#pragma once

#include <complex>
#include <vector>

#include "spdcsim/fock.hpp"
#include "spdcsim/lattice.hpp"

namespace spdcsim {

enum class TermKind { HopForward, HopBackward, PairCreate, PairAnnihilate };

// One structural term of K; `coefficient` multiplies the operator product.
struct GeneratorTerm {
    TermKind kind;
    int mode_a;  // HopForward: creates in mode_a, destroys in mode_b
    int mode_b;
    std::complex<double> coefficient;
};

class EvolutionGenerator {
  public:
    EvolutionGenerator(FockBasis basis, LatticeRealization lattice);

    const FockBasis& basis() const { return basis_; }
    const LatticeRealization& lattice() const { return lattice_; }

    // Full generator, units 1/m.
    const QOperator& op() const { return k_; }
    const QOperator& hopping() const { return hopping_; }
    const QOperator& pairing() const { return pairing_; }
    const std::vector<GeneratorTerm>& terms() const { return terms_; }

  private:
    FockBasis basis_;
    LatticeRealization lattice_;
    QOperator hopping_;
    QOperator pairing_;
    QOperator k_;
    std::vector<GeneratorTerm> terms_;
};

EvolutionGenerator build_generator(const FockBasis& basis, const LatticeRealization& lattice);

}  // namespace spdcsim
