#include "spdcsim/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdcsim {
namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

// Adds value at <row|.|col> and its Hermitian mirror.
void add_hermitian_pair(Triplets& t, std::size_t row, std::size_t col, cplx value) {
    t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), value);
    t.emplace_back(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row), std::conj(value));
}

QOperator from_triplets(std::size_t dim, const Triplets& t) {
    const auto n = static_cast<Eigen::Index>(dim);
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return QOperator(std::move(m));
}

}  // namespace

EvolutionGenerator::EvolutionGenerator(FockBasis basis, LatticeRealization lattice)
    : basis_(std::move(basis)), lattice_(std::move(lattice)) {
    lattice_.validate();
    const int n_modes = basis_.n_modes();
    if (lattice_.n_guides() != n_modes) {
        throw std::invalid_argument("build_generator: basis has " + std::to_string(n_modes) +
                                    " modes but lattice has " +
                                    std::to_string(lattice_.n_guides()) + " guides");
    }
    const int top = basis_.local_dim() - 1;
    const std::size_t dim = basis_.total_dim();
    const auto eta = eta_profile(lattice_);

    Triplets hop;
    for (int j = 0; j + 1 < n_modes; ++j) {
        const double c = lattice_.coupling[j];
        terms_.push_back({TermKind::HopForward, j, j + 1, c});
        terms_.push_back({TermKind::HopBackward, j + 1, j, c});
        if (c == 0.0) continue;
        const std::size_t sj = basis_.stride(j);
        const std::size_t sk = basis_.stride(j + 1);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const int nj = basis_.occupation(idx, j);
            const int nk = basis_.occupation(idx, j + 1);
            if (nk == 0 || nj == top) continue;
            // A_{j+1} A_j^dag |.., nj, nk, ..> = sqrt((nj+1) nk) |.., nj+1, nk-1, ..>
            const std::size_t target = idx + sj - sk;
            add_hermitian_pair(hop, target, idx, c * std::sqrt(double(nj + 1) * double(nk)));
        }
    }

    Triplets pair;
    for (int j = 0; j < n_modes; ++j) {
        terms_.push_back({TermKind::PairCreate, j, j, eta[j]});
        terms_.push_back({TermKind::PairAnnihilate, j, j, std::conj(eta[j])});
        if (eta[j] == cplx{}) continue;
        const std::size_t sj = basis_.stride(j);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const int nj = basis_.occupation(idx, j);
            if (nj + 2 > top) continue;
            // A_j^dag^2 |nj> = sqrt((nj+1)(nj+2)) |nj+2>
            add_hermitian_pair(pair, idx + 2 * sj, idx,
                               eta[j] * std::sqrt(double(nj + 1) * double(nj + 2)));
        }
    }

    hopping_ = from_triplets(dim, hop);
    pairing_ = from_triplets(dim, pair);
    k_ = hopping_ + pairing_;
}

EvolutionGenerator build_generator(const FockBasis& basis, const LatticeRealization& lattice) {
    return EvolutionGenerator(basis, lattice);
}

}  // namespace spdcsim
