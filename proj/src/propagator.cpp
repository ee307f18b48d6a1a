#include "spdcsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spdcsim {
namespace {

// Parity (0 even, 1 odd) shared by every nonzero amplitude, or -1.
int definite_parity(const FockBasis& basis, const StateVector& psi) {
    int parity = -1;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (psi[i] == cplx{}) continue;
        const int p = basis.total_photons(i) % 2;
        if (parity == -1) {
            parity = p;
        } else if (p != parity) {
            return -1;
        }
    }
    return parity;
}

// K restricted to one parity sector together with the sector's basis indices.
struct Sector {
    std::vector<Eigen::Index> members;
    SparseMatrix k;
};

Sector restrict_to_parity(const FockBasis& basis, const SparseMatrix& k, int parity) {
    Sector s;
    std::vector<Eigen::Index> position(basis.total_dim(), -1);
    for (std::size_t i = 0; i < basis.total_dim(); ++i) {
        if (basis.total_photons(i) % 2 == parity) {
            position[i] = static_cast<Eigen::Index>(s.members.size());
            s.members.push_back(static_cast<Eigen::Index>(i));
        }
    }
    const auto n = static_cast<Eigen::Index>(s.members.size());
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(k.nonZeros()));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (SparseMatrix::InnerIterator it(k, s.members[r]); it; ++it) {
            const Eigen::Index c = position[static_cast<std::size_t>(it.col())];
            if (c < 0) throw std::logic_error("generator mixes parity sectors");
            t.emplace_back(r, c, it.value());
        }
    }
    s.k.resize(n, n);
    s.k.setFromTriplets(t.begin(), t.end());
    s.k.makeCompressed();
    return s;
}

template <class Matrix>
double one_norm(const Matrix& m) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (typename Matrix::InnerIterator it(m, r); it; ++it) col[it.col()] += std::abs(it.value());
    return m.cols() == 0 ? 0.0 : col.maxCoeff();
}

// Taylor series of exp(i K d) psi, evaluated for several offsets d at once
// so that every grid point inside one substep shares the same matvecs.
template <class Matrix>
class TaylorStepper {
  public:
    TaylorStepper(const Matrix& k, const PropagatorOptions& opt)
        : k_(k), opt_(opt), knorm_(one_norm(k)), term_(k.rows()), next_(k.rows()) {}

    double max_step() const {
        return knorm_ == 0.0 ? std::numeric_limits<double>::infinity()
                             : opt_.step_norm / (knorm_ * std::max(1, opt_.refinement));
    }

    // out[p] <- exp(i K offsets[p]) psi for increasing offsets, the last one
    // at most max_step().
    void series(const Amplitudes& psi, std::span<const double> offsets, std::vector<Amplitudes>& out,
                PropagationSummary& stats) {
        if (++stats.substeps > opt_.max_substeps) {
            throw ConvergenceError("propagate: substep budget of " +
                                   std::to_string(opt_.max_substeps) + " exhausted");
        }
        const double d = offsets.back();
        const double theta = knorm_ * d;
        out.resize(offsets.size());
        ratio_.assign(offsets.size(), 1.0);
        for (auto& o : out) o = psi;
        if (theta == 0.0) return;
        term_ = psi;
        for (int j = 1;; ++j) {
            if (j > opt_.max_terms) {
                throw ConvergenceError("propagate: Taylor series did not reach tolerance " +
                                       std::to_string(opt_.tolerance) + " within " +
                                       std::to_string(opt_.max_terms) + " terms");
            }
            next_.noalias() = k_ * term_;
            ++stats.matvecs;
            term_ = next_ * cplx(0.0, d / j);
            for (std::size_t p = 0; p < offsets.size(); ++p) {
                ratio_[p] *= offsets[p] / d;
                out[p] += ratio_[p] * term_;
            }
            // Remainder after term j is bounded by |term_j| * theta / (j + 1 - theta).
            if (j + 1 > 2.0 * theta && term_.norm() <= opt_.tolerance) break;
        }
    }

  private:
    const Matrix& k_;
    PropagatorOptions opt_;
    double knorm_;
    Amplitudes term_;
    Amplitudes next_;
    std::vector<double> ratio_;
};

template <class Stepper, class Emit>
void integrate(Stepper stepper, Amplitudes& psi, std::span<const double> zeta_grid, double c0,
               const Emit& emit, PropagationSummary& stats) {
    const double h_max = stepper.max_step();
    std::vector<double> offsets;
    std::vector<Amplitudes> out;
    double z = 0.0;
    std::size_t next = 1;
    while (next < zeta_grid.size()) {
        const double gap = zeta_grid[next] / c0 - z;
        if (gap > h_max) {
            // no grid point within reach: plain substep towards the next one
            const double h = gap / std::ceil(gap / h_max);
            offsets.assign(1, h);
            stepper.series(psi, offsets, out, stats);
            psi = out[0];
            z += h;
            continue;
        }
        offsets.clear();
        std::size_t last = next;
        while (last < zeta_grid.size() && zeta_grid[last] / c0 - z <= h_max) {
            offsets.push_back(zeta_grid[last] / c0 - z);
            ++last;
        }
        stepper.series(psi, offsets, out, stats);
        for (std::size_t p = 0; p < offsets.size(); ++p) {
            psi = out[p];
            emit(next + p);
        }
        z = zeta_grid[last - 1] / c0;
        next = last;
    }
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("propagate: empty zeta grid");
    if (grid.front() != 0.0) throw std::invalid_argument("propagate: zeta grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("propagate: zeta grid must be strictly increasing");
        }
    }
}

}  // namespace

std::vector<double> uniform_zeta_grid(double zeta_max, int n_points) {
    if (n_points < 1) throw std::invalid_argument("zeta grid needs at least 1 point");
    if (n_points == 1) return {0.0};
    if (!(zeta_max > 0.0)) throw std::invalid_argument("zeta_max must be > 0");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double denom = static_cast<double>(n_points - 1);
    for (int k = 0; k < n_points; ++k) grid[k] = zeta_max * static_cast<double>(k) / denom;
    return grid;
}

PropagationSummary propagate(const EvolutionGenerator& gen, const StateVector& psi0,
                             std::span<const double> zeta_grid, const StateObserver& observer,
                             const PropagatorOptions& options) {
    const FockBasis& basis = gen.basis();
    if (psi0.dim() != basis.total_dim()) {
        throw std::invalid_argument("propagate: state dimension does not match the generator");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("propagate: initial state is not normalized");
    }
    check_grid(zeta_grid);

    const double c0 = gen.lattice().constants.coupling0;
    PropagationSummary stats;

    const int parity = options.sector == SectorMode::Auto ? definite_parity(basis, psi0) : -1;
    Sector sector;
    const SparseMatrix* k = &gen.op().matrix();
    Amplitudes psi;
    if (parity >= 0) {
        sector = restrict_to_parity(basis, *k, parity);
        k = &sector.k;
        psi.resize(static_cast<Eigen::Index>(sector.members.size()));
        for (std::size_t i = 0; i < sector.members.size(); ++i) {
            psi[static_cast<Eigen::Index>(i)] = psi0.amplitudes()[sector.members[i]];
        }
        stats.sector_restricted = true;
    } else {
        psi = psi0.amplitudes();
    }

    StateVector full(Amplitudes::Zero(static_cast<Eigen::Index>(basis.total_dim())));
    auto emit = [&](std::size_t index) {
        if (stats.sector_restricted) {
            Amplitudes& out = full.amplitudes();
            for (std::size_t i = 0; i < sector.members.size(); ++i) {
                out[sector.members[i]] = psi[static_cast<Eigen::Index>(i)];
            }
        } else {
            full.amplitudes() = psi;
        }
        stats.norm_drift = std::max(stats.norm_drift, std::abs(full.norm() - 1.0));
        if (observer) observer(index, zeta_grid[index], full);
    };

    emit(0);
    // a real generator (all pump phases 0 or pi) halves the matvec cost
    bool real = true;
    for (Eigen::Index r = 0; r < k->outerSize() && real; ++r)
        for (SparseMatrix::InnerIterator it(*k, r); it; ++it)
            if (it.value().imag() != 0.0) {
                real = false;
                break;
            }
    if (real) {
        const Eigen::SparseMatrix<double, Eigen::RowMajor> kr = k->real();
        integrate(TaylorStepper(kr, options), psi, zeta_grid, c0, emit, stats);
    } else {
        integrate(TaylorStepper(*k, options), psi, zeta_grid, c0, emit, stats);
    }
    stats.top_level_population = top_level_population(basis, full);
    return stats;
}

PropagationResult evolve(const EvolutionGenerator& gen, const StateVector& psi0,
                         std::span<const double> zeta_grid, const PropagatorOptions& options) {
    PropagationResult result;
    result.zeta_grid.assign(zeta_grid.begin(), zeta_grid.end());
    result.states.reserve(zeta_grid.size());
    result.summary = propagate(
        gen, psi0, zeta_grid,
        [&](std::size_t, double, const StateVector& psi) { result.states.push_back(psi); }, options);
    return result;
}

double top_level_population(const FockBasis& basis, const StateVector& psi) {
    const int top = basis.local_dim() - 1;
    double p = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        for (int j = 0; j < basis.n_modes(); ++j) {
            if (basis.occupation(i, j) == top) {
                p += std::norm(psi[i]);
                break;
            }
        }
    }
    return p;
}

double odd_parity_population(const FockBasis& basis, const StateVector& psi) {
    double p = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if (basis.total_photons(i) % 2 == 1) p += std::norm(psi[i]);
    }
    return p;
}

}  // namespace spdcsim
