#include "spdcsim/fock.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spdcsim {

FockBasis::FockBasis(int n_modes, int local_dim, std::size_t max_dim)
    : n_modes_(n_modes), local_dim_(local_dim), total_dim_(1) {
    if (n_modes < 1) throw std::invalid_argument("FockBasis: n_modes must be >= 1");
    if (local_dim < 2) throw std::invalid_argument("FockBasis: local_dim must be >= 2");
    if (local_dim > 256) throw std::invalid_argument("FockBasis: local_dim must be <= 256");

    for (int k = 0; k < n_modes; ++k) {
        if (total_dim_ > max_dim / static_cast<std::size_t>(local_dim)) {
            throw ResourceLimitError("FockBasis: " + std::to_string(local_dim) + "^" +
                                     std::to_string(n_modes) + " exceeds the dimension cap of " +
                                     std::to_string(max_dim));
        }
        total_dim_ *= static_cast<std::size_t>(local_dim);
    }

    strides_.assign(static_cast<std::size_t>(n_modes), 1);
    for (int k = n_modes - 2; k >= 0; --k) strides_[k] = strides_[k + 1] * local_dim;

    occ_.resize(total_dim_ * static_cast<std::size_t>(n_modes));
    total_.resize(total_dim_);
    std::vector<int> digits(static_cast<std::size_t>(n_modes), 0);
    for (std::size_t idx = 0; idx < total_dim_; ++idx) {
        int sum = 0;
        for (int k = 0; k < n_modes; ++k) {
            occ_[idx * n_modes + k] = static_cast<std::uint8_t>(digits[k]);
            sum += digits[k];
        }
        total_[idx] = static_cast<std::uint16_t>(sum);
        // odometer increment, last mode fastest
        for (int k = n_modes - 1; k >= 0; --k) {
            if (++digits[k] < local_dim) break;
            digits[k] = 0;
        }
    }
}

std::size_t FockBasis::encode(std::span<const int> occupations) const {
    if (occupations.size() != static_cast<std::size_t>(n_modes_)) {
        throw std::invalid_argument("FockBasis::encode: expected " + std::to_string(n_modes_) +
                                    " occupations");
    }
    std::size_t idx = 0;
    for (int k = 0; k < n_modes_; ++k) {
        const int n = occupations[k];
        if (n < 0 || n >= local_dim_) {
            throw std::out_of_range("FockBasis::encode: occupation " + std::to_string(n) +
                                    " of mode " + std::to_string(k) +
                                    " outside truncation [0, " + std::to_string(local_dim_) + ")");
        }
        idx += static_cast<std::size_t>(n) * strides_[k];
    }
    return idx;
}

std::vector<int> FockBasis::decode(std::size_t index) const {
    if (index >= total_dim_) throw std::out_of_range("FockBasis::decode: index out of range");
    std::vector<int> occ(static_cast<std::size_t>(n_modes_));
    for (int k = 0; k < n_modes_; ++k) occ[k] = occupation(index, k);
    return occ;
}

void FockBasis::check_mode(int mode) const {
    if (mode < 0 || mode >= n_modes_) {
        throw std::out_of_range("mode index " + std::to_string(mode) + " outside [0, " +
                                std::to_string(n_modes_) + ")");
    }
}

FockBasis build_basis(int n_modes, int local_dim, std::size_t max_dim) {
    return FockBasis(n_modes, local_dim, max_dim);
}

// ---------------------------------------------------------------------------

QOperator::QOperator(SparseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("QOperator: matrix must be square");
    m_.makeCompressed();
}

QOperator QOperator::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return QOperator(SparseMatrix(n, n));
}

QOperator QOperator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    SparseMatrix m(n, n);
    m.setIdentity();
    return QOperator(std::move(m));
}

QOperator QOperator::adjoint() const { return QOperator(SparseMatrix(m_.adjoint())); }

StateVector QOperator::apply(const StateVector& psi) const {
    if (psi.dim() != dim()) throw std::invalid_argument("QOperator::apply: dimension mismatch");
    return StateVector(Amplitudes(m_ * psi.amplitudes()));
}

double QOperator::norm() const { return m_.norm(); }

QOperator& QOperator::operator+=(const QOperator& rhs) {
    if (rhs.dim() != dim()) throw std::invalid_argument("QOperator: dimension mismatch");
    m_ = m_ + rhs.m_;
    m_.makeCompressed();
    return *this;
}

QOperator& QOperator::operator-=(const QOperator& rhs) {
    if (rhs.dim() != dim()) throw std::invalid_argument("QOperator: dimension mismatch");
    m_ = m_ - rhs.m_;
    m_.makeCompressed();
    return *this;
}

QOperator& QOperator::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

QOperator operator*(const QOperator& a, const QOperator& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("QOperator: dimension mismatch");
    return QOperator(SparseMatrix(a.m_ * b.m_));
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

QOperator annihilation_op(const FockBasis& basis, int mode) {
    basis.check_mode(mode);
    const auto dim = static_cast<Eigen::Index>(basis.total_dim());
    const std::size_t stride = basis.stride(mode);
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(basis.total_dim());
    for (std::size_t idx = 0; idx < basis.total_dim(); ++idx) {
        const int n = basis.occupation(idx, mode);
        if (n == 0) continue;
        // <n-1| a |n> = sqrt(n)
        entries.emplace_back(static_cast<Eigen::Index>(idx - stride), static_cast<Eigen::Index>(idx),
                             std::sqrt(static_cast<double>(n)));
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return QOperator(std::move(m));
}

QOperator creation_op(const FockBasis& basis, int mode) {
    return annihilation_op(basis, mode).adjoint();
}

QOperator number_op(const FockBasis& basis, int mode) {
    basis.check_mode(mode);
    const auto dim = static_cast<Eigen::Index>(basis.total_dim());
    std::vector<Eigen::Triplet<cplx>> entries;
    for (std::size_t idx = 0; idx < basis.total_dim(); ++idx) {
        const int n = basis.occupation(idx, mode);
        if (n != 0) {
            const auto i = static_cast<Eigen::Index>(idx);
            entries.emplace_back(i, i, static_cast<double>(n));
        }
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return QOperator(std::move(m));
}

QOperator parity_op(const FockBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.total_dim());
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(basis.total_dim());
    for (std::size_t idx = 0; idx < basis.total_dim(); ++idx) {
        const int total = basis.total_photons(idx);
        const auto i = static_cast<Eigen::Index>(idx);
        entries.emplace_back(i, i, (total % 2 == 0) ? 1.0 : -1.0);
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return QOperator(std::move(m));
}

StateVector vacuum_state(const FockBasis& basis) {
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(basis.total_dim()));
    amps[0] = 1.0;
    return StateVector(std::move(amps));
}

StateVector fock_state(const FockBasis& basis, std::span<const int> occupations) {
    const std::size_t idx = basis.encode(occupations);
    Amplitudes amps = Amplitudes::Zero(static_cast<Eigen::Index>(basis.total_dim()));
    amps[static_cast<Eigen::Index>(idx)] = 1.0;
    return StateVector(std::move(amps));
}

}  // namespace spdcsim
