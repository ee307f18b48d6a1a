// Truncated multimode Fock space: basis indexing, mode operators, states.
//
// Index convention: an occupation vector (n_0, ..., n_{N-1}) maps to the
// base-m integer whose most significant digit is n_0. Mode indices in the
// library are 0-based; guide numbers at the I/O boundary are 1-based.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace spdcsim {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Amplitudes = Eigen::VectorXcd;

// Thrown when a requested construction would exceed a configured memory cap.
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMaxDim = 10'000'000;

class FockBasis {
  public:
    FockBasis(int n_modes, int local_dim, std::size_t max_dim = kDefaultMaxDim);

    int n_modes() const { return n_modes_; }
    int local_dim() const { return local_dim_; }
    std::size_t total_dim() const { return total_dim_; }

    std::size_t encode(std::span<const int> occupations) const;
    std::vector<int> decode(std::size_t index) const;

    // Occupation of `mode` in basis state `index`, via a precomputed table.
    int occupation(std::size_t index, int mode) const {
        return occ_[index * static_cast<std::size_t>(n_modes_) + mode];
    }
    int total_photons(std::size_t index) const { return total_[index]; }
    std::size_t stride(int mode) const { return strides_[mode]; }

    void check_mode(int mode) const;

    bool operator==(const FockBasis& other) const {
        return n_modes_ == other.n_modes_ && local_dim_ == other.local_dim_;
    }

  private:
    int n_modes_;
    int local_dim_;
    std::size_t total_dim_;
    std::vector<std::size_t> strides_;
    std::vector<std::uint8_t> occ_;
    std::vector<std::uint16_t> total_;
};

FockBasis build_basis(int n_modes, int local_dim, std::size_t max_dim = kDefaultMaxDim);

class StateVector;

// Complex linear operator on a truncated space, sparse row-major storage.
class QOperator {
  public:
    QOperator() = default;
    explicit QOperator(SparseMatrix m);
    static QOperator zero(std::size_t dim);
    static QOperator identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const SparseMatrix& matrix() const { return m_; }

    QOperator adjoint() const;
    StateVector apply(const StateVector& psi) const;

    // Frobenius norm.
    double norm() const;

    QOperator& operator+=(const QOperator& rhs);
    QOperator& operator-=(const QOperator& rhs);
    QOperator& operator*=(cplx s);

    friend QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
    friend QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }
    friend QOperator operator*(QOperator a, cplx s) { return a *= s; }
    friend QOperator operator*(cplx s, QOperator a) { return a *= s; }
    friend QOperator operator*(const QOperator& a, const QOperator& b);

  private:
    SparseMatrix m_;
};

QOperator commutator(const QOperator& a, const QOperator& b);

class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(Amplitudes amps) : amps_(std::move(amps)) {}

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Amplitudes& amplitudes() const { return amps_; }
    Amplitudes& amplitudes() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    double norm() const { return amps_.norm(); }

  private:
    Amplitudes amps_;
};

// Elementary operators on mode `mode` (0-based).
QOperator annihilation_op(const FockBasis& basis, int mode);
QOperator creation_op(const FockBasis& basis, int mode);
QOperator number_op(const FockBasis& basis, int mode);

// (-1)^(total photon number), diagonal.
QOperator parity_op(const FockBasis& basis);

StateVector vacuum_state(const FockBasis& basis);
StateVector fock_state(const FockBasis& basis, std::span<const int> occupations);

}  // namespace spdcsim
