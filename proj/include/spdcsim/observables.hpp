#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spdcsim/fock.hpp"

namespace spdcsim {

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Below this total photon number the normalized distribution is undefined.
inline constexpr double kMinTotalPhotons = 1e-12;

// <N_j> for every mode, from |amplitude|^2 weighted occupations.
std::vector<double> photon_numbers(const StateVector& psi, const FockBasis& basis);

// n_j = <N_j> / sum_i <N_i>; nullopt when the total is below kMinTotalPhotons.
std::optional<std::vector<double>> normalized_distribution(std::span<const double> numbers);

// Standard deviation of guide position, positions 1..N.
double sigma(std::span<const double> n);

// (sum_j n_j^2)^-1
double participation_ratio(std::span<const double> n);

// Gamma_{q,r} = <A_q^dag A_r^dag A_r A_q>, Gamma_{q,q} = <A_q^dag^2 A_q^2>.
Eigen::MatrixXd correlation_matrix(const StateVector& psi, const FockBasis& basis);

struct ZetaWindow {
    double lo = 10.0;
    double hi = 20.0;

    bool operator==(const ZetaWindow&) const = default;
};

// Mean over entries with a value and zeta strictly inside the window.
double spatial_average(std::span<const double> zeta, std::span<const std::optional<double>> series,
                       ZetaWindow window);

// Per-grid-point observables of one propagation.
struct ZTrace {
    std::vector<double> zeta;
    std::vector<double> total_photons;
    std::vector<std::optional<std::vector<double>>> n;
    std::vector<std::optional<double>> sigma;
    std::vector<std::optional<double>> pr;
    Eigen::MatrixXd gamma_final;

    bool valid(std::size_t k) const { return n[k].has_value(); }
};

// Accumulates a ZTrace from states delivered in grid order.
class ZTraceBuilder {
  public:
    ZTraceBuilder(const FockBasis& basis, std::size_t n_points);

    void observe(std::size_t index, double zeta, const StateVector& psi);
    ZTrace finish() &&;

  private:
    const FockBasis& basis_;
    std::size_t n_points_;
    ZTrace trace_;
};

}  // namespace spdcsim
