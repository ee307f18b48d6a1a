#include "spdcsim/observables.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace spdcsim {

std::vector<double> photon_numbers(const StateVector& psi, const FockBasis& basis) {
    if (psi.dim() != basis.total_dim()) {
        throw std::invalid_argument("photon_numbers: state dimension does not match basis");
    }
    const int n_modes = basis.n_modes();
    std::vector<double> out(static_cast<std::size_t>(n_modes), 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const double p = std::norm(psi[i]);
        if (p == 0.0) continue;
        for (int j = 0; j < n_modes; ++j) out[j] += p * basis.occupation(i, j);
    }
    return out;
}

std::optional<std::vector<double>> normalized_distribution(std::span<const double> numbers) {
    const double total = std::accumulate(numbers.begin(), numbers.end(), 0.0);
    if (total < kMinTotalPhotons) return std::nullopt;
    std::vector<double> n(numbers.begin(), numbers.end());
    for (double& x : n) x /= total;
    return n;
}

double sigma(std::span<const double> n) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        const double pos = static_cast<double>(j + 1);
        m1 += n[j] * pos;
        m2 += n[j] * pos * pos;
    }
    double radicand = m2 - m1 * m1;
    if (radicand < 0.0) {
        if (radicand < -1e-12) {
            throw NumericalError("sigma: negative variance " + std::to_string(radicand));
        }
        radicand = 0.0;
    }
    return std::sqrt(radicand);
}

double participation_ratio(std::span<const double> n) {
    double s = 0.0;
    for (double x : n) s += x * x;
    if (s == 0.0) throw std::invalid_argument("participation_ratio: all-zero distribution");
    return 1.0 / s;
}

Eigen::MatrixXd correlation_matrix(const StateVector& psi, const FockBasis& basis) {
    if (psi.dim() != basis.total_dim()) {
        throw std::invalid_argument("correlation_matrix: state dimension does not match basis");
    }
    // Both normally ordered products are diagonal in the Fock basis:
    // off-diagonal weight n_q n_r, diagonal weight n_q (n_q - 1).
    const int n_modes = basis.n_modes();
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n_modes, n_modes);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const double p = std::norm(psi[i]);
        if (p == 0.0) continue;
        for (int q = 0; q < n_modes; ++q) {
            const int nq = basis.occupation(i, q);
            if (nq == 0) continue;
            gamma(q, q) += p * nq * (nq - 1);
            for (int r = q + 1; r < n_modes; ++r) {
                const int nr = basis.occupation(i, r);
                if (nr != 0) gamma(q, r) += p * nq * nr;
            }
        }
    }
    for (int q = 0; q < n_modes; ++q)
        for (int r = q + 1; r < n_modes; ++r) gamma(r, q) = gamma(q, r);
    return gamma;
}

double spatial_average(std::span<const double> zeta, std::span<const std::optional<double>> series,
                       ZetaWindow window) {
    if (zeta.size() != series.size()) {
        throw std::invalid_argument("spatial_average: grid and series lengths differ");
    }
    if (zeta.empty() || window.lo < zeta.front() || window.hi > zeta.back() ||
        !(window.lo < window.hi)) {
        throw std::invalid_argument("spatial_average: window outside the grid");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < zeta.size(); ++k) {
        if (zeta[k] > window.lo && zeta[k] < window.hi && series[k]) {
            sum += *series[k];
            ++count;
        }
    }
    if (count < 2) {
        throw std::invalid_argument("spatial_average: fewer than 2 valid points in window (" +
                                    std::to_string(window.lo) + ", " +
                                    std::to_string(window.hi) + ")");
    }
    return sum / static_cast<double>(count);
}

ZTraceBuilder::ZTraceBuilder(const FockBasis& basis, std::size_t n_points)
    : basis_(basis), n_points_(n_points) {
    trace_.zeta.resize(n_points);
    trace_.total_photons.resize(n_points);
    trace_.n.resize(n_points);
    trace_.sigma.resize(n_points);
    trace_.pr.resize(n_points);
}

void ZTraceBuilder::observe(std::size_t index, double zeta, const StateVector& psi) {
    if (index >= n_points_) throw std::out_of_range("ZTraceBuilder: grid index out of range");
    const auto numbers = photon_numbers(psi, basis_);
    trace_.zeta[index] = zeta;
    trace_.total_photons[index] = std::accumulate(numbers.begin(), numbers.end(), 0.0);
    trace_.n[index] = normalized_distribution(numbers);
    if (trace_.n[index]) {
        trace_.sigma[index] = sigma(*trace_.n[index]);
        trace_.pr[index] = participation_ratio(*trace_.n[index]);
    }
    if (index + 1 == n_points_) trace_.gamma_final = correlation_matrix(psi, basis_);
}

ZTrace ZTraceBuilder::finish() && { return std::move(trace_); }

}  // namespace spdcsim
