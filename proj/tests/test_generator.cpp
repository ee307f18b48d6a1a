#include <doctest.h>

#include <cmath>
#include <random>

#include "spdcsim/generator.hpp"

using namespace spdcsim;

namespace {

LatticeRealization random_lattice(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LatticeRealization lat;
    lat.coupling.resize(n - 1);
    lat.pump_amplitude.resize(n);
    lat.pump_phase.resize(n);
    for (auto& c : lat.coupling) c = 100.0 + 300.0 * u(rng);
    for (auto& a : lat.pump_amplitude) a = 0.04 * u(rng);
    for (auto& p : lat.pump_phase) p = 6.28 * u(rng);
    return lat;
}

// K assembled from operator products, independent of the triplet builder.
QOperator product_generator(const FockBasis& b, const LatticeRealization& lat) {
    const int n = lat.n_guides();
    QOperator k = QOperator::zero(b.total_dim());
    for (int j = 0; j + 1 < n; ++j) {
        const auto hop = annihilation_op(b, j + 1) * creation_op(b, j);
        k += (hop + hop.adjoint()) * cplx(lat.coupling[j]);
    }
    const auto eta = eta_profile(lat);
    for (int j = 0; j < n; ++j) {
        const auto ad = creation_op(b, j);
        const auto pair = ad * ad * eta[j];
        k += pair + pair.adjoint();
    }
    return k;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("homogeneous lattice and pump profile") {
    const PhysicalConstants pc;
    const auto lat = homogeneous_lattice(pc, 9, {4});
    CHECK(lat.n_guides() == 9);
    CHECK(lat.coupling.size() == 8);
    for (double c : lat.coupling) CHECK(c == 250.0);
    for (int j = 0; j < 9; ++j) CHECK(lat.pump_amplitude[j] == (j == 4 ? std::sqrt(5e-4) : 0.0));
    const auto eta = eta_profile(lat);
    CHECK(std::abs(eta[4]) == doctest::Approx(1.5652475842498528).epsilon(1e-12));
    CHECK(std::abs(eta[0]) == 0.0);
    CHECK(pc.z_max() == doctest::Approx(0.08));
}

TEST_CASE("invalid lattices") {
    const PhysicalConstants pc;
    CHECK_THROWS_AS(homogeneous_lattice(pc, 9, {}), std::invalid_argument);
    CHECK_THROWS_AS(homogeneous_lattice(pc, 9, {9}), std::out_of_range);
    auto lat = homogeneous_lattice(pc, 3, {1});
    lat.coupling.push_back(1.0);
    CHECK_THROWS_AS(lat.validate(), std::invalid_argument);
    lat = homogeneous_lattice(pc, 3, {1});
    lat.pump_amplitude[0] = -1.0;
    CHECK_THROWS_AS(lat.validate(), std::invalid_argument);
}

TEST_CASE("phase wrapping") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(2 * M_PI) == doctest::Approx(0.0));
    CHECK(wrap_phase(-0.5) == doctest::Approx(2 * M_PI - 0.5));
    CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2 * M_PI));
}

}

TEST_SUITE("generator") {

TEST_CASE("two guides, linear: single hop matrix element equals the coupling") {
    const auto b = build_basis(2, 2);
    PhysicalConstants pc;
    pc.nonlinearity = 0.0;
    auto lat = homogeneous_lattice(pc, 2, {0});
    lat.coupling[0] = 250.0;
    const auto gen = build_generator(b, lat);
    const Eigen::MatrixXcd k(gen.op().matrix());
    const auto i10 = b.encode(std::vector<int>{1, 0});
    const auto i01 = b.encode(std::vector<int>{0, 1});
    CHECK(k(i01, i10) == cplx(250.0));
    CHECK(k(i10, i01) == cplx(250.0));
    CHECK(k.diagonal().norm() == 0.0);
}

TEST_CASE("pair creation element from vacuum") {
    const auto b = build_basis(1, 3);
    PhysicalConstants pc;
    auto lat = homogeneous_lattice(pc, 1, {0});
    lat.pump_phase[0] = 0.7;
    const auto gen = build_generator(b, lat);
    const Eigen::MatrixXcd k(gen.op().matrix());
    const cplx eta = std::polar(70.0 * std::sqrt(5e-4), 0.7);
    CHECK(std::abs(k(2, 0) - eta * std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(k(0, 2) - std::conj(eta) * std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("term inventory") {
    std::mt19937 rng(3);
    for (int n : {1, 2, 5, 9}) {
        const auto lat = random_lattice(rng, n);
        const auto gen = build_generator(build_basis(n, 2), lat);
        int hops = 0, creates = 0, annihilates = 0;
        for (const auto& t : gen.terms()) {
            if (t.kind == TermKind::HopForward || t.kind == TermKind::HopBackward) ++hops;
            if (t.kind == TermKind::PairCreate) ++creates;
            if (t.kind == TermKind::PairAnnihilate) ++annihilates;
        }
        CHECK(hops == 2 * (n - 1));
        CHECK(creates == n);
        CHECK(annihilates == n);
    }
}

TEST_CASE("property: Hermitian and equal to the operator-product construction") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + trial % 4;
        const int m = 2 + trial % 3;
        const auto b = build_basis(n, m);
        const auto lat = random_lattice(rng, n);
        const auto gen = build_generator(b, lat);
        const double scale = gen.op().norm();
        CHECK((gen.op() - gen.op().adjoint()).norm() <= 1e-14 * scale);
        CHECK((gen.op() - product_generator(b, lat)).norm() <= 1e-13 * scale);
        CHECK((gen.hopping() + gen.pairing() - gen.op()).norm() <= 1e-14 * scale);
    }
}

TEST_CASE("property: photon-number parity is conserved") {
    std::mt19937 rng(5);
    for (int n : {2, 3, 4}) {
        const auto b = build_basis(n, 3);
        const auto gen = build_generator(b, random_lattice(rng, n));
        CHECK(commutator(gen.op(), parity_op(b)).norm() <= 1e-12 * gen.op().norm());
    }
}

TEST_CASE("property: hopping conserves total photon number") {
    std::mt19937 rng(9);
    const auto b = build_basis(3, 3);
    const auto gen = build_generator(b, random_lattice(rng, 3));
    QOperator ntot = QOperator::zero(b.total_dim());
    for (int j = 0; j < 3; ++j) ntot += number_op(b, j);
    CHECK(commutator(gen.hopping(), ntot).norm() <= 1e-12 * gen.hopping().norm());
    CHECK(commutator(gen.pairing(), ntot).norm() > 1.0);
}

TEST_CASE("property: linear in the coupling and pump profiles") {
    std::mt19937 rng(21);
    const auto b = build_basis(3, 3);
    const auto l1 = random_lattice(rng, 3);
    const auto l2 = random_lattice(rng, 3);
    LatticeRealization sum = l1;
    for (int j = 0; j < 2; ++j) sum.coupling[j] = l1.coupling[j] + l2.coupling[j];
    // same phases so that the pump terms add
    auto l2p = l2;
    l2p.pump_phase = l1.pump_phase;
    for (int j = 0; j < 3; ++j) sum.pump_amplitude[j] = l1.pump_amplitude[j] + l2p.pump_amplitude[j];
    const auto k1 = build_generator(b, l1).op();
    const auto k2 = build_generator(b, l2p).op();
    const auto ks = build_generator(b, sum).op();
    CHECK((ks - k1 - k2).norm() <= 1e-13 * ks.norm());
}

TEST_CASE("dimension mismatch is rejected") {
    PhysicalConstants pc;
    const auto lat = homogeneous_lattice(pc, 3, {1});
    CHECK_THROWS_AS(build_generator(build_basis(2, 3), lat), std::invalid_argument);
}

}
