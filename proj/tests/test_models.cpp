#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rabi/models.hpp"

using namespace rabi;

namespace {

ModelParams two_photon_rsm(double g, double gamma, std::size_t n) {
    ModelParams p;
    p.variant = ModelVariant::TwoPhotonRSM;
    p.g = g;
    p.gamma = gamma;
    p.fock_dim = n;
    return p;
}

// Basis index of |s> (x) |n> for qubit-major ordering.
std::size_t idx(std::size_t s, std::size_t n, std::size_t dim) { return s * dim + n; }

} // namespace

TEST(BuildHamiltonian, TwoPhotonRsmSingleFockStateIsBareQubit) {
    ModelParams p = two_photon_rsm(0.7, 0.4, 1);
    p.omega_0 = 1.3;
    const ComplexMatrix h = build_hamiltonian(p);
    EXPECT_EQ(h, (ComplexMatrix{{0.0, -0.65}, {-0.65, 0.0}}));
    const auto values = eigvalsh(h);
    EXPECT_NEAR(values[0], -0.65, 1e-15);
    EXPECT_NEAR(values[1], 0.65, 1e-15);
}

TEST(BuildHamiltonian, TwoPhotonRsmHandExpandedTwoLevels) {
    // N = 2: (a^dag)^2 + a^2 vanishes, leaving
    // -sx (x) diag(1/2, 1/2 + gamma) + I (x) diag(0, 1).
    const ComplexMatrix h = build_hamiltonian(two_photon_rsm(0.2, 0.5, 2));
    const ComplexMatrix expected{{0.0, 0.0, -0.5, 0.0},
                                 {0.0, 1.0, 0.0, -1.0},
                                 {-0.5, 0.0, 0.0, 0.0},
                                 {0.0, -1.0, 0.0, 1.0}};
    EXPECT_EQ(h, expected);
}

TEST(BuildHamiltonian, TwoPhotonRsmHandExpandedThreeLevels) {
    const double g = 0.2, gamma = 0.5;
    const std::size_t n = 3;
    const ComplexMatrix h = build_hamiltonian(two_photon_rsm(g, gamma, n));
    ComplexMatrix expected(6, 6);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t k = 0; k < n; ++k) expected(idx(s, k, n), idx(s, k, n)) = double(k);
    for (std::size_t k = 0; k < n; ++k) {
        const double flip = -(0.5 + gamma * double(k));
        expected(idx(0, k, n), idx(1, k, n)) = flip;
        expected(idx(1, k, n), idx(0, k, n)) = flip;
    }
    // <2|(a^dag)^2|0> = sqrt(2); sz gives +g on the up block, -g on the down block.
    const double c = g * std::sqrt(2.0);
    expected(idx(0, 0, n), idx(0, 2, n)) = expected(idx(0, 2, n), idx(0, 0, n)) = c;
    expected(idx(1, 0, n), idx(1, 2, n)) = expected(idx(1, 2, n), idx(1, 0, n)) = -c;
    EXPECT_LE(max_abs_diff(h, expected), 1e-15);
}

TEST(BuildHamiltonian, DecoupledTwoPhotonSpectrum) {
    for (double gamma : {0.0, 0.3, 0.9}) {
        const std::size_t n = 12;
        const auto values = eigvalsh(build_hamiltonian(two_photon_rsm(0.0, gamma, n)));
        std::vector<double> expected;
        for (std::size_t k = 0; k < n; ++k) {
            const double shift = 0.5 + gamma * double(k);
            expected.push_back(double(k) - shift);
            expected.push_back(double(k) + shift);
        }
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < expected.size(); ++i)
            EXPECT_NEAR(values[i], expected[i], 1e-12) << "gamma=" << gamma << " i=" << i;
    }
}

TEST(BuildHamiltonian, DecoupledRabiSpectrum) {
    ModelParams p;
    p.variant = ModelVariant::QRM;
    p.omega_c = 1.5;
    p.omega_0 = 0.4;
    p.fock_dim = 10;
    const auto values = eigvalsh(build_hamiltonian(p));
    std::vector<double> expected;
    for (std::size_t k = 0; k < p.fock_dim; ++k) {
        expected.push_back(1.5 * double(k) - 0.2);
        expected.push_back(1.5 * double(k) + 0.2);
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(values[i], expected[i], 1e-12);
}

TEST(BuildHamiltonian, StarkVariantsReduceExactly) {
    ModelParams qrm;
    qrm.variant = ModelVariant::QRM;
    qrm.g = 0.37;
    qrm.omega_0 = 0.8;
    qrm.fock_dim = 15;
    ModelParams qrsm = qrm;
    qrsm.variant = ModelVariant::QRSM;
    EXPECT_EQ(build_hamiltonian(qrsm), build_hamiltonian(qrm));

    ModelParams tp = two_photon_rsm(0.21, 0.0, 15);
    ModelParams tq = tp;
    tq.variant = ModelVariant::TwoPhotonQRM;
    EXPECT_EQ(build_hamiltonian(tp), build_hamiltonian(tq));
}

TEST(BuildHamiltonian, StarkTermOfRabiStarkModel) {
    ModelParams p;
    p.variant = ModelVariant::QRSM;
    p.gamma = 0.3;
    p.g = 0.1;
    p.fock_dim = 6;
    ModelParams base = p;
    base.variant = ModelVariant::QRM;
    base.gamma = 0.0;
    const ComplexMatrix stark = build_hamiltonian(p) - build_hamiltonian(base);
    const ComplexMatrix expected =
        0.3 * kron(pauli(PauliAxis::z), number_operator(FockSpace(6)));
    EXPECT_LE(max_abs_diff(stark, expected), 1e-15);
}

TEST(BuildHamiltonian, AlwaysHermitian) {
    for (auto v : {ModelVariant::QRM, ModelVariant::QRSM, ModelVariant::TwoPhotonQRM,
                   ModelVariant::TwoPhotonRSM}) {
        ModelParams p;
        p.variant = v;
        p.g = 0.33;
        p.gamma = has_stark_term(v) ? 0.6 : 0.0;
        p.fock_dim = 40;
        const ComplexMatrix h = build_hamiltonian(p);
        EXPECT_LE(hermitian_asymmetry(h), 1e-12 * max_abs(h));
    }
}

TEST(BuildHamiltonian, TwoPhotonCommutesWithPhotonParity) {
    const std::size_t n = 30;
    const ComplexMatrix parity =
        kron(ComplexMatrix::identity(2), photon_parity(FockSpace(n)));
    for (double gamma : {0.0, 0.3, 0.9}) {
        const ComplexMatrix h = build_hamiltonian(two_photon_rsm(0.4, gamma, n));
        EXPECT_LE(max_abs(commutator(h, parity)), 1e-12);
    }
}

TEST(BuildHamiltonian, RabiCommutesWithTotalParity) {
    ModelParams p;
    p.variant = ModelVariant::QRSM;
    p.g = 0.8;
    p.gamma = 0.2;
    p.fock_dim = 25;
    const ComplexMatrix parity = kron(pauli(PauliAxis::z), photon_parity(FockSpace(25)));
    EXPECT_LE(max_abs(commutator(build_hamiltonian(p), parity)), 1e-12);
}

TEST(BuildHamiltonian, SpectrumInvariantUnderCouplingSignFlip) {
    for (std::size_t n : {20u, 60u}) {
        for (double gamma : {0.0, 0.3, 0.9}) {
            const ModelParams p = two_photon_rsm(0.17, gamma, n);
            const ComplexMatrix plus = build_hamiltonian(p);
            const ComplexMatrix minus = plus - 2.0 * p.g * coupling_term(p);
            const auto a = eigvalsh(plus);
            const auto b = eigvalsh(minus);
            for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
        }
    }
}

TEST(BuildHamiltonian, LowestEigenpairsAgreeWithFullSolver) {
    const ComplexMatrix h = build_hamiltonian(two_photon_rsm(0.3, 0.3, 60));
    const auto full = eigh(h);
    const auto low = lowest_eigenpairs(h, 5);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_LT(std::abs(low.values[k] - full.values[k]), 1e-8);
}

TEST(ModelParams, Validation) {
    ModelParams p = two_photon_rsm(0.1, 0.2, 10);
    EXPECT_NO_THROW(p.validate());
    p.omega_c = 0.0;
    EXPECT_THROW(p.validate(), InvalidParamsError);
    p = two_photon_rsm(-0.1, 0.2, 10);
    EXPECT_THROW(p.validate(), InvalidParamsError);
    p = two_photon_rsm(0.1, 0.2, 0);
    EXPECT_THROW(p.validate(), InvalidParamsError);
    p = two_photon_rsm(0.1, 0.2, 10);
    p.variant = ModelVariant::TwoPhotonQRM;
    EXPECT_THROW(p.validate(), InvalidParamsError);
    p.variant = ModelVariant::QRM;
    EXPECT_THROW(p.validate(), InvalidParamsError);
    p.gamma = 0.0;
    p.omega_0 = std::nan("");
    EXPECT_THROW(build_hamiltonian(p), InvalidParamsError);
}

TEST(GroundState, DecoupledIsSeparableSpinGround) {
    const auto gs = ground_state(two_photon_rsm(0.0, 0.0, 20));
    EXPECT_NEAR(gs.energy, -0.5, 1e-12);
    const auto& psi = gs.state.amplitudes();
    // -(1/2) sx is minimised by |+x> = (|up> + |down>)/sqrt(2) on the vacuum.
    EXPECT_NEAR(psi[idx(0, 0, 20)].real(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(psi[idx(1, 0, 20)].real(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(von_neumann_entropy(partial_trace(gs.state, 0)), 0.0, 1e-10);
    EXPECT_EQ(gs.state.dims(), (std::vector<std::size_t>{2, 20}));
}

TEST(GroundState, TwoPhotonEnergyConvergedInTruncation) {
    ModelParams p = two_photon_rsm(0.1, 0.0, 100);
    p.variant = ModelVariant::TwoPhotonQRM;
    const double e100 = ground_state(p).energy;
    const double e200 = ground_state(p.with_fock_dim(200)).energy;
    EXPECT_LT(std::abs(e100 - e200), 1e-8);
}

TEST(GroundState, DeterministicPhase) {
    // Past the collapse point the truncated ground doublet is nearly degenerate.
    const ModelParams p = two_photon_rsm(0.6, 0.3, 80);
    const auto a = ground_state(p);
    const auto b = ground_state(p);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_EQ(a.state.amplitudes(), b.state.amplitudes());
    const auto& psi = a.state.amplitudes();
    const auto big = std::max_element(psi.begin(), psi.end(), [](Complex x, Complex y) {
        return std::abs(x) < std::abs(y);
    });
    EXPECT_EQ(big->imag(), 0.0);
    EXPECT_GT(big->real(), 0.0);
}
