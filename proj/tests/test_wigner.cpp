#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rabi/wigner.hpp"
#include "test_support.hpp"

using namespace rabi;

namespace {

// W(alpha) = (1/pi) Tr[rho D(alpha) P D(alpha)^dag], P the photon parity,
// with rho embedded in a larger truncated space.
double displaced_parity(const ComplexMatrix& rho, double x, double p, std::size_t dim = 64) {
    const Complex alpha = Complex(x, p) / std::sqrt(2.0);
    const ComplexMatrix d = displacement_oracle(alpha, dim);
    const ComplexMatrix dp = matmul(matmul(d, photon_parity(FockSpace(dim))), adjoint(d));
    Complex acc{};
    for (std::size_t n = 0; n < rho.rows(); ++n)
        for (std::size_t m = 0; m < rho.rows(); ++m) acc += rho(n, m) * dp(m, n);
    return acc.real() / std::numbers::pi;
}

QuantumState fock_state(std::size_t n, std::size_t dim) {
    std::vector<double> diag(dim, 0.0);
    diag[n] = 1.0;
    return QuantumState::density(ComplexMatrix::diagonal(diag));
}

} // namespace

TEST(Wigner, VacuumIsTheAnalyticGaussian) {
    const auto axis = linspace(-4.0, 4.0, 41);
    const auto grid = wigner(fock_state(0, 5), axis, axis);
    for (std::size_t i = 0; i < axis.size(); ++i)
        for (std::size_t j = 0; j < axis.size(); ++j) {
            const double r2 = axis[i] * axis[i] + axis[j] * axis[j];
            EXPECT_NEAR(grid.at(i, j), std::exp(-r2) / std::numbers::pi, 1e-8);
        }
    EXPECT_NEAR(grid.at(20, 20), 0.31831, 1e-5);
}

TEST(Wigner, FockOneHasNegativeOrigin) {
    const std::vector<double> origin{0.0};
    const auto grid = wigner(fock_state(1, 4), origin, origin);
    EXPECT_NEAR(grid.values[0], -1.0 / std::numbers::pi, 1e-8);
}

TEST(Wigner, FockStatesMatchLaguerreClosedForm) {
    // ((-1)^n / pi) L_n(2 r^2) e^{-r^2}, with L_n evaluated by std::laguerre.
    const auto axis = linspace(-3.0, 3.0, 13);
    for (std::size_t n : {2u, 5u, 9u}) {
        const auto grid = wigner(fock_state(n, 12), axis, axis);
        for (std::size_t i = 0; i < axis.size(); ++i)
            for (std::size_t j = 0; j < axis.size(); ++j) {
                const double r2 = axis[i] * axis[i] + axis[j] * axis[j];
                const double expected = (n % 2 ? -1.0 : 1.0) / std::numbers::pi *
                                        std::laguerre(static_cast<unsigned>(n), 2.0 * r2) *
                                        std::exp(-r2);
                EXPECT_NEAR(grid.at(i, j), expected, 1e-10);
            }
    }
}

TEST(Wigner, MatchesDisplacedParityOracle) {
    std::mt19937_64 rng(51);
    const auto axis = linspace(-2.0, 2.0, 5);
    for (std::size_t dim : {2u, 3u, 6u, 8u}) {
        const ComplexMatrix rho = fixtures::random_density(dim, rng);
        const auto grid = wigner(QuantumState::density(rho), axis, axis);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                EXPECT_NEAR(grid.at(i, j), displaced_parity(rho, axis[i], axis[j]), 1e-6);
    }
}

TEST(Wigner, BoundedAndNormalized) {
    std::mt19937_64 rng(52);
    const ComplexMatrix rho = fixtures::random_density(8, rng);
    const auto axis = linspace(-7.0, 7.0, 141);
    const auto grid = wigner(QuantumState::density(rho), axis, axis);
    for (double w : grid.values) {
        EXPECT_TRUE(std::isfinite(w));
        EXPECT_LE(std::abs(w), 1.0 / std::numbers::pi + 1e-9);
    }
    EXPECT_NEAR(wigner_integral(grid), 1.0, 2e-2);
}

TEST(Wigner, HighPhotonNumbersStayFinite) {
    // A Fock state deep in a 200-level space exercises the rescaled recurrence.
    const auto axis = linspace(-20.0, 20.0, 9);
    const auto grid = wigner(fock_state(199, 200), axis, axis);
    for (double w : grid.values) {
        EXPECT_TRUE(std::isfinite(w));
        EXPECT_LE(std::abs(w), 1.0 / std::numbers::pi + 1e-9);
    }
    // Parity of |199> is odd, so the origin sits at -1/pi.
    EXPECT_NEAR(grid.at(4, 4), -1.0 / std::numbers::pi, 1e-8);
}

TEST(Wigner, RejectsBadInput) {
    const std::vector<double> ok{0.0, 1.0};
    const std::vector<double> nan{0.0, std::nan("")};
    const std::vector<double> descending{1.0, 0.0};
    const auto vac = fock_state(0, 3);
    EXPECT_THROW(wigner(vac, nan, ok), NonFiniteError);
    EXPECT_THROW(wigner(vac, ok, descending), InvalidParamsError);
    const auto two_party = QuantumState::pure({1.0, 0.0, 0.0, 0.0}, {2, 2});
    EXPECT_THROW(wigner(two_party, ok, ok), InvalidStateError);
}

TEST(Wigner, NegativityVolume) {
    const auto axis = linspace(-5.0, 5.0, 101);
    EXPECT_EQ(negativity_volume(wigner(fock_state(0, 3), axis, axis)), 0.0);
    EXPECT_GT(negativity_volume(wigner(fock_state(1, 3), axis, axis)), 0.1);
}
