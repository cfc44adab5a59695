// models.hpp - Rabi-family Hamiltonians on the qubit (x) field space (hbar = 1)
//
//   QRM   : w_c a^dag a + (w_0/2) sz + g sx (a^dag + a)
//   QRSM  : QRM + gamma sz a^dag a
//   2pRSM : -(w_0/2 + gamma a^dag a) sx + w_c a^dag a + g [(a^dag)^2 + a^2] sz
//   2pQRM : 2pRSM with gamma = 0

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "rabi/eigensolver.hpp"
#include "rabi/error.hpp"
#include "rabi/matrix.hpp"
#include "rabi/quantum.hpp"

namespace rabi {

enum class ModelVariant { QRM, QRSM, TwoPhotonQRM, TwoPhotonRSM };

inline std::string_view to_string(ModelVariant v) {
    switch (v) {
    case ModelVariant::QRM: return "qrm";
    case ModelVariant::QRSM: return "qrsm";
    case ModelVariant::TwoPhotonQRM: return "2pqrm";
    case ModelVariant::TwoPhotonRSM: return "2prsm";
    }
    return "unknown";
}

inline bool is_two_photon(ModelVariant v) {
    return v == ModelVariant::TwoPhotonQRM || v == ModelVariant::TwoPhotonRSM;
}

inline bool has_stark_term(ModelVariant v) {
    return v == ModelVariant::QRSM || v == ModelVariant::TwoPhotonRSM;
}

struct ModelParams {
    ModelVariant variant = ModelVariant::TwoPhotonRSM;
    double omega_c = 1.0;  // cavity frequency, sets the energy unit
    double omega_0 = 1.0;  // qubit splitting
    double g = 0.0;        // qubit-field coupling
    double gamma = 0.0;    // Stark coupling
    std::size_t fock_dim = 200;

    void validate() const {
        auto fail = [](const std::string& msg) { throw InvalidParamsError(msg); };
        for (double v : {omega_c, omega_0, g, gamma})
            if (!std::isfinite(v)) fail("model parameters must be finite");
        if (!(omega_c > 0.0)) fail("omega_c must be positive, got " + std::to_string(omega_c));
        if (g < 0.0) fail("coupling g must be non-negative, got " + std::to_string(g));
        if (fock_dim < 1) fail("fock_dim must be at least 1");
        if (!has_stark_term(variant) && gamma != 0.0)
            fail("gamma must be 0 for " + std::string(to_string(variant)) + ", got " +
                 std::to_string(gamma));
    }

    ModelParams with_g(double value) const {
        ModelParams p = *this;
        p.g = value;
        return p;
    }
    ModelParams with_fock_dim(std::size_t n) const {
        ModelParams p = *this;
        p.fock_dim = n;
        return p;
    }
};

// The operator multiplying g, so H(g) = H(0) + g * coupling_term(p).
inline ComplexMatrix coupling_term(const ModelParams& p) {
    const FockSpace field(p.fock_dim);
    const ComplexMatrix a = annihilation(field);
    const ComplexMatrix ad = creation(field);
    if (is_two_photon(p.variant))
        return kron(pauli(PauliAxis::z), matmul(ad, ad) + matmul(a, a));
    return kron(pauli(PauliAxis::x), ad + a);
}

inline ComplexMatrix build_hamiltonian(const ModelParams& p) {
    p.validate();
    const FockSpace field(p.fock_dim);
    const ComplexMatrix id_q = ComplexMatrix::identity(2);
    const ComplexMatrix id_f = ComplexMatrix::identity(p.fock_dim);
    const ComplexMatrix n = number_operator(field);

    ComplexMatrix h = p.omega_c * kron(id_q, n);
    if (is_two_photon(p.variant)) {
        h -= kron(pauli(PauliAxis::x), 0.5 * p.omega_0 * id_f + p.gamma * n);
    } else {
        h += 0.5 * p.omega_0 * kron(pauli(PauliAxis::z), id_f);
        if (p.variant == ModelVariant::QRSM) h += p.gamma * kron(pauli(PauliAxis::z), n);
    }
    if (p.g != 0.0) h += p.g * coupling_term(p);
    return h;
}

struct GroundState {
    double energy;
    QuantumState state;  // pure, dims (2, fock_dim)
};

inline GroundState ground_state(const ModelParams& p) {
    const ComplexMatrix h = build_hamiltonian(p);
    auto eig = lowest_eigenpairs(h, 1);
    return {eig.values[0], QuantumState::pure(eig.vectors.column(0), {2, p.fock_dim})};
}

} // namespace rabi
