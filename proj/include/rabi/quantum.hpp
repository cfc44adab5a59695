// quantum.hpp - Fock-space and qubit operators, bipartite states, partial
// trace and von Neumann entropy

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rabi/eigensolver.hpp"
#include "rabi/error.hpp"
#include "rabi/matrix.hpp"

namespace rabi {

// Number states |0>, ..., |dim-1> of a single bosonic mode.
class FockSpace {
public:
    explicit FockSpace(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw InvalidParamsError("Fock space dimension must be at least 1");
    }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t dim_;
};

// a|n> = sqrt(n)|n-1>
inline ComplexMatrix annihilation(FockSpace space) {
    const std::size_t n = space.dim();
    ComplexMatrix a(n, n);
    for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

inline ComplexMatrix creation(FockSpace space) { return adjoint(annihilation(space)); }

// a^dag a, built as the diagonal 0..N-1 directly.
inline ComplexMatrix number_operator(FockSpace space) {
    ComplexMatrix n(space.dim(), space.dim());
    for (std::size_t k = 0; k < space.dim(); ++k) n(k, k) = static_cast<double>(k);
    return n;
}

// (-1)^{a^dag a}
inline ComplexMatrix photon_parity(FockSpace space) {
    ComplexMatrix p(space.dim(), space.dim());
    for (std::size_t k = 0; k < space.dim(); ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return p;
}

enum class PauliAxis { x, y, z };

inline ComplexMatrix pauli(PauliAxis which) {
    const Complex i{0.0, 1.0};
    switch (which) {
    case PauliAxis::x: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case PauliAxis::y: return ComplexMatrix{{0.0, -i}, {i, 0.0}};
    case PauliAxis::z: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
    throw InvalidParamsError("unknown Pauli axis");
}

// ----------------------------------------------------------------------------
// States

// A pure state vector or a density matrix over an ordered list of subsystem
// dimensions. Throughout the library the composite order is qubit (x) field.
class QuantumState {
public:
    static QuantumState pure(std::vector<Complex> amplitudes, std::vector<std::size_t> dims) {
        check_dims(dims, amplitudes.size());
        for (const Complex& z : amplitudes)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw NonFiniteError("state amplitudes contain a non-finite entry");
        const double norm = vector_norm(amplitudes);
        if (std::abs(norm - 1.0) > tolerance::unit_norm)
            throw InvalidStateError("pure state norm is " + std::to_string(norm) +
                                    ", expected 1");
        QuantumState s;
        s.amplitudes_ = std::move(amplitudes);
        s.dims_ = std::move(dims);
        return s;
    }

    static QuantumState pure(std::vector<Complex> amplitudes) {
        const std::size_t d = amplitudes.size();
        return pure(std::move(amplitudes), {d});
    }

    // Validates Hermiticity, unit trace and positivity (min eigenvalue >= -1e-10).
    static QuantumState density(ComplexMatrix rho, std::vector<std::size_t> dims) {
        if (!rho.is_square())
            throw InvalidStateError("density matrix must be square, got " + shape_of(rho));
        check_dims(dims, rho.rows());
        const double asym = hermitian_asymmetry(rho);
        if (asym > tolerance::hermitian * std::max(1.0, max_abs(rho)))
            throw InvalidStateError("density matrix is not Hermitian (max asymmetry " +
                                    std::to_string(asym) + ")");
        const Complex tr = trace(rho);
        if (std::abs(tr - 1.0) > tolerance::trace)
            throw InvalidStateError("density matrix trace is " + std::to_string(tr.real()) +
                                    ", expected 1");
        QuantumState s;
        s.spectrum_ = eigvalsh(rho);
        if (s.spectrum_.front() < -tolerance::positivity)
            throw InvalidStateError("density matrix has negative eigenvalue " +
                                    std::to_string(s.spectrum_.front()));
        s.rho_ = std::move(rho);
        s.dims_ = std::move(dims);
        return s;
    }

    static QuantumState density(ComplexMatrix rho) {
        const std::size_t d = rho.rows();
        return density(std::move(rho), {d});
    }

    bool is_pure_vector() const noexcept { return !amplitudes_.empty(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t dimension() const noexcept {
        return is_pure_vector() ? amplitudes_.size() : rho_.rows();
    }

    // Only meaningful for pure vectors.
    const std::vector<Complex>& amplitudes() const {
        if (!is_pure_vector()) throw InvalidStateError("state is stored as a density matrix");
        return amplitudes_;
    }

    ComplexMatrix density_matrix() const {
        if (!is_pure_vector()) return rho_;
        const std::size_t d = amplitudes_.size();
        ComplexMatrix rho(d, d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                rho(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
        return rho;
    }

    // Eigenvalues of the density matrix (ascending). A pure vector has
    // spectrum {0, ..., 0, 1}.
    std::vector<double> spectrum() const {
        if (!is_pure_vector()) return spectrum_;
        std::vector<double> out(amplitudes_.size(), 0.0);
        out.back() = 1.0;
        return out;
    }

private:
    QuantumState() = default;

    static void check_dims(const std::vector<std::size_t>& dims, std::size_t total) {
        if (dims.empty()) throw InvalidStateError("state needs at least one subsystem");
        std::size_t product = 1;
        for (std::size_t d : dims) {
            if (d == 0) throw InvalidStateError("subsystem dimension must be positive");
            product *= d;
        }
        if (product != total)
            throw InvalidStateError("subsystem dimensions multiply to " + std::to_string(product) +
                                    " but the state has dimension " + std::to_string(total));
    }

    std::vector<Complex> amplitudes_;
    ComplexMatrix rho_;
    std::vector<double> spectrum_;
    std::vector<std::size_t> dims_;
};

// Reduced density matrix of subsystem `keep` of a two-party state.
inline QuantumState partial_trace(const QuantumState& state, std::size_t keep) {
    const auto& dims = state.dims();
    if (dims.size() != 2)
        throw InvalidStateError("partial trace needs exactly two subsystems, state has " +
                                std::to_string(dims.size()));
    if (keep > 1)
        throw InvalidStateError("subsystem index " + std::to_string(keep) +
                                " out of range for a two-party state");
    const std::size_t da = dims[0], db = dims[1];
    const std::size_t dk = keep == 0 ? da : db;
    ComplexMatrix reduced(dk, dk);
    if (state.is_pure_vector()) {
        const auto& psi = state.amplitudes();
        if (keep == 0) {
            for (std::size_t s = 0; s < da; ++s)
                for (std::size_t t = 0; t < da; ++t) {
                    Complex acc{};
                    for (std::size_t n = 0; n < db; ++n)
                        acc += psi[s * db + n] * std::conj(psi[t * db + n]);
                    reduced(s, t) = acc;
                }
        } else {
            for (std::size_t s = 0; s < da; ++s) {
                const Complex* block = psi.data() + s * db;
                for (std::size_t n = 0; n < db; ++n) {
                    const Complex bn = block[n];
                    for (std::size_t m = 0; m < db; ++m) reduced(n, m) += bn * std::conj(block[m]);
                }
            }
        }
    } else {
        const ComplexMatrix rho = state.density_matrix();
        if (keep == 0) {
            for (std::size_t s = 0; s < da; ++s)
                for (std::size_t t = 0; t < da; ++t) {
                    Complex acc{};
                    for (std::size_t n = 0; n < db; ++n) acc += rho(s * db + n, t * db + n);
                    reduced(s, t) = acc;
                }
        } else {
            for (std::size_t n = 0; n < db; ++n)
                for (std::size_t m = 0; m < db; ++m) {
                    Complex acc{};
                    for (std::size_t s = 0; s < da; ++s) acc += rho(s * db + n, s * db + m);
                    reduced(n, m) = acc;
                }
        }
    }
    // Rounding can leave the reduced matrix a hair away from exact Hermiticity.
    ComplexMatrix herm = reduced + adjoint(reduced);
    herm *= 0.5;
    return QuantumState::density(std::move(herm), {dk});
}

// Eigenvalues below this are treated as exact zeros in the entropy sum.
inline constexpr double entropy_clamp = 1e-12;

// S = -sum_k lambda_k log2 lambda_k, in bits.
inline double von_neumann_entropy(const QuantumState& rho) {
    if (rho.is_pure_vector()) return 0.0;
    double s = 0.0;
    for (double lambda : rho.spectrum()) {
        if (lambda < -tolerance::positivity)
            throw InvalidStateError("density matrix has negative eigenvalue " +
                                    std::to_string(lambda));
        if (lambda > entropy_clamp) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

// ----------------------------------------------------------------------------
// Displacement operator (reference path for the Wigner tests)

// exp(alpha a^dag - conj(alpha) a) on a truncated space, by scaling and
// squaring of a Taylor series.
inline ComplexMatrix displacement_oracle(Complex alpha, std::size_t dim) {
    const FockSpace space(dim);
    const ComplexMatrix a = annihilation(space);
    ComplexMatrix gen = alpha * adjoint(a) - std::conj(alpha) * a;
    double norm1 = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < dim; ++r) s += std::abs(gen(r, c));
        norm1 = std::max(norm1, s);
    }
    int squarings = 0;
    while (norm1 > 0.25) {
        norm1 *= 0.5;
        ++squarings;
    }
    gen *= std::ldexp(1.0, -squarings);
    ComplexMatrix result = ComplexMatrix::identity(dim);
    ComplexMatrix term = ComplexMatrix::identity(dim);
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, gen);
        term *= 1.0 / k;
        result += term;
        if (max_abs(term) < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

} // namespace rabi
