// eigensolver.hpp - Dense Hermitian eigensolver
//
// Householder tridiagonalization followed by implicit-shift QL (full
// decomposition) or by inverse iteration (lowest few pairs). Real symmetric
// input runs entirely in real arithmetic. No randomness is involved, so the
// same input always yields the same bits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "rabi/detail/tridiagonal.hpp"
#include "rabi/error.hpp"
#include "rabi/matrix.hpp"

namespace rabi {

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& m, const char* who) {
    if (!m.is_square())
        throw DimensionError(std::string(who) + ": matrix must be square, got " + shape_of(m));
    const double asym = hermitian_asymmetry(m);
    const double scale = max_abs(m);
    if (asym > tolerance::hermitian * scale)
        throw NotHermitianError(std::string(who) + ": matrix is not Hermitian (max asymmetry " +
                                    std::to_string(asym) + ", max entry " +
                                    std::to_string(scale) + ")",
                                asym);
}

// Hermitian part (M + M^H)/2 as a flat row-major buffer of Scalar.
template <class T>
std::vector<T> hermitian_part(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<T> a(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const Complex z = 0.5 * (m(r, c) + std::conj(m(c, r)));
            if constexpr (is_complex_v<T>)
                a[r * n + c] = z;
            else
                a[r * n + c] = z.real();
        }
    return a;
}

// Ties keep their original relative order.
inline std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return order;
}

// Largest-magnitude component made real and positive (first index wins ties).
inline void fix_phase(std::span<Complex> v) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs <= 0.0) return;
    const Complex phase = std::conj(v[best]) / best_abs;
    for (Complex& z : v) z *= phase;
    v[best] = Complex(std::abs(v[best]), 0.0);
}

// Back-transforms tridiagonal eigenvectors (rows of `zt`, each length n)
// listed in `rows` into columns of the result.
template <class T>
ComplexMatrix assemble_vectors(const Tridiagonal<T>& tri, const std::vector<double>& zt,
                               const std::vector<std::size_t>& rows) {
    const std::size_t n = tri.n;
    ComplexMatrix out(n, rows.size());
    std::vector<T> z(n);
    std::vector<Complex> col(n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double* src = zt.data() + rows[k] * n;
        for (std::size_t i = 0; i < n; ++i) z[i] = T(src[i]);
        if (n > 1) apply_q<T>(tri, z);
        for (std::size_t i = 0; i < n; ++i) col[i] = Complex(z[i]);
        fix_phase(col);
        for (std::size_t i = 0; i < n; ++i) out(i, k) = col[i];
    }
    return out;
}

template <class T>
EigenDecomposition full_decomposition(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    auto tri = tridiagonalize<T>(hermitian_part<T>(m), n, true);
    std::vector<double> values = tri.diag;
    std::vector<double> zt(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) zt[i * n + i] = 1.0;
    tridiagonal_ql(values, tri.offdiag, &zt);
    const auto order = ascending_order(values);
    EigenDecomposition out;
    out.values.reserve(n);
    for (std::size_t idx : order) out.values.push_back(values[idx]);
    out.vectors = assemble_vectors<T>(tri, zt, order);
    return out;
}

template <class T>
std::vector<double> sorted_values(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    auto tri = tridiagonalize<T>(hermitian_part<T>(m), n, false);
    std::vector<double> values = tri.diag;
    tridiagonal_ql(values, tri.offdiag, nullptr);
    std::stable_sort(values.begin(), values.end());
    return values;
}

template <class T>
EigenDecomposition lowest_decomposition(const ComplexMatrix& m, std::size_t k) {
    const std::size_t n = m.rows();
    auto tri = tridiagonalize<T>(hermitian_part<T>(m), n, true);
    std::vector<double> values = tri.diag;
    tridiagonal_ql(values, tri.offdiag, nullptr);
    std::stable_sort(values.begin(), values.end());
    values.resize(k);
    const auto zt = tridiagonal_inverse_iteration(tri.diag, tri.offdiag, values);
    std::vector<std::size_t> rows(k);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    EigenDecomposition out;
    out.values = std::move(values);
    out.vectors = assemble_vectors<T>(tri, zt, rows);
    return out;
}

inline void check_count(const ComplexMatrix& m, std::size_t k, const char* who) {
    if (k < 1 || k > m.rows())
        throw DimensionError(std::string(who) + ": requested " + std::to_string(k) +
                             " eigenpairs from a " + shape_of(m) + " matrix");
}

} // namespace detail

// Full eigendecomposition of a Hermitian matrix.
inline EigenDecomposition eigh(const ComplexMatrix& m) {
    detail::require_hermitian(m, "eigh");
    return m.is_real() ? detail::full_decomposition<double>(m)
                       : detail::full_decomposition<Complex>(m);
}

// All eigenvalues, ascending, without eigenvectors.
inline std::vector<double> eigvalsh(const ComplexMatrix& m) {
    detail::require_hermitian(m, "eigvalsh");
    return m.is_real() ? detail::sorted_values<double>(m) : detail::sorted_values<Complex>(m);
}

inline std::vector<double> lowest_eigenvalues(const ComplexMatrix& m, std::size_t k) {
    detail::check_count(m, k, "lowest_eigenvalues");
    auto values = eigvalsh(m);
    values.resize(k);
    return values;
}

// The k smallest eigenpairs. Eigenvalues come from the same QL sweep as
// eigh; eigenvectors from inverse iteration, so the cost is one
// tridiagonalization plus O(k n^2).
inline EigenDecomposition lowest_eigenpairs(const ComplexMatrix& m, std::size_t k) {
    detail::require_hermitian(m, "lowest_eigenpairs");
    detail::check_count(m, k, "lowest_eigenpairs");
    if (k == m.rows()) return eigh(m);
    return m.is_real() ? detail::lowest_decomposition<double>(m, k)
                       : detail::lowest_decomposition<Complex>(m, k);
}

} // namespace rabi
