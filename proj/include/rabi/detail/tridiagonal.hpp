// tridiagonal.hpp - Householder reduction of a Hermitian matrix to real
// symmetric tridiagonal form, implicit-shift QL, and inverse iteration.
//
// Scalar is double (real symmetric input) or std::complex<double>. The
// reflectors are chosen so that the off-diagonal of T is real, so both paths
// share the same real tridiagonal eigensolver.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "rabi/error.hpp"

namespace rabi::detail {

template <class T>
inline constexpr bool is_complex_v = !std::is_same_v<T, double>;

inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(std::complex<double> z) { return std::conj(z); }
inline double real_of(double x) { return x; }
inline double real_of(std::complex<double> z) { return z.real(); }
inline double imag_of(double) { return 0.0; }
inline double imag_of(std::complex<double> z) { return z.imag(); }
inline double abs2(double x) { return x * x; }
inline double abs2(std::complex<double> z) { return std::norm(z); }

// A = Q T Q^H with Q = H_0 H_1 ... H_{n-2}, H_i = I - tau_i v_i v_i^H.
// v_i has an implicit leading 1 at position i+1; reflector(i) holds entries
// i+2..n-1.
template <class T>
struct Tridiagonal {
    std::size_t n = 0;
    std::vector<double> diag;     // size n
    std::vector<double> offdiag;  // size n, offdiag[i] couples (i, i+1), last entry 0
    std::vector<T> tau;           // size n-1 (empty if reflectors not kept)
    std::vector<T> reflectors;    // n x n row-major, row i = tail of v_i

    bool has_reflectors() const { return !tau.empty(); }
};

// Generates H with H^H (alpha; x) = (beta; 0), beta real. x is overwritten by
// the reflector tail. Returns tau; alpha receives beta.
template <class T>
T make_reflector(T& alpha, std::span<T> x) {
    double xnorm2 = 0.0;
    for (const T& v : x) xnorm2 += abs2(v);
    const double alphr = real_of(alpha);
    const double alphi = imag_of(alpha);
    if (xnorm2 == 0.0 && alphi == 0.0) return T{};
    const double beta = -std::copysign(std::sqrt(alphr * alphr + alphi * alphi + xnorm2), alphr);
    T tau;
    if constexpr (is_complex_v<T>)
        tau = T((beta - alphr) / beta, -alphi / beta);
    else
        tau = (beta - alphr) / beta;
    const T scale = T(1.0) / (alpha - T(beta));
    for (T& v : x) v *= scale;
    alpha = T(beta);
    return tau;
}

// `a` is the full n x n Hermitian matrix in row-major order; it is consumed.
template <class T>
Tridiagonal<T> tridiagonalize(std::vector<T> a, std::size_t n, bool keep_reflectors) {
    Tridiagonal<T> out;
    out.n = n;
    out.diag.assign(n, 0.0);
    out.offdiag.assign(n, 0.0);
    if (keep_reflectors && n > 1) {
        out.tau.assign(n - 1, T{});
        out.reflectors.assign(n * n, T{});
    }
    std::vector<T> x(n), p(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t m = n - i - 1;
        // Column i below the diagonal equals the conjugate of row i to the right.
        const T* row_i = a.data() + i * n;
        for (std::size_t j = 0; j < m; ++j) x[j] = conj_of(row_i[i + 1 + j]);
        T alpha = x[0];
        const T tau = make_reflector<T>(alpha, std::span<T>(x.data() + 1, m - 1));
        out.diag[i] = real_of(row_i[i]);
        out.offdiag[i] = real_of(alpha);
        x[0] = T(1.0);
        if (keep_reflectors) {
            out.tau[i] = tau;
            std::copy(x.begin() + 1, x.begin() + m, out.reflectors.begin() + i * n + i + 2);
        }
        if (tau == T{}) continue;

        // B := H^H B H on the trailing block, via p = tau B v, w = p - (tau/2)(p^H v) v.
        T* block = a.data() + (i + 1) * n + (i + 1);
        for (std::size_t r = 0; r < m; ++r) {
            const T* brow = block + r * n;
            T acc{};
            for (std::size_t c = 0; c < m; ++c) acc += brow[c] * x[c];
            p[r] = tau * acc;
        }
        T pv{};
        for (std::size_t j = 0; j < m; ++j) pv += conj_of(p[j]) * x[j];
        const T alpha2 = -0.5 * tau * pv;
        for (std::size_t j = 0; j < m; ++j) p[j] += alpha2 * x[j];
        for (std::size_t r = 0; r < m; ++r) {
            T* brow = block + r * n;
            const T vr = x[r];
            const T wr = p[r];
            for (std::size_t c = 0; c < m; ++c)
                brow[c] -= vr * conj_of(p[c]) + wr * conj_of(x[c]);
        }
    }
    if (n > 0) out.diag[n - 1] = real_of(a[(n - 1) * n + (n - 1)]);
    return out;
}

// Infinity norm of the symmetric tridiagonal (d, e).
inline double tridiagonal_norm(const std::vector<double>& d, const std::vector<double>& e) {
    const std::size_t n = d.size();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::abs(d[i]);
        if (i > 0) s += std::abs(e[i - 1]);
        if (i + 1 < n) s += std::abs(e[i]);
        norm = std::max(norm, s);
    }
    return norm;
}

// Implicit-shift QL on the symmetric tridiagonal (d, e). On exit d holds the
// (unsorted) eigenvalues. When `zt` is non-null it is an n x n row-major
// matrix whose ROWS are rotated, so starting from the identity row j ends up
// as the eigenvector for d[j].
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, std::vector<double>* zt) {
    const std::size_t n = d.size();
    constexpr int max_iterations = 60;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    // Couplings below eps * ||T|| are rounding noise. Without this floor a
    // strongly graded matrix (e.g. a nearly pure density matrix) keeps
    // chasing relative convergence through a block of noise.
    const double noise_floor = eps * tridiagonal_norm(d, e);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        while (true) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= noise_floor) break;
            }
            if (m == l) break;
            if (++iter > max_iterations)
                throw ConvergenceError("tridiagonal QL failed to converge for eigenvalue " +
                                       std::to_string(l) + " within " +
                                       std::to_string(max_iterations) + " iterations");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (zt) {
                    double* zi = zt->data() + i * n;
                    double* zi1 = zt->data() + (i + 1) * n;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// LU with partial pivoting of T - shift I (tridiagonal), LAPACK gttrf layout.
struct TridiagonalLU {
    std::vector<double> dl, d, du, du2;
    std::vector<std::uint8_t> swapped;

    TridiagonalLU(const std::vector<double>& diag, const std::vector<double>& off, double shift,
                  double tiny) {
        const std::size_t n = diag.size();
        d.resize(n);
        dl.assign(n, 0.0);
        du.assign(n, 0.0);
        du2.assign(n, 0.0);
        swapped.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
        for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = du[i] = off[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] != 0.0) {
                    const double fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        // Exactly singular pivots occur when the shift is an exact eigenvalue.
        for (double& piv : d)
            if (std::abs(piv) < tiny) piv = std::copysign(tiny, piv == 0.0 ? 1.0 : piv);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = b[i];
            if (i + 1 < n) v -= du[i] * b[i + 1];
            if (i + 2 < n) v -= du2[i] * b[i + 2];
            b[i] = v / d[i];
            // Rescale when growth from a near-singular pivot threatens overflow.
            if (std::abs(b[i]) > 1e250) {
                for (std::size_t k = i; k < n; ++k) b[k] *= 1e-250;
                for (std::size_t k = 0; k < i; ++k) b[k] *= 1e-250;
            }
        }
    }
};

// Eigenvectors of the tridiagonal for the given ascending eigenvalues, by
// inverse iteration with Gram-Schmidt inside clusters of close eigenvalues.
// Returned row-major, one vector per row.
inline std::vector<double> tridiagonal_inverse_iteration(const std::vector<double>& d,
                                                         const std::vector<double>& e,
                                                         std::span<const double> values) {
    const std::size_t n = d.size();
    const std::size_t k = values.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double tnorm = std::max(tridiagonal_norm(d, e), std::numeric_limits<double>::min());
    const double cluster_tol = 1e-3 * tnorm;
    const double separation = 10.0 * eps * tnorm;
    const double tiny = eps * tnorm;

    std::vector<double> out(k * n, 0.0);
    std::vector<double> x(n);
    std::size_t cluster_start = 0;
    double previous_shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double shift = values[j];
        if (j > 0) {
            if (values[j] - values[j - 1] > cluster_tol) cluster_start = j;
            if (shift - previous_shift < separation) shift = previous_shift + separation;
        }
        previous_shift = shift;
        const TridiagonalLU lu(d, e, shift, tiny);

        // Fixed pseudo-random start so results never depend on external state.
        std::uint64_t state = 0x9E3779B97F4A7C15ull ^ (j * 0xBF58476D1CE4E5B9ull);
        for (std::size_t i = 0; i < n; ++i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            x[i] = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        }
        for (int iter = 0; iter < 5; ++iter) {
            lu.solve(x);
            for (std::size_t q = cluster_start; q < j; ++q) {
                const double* prev = out.data() + q * n;
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += prev[i] * x[i];
                for (std::size_t i = 0; i < n; ++i) x[i] -= dot * prev[i];
            }
            double nrm = 0.0;
            for (double v : x) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0 || !std::isfinite(nrm))
                throw ConvergenceError("inverse iteration collapsed for eigenvalue index " +
                                       std::to_string(j));
            for (double& v : x) v /= nrm;
        }
        std::copy(x.begin(), x.end(), out.begin() + j * n);
    }
    return out;
}

// z := Q z for a single vector (length n), Q from the stored reflectors.
template <class T>
void apply_q(const Tridiagonal<T>& tri, std::span<T> z) {
    const std::size_t n = tri.n;
    for (std::size_t i = n - 1; i-- > 0;) {
        const T tau = tri.tau[i];
        if (tau == T{}) continue;
        const T* v = tri.reflectors.data() + i * n;
        // v has implicit 1 at i+1 and tail at i+2..n-1.
        T s = z[i + 1];
        for (std::size_t r = i + 2; r < n; ++r) s += conj_of(v[r]) * z[r];
        s *= tau;
        z[i + 1] -= s;
        for (std::size_t r = i + 2; r < n; ++r) z[r] -= v[r] * s;
    }
}

} // namespace rabi::detail
