// matrix.hpp - Dense row-major complex matrix and the small set of
// operations the operator algebra needs (products, Kronecker, adjoint, norms)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rabi/error.hpp"

namespace rabi {

using Complex = std::complex<double>;

namespace tolerance {
// Relative Hermiticity tolerance: max|M - M^H| <= hermitian * max|M|.
inline constexpr double hermitian = 1e-12;
inline constexpr double unit_norm = 1e-10;
// Eigen-residual bound relative to the Frobenius norm of the input.
inline constexpr double residual = 1e-9;
inline constexpr double orthonormality = 1e-9;
inline constexpr double trace = 1e-10;
inline constexpr double positivity = 1e-10;
} // namespace tolerance

inline std::string shape_string(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    // Zero matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        check_shape(rows, cols);
        data_.assign(rows * cols, Complex{});
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        check_shape(rows, cols);
        if (data_.size() != rows * cols)
            throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                                 " does not match shape " + shape_string(rows, cols));
        for (const Complex& z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw NonFiniteError("matrix data contains a non-finite entry");
    }

    // Row-by-row literal, e.g. {{0, 1}, {1, 0}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        check_shape(rows_, cols_);
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) throw DimensionError("ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> entries) {
        ComplexMatrix m(entries.size(), entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<double> entries) {
        return diagonal(std::span<const double>(entries.begin(), entries.size()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const Complex> data() const noexcept { return data_; }
    std::span<Complex> data() noexcept { return data_; }

    std::vector<Complex> column(std::size_t c) const {
        std::vector<Complex> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    bool is_real() const noexcept {
        return std::all_of(data_.begin(), data_.end(),
                           [](const Complex& z) { return z.imag() == 0.0; });
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    static void check_shape(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0)
            throw DimensionError("matrix dimensions must be positive, got " +
                                 shape_string(rows, cols));
        if (cols > std::numeric_limits<std::size_t>::max() / rows)
            throw DimensionError("matrix shape " + shape_string(rows, cols) +
                                 " overflows the index type");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline std::string shape_of(const ComplexMatrix& m) { return shape_string(m.rows(), m.cols()); }

// ----------------------------------------------------------------------------
// Arithmetic

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: cannot multiply " + shape_of(a) + " by " + shape_of(b));
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

struct Shape {
    std::size_t rows;
    std::size_t cols;
};

// Shape of a (x) b, rejecting results whose element count overflows size_t.
inline Shape kron_shape(Shape a, Shape b) {
    constexpr auto max = std::numeric_limits<std::size_t>::max();
    const auto fail = [&] {
        return DimensionError("kron: result of " + shape_string(a.rows, a.cols) + " (x) " +
                              shape_string(b.rows, b.cols) + " overflows the index type");
    };
    if (a.rows && b.rows > max / a.rows) throw fail();
    if (a.cols && b.cols > max / a.cols) throw fail();
    const Shape out{a.rows * b.rows, a.cols * b.cols};
    if (out.rows && out.cols > max / out.rows) throw fail();
    return out;
}

// Block (j,k) of the result is a(j,k) * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto [rows, cols] = kron_shape({a.rows(), a.cols()}, {b.rows(), b.cols()});
    ComplexMatrix out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            if (s == Complex{}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

inline ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("add: shapes " + shape_of(a) + " and " + shape_of(b) + " differ");
    auto lhs = a.data();
    auto rhs = b.data();
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
    return a;
}

inline ComplexMatrix& operator-=(ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("subtract: shapes " + shape_of(a) + " and " + shape_of(b) +
                             " differ");
    auto lhs = a.data();
    auto rhs = b.data();
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return a;
}

inline ComplexMatrix& operator*=(ComplexMatrix& a, Complex s) {
    for (Complex& z : a.data()) z *= s;
    return a;
}

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return matmul(a, b) - matmul(b, a);
}

inline std::vector<Complex> matvec(const ComplexMatrix& m, std::span<const Complex> v) {
    if (m.cols() != v.size())
        throw DimensionError("matvec: " + shape_of(m) + " matrix on vector of length " +
                             std::to_string(v.size()));
    std::vector<Complex> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc{};
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

// ----------------------------------------------------------------------------
// Scalars derived from a matrix

inline Complex trace(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("trace of non-square " + shape_of(m));
    Complex t{};
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const Complex& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs(const ComplexMatrix& m) {
    double best = 0.0;
    for (const Complex& z : m.data()) best = std::max(best, std::abs(z));
    return best;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("compare: shapes " + shape_of(a) + " and " + shape_of(b) +
                             " differ");
    double best = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i] - y[i]));
    return best;
}

// max_{jk} |M[j][k] - conj(M[k][j])|
inline double hermitian_asymmetry(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("Hermiticity check on non-square " + shape_of(m));
    double best = 0.0;
    for (std::size_t j = 0; j < m.rows(); ++j)
        for (std::size_t k = j; k < m.cols(); ++k)
            best = std::max(best, std::abs(m(j, k) - std::conj(m(k, j))));
    return best;
}

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = tolerance::hermitian) {
    return m.is_square() && hermitian_asymmetry(m) <= rel_tol * max_abs(m);
}

inline double vector_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimensionError("inner product of mismatched vectors");
    Complex s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace rabi
