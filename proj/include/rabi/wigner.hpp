// wigner.hpp - Wigner quasi-probability of a single-mode density matrix
//
// Convention: alpha = (x + i p) / sqrt(2), so the integral of W over dx dp is
// 1 and |W| <= 1/pi. In the Fock basis
//
//   W(x,p) = (1/pi) sum_n (-1)^n [ rho_nn f_n^0(y)
//            + 2 sum_{k>=1} Re(rho_{n,n+k} e^{i k theta}) f_n^k(y) ],
//
// with y = 2(x^2 + p^2), theta = atan2(p, x) and the normalized Laguerre
// functions f_n^k(y) = sqrt(n!/(n+k)!) y^{k/2} e^{-y/2} L_n^k(y), which are
// matrix elements of a displacement and therefore bounded by 1. They are
// generated by a three-term recurrence in n, so no factorial is ever formed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rabi/error.hpp"
#include "rabi/matrix.hpp"
#include "rabi/quantum.hpp"

namespace rabi {

struct WignerGrid {
    std::vector<double> x_axis;  // ascending
    std::vector<double> p_axis;  // ascending
    std::vector<double> values;  // row-major: values[ix * p_axis.size() + ip]

    double at(std::size_t ix, std::size_t ip) const { return values[ix * p_axis.size() + ip]; }
    double cell_area() const {
        const double dx = x_axis.size() > 1 ? x_axis[1] - x_axis[0] : 1.0;
        const double dp = p_axis.size() > 1 ? p_axis[1] - p_axis[0] : 1.0;
        return dx * dp;
    }
};

// `points` samples evenly spaced over [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 1) return {lo};
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

namespace detail {

// S_k(y) = sum_n (-1)^n rho_{n,n+k} f_n^k(y) for k = 0..N-1.
inline void laguerre_sums(const ComplexMatrix& rho, double y, std::vector<Complex>& sums) {
    const std::size_t dim = rho.rows();
    const double log_y = y > 0.0 ? std::log(y) : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dim; ++k) {
        const double kd = static_cast<double>(k);
        // log f_0^k = (k log y - y - log k!) / 2
        const double log_f0 = k == 0 ? -0.5 * y : 0.5 * (kd * log_y - y - std::lgamma(kd + 1.0));
        if (!std::isfinite(log_f0)) {  // y == 0 and k > 0: every f_n^k vanishes
            sums[k] = Complex{};
            continue;
        }
        // Values are carried as v * exp(log_scale) so tiny seeds do not underflow.
        double log_scale = log_f0;
        double scale = std::exp(log_scale);
        double prev = 0.0;
        double cur = 1.0;
        Complex acc = rho(0, k) * scale;
        for (std::size_t n = 1; n + k < dim; ++n) {
            const double nd = static_cast<double>(n);
            double next;
            if (n == 1) {
                next = (1.0 + kd - y) * cur / std::sqrt(kd + 1.0);
            } else {
                next = ((2.0 * nd - 1.0 + kd - y) * cur -
                        std::sqrt((nd - 1.0) * (nd - 1.0 + kd)) * prev) /
                       std::sqrt(nd * (nd + kd));
            }
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e150) {
                cur *= 1e-150;
                prev *= 1e-150;
                log_scale += 150.0 * std::numbers::ln10;
                scale = std::exp(log_scale);
            }
            if (scale != 0.0) {
                const double f = cur * scale;
                acc += (n % 2 == 0 ? f : -f) * rho(n, n + k);
            }
        }
        sums[k] = acc;
    }
}

} // namespace detail

// `field` is a single-mode density matrix (qubit already traced out).
inline WignerGrid wigner(const QuantumState& field, std::span<const double> x_axis,
                         std::span<const double> p_axis) {
    if (field.dims().size() != 1)
        throw InvalidStateError("wigner expects a single-mode state, got " +
                                std::to_string(field.dims().size()) + " subsystems");
    if (x_axis.empty() || p_axis.empty()) throw DimensionError("wigner: empty axis");
    for (auto axis : {x_axis, p_axis}) {
        for (double v : axis)
            if (!std::isfinite(v)) throw NonFiniteError("wigner: axis value is not finite");
        if (!std::is_sorted(axis.begin(), axis.end()))
            throw InvalidParamsError("wigner: axes must be ascending");
    }
    const ComplexMatrix rho = field.density_matrix();
    const std::size_t dim = rho.rows();
    const std::size_t nx = x_axis.size(), np = p_axis.size();

    WignerGrid grid;
    grid.x_axis.assign(x_axis.begin(), x_axis.end());
    grid.p_axis.assign(p_axis.begin(), p_axis.end());
    grid.values.assign(nx * np, 0.0);

    // Points sharing a radius share every Laguerre sum; on symmetric grids
    // this removes most of the work.
    std::vector<double> radius2(nx * np);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < np; ++j)
            radius2[i * np + j] = x_axis[i] * x_axis[i] + p_axis[j] * p_axis[j];
    std::vector<std::size_t> order(nx * np);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return radius2[a] < radius2[b]; });

    std::vector<Complex> sums(dim);
    for (std::size_t pos = 0; pos < order.size();) {
        const double r2 = radius2[order[pos]];
        detail::laguerre_sums(rho, 2.0 * r2, sums);
        for (; pos < order.size() && radius2[order[pos]] == r2; ++pos) {
            const std::size_t idx = order[pos];
            const double x = x_axis[idx / np], p = p_axis[idx % np];
            const double theta = std::atan2(p, x);
            double w = sums[0].real();
            const Complex step = std::polar(1.0, theta);
            Complex phase = 1.0;
            for (std::size_t k = 1; k < dim; ++k) {
                phase *= step;
                w += 2.0 * (sums[k] * phase).real();
            }
            grid.values[idx] = w * std::numbers::inv_pi;
        }
    }
    return grid;
}

// Sum of |W| dx dp over cells where W < 0.
inline double negativity_volume(const WignerGrid& grid) {
    double s = 0.0;
    for (double w : grid.values)
        if (w < 0.0) s -= w;
    return s * grid.cell_area();
}

// Riemann sum of W dx dp.
inline double wigner_integral(const WignerGrid& grid) {
    return std::accumulate(grid.values.begin(), grid.values.end(), 0.0) * grid.cell_area();
}

} // namespace rabi
