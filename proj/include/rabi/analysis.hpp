// analysis.hpp - coupling sweeps, collapse detection, entropy and Wigner studies
//
// Every procedure is deterministic. Sweeps may fan out over threads; each g
// writes its own slot, so the merged result does not depend on scheduling.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rabi/eigensolver.hpp"
#include "rabi/error.hpp"
#include "rabi/models.hpp"
#include "rabi/quantum.hpp"
#include "rabi/wigner.hpp"

namespace rabi {

// A recorded level counts as converged when halving the truncation moves it
// by less than this many omega_c.
inline constexpr double convergence_tolerance = 1e-4;
inline constexpr double default_threshold_fraction = 0.05;

struct SweepConfig {
    ModelParams base;  // g is ignored
    double g_min = 0.0;
    double g_max = 1.0;
    std::size_t g_steps = 101;
    std::size_t levels = 10;

    void validate() const {
        base.with_g(0.0).validate();
        if (!std::isfinite(g_min) || !std::isfinite(g_max))
            throw InvalidParamsError("sweep bounds must be finite");
        if (g_min < 0.0) throw InvalidParamsError("g_min must be non-negative");
        if (!(g_min < g_max)) throw InvalidParamsError("g_min must be below g_max");
        if (g_steps < 2) throw InvalidParamsError("g_steps must be at least 2");
        if (levels < 1) throw InvalidParamsError("levels must be at least 1");
        if (levels > 2 * base.fock_dim)
            throw InvalidParamsError("levels (" + std::to_string(levels) +
                                     ") exceeds the Hilbert space dimension " +
                                     std::to_string(2 * base.fock_dim));
    }

    std::vector<double> coupling_grid() const { return linspace(g_min, g_max, g_steps); }
};

namespace detail {

// Runs body(i) for i in [0, count). Exceptions are rethrown in index order.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&](unsigned id) {
        for (std::size_t i = id; i < count; i += threads) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::vector<double> lowest_levels(const ModelParams& p, std::size_t levels) {
    return lowest_eigenvalues(build_hamiltonian(p), levels);
}

} // namespace detail

struct SpectrumSweep {
    std::vector<double> g_values;
    std::vector<std::vector<double>> energies;  // [g][level], ascending per row
    std::vector<bool> converged;

    std::size_t levels() const { return energies.empty() ? 0 : energies.front().size(); }
};

// Re-solves at fock_dim / 2 and compares every recorded level.
inline bool levels_converged(const ModelParams& p, std::span<const double> levels) {
    const std::size_t half = p.fock_dim / 2;
    if (half == 0 || levels.size() > 2 * half) return false;
    const auto coarse = detail::lowest_levels(p.with_fock_dim(half), levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k)
        if (!(std::abs(coarse[k] - levels[k]) < convergence_tolerance * p.omega_c)) return false;
    return true;
}

inline SpectrumSweep spectrum_sweep(const SweepConfig& cfg, unsigned threads = 1) {
    cfg.validate();
    SpectrumSweep out;
    out.g_values = cfg.coupling_grid();
    const std::size_t n = out.g_values.size();
    out.energies.resize(n);
    std::vector<char> ok(n, 0);
    detail::parallel_for(n, threads, [&](std::size_t i) {
        const ModelParams p = cfg.base.with_g(out.g_values[i]);
        out.energies[i] = detail::lowest_levels(p, cfg.levels);
        ok[i] = levels_converged(p, out.energies[i]);
    });
    out.converged.assign(ok.begin(), ok.end());
    return out;
}

// Mean over levels of the gap to the closest neighbouring level.
inline double mean_nearest_neighbor_spacing(std::span<const double> levels) {
    if (levels.size() < 2) throw InvalidParamsError("spacing needs at least 2 levels");
    double sum = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, levels[i] - levels[i - 1]);
        if (i + 1 < levels.size()) gap = std::min(gap, levels[i + 1] - levels[i]);
        sum += gap;
    }
    return sum / static_cast<double>(levels.size());
}

struct CollapseEstimate {
    std::optional<double> g_c;
    std::vector<double> spacing_curve;  // one entry per swept g
    double threshold_used = 0.0;        // absolute spacing threshold
};

// g_c is the first swept g whose mean spacing drops below
// threshold_fraction times the spacing at the first grid point.
inline CollapseEstimate estimate_gc(const SpectrumSweep& sweep,
                                    double threshold_fraction = default_threshold_fraction) {
    if (sweep.levels() < 3)
        throw InvalidParamsError("collapse detection needs at least 3 levels, got " +
                                 std::to_string(sweep.levels()));
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
        throw InvalidParamsError("threshold fraction must lie in (0, 1)");
    CollapseEstimate est;
    for (const auto& row : sweep.energies)
        est.spacing_curve.push_back(mean_nearest_neighbor_spacing(row));
    est.threshold_used = threshold_fraction * est.spacing_curve.front();
    for (std::size_t i = 0; i < est.spacing_curve.size(); ++i)
        if (est.spacing_curve[i] < est.threshold_used) {
            est.g_c = sweep.g_values[i];
            break;
        }
    return est;
}

struct GammaCollapse {
    double gamma;
    std::optional<double> g_c;
};

// The Stark variant is used for nonzero gamma; gamma = 0 on a Stark-free base
// is therefore the plain model.
inline ModelParams with_gamma(const ModelParams& base, double gamma) {
    ModelParams p = base;
    p.gamma = gamma;
    if (gamma != 0.0) {
        if (p.variant == ModelVariant::QRM) p.variant = ModelVariant::QRSM;
        if (p.variant == ModelVariant::TwoPhotonQRM) p.variant = ModelVariant::TwoPhotonRSM;
    }
    return p;
}

inline std::vector<GammaCollapse> gc_vs_gamma(const SweepConfig& cfg,
                                              std::span<const double> gamma_values,
                                              double threshold_fraction = default_threshold_fraction,
                                              unsigned threads = 1) {
    for (std::size_t i = 0; i < gamma_values.size(); ++i) {
        if (!(std::abs(gamma_values[i]) < cfg.base.omega_c))
            throw InvalidParamsError("|gamma| must be below omega_c");
        if (i > 0 && !(gamma_values[i - 1] < gamma_values[i]))
            throw InvalidParamsError("gamma values must be strictly ascending");
    }
    std::vector<GammaCollapse> out;
    for (double gamma : gamma_values) {
        SweepConfig c = cfg;
        c.base = with_gamma(cfg.base, gamma);
        out.push_back({gamma, estimate_gc(spectrum_sweep(c, threads), threshold_fraction).g_c});
    }
    return out;
}

struct EntropySweep {
    std::vector<double> g_values;
    std::vector<double> entropy_bits;  // ground-state qubit-field entanglement
};

struct GroundEntropies {
    double qubit;  // S of the reduced qubit state
    double field;  // S of the reduced field state
};

inline GroundEntropies ground_entropies(const ModelParams& p) {
    const auto gs = ground_state(p);
    return {von_neumann_entropy(partial_trace(gs.state, 0)),
            von_neumann_entropy(partial_trace(gs.state, 1))};
}

inline double ground_entropy(const ModelParams& p) {
    return von_neumann_entropy(partial_trace(ground_state(p).state, 0));
}

inline EntropySweep entropy_sweep(const SweepConfig& cfg, unsigned threads = 1) {
    cfg.validate();
    EntropySweep out;
    out.g_values = cfg.coupling_grid();
    out.entropy_bits.resize(out.g_values.size());
    detail::parallel_for(out.g_values.size(), threads, [&](std::size_t i) {
        out.entropy_bits[i] = ground_entropy(cfg.base.with_g(out.g_values[i]));
    });
    return out;
}

struct WignerGridSpec {
    double x_min = -6.0, x_max = 6.0;
    double p_min = -6.0, p_max = 6.0;
    std::size_t points = 201;  // per axis

    void validate() const {
        for (double v : {x_min, x_max, p_min, p_max})
            if (!std::isfinite(v)) throw InvalidParamsError("grid bounds must be finite");
        if (!(x_min < x_max) || !(p_min < p_max))
            throw InvalidParamsError("grid ranges must have min < max");
        if (points < 2) throw InvalidParamsError("grid needs at least 2 points per axis");
    }
};

inline WignerGrid wigner_snapshot(const ModelParams& p, const WignerGridSpec& spec = {}) {
    spec.validate();
    const auto field = partial_trace(ground_state(p).state, 1);
    return wigner(field, linspace(spec.x_min, spec.x_max, spec.points),
                  linspace(spec.p_min, spec.p_max, spec.points));
}

// Narrows the collapse onset below grid resolution: bisects between the last
// uncollapsed grid point and the detected g_c, keeping the largest g whose
// spectrum is still above the spacing threshold.
inline std::optional<double> collapse_onset(const SweepConfig& cfg, const CollapseEstimate& est,
                                            double tolerance = 1e-4) {
    if (!est.g_c) return std::nullopt;
    const auto grid = cfg.coupling_grid();
    const auto hit = std::find(grid.begin(), grid.end(), *est.g_c);
    if (hit == grid.begin()) return *est.g_c;
    double lo = *(hit - 1), hi = *est.g_c;
    auto collapsed = [&](double g) {
        const auto levels = detail::lowest_levels(cfg.base.with_g(g), cfg.levels);
        return mean_nearest_neighbor_spacing(levels) < est.threshold_used;
    };
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (collapsed(mid) ? hi : lo) = mid;
    }
    return lo;
}

struct ConvergenceRow {
    std::size_t fock_dim;
    double ground_energy;
    double entropy_bits;
    double max_level_drift;  // vs. the largest fock_dim in the study
    bool converged;          // same N -> N/2 rule as the sweep flag
};

inline std::vector<ConvergenceRow> convergence_study(const ModelParams& p,
                                                     std::span<const std::size_t> dims,
                                                     std::size_t levels = 10) {
    if (dims.empty()) throw InvalidParamsError("convergence study needs at least one fock_dim");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (!(dims[i - 1] < dims[i]))
            throw InvalidParamsError("fock dims must be strictly ascending");
    if (levels < 1 || levels > 2 * dims.front())
        throw InvalidParamsError("levels must lie in [1, 2 * smallest fock_dim]");

    std::vector<std::vector<double>> spectra;
    std::vector<ConvergenceRow> rows;
    for (std::size_t n : dims) {
        const ModelParams q = p.with_fock_dim(n);
        const ComplexMatrix h = build_hamiltonian(q);
        const auto eig = lowest_eigenpairs(h, levels);
        const auto state = QuantumState::pure(eig.vectors.column(0), {2, n});
        spectra.push_back(eig.values);
        rows.push_back({n, eig.values[0], von_neumann_entropy(partial_trace(state, 0)), 0.0, false});
    }
    const auto& reference = spectra.back();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double drift = 0.0;
        for (std::size_t k = 0; k < levels; ++k)
            drift = std::max(drift, std::abs(spectra[r][k] - reference[k]));
        rows[r].max_level_drift = drift;
        rows[r].converged = levels_converged(p.with_fock_dim(rows[r].fock_dim), spectra[r]);
    }
    return rows;
}

} // namespace rabi
