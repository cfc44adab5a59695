// cli.hpp - argument parsing and command dispatch for the rabi tool
//
// parse_args collects every problem it finds before failing, so a bad
// command line is reported in one go. run() never throws: it maps usage
// problems to exit code 2 and computation or output failures to 1.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rabi/analysis.hpp"
#include "rabi/io.hpp"
#include "rabi/models.hpp"

namespace rabi::cli {

enum class Command { Spectrum, Entropy, Wigner, GcScan, Converge };

inline const char* to_string(Command c) {
    switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Entropy: return "entropy";
    case Command::Wigner: return "wigner";
    case Command::GcScan: return "gc-scan";
    case Command::Converge: return "converge";
    }
    return "unknown";
}

struct RunConfig {
    Command command = Command::Spectrum;
    ModelVariant variant = ModelVariant::TwoPhotonRSM;
    double omega_c = 1.0;
    double omega_0 = 1.0;
    std::vector<double> gammas{0.0};
    double g = 0.0;
    double g_min = 0.0;
    double g_max = 1.0;
    std::size_t g_steps = 101;
    std::size_t fock_dim = 200;
    std::size_t levels = 10;
    WignerGridSpec grid;
    std::vector<std::size_t> fock_dims;
    std::string out;
    bool svg = false;
    double threshold_fraction = default_threshold_fraction;
    unsigned threads = 1;

    ModelParams params(double gamma) const {
        ModelParams p;
        p.variant = variant;
        p.omega_c = omega_c;
        p.omega_0 = omega_0;
        p.gamma = gamma;
        p.g = g;
        p.fock_dim = fock_dim;
        return p;
    }
    SweepConfig sweep(double gamma) const {
        SweepConfig c;
        c.base = params(gamma);
        c.g_min = g_min;
        c.g_max = g_max;
        c.g_steps = g_steps;
        c.levels = levels;
        return c;
    }
};

class UsageError : public std::runtime_error {
public:
    explicit UsageError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& s : items) out += (out.empty() ? "" : "\n") + s;
        return out;
    }
    std::vector<std::string> problems_;
};

namespace detail {

template <class T>
std::optional<T> parse_number(const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value)) return std::nullopt;
    return value;
}

// Converts every raw flag value, recording a message for each failure.
class Converter {
public:
    std::vector<std::string> problems;

    void number(const std::string& flag, const std::string& text, double& into) {
        if (auto v = parse_number<double>(text)) into = *v;
        else problems.push_back(flag + ": '" + text + "' is not a finite number");
    }
    void count(const std::string& flag, const std::string& text, std::size_t& into) {
        if (auto v = parse_number<std::size_t>(text)) into = *v;
        else problems.push_back(flag + ": '" + text + "' is not a non-negative integer");
    }
    void range(const std::string& flag, const std::vector<std::string>& parts, double& lo,
               double& hi) {
        if (parts.size() != 2) {
            problems.push_back(flag + ": expected two comma-separated values 'min,max'");
            return;
        }
        const std::size_t before = problems.size();
        number(flag, parts[0], lo);
        number(flag, parts[1], hi);
        if (problems.size() == before && !(lo < hi))
            problems.push_back(flag + ": min must be below max");
    }
};

inline ModelVariant variant_from(const std::string& name) {
    for (auto v : {ModelVariant::QRM, ModelVariant::QRSM, ModelVariant::TwoPhotonQRM,
                   ModelVariant::TwoPhotonRSM})
        if (name == rabi::to_string(v)) return v;
    throw std::invalid_argument(name);
}

inline Command command_from(const std::string& name) {
    for (auto c : {Command::Spectrum, Command::Entropy, Command::Wigner, Command::GcScan,
                   Command::Converge})
        if (name == to_string(c)) return c;
    throw std::invalid_argument(name);
}

// Flags each command accepts beyond the model and output flags.
inline std::set<std::string> command_flags(Command c) {
    switch (c) {
    case Command::Spectrum:
        return {"--g-min", "--g-max", "--g-steps", "--levels", "--threshold-fraction", "--threads"};
    case Command::Entropy: return {"--g-min", "--g-max", "--g-steps", "--threads"};
    case Command::Wigner: return {"--g", "--x-range", "--p-range", "--grid-points"};
    case Command::GcScan:
        return {"--g-min", "--g-max", "--g-steps", "--levels", "--threshold-fraction", "--threads"};
    case Command::Converge: return {"--g", "--fock-dims", "--levels"};
    }
    return {};
}

inline std::string usage_footer() {
    return "commands: spectrum | entropy | wigner | gc-scan | converge (see --help)";
}

} // namespace detail

inline std::string help_text();

// Throws UsageError listing every problem, or CLI::CallForHelp for --help.
inline RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Spectra, entanglement and Wigner functions of Rabi-type models", "rabi"};
    app.allow_extras();

    std::string command, model, omega_c, omega_0, g, g_min, g_max, g_steps, fock_dim, levels,
        grid_points, threshold, threads;
    std::vector<std::string> gammas, x_range, p_range, fock_dims;
    RunConfig cfg;

    app.add_option("command", command, "spectrum | entropy | wigner | gc-scan | converge")
        ->required();
    app.add_option("--model", model, "qrm | qrsm | 2pqrm | 2prsm")->required();
    app.add_option("--omega-c", omega_c, "cavity frequency (default 1)");
    app.add_option("--omega-0", omega_0, "qubit splitting (default 1)");
    app.add_option("--gamma", gammas, "Stark coupling; comma list for entropy and gc-scan")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--g", g, "coupling for wigner and converge");
    app.add_option("--g-min", g_min, "sweep start (default 0)");
    app.add_option("--g-max", g_max, "sweep end (default 1)");
    app.add_option("--g-steps", g_steps, "sweep points including both ends (default 101)");
    app.add_option("--fock-dim", fock_dim, "field truncation N (default 200)");
    app.add_option("--fock-dims", fock_dims, "ascending comma list of N for converge")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--levels", levels, "number of lowest levels M (default 10)");
    app.add_option("--x-range", x_range, "wigner x range 'min,max' (default -6,6)")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--p-range", p_range, "wigner p range 'min,max' (default -6,6)")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--grid-points", grid_points, "wigner samples per axis (default 201)");
    app.add_option("--threshold-fraction", threshold, "collapse threshold (default 0.05)");
    app.add_option("--threads", threads, "worker threads for sweeps (default 1)");
    app.add_option("--out", cfg.out, "output path prefix; writes <out>.csv")->required();
    app.add_flag("--svg", cfg.svg, "also write <out>.svg");

    std::vector<std::string> problems;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::RequiredError&) {
        // Reported below together with everything else.
    } catch (const CLI::ParseError& e) {
        throw UsageError({e.what(), detail::usage_footer()});
    }
    for (const auto& extra : app.remaining()) problems.push_back("unexpected argument '" + extra + "'");

    detail::Converter conv;
    bool command_ok = false;
    if (command.empty()) {
        problems.push_back("missing command (spectrum, entropy, wigner, gc-scan or converge)");
    } else {
        try {
            cfg.command = detail::command_from(command);
            command_ok = true;
        } catch (const std::invalid_argument&) {
            problems.push_back("unknown command '" + command + "'");
        }
    }
    bool model_ok = false;
    if (model.empty()) {
        problems.push_back("--model is required");
    } else {
        try {
            cfg.variant = detail::variant_from(model);
            model_ok = true;
        } catch (const std::invalid_argument&) {
            problems.push_back("--model: unknown model '" + model + "' (qrm, qrsm, 2pqrm, 2prsm)");
        }
    }
    if (cfg.out.empty()) problems.push_back("--out is required");

    auto given = [&](const char* flag) { return app.get_option(flag)->count() > 0; };
    if (!omega_c.empty()) conv.number("--omega-c", omega_c, cfg.omega_c);
    if (!omega_0.empty()) conv.number("--omega-0", omega_0, cfg.omega_0);
    if (given("--gamma")) {
        cfg.gammas.assign(gammas.size(), 0.0);
        for (std::size_t i = 0; i < gammas.size(); ++i) conv.number("--gamma", gammas[i], cfg.gammas[i]);
    }
    if (given("--g")) conv.number("--g", g, cfg.g);
    if (given("--g-min")) conv.number("--g-min", g_min, cfg.g_min);
    if (given("--g-max")) conv.number("--g-max", g_max, cfg.g_max);
    if (given("--g-steps")) conv.count("--g-steps", g_steps, cfg.g_steps);
    if (given("--fock-dim")) conv.count("--fock-dim", fock_dim, cfg.fock_dim);
    if (given("--fock-dims")) {
        cfg.fock_dims.assign(fock_dims.size(), 0);
        for (std::size_t i = 0; i < fock_dims.size(); ++i)
            conv.count("--fock-dims", fock_dims[i], cfg.fock_dims[i]);
    }
    if (given("--levels")) conv.count("--levels", levels, cfg.levels);
    if (given("--x-range")) conv.range("--x-range", x_range, cfg.grid.x_min, cfg.grid.x_max);
    if (given("--p-range")) conv.range("--p-range", p_range, cfg.grid.p_min, cfg.grid.p_max);
    if (given("--grid-points")) conv.count("--grid-points", grid_points, cfg.grid.points);
    if (given("--threshold-fraction"))
        conv.number("--threshold-fraction", threshold, cfg.threshold_fraction);
    if (given("--threads")) {
        std::size_t t = 1;
        conv.count("--threads", threads, t);
        if (t < 1 || t > 256) conv.problems.push_back("--threads must lie in [1, 256]");
        cfg.threads = static_cast<unsigned>(t);
    }
    problems.insert(problems.end(), conv.problems.begin(), conv.problems.end());

    if (command_ok) {
        const auto allowed = detail::command_flags(cfg.command);
        for (const char* flag : {"--g", "--g-min", "--g-max", "--g-steps", "--fock-dims", "--levels",
                                 "--x-range", "--p-range", "--grid-points", "--threshold-fraction",
                                 "--threads"})
            if (given(flag) && !allowed.count(flag))
                problems.push_back(std::string(flag) + " does not apply to " + to_string(cfg.command));
        const bool many_gammas =
            cfg.command == Command::Entropy || cfg.command == Command::GcScan;
        if (!many_gammas && cfg.gammas.size() > 1)
            problems.push_back(std::string("--gamma takes a single value for ") +
                               to_string(cfg.command));
        if ((cfg.command == Command::Wigner || cfg.command == Command::Converge) && !given("--g"))
            problems.push_back(std::string("--g is required for ") + to_string(cfg.command));
        if (cfg.command == Command::Converge && !given("--fock-dims"))
            problems.push_back("--fock-dims is required for converge");
        if (cfg.command == Command::Converge && given("--fock-dim"))
            problems.push_back("--fock-dim does not apply to converge (use --fock-dims)");
        if ((cfg.command == Command::GcScan || cfg.command == Command::Converge) && cfg.svg)
            problems.push_back(std::string("--svg has no plot for ") + to_string(cfg.command));
    }

    if (model_ok) {
        const std::size_t min_dim = is_two_photon(cfg.variant) ? 3 : 2;
        const auto dims = cfg.command == Command::Converge && command_ok
                              ? cfg.fock_dims
                              : std::vector<std::size_t>{cfg.fock_dim};
        for (std::size_t n : dims)
            if (n < min_dim)
                problems.push_back("fock dimension " + std::to_string(n) + " is too small for " +
                                   std::string(rabi::to_string(cfg.variant)) + " (needs >= " +
                                   std::to_string(min_dim) + ")");
        for (double gamma : cfg.gammas)
            if (!has_stark_term(cfg.variant) && gamma != 0.0)
                problems.push_back("--gamma must be 0 for " +
                                   std::string(rabi::to_string(cfg.variant)) + ", got " +
                                   format_number(gamma));
    }
    if (!(cfg.omega_c > 0.0)) problems.push_back("--omega-c must be positive");
    for (std::size_t i = 0; i < cfg.gammas.size(); ++i) {
        if (!(std::abs(cfg.gammas[i]) < cfg.omega_c))
            problems.push_back("--gamma: |" + format_number(cfg.gammas[i]) +
                               "| must be below omega_c");
        if (i > 0 && !(cfg.gammas[i - 1] < cfg.gammas[i]))
            problems.push_back("--gamma: values must be strictly ascending");
    }
    if (cfg.g < 0.0) problems.push_back("--g must be non-negative");
    if (cfg.g_min < 0.0) problems.push_back("--g-min must be non-negative");
    if (!(cfg.g_min < cfg.g_max)) problems.push_back("--g-min must be below --g-max");
    if (cfg.g_steps < 2) problems.push_back("--g-steps must be at least 2");
    const bool detects_collapse =
        cfg.command == Command::Spectrum || cfg.command == Command::GcScan;
    if (detects_collapse && cfg.levels < 3)
        problems.push_back("--levels must be at least 3 for collapse detection");
    if (cfg.levels < 1) problems.push_back("--levels must be at least 1");
    const std::size_t smallest =
        cfg.command == Command::Converge && !cfg.fock_dims.empty()
            ? *std::min_element(cfg.fock_dims.begin(), cfg.fock_dims.end())
            : cfg.fock_dim;
    if (cfg.levels > 2 * smallest)
        problems.push_back("--levels " + std::to_string(cfg.levels) +
                           " exceeds the Hilbert space dimension " + std::to_string(2 * smallest));
    for (std::size_t i = 1; i < cfg.fock_dims.size(); ++i)
        if (!(cfg.fock_dims[i - 1] < cfg.fock_dims[i]))
            problems.push_back("--fock-dims must be strictly ascending");
    if (cfg.grid.points < 2) problems.push_back("--grid-points must be at least 2");
    if (!(cfg.threshold_fraction > 0.0 && cfg.threshold_fraction < 1.0))
        problems.push_back("--threshold-fraction must lie in (0, 1)");

    if (!problems.empty()) {
        problems.push_back(detail::usage_footer());
        throw UsageError(std::move(problems));
    }
    return cfg;
}

namespace detail {

inline Metadata command_metadata(const RunConfig& cfg, const Metadata& base) {
    Metadata m{{"command", to_string(cfg.command)}};
    m.insert(m.end(), base.begin(), base.end());
    return m;
}

inline std::string gamma_suffix(double gamma) { return "_gamma_" + format_number(gamma); }

} // namespace detail

// Executes a validated configuration. Returns the one-line summary.
inline std::string execute(const RunConfig& cfg) {
    const std::string csv = cfg.out + ".csv";
    const std::string svg = cfg.out + ".svg";
    std::string summary;
    switch (cfg.command) {
    case Command::Spectrum: {
        const SweepConfig sc = cfg.sweep(cfg.gammas.front());
        auto meta = detail::command_metadata(cfg, describe(sc));
        meta.emplace_back("threshold_fraction", format_number(cfg.threshold_fraction));
        const auto sweep = spectrum_sweep(sc, cfg.threads);
        const auto est = estimate_gc(sweep, cfg.threshold_fraction);
        write_text_file(csv, spectrum_csv(sweep, meta));
        if (cfg.svg) write_text_file(svg, spectrum_svg(sweep, meta, est.g_c));
        const auto ok = std::count(sweep.converged.begin(), sweep.converged.end(), true);
        summary = "spectrum: g_c=" + (est.g_c ? format_number(*est.g_c) : std::string("none")) +
                  " converged " + std::to_string(ok) + "/" + std::to_string(sweep.g_values.size()) +
                  " g-points";
        break;
    }
    case Command::Entropy: {
        std::vector<EntropyCurve> curves;
        for (double gamma : cfg.gammas) {
            const SweepConfig sc = cfg.sweep(gamma);
            auto meta = describe(sc);
            meta.erase(std::remove_if(meta.begin(), meta.end(),
                                      [](const auto& kv) { return kv.first == "levels"; }),
                       meta.end());
            const auto sweep = entropy_sweep(sc, cfg.threads);
            const std::string path = cfg.gammas.size() == 1
                                         ? csv
                                         : cfg.out + detail::gamma_suffix(gamma) + ".csv";
            write_text_file(path, entropy_csv(sweep, detail::command_metadata(cfg, meta)));
            curves.push_back({"gamma = " + format_number(gamma), sweep});
        }
        if (cfg.svg) {
            Metadata meta = describe(cfg.sweep(0.0));
            std::string list;
            for (double gamma : cfg.gammas) list += (list.empty() ? "" : ",") + format_number(gamma);
            for (auto& kv : meta)
                if (kv.first == "gamma") kv.second = list;
            meta.erase(std::remove_if(meta.begin(), meta.end(),
                                      [](const auto& kv) { return kv.first == "levels"; }),
                       meta.end());
            write_text_file(svg, entropy_svg(curves, detail::command_metadata(cfg, meta)));
        }
        summary = "entropy: max S";
        for (const auto& c : curves)
            summary += " (" + c.label + ") " +
                       format_number(*std::max_element(c.sweep.entropy_bits.begin(),
                                                       c.sweep.entropy_bits.end())) + " bits";
        break;
    }
    case Command::Wigner: {
        const ModelParams p = cfg.params(cfg.gammas.front());
        Metadata meta = detail::command_metadata(cfg, describe(p));
        meta.emplace_back("g", format_number(cfg.g));
        meta.emplace_back("x_range", format_number(cfg.grid.x_min) + "," + format_number(cfg.grid.x_max));
        meta.emplace_back("p_range", format_number(cfg.grid.p_min) + "," + format_number(cfg.grid.p_max));
        meta.emplace_back("grid_points", std::to_string(cfg.grid.points));
        const auto w = wigner_snapshot(p, cfg.grid);
        write_text_file(csv, wigner_csv(w, meta));
        if (cfg.svg) write_text_file(svg, wigner_svg(w, meta));
        summary = "wigner: negativity volume " + format_number(negativity_volume(w)) + ", min W " +
                  format_number(*std::min_element(w.values.begin(), w.values.end())) +
                  ", integral " + format_number(wigner_integral(w));
        break;
    }
    case Command::GcScan: {
        const SweepConfig sc = cfg.sweep(0.0);
        Metadata meta = describe(sc);
        std::string list;
        for (double gamma : cfg.gammas) list += (list.empty() ? "" : ",") + format_number(gamma);
        for (auto& kv : meta)
            if (kv.first == "gamma") kv.second = list;
        meta.emplace_back("threshold_fraction", format_number(cfg.threshold_fraction));
        const auto rows = gc_vs_gamma(sc, cfg.gammas, cfg.threshold_fraction, cfg.threads);
        write_text_file(csv, gc_scan_csv(rows, detail::command_metadata(cfg, meta)));
        summary = "gc-scan:";
        for (const auto& r : rows)
            summary += " g_c(gamma=" + format_number(r.gamma) +
                       ")=" + (r.g_c ? format_number(*r.g_c) : std::string("none"));
        break;
    }
    case Command::Converge: {
        const ModelParams p = cfg.params(cfg.gammas.front());
        Metadata meta = describe(p);
        std::string list;
        for (std::size_t n : cfg.fock_dims) list += (list.empty() ? "" : ",") + std::to_string(n);
        for (auto& kv : meta)
            if (kv.first == "fock_dim") kv = {"fock_dims", list};
        meta.emplace_back("g", format_number(cfg.g));
        meta.emplace_back("levels", std::to_string(cfg.levels));
        const auto rows = convergence_study(p, cfg.fock_dims, cfg.levels);
        write_text_file(csv, convergence_csv(rows, detail::command_metadata(cfg, meta)));
        const auto ok = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
        summary = "converge: E0(N=" + std::to_string(rows.back().fock_dim) +
                  ")=" + format_number(rows.back().ground_energy) + " max drift at N=" +
                  std::to_string(rows.front().fock_dim) + " " +
                  format_number(rows.front().max_level_drift) + ", " + std::to_string(ok) + "/" +
                  std::to_string(rows.size()) + " converged";
        break;
    }
    }
    summary += " -> " + csv;
    if (cfg.svg) summary += ", " + svg;
    return summary;
}

enum ExitCode : int { success = 0, computation_failed = 1, usage_error = 2 };

// Full front end: parse, execute, report. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << help_text();
        return success;
    } catch (const UsageError& e) {
        err << "rabi: usage error\n";
        for (const auto& p : e.problems()) err << "  " << p << '\n';
        return usage_error;
    }
    try {
        out << execute(cfg) << '\n';
        return success;
    } catch (const std::exception& e) {
        err << "rabi: " << to_string(cfg.command) << " failed: " << e.what() << '\n';
        return computation_failed;
    }
}

inline std::string help_text() {
    return "usage: rabi <command> --model MODEL --out PREFIX [options]\n"
           "\n"
           "commands\n"
           "  spectrum   lowest levels over a g sweep, with collapse estimate\n"
           "  entropy    ground-state qubit-field entropy over a g sweep (one curve per gamma)\n"
           "  wigner     Wigner function of the ground-state field at one g\n"
           "  gc-scan    collapse coupling for each gamma in a list\n"
           "  converge   truncation study over a list of Fock dimensions at one g\n"
           "\n"
           "model\n"
           "  --model qrm|qrsm|2pqrm|2prsm   (required)\n"
           "  --omega-c X      cavity frequency, default 1\n"
           "  --omega-0 X      qubit splitting, default 1\n"
           "  --gamma X[,X..]  Stark coupling, default 0; lists for entropy and gc-scan\n"
           "  --fock-dim N     field truncation, default 200\n"
           "\n"
           "sweeps (spectrum, entropy, gc-scan)\n"
           "  --g-min X --g-max X --g-steps N   default 0, 1, 101\n"
           "  --levels M                        lowest levels tracked, default 10\n"
           "  --threshold-fraction F            collapse threshold, default 0.05\n"
           "  --threads T                       parallel sweep, output unchanged\n"
           "\n"
           "single point (wigner, converge)\n"
           "  --g X                  coupling (required)\n"
           "  --x-range A,B --p-range A,B --grid-points N   wigner grid, default -6,6 and 201\n"
           "  --fock-dims N1,N2,..   converge truncations, ascending (required)\n"
           "\n"
           "output\n"
           "  --out PREFIX   writes PREFIX.csv (required)\n"
           "  --svg          also writes PREFIX.svg (spectrum, entropy, wigner)\n"
           "\n"
           "exit status: 0 success, 1 computation or output failure, 2 usage error\n";
}

} // namespace rabi::cli
