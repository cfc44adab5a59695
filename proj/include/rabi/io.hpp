// io.hpp - CSV and standalone SVG emission for sweep results
//
// Output is a pure function of the result and its metadata: numbers go
// through a fixed printf format, so reruns produce identical bytes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rabi/analysis.hpp"
#include "rabi/error.hpp"
#include "rabi/models.hpp"
#include "rabi/wigner.hpp"

namespace rabi {

// Ordered key/value pairs describing how a result was produced.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// 12 significant digits, '.' decimal point, no negative zero.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline Metadata describe(const ModelParams& p) {
    return {{"model", std::string(to_string(p.variant))},
            {"omega_c", format_number(p.omega_c)},
            {"omega_0", format_number(p.omega_0)},
            {"gamma", format_number(p.gamma)},
            {"fock_dim", std::to_string(p.fock_dim)}};
}

inline Metadata describe(const SweepConfig& c) {
    Metadata m = describe(c.base);
    m.emplace_back("g_min", format_number(c.g_min));
    m.emplace_back("g_max", format_number(c.g_max));
    m.emplace_back("g_steps", std::to_string(c.g_steps));
    m.emplace_back("levels", std::to_string(c.levels));
    return m;
}

inline std::string metadata_line(const Metadata& meta) {
    std::string out;
    for (const auto& [key, value] : meta) {
        if (!out.empty()) out += ' ';
        out += key + '=' + value;
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot open '" + path + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (!f) throw OutputError("failed writing '" + path + "'");
}

// ---- CSV ------------------------------------------------------------------

namespace detail {

inline std::string csv_preamble(const Metadata& meta, const std::string& header) {
    return "# " + metadata_line(meta) + "\n" + header + "\n";
}

} // namespace detail

inline std::string spectrum_csv(const SpectrumSweep& s, const Metadata& meta) {
    std::string header = "g";
    for (std::size_t k = 0; k < s.levels(); ++k) header += ",level_" + std::to_string(k);
    header += ",converged";
    std::string out = detail::csv_preamble(meta, header);
    for (std::size_t i = 0; i < s.g_values.size(); ++i) {
        out += format_number(s.g_values[i]);
        for (double e : s.energies[i]) out += ',' + format_number(e);
        out += s.converged[i] ? ",1\n" : ",0\n";
    }
    return out;
}

inline std::string entropy_csv(const EntropySweep& s, const Metadata& meta) {
    std::string out = detail::csv_preamble(meta, "g,entropy_bits");
    for (std::size_t i = 0; i < s.g_values.size(); ++i)
        out += format_number(s.g_values[i]) + ',' + format_number(s.entropy_bits[i]) + '\n';
    return out;
}

inline std::string wigner_csv(const WignerGrid& w, const Metadata& meta) {
    std::string out = detail::csv_preamble(meta, "x,p,w");
    for (std::size_t i = 0; i < w.x_axis.size(); ++i)
        for (std::size_t j = 0; j < w.p_axis.size(); ++j)
            out += format_number(w.x_axis[i]) + ',' + format_number(w.p_axis[j]) + ',' +
                   format_number(w.at(i, j)) + '\n';
    return out;
}

inline std::string gc_scan_csv(std::span<const GammaCollapse> rows, const Metadata& meta) {
    std::string out = detail::csv_preamble(meta, "gamma,g_c");
    for (const auto& r : rows)
        out += format_number(r.gamma) + ',' + (r.g_c ? format_number(*r.g_c) : "") + '\n';
    return out;
}

inline std::string convergence_csv(std::span<const ConvergenceRow> rows, const Metadata& meta) {
    std::string out = detail::csv_preamble(
        meta, "fock_dim,ground_energy,entropy_bits,max_level_drift,converged");
    for (const auto& r : rows)
        out += std::to_string(r.fock_dim) + ',' + format_number(r.ground_energy) + ',' +
               format_number(r.entropy_bits) + ',' + format_number(r.max_level_drift) +
               (r.converged ? ",1\n" : ",0\n");
    return out;
}

// ---- SVG ------------------------------------------------------------------

namespace svg {

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// XML comments may not contain "--".
inline std::string comment(const std::string& text) {
    std::string body = text;
    for (std::size_t pos; (pos = body.find("--")) != std::string::npos;) body.replace(pos, 2, "- -");
    if (!body.empty() && body.back() == '-') body += ' ';
    return "<!-- " + body + " -->\n";
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf) == "-0.00" ? "0.00" : buf;
}

// Short form for on-plot labels.
inline std::string label(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string rgb(int r, int g, int b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

// Roughly `count` round tick positions covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi, int count = 5) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
}

struct Frame {
    double left = 80, top = 40, width = 560, height = 380;
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;

    double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * width; }
    double py(double y) const { return top + height - (y - y_lo) / (y_hi - y_lo) * height; }
};

inline std::string open(double w, double h, const Metadata& meta) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" viewBox=\"0 0 " + num(w) + ' ' + num(h) + "\">\n" +
           comment(metadata_line(meta)) + "<rect width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"#ffffff\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                        const char* extra = "") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" "
           "font-size=\"12\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape(s) +
           "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label,
                        const std::string& title) {
    std::string out = "<g class=\"axes\" stroke=\"#000000\" fill=\"none\">\n";
    out += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) +
           "\" height=\"" + num(f.height) + "\"/>\n";
    for (double t : ticks(f.x_lo, f.x_hi))
        out += "<line x1=\"" + num(f.px(t)) + "\" y1=\"" + num(f.top + f.height) + "\" x2=\"" +
               num(f.px(t)) + "\" y2=\"" + num(f.top + f.height + 5) + "\"/>\n";
    for (double t : ticks(f.y_lo, f.y_hi))
        out += "<line x1=\"" + num(f.left - 5) + "\" y1=\"" + num(f.py(t)) + "\" x2=\"" +
               num(f.left) + "\" y2=\"" + num(f.py(t)) + "\"/>\n";
    out += "</g>\n";
    for (double t : ticks(f.x_lo, f.x_hi))
        out += text(f.px(t), f.top + f.height + 18, label(t));
    for (double t : ticks(f.y_lo, f.y_hi))
        out += text(f.left - 8, f.py(t) + 4, label(t), "end");
    out += text(f.left + f.width / 2, f.top + f.height + 40, x_label);
    const double yc = f.top + f.height / 2;
    out += text(f.left - 55, yc, y_label, "middle",
                (" transform=\"rotate(-90 " + num(f.left - 55) + ' ' + num(yc) + ")\"").c_str());
    out += text(f.left + f.width / 2, f.top - 15, title);
    return out;
}

inline std::string polyline(const Frame& f, std::span<const double> xs,
                            std::span<const double> ys, const std::string& colour,
                            const char* clip = nullptr) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) pts += ' ';
        pts += num(f.px(xs[i])) + ',' + num(f.py(ys[i]));
    }
    std::string out = "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"";
    if (clip) out += std::string(" clip-path=\"url(#") + clip + ")\"";
    return out + " points=\"" + pts + "\"/>\n";
}

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colours;
}

// Diverging map centred on zero: white to red for w > 0, white to blue for
// w < 0, saturating at |w| = scale.
inline std::string diverging_colour(double w, double scale) {
    const double t = scale > 0.0 ? std::clamp(w / scale, -1.0, 1.0) : 0.0;
    const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
    return t >= 0.0 ? rgb(255, fade, fade) : rgb(fade, fade, 255);
}

} // namespace svg

// Spectrum fan: one polyline per level. The vertical range follows the rows
// flagged converged (when there are any) so runaway truncated levels past the
// collapse do not flatten the fan; lines are clipped to the frame.
inline std::string spectrum_svg(const SpectrumSweep& s, const Metadata& meta,
                                std::optional<double> g_c = std::nullopt) {
    svg::Frame f;
    f.x_lo = s.g_values.front();
    f.x_hi = s.g_values.back();
    const bool any_converged = std::find(s.converged.begin(), s.converged.end(), true) !=
                               s.converged.end();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < s.g_values.size(); ++i) {
        if (any_converged && !s.converged[i]) continue;
        lo = std::min(lo, s.energies[i].front());
        hi = std::max(hi, s.energies[i].back());
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
    f.y_lo = lo - pad;
    f.y_hi = hi + pad;

    std::string out = svg::open(680, 480, meta);
    out += "<defs><clipPath id=\"frame\"><rect x=\"" + svg::num(f.left) + "\" y=\"" +
           svg::num(f.top) + "\" width=\"" + svg::num(f.width) + "\" height=\"" +
           svg::num(f.height) + "\"/></clipPath></defs>\n";
    out += svg::axes(f, "coupling g", "energy", "Lowest " + std::to_string(s.levels()) + " levels");
    std::vector<double> ys(s.g_values.size());
    for (std::size_t k = 0; k < s.levels(); ++k) {
        for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = s.energies[i][k];
        out += svg::polyline(f, s.g_values, ys, svg::palette()[k % svg::palette().size()], "frame");
    }
    if (g_c) {
        const std::string x = svg::num(f.px(*g_c));
        out += "<line class=\"collapse\" x1=\"" + x + "\" y1=\"" + svg::num(f.top) + "\" x2=\"" + x +
               "\" y2=\"" + svg::num(f.top + f.height) +
               "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
        out += svg::text(f.px(*g_c), f.top + 14, "g_c = " + svg::label(*g_c));
    }
    return out + "</svg>\n";
}

struct EntropyCurve {
    std::string label;
    EntropySweep sweep;
};

// Entropy curves on a shared [0, 1] bit axis, one polyline per curve, legend
// to the right of the frame.
inline std::string entropy_svg(std::span<const EntropyCurve> curves, const Metadata& meta) {
    svg::Frame f;
    f.x_lo = INFINITY;
    f.x_hi = -INFINITY;
    for (const auto& c : curves) {
        f.x_lo = std::min(f.x_lo, c.sweep.g_values.front());
        f.x_hi = std::max(f.x_hi, c.sweep.g_values.back());
    }
    f.y_lo = 0.0;
    f.y_hi = 1.05;
    std::string out = svg::open(800, 480, meta);
    out += svg::axes(f, "coupling g", "entropy (bits)", "Ground-state entanglement entropy");
    out += "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& colour = svg::palette()[i % svg::palette().size()];
        const double y = f.top + 20 + 20 * static_cast<double>(i);
        const double x = f.left + f.width + 15;
        out += "<line x1=\"" + svg::num(x) + "\" y1=\"" + svg::num(y) + "\" x2=\"" +
               svg::num(x + 20) + "\" y2=\"" + svg::num(y) + "\" stroke=\"" + colour +
               "\" stroke-width=\"2\"/>\n";
        out += svg::text(x + 26, y + 4, curves[i].label, "start");
    }
    out += "</g>\n";
    for (std::size_t i = 0; i < curves.size(); ++i)
        out += svg::polyline(f, curves[i].sweep.g_values, curves[i].sweep.entropy_bits,
                             svg::palette()[i % svg::palette().size()]);
    return out + "</svg>\n";
}

// Heatmap with one rect per grid cell; p increases upward.
inline std::string wigner_svg(const WignerGrid& w, const Metadata& meta) {
    svg::Frame f;
    f.width = f.height = 440;
    const std::size_t nx = w.x_axis.size(), np = w.p_axis.size();
    const double dx = nx > 1 ? w.x_axis[1] - w.x_axis[0] : 1.0;
    const double dp = np > 1 ? w.p_axis[1] - w.p_axis[0] : 1.0;
    f.x_lo = w.x_axis.front() - dx / 2;
    f.x_hi = w.x_axis.back() + dx / 2;
    f.y_lo = w.p_axis.front() - dp / 2;
    f.y_hi = w.p_axis.back() + dp / 2;
    double scale = 0.0;
    for (double v : w.values) scale = std::max(scale, std::abs(v));

    std::string out = svg::open(680, 540, meta);
    const std::string cw = svg::num(f.width / static_cast<double>(nx));
    const std::string ch = svg::num(f.height / static_cast<double>(np));
    out += "<g class=\"cells\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < np; ++j)
            out += "<rect x=\"" + svg::num(f.px(w.x_axis[i] - dx / 2)) + "\" y=\"" +
                   svg::num(f.py(w.p_axis[j] + dp / 2)) + "\" width=\"" + cw + "\" height=\"" + ch +
                   "\" fill=\"" + svg::diverging_colour(w.at(i, j), scale) + "\"/>\n";
    out += "</g>\n";
    out += svg::axes(f, "x", "p", "Wigner function of the field");

    // Colour bar from -scale to +scale.
    out += "<g class=\"colorbar\">\n";
    const int swatches = 21;
    const double bx = f.left + f.width + 30, bh = f.height / swatches;
    for (int s = 0; s < swatches; ++s) {
        const double v = scale * (1.0 - 2.0 * s / (swatches - 1));
        out += "<rect x=\"" + svg::num(bx) + "\" y=\"" + svg::num(f.top + s * bh) +
               "\" width=\"20\" height=\"" + svg::num(bh) + "\" fill=\"" +
               svg::diverging_colour(v, scale) + "\"/>\n";
    }
    out += svg::text(bx + 26, f.top + 10, svg::label(scale), "start");
    out += svg::text(bx + 26, f.top + f.height / 2 + 4, "0", "start");
    out += svg::text(bx + 26, f.top + f.height, svg::label(-scale), "start");
    out += "</g>\n";
    return out + "</svg>\n";
}

} // namespace rabi
