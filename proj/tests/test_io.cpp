#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rabi/io.hpp"

using namespace rabi;
namespace pt = boost::property_tree;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::size_t data_lines(const std::string& text) {
    std::size_t n = 0;
    for (const auto& l : lines_of(text))
        if (l.empty() || l[0] != '#') ++n;
    return n;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

pt::ptree parse_svg(const std::string& text) {
    std::istringstream in(text);
    pt::ptree tree;
    pt::read_xml(in, tree);
    return tree;
}

// Direct children of `node` named `tag`.
std::size_t count_children(const pt::ptree& node, const std::string& tag) {
    std::size_t n = 0;
    for (const auto& [name, child] : node)
        if (name == tag) ++n;
    return n;
}

const pt::ptree& group_with_class(const pt::ptree& svg, const std::string& cls) {
    for (const auto& [name, child] : svg)
        if (name == "g" && child.get<std::string>("<xmlattr>.class", "") == cls) return child;
    throw std::runtime_error("no group " + cls);
}

Metadata sample_meta() { return {{"model", "2prsm"}, {"gamma", "0.3"}}; }

SpectrumSweep small_sweep() {
    SweepConfig c;
    c.base.gamma = 0.3;
    c.base.fock_dim = 30;
    c.g_min = 0.0;
    c.g_max = 0.8;
    c.g_steps = 5;
    c.levels = 6;
    return spectrum_sweep(c);
}

WignerGrid vacuum_grid(std::size_t points) {
    ModelParams p;
    p.fock_dim = 10;
    WignerGridSpec spec;
    spec.points = points;
    return wigner_snapshot(p, spec);
}

} // namespace

TEST(FormatNumber, TwelveSignificantDigits) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    EXPECT_EQ(format_number(123456789012345.0), "1.23456789012e+14");
    EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Csv, EntropyThreePointsIsHeaderPlusThreeRows) {
    EntropySweep s{{0.0, 0.5, 1.0}, {0.0, 0.25, 0.5}};
    const std::string csv = entropy_csv(s, sample_meta());
    const auto lines = lines_of(csv);
    ASSERT_EQ(lines.size(), 5u);
    EXPECT_EQ(lines[0], "# model=2prsm gamma=0.3");
    EXPECT_EQ(lines[1], "g,entropy_bits");
    EXPECT_EQ(lines[3], "0.5,0.25");
    EXPECT_EQ(data_lines(csv), 4u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.back(), '\n');
}

TEST(Csv, WignerFullGridLineCount) {
    WignerGrid w;
    w.x_axis = linspace(-6.0, 6.0, 201);
    w.p_axis = w.x_axis;
    w.values.assign(201 * 201, 0.01);
    const std::string csv = wigner_csv(w, sample_meta());
    EXPECT_EQ(data_lines(csv), 40402u);
    const auto lines = lines_of(csv);
    EXPECT_EQ(lines[1], "x,p,w");
    EXPECT_EQ(lines[2], "-6,-6,0.01");
    EXPECT_EQ(lines[3], "-6,-5.94,0.01");  // row-major: p varies fastest
}

TEST(Csv, SpectrumRoundTripsToTwelveDigits) {
    const auto sweep = small_sweep();
    const std::string csv = spectrum_csv(sweep, sample_meta());
    const auto lines = lines_of(csv);
    ASSERT_EQ(lines.size(), 2 + sweep.g_values.size());
    EXPECT_EQ(lines[1], "g,level_0,level_1,level_2,level_3,level_4,level_5,converged");
    for (std::size_t i = 0; i < sweep.g_values.size(); ++i) {
        const auto fields = split(lines[2 + i]);
        ASSERT_EQ(fields.size(), 8u);
        EXPECT_NEAR(std::stod(fields[0]), sweep.g_values[i], 1e-15);
        for (std::size_t k = 0; k < 6; ++k) {
            const double expected = sweep.energies[i][k];
            EXPECT_NEAR(std::stod(fields[1 + k]), expected, 5e-12 * std::abs(expected) + 1e-300);
        }
        EXPECT_EQ(fields[7], sweep.converged[i] ? "1" : "0");
    }
}

TEST(Csv, DeterministicBytes) {
    EXPECT_EQ(spectrum_csv(small_sweep(), sample_meta()), spectrum_csv(small_sweep(), sample_meta()));
}

TEST(Csv, GcScanLeavesAbsentValuesEmpty) {
    const std::vector<GammaCollapse> rows{{0.3, 0.48}, {0.6, std::nullopt}};
    const auto lines = lines_of(gc_scan_csv(rows, sample_meta()));
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[1], "gamma,g_c");
    EXPECT_EQ(lines[2], "0.3,0.48");
    EXPECT_EQ(lines[3], "0.6,");
}

TEST(Csv, ConvergenceSchema) {
    const std::vector<ConvergenceRow> rows{{100, -0.5, 0.01, 2e-9, true}, {200, -0.5, 0.01, 0.0, false}};
    const auto lines = lines_of(convergence_csv(rows, sample_meta()));
    EXPECT_EQ(lines[1], "fock_dim,ground_energy,entropy_bits,max_level_drift,converged");
    EXPECT_EQ(lines[2], "100,-0.5,0.01,2e-09,1");
    EXPECT_EQ(lines[3], "200,-0.5,0.01,0,0");
}

TEST(Output, UnwritablePathThrows) {
    EXPECT_THROW(write_text_file("/nonexistent-dir/out.csv", "x"), OutputError);
}

TEST(Svg, CommentNeverContainsDoubleHyphen) {
    const std::string c = svg::comment("a--b---c-");
    const std::string body = c.substr(4, c.size() - 4 - 4);
    EXPECT_EQ(body.find("--"), std::string::npos);
    const Metadata meta{{"note", "x--y-"}};
    EXPECT_NO_THROW(parse_svg(entropy_svg(std::vector<EntropyCurve>{{"c", {{0.0, 1.0}, {0.0, 0.5}}}}, meta)));
}

TEST(Svg, SpectrumIsWellFormedWithOnePolylinePerLevel) {
    const auto sweep = small_sweep();
    const std::string text = spectrum_svg(sweep, sample_meta(), 0.4);
    const auto tree = parse_svg(text);
    const auto& svg = tree.get_child("svg");
    EXPECT_EQ(count_children(svg, "polyline"), sweep.levels());
    EXPECT_NE(text.find("<!-- model=2prsm gamma=0.3 -->"), std::string::npos);
    EXPECT_EQ(svg.get<std::string>("<xmlattr>.xmlns"), "http://www.w3.org/2000/svg");
}

TEST(Svg, EntropyHasOneCurveAndLegendEntryPerGamma) {
    std::vector<EntropyCurve> curves;
    for (double gamma : {0.3, 0.6, 0.9})
        curves.push_back({"gamma = " + format_number(gamma), {{0.0, 0.5, 1.0}, {0.0, gamma, 0.95}}});
    const auto tree = parse_svg(entropy_svg(curves, sample_meta()));
    const auto& svg = tree.get_child("svg");
    EXPECT_EQ(count_children(svg, "polyline"), 3u);
    const auto& legend = group_with_class(svg, "legend");
    EXPECT_EQ(count_children(legend, "text"), 3u);
    EXPECT_EQ(count_children(legend, "line"), 3u);
}

TEST(Svg, WignerHasOneCellPerGridPoint) {
    const auto w = vacuum_grid(31);
    const auto tree = parse_svg(wigner_svg(w, sample_meta()));
    EXPECT_EQ(count_children(group_with_class(tree.get_child("svg"), "cells"), "rect"), 31u * 31u);
}

TEST(Svg, VacuumHasNoCellsFromTheNegativeHalf) {
    const auto w = vacuum_grid(61);
    const auto tree = parse_svg(wigner_svg(w, sample_meta()));
    std::size_t negative = 0, cells = 0;
    for (const auto& [name, rect] : group_with_class(tree.get_child("svg"), "cells")) {
        if (name != "rect") continue;
        ++cells;
        const auto fill = rect.get<std::string>("<xmlattr>.fill");
        // Negative half: blue channel saturated, red below 255.
        if (fill.substr(5, 2) == "ff" && fill.substr(1, 2) != "ff") ++negative;
    }
    EXPECT_EQ(cells, 61u * 61u);
    EXPECT_EQ(negative, 0u);
}

TEST(Svg, DivergingMapIsSymmetric) {
    EXPECT_EQ(svg::diverging_colour(0.0, 1.0), "#ffffff");
    EXPECT_EQ(svg::diverging_colour(1.0, 1.0), "#ff0000");
    EXPECT_EQ(svg::diverging_colour(-1.0, 1.0), "#0000ff");
    EXPECT_EQ(svg::diverging_colour(0.5, 1.0), "#ff8080");
    EXPECT_EQ(svg::diverging_colour(-0.5, 1.0), "#8080ff");
    EXPECT_EQ(svg::diverging_colour(-7.0, 1.0), "#0000ff");
}

TEST(Svg, FockOneShowsNegativeCells) {
    WignerGrid w;
    w.x_axis = linspace(-3.0, 3.0, 21);
    w.p_axis = w.x_axis;
    std::vector<double> diag{0.0, 1.0};
    w = wigner(QuantumState::density(ComplexMatrix::diagonal(diag)), w.x_axis, w.p_axis);
    const auto tree = parse_svg(wigner_svg(w, sample_meta()));
    std::size_t darkest = 0;
    for (const auto& [name, rect] : group_with_class(tree.get_child("svg"), "cells"))
        if (name == "rect" && rect.get<std::string>("<xmlattr>.fill") == "#0000ff") ++darkest;
    EXPECT_EQ(darkest, 1u);  // only the origin reaches W = -1/pi, the extreme
}
