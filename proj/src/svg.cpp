#include "tnt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tnt {

namespace {

constexpr double kCanvas = 720.0;
constexpr double kMargin = 60.0;
constexpr double kPlot = kCanvas - 2.0 * kMargin;

struct Mapper {
    double x_lo, x_hi, y_lo, y_hi;

    double px(double x) const { return kMargin + (x - x_lo) / (x_hi - x_lo) * kPlot; }
    // world y grows upward, pixel y grows downward
    double py(double y) const { return kMargin + (y_hi - y) / (y_hi - y_lo) * kPlot; }
};

/// Five-stop cold-to-warm palette indexed by t in [0,1].
std::string heat_color(double t) {
    static const double stops[5][3] = {{68, 1, 84},     // deep violet
                                       {59, 82, 139},   // blue
                                       {33, 145, 140},  // teal
                                       {94, 201, 98},   // green
                                       {253, 231, 37}}; // yellow
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    std::ostringstream c;
    c << "rgb(" << static_cast<int>(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])))
      << ',' << static_cast<int>(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])))
      << ',' << static_cast<int>(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])))
      << ')';
    return c.str();
}

} // namespace

std::string render_svg(const RuleSet& ruleset, const ExplanationDataset& dataset,
                       const std::vector<KnownMinimum>& known_minima,
                       const std::vector<double>& incumbent) {
    const Mapper map{dataset.space.lower[0], dataset.space.upper[0],
                     dataset.space.dims() > 1 ? dataset.space.lower[1] : 0.0,
                     dataset.space.dims() > 1 ? dataset.space.upper[1] : 1.0};
    const bool two_d = dataset.space.dims() > 1;
    auto world_y = [&](const std::vector<double>& p) { return two_d ? p[1] : 0.5; };

    std::ostringstream svg;
    svg.precision(2);
    svg << std::fixed;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
        << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas
        << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
        << "\" height=\"" << kPlot << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << kCanvas / 2 << "\" y=\"" << kCanvas - 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << dataset.space.names[0] << "</text>\n";
    if (two_d) {
        svg << "<text x=\"18\" y=\"" << kCanvas / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
               "transform=\"rotate(-90 18 "
            << kCanvas / 2 << ")\">" << dataset.space.names[1] << "</text>\n";
    }

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        svg << "<circle cx=\"" << map.px(dataset.inputs[i][0]) << "\" cy=\""
            << map.py(world_y(dataset.inputs[i])) << "\" r=\"2.5\" fill=\""
            << heat_color(dataset.mean_normalized[i]) << "\" fill-opacity=\"0.8\"/>\n";
    }

    for (const Rule& rule : ruleset.rules) {
        const std::string tag = interest_tag(rule.interestingness);
        if (tag == "LOW") continue;
        const bool high = tag == "HIGH";
        const double x0 = map.px(std::max(rule.antecedent[0].lower, dataset.space.lower[0]));
        const double x1 = map.px(std::min(rule.antecedent[0].upper, dataset.space.upper[0]));
        double y0 = kMargin, y1 = kMargin + kPlot;
        if (two_d) {
            y0 = map.py(std::min(rule.antecedent[1].upper, dataset.space.upper[1]));
            y1 = map.py(std::max(rule.antecedent[1].lower, dataset.space.lower[1]));
        }
        svg << "<rect class=\"" << (high ? "rule-high" : "rule-moderate") << "\" x=\"" << x0
            << "\" y=\"" << y0 << "\" width=\"" << (x1 - x0) << "\" height=\"" << (y1 - y0)
            << "\" fill=\"none\" stroke=\"" << (high ? "#d62728" : "#ffbf00")
            << "\" stroke-width=\"2.5\"/>\n";
    }

    for (const KnownMinimum& m : known_minima) {
        const double cx = map.px(m.location[0]);
        const double cy = map.py(world_y(m.location));
        svg << "<path class=\"known-minimum\" d=\"M" << cx - 6 << ' ' << cy - 6 << " L" << cx + 6
            << ' ' << cy + 6 << " M" << cx - 6 << ' ' << cy + 6 << " L" << cx + 6 << ' ' << cy - 6
            << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    if (!incumbent.empty()) {
        const double cx = map.px(incumbent[0]);
        const double cy = map.py(world_y(incumbent));
        svg << "<path class=\"incumbent\" d=\"M" << cx << ' ' << cy - 7 << " L" << cx + 7 << ' '
            << cy << " L" << cx << ' ' << cy + 7 << " L" << cx - 7 << ' ' << cy
            << " Z\" fill=\"none\" stroke=\"#0044cc\" stroke-width=\"2\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace tnt
