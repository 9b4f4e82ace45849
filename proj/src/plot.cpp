#include "concur/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

namespace concur {

SunflowerPlot sunflower_plot_data(const PersistenceDiagram& diagram, std::size_t disk_threshold) {
    if (disk_threshold < 1) throw ContractError("disk threshold must be at least 1");
    std::map<std::pair<Level, Level>, std::size_t> groups;
    Level top = 0;
    for (const auto& cls : diagram.classes) {
        ++groups[{cls.birth, cls.death}];
        top = std::max({top, cls.birth, cls.death});
    }
    SunflowerPlot plot;
    plot.axis_max = top + 1;
    plot.disk_threshold = disk_threshold;
    for (const auto& [point, count] : groups) {
        GlyphKind kind = GlyphKind::dot;
        if (count > disk_threshold)
            kind = GlyphKind::disk;
        else if (count > 1)
            kind = GlyphKind::rays;
        plot.glyphs.push_back(SunflowerGlyph{point.first, point.second, count, kind});
    }
    return plot;
}

namespace {

constexpr double kSize = 520.0;
constexpr double kMargin = 60.0;
constexpr double kSpan = kSize - 2 * kMargin;
constexpr double kRayLength = 12.0;

Level tick_step(Level axis_max) {
    for (Level step : {1u, 2u, 5u, 10u, 20u, 25u, 50u, 100u, 200u, 500u, 1000u}) {
        if (axis_max / step <= 10) return step;
    }
    return axis_max / 10 + 1;
}

}  // namespace

std::string render_sunflower_svg(const SunflowerPlot& plot) {
    const double scale = kSpan / static_cast<double>(plot.axis_max);
    const auto px = [&](Level level) { return kMargin + scale * level; };
    const auto py = [&](Level level) { return kSize - kMargin - scale * level; };

    std::string svg;
    auto out = std::back_inserter(svg);
    fmt::format_to(out,
                   "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
                   "viewBox=\"0 0 {0:.0f} {0:.0f}\">\n",
                   kSize);
    fmt::format_to(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes, ticks, labels.
    fmt::format_to(out, "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n");
    fmt::format_to(out, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", px(0), py(0),
                   px(plot.axis_max), py(0));
    fmt::format_to(out, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", px(0), py(0), px(0),
                   py(plot.axis_max));
    const Level step = tick_step(plot.axis_max);
    for (Level t = 0; t <= plot.axis_max; t += step) {
        fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n", px(t), py(0),
                       py(0) + 5);
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" text-anchor=\"middle\">{}</text>\n",
                       px(t), py(0) + 18, t);
        fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n", px(0), py(t),
                       px(0) - 5);
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" text-anchor=\"end\">{}</text>\n",
                       px(0) - 8, py(t) + 4, t);
    }
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" text-anchor=\"middle\">birth (frequency level)</text>\n",
                   kSize / 2, kSize - 15);
    fmt::format_to(out,
                   "<text x=\"15\" y=\"{0:.2f}\" stroke=\"none\" text-anchor=\"middle\" "
                   "transform=\"rotate(-90 15 {0:.2f})\">death (frequency level)</text>\n",
                   kSize / 2);
    fmt::format_to(out, "</g>\n");

    fmt::format_to(out,
                   "<line id=\"diagonal\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                   "stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
                   px(0), py(0), px(plot.axis_max), py(plot.axis_max));

    fmt::format_to(out, "<g id=\"classes\">\n");
    for (const auto& g : plot.glyphs) {
        const double x = px(g.birth);
        const double y = py(g.death);
        switch (g.kind) {
            case GlyphKind::dot:
                fmt::format_to(out,
                               "<circle class=\"dot\" data-birth=\"{}\" data-death=\"{}\" data-count=\"1\" "
                               "cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"black\"/>\n",
                               g.birth, g.death, x, y);
                break;
            case GlyphKind::rays:
                fmt::format_to(out, "<g class=\"rays\" data-birth=\"{}\" data-death=\"{}\" data-count=\"{}\">\n",
                               g.birth, g.death, g.multiplicity);
                fmt::format_to(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"black\"/>\n", x, y);
                for (std::size_t k = 0; k < g.multiplicity; ++k) {
                    const double angle = std::numbers::pi / 2 +
                                         2 * std::numbers::pi * static_cast<double>(k) /
                                             static_cast<double>(g.multiplicity);
                    fmt::format_to(out,
                                   "<line class=\"ray\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                                   "stroke=\"black\"/>\n",
                                   x, y, x + kRayLength * std::cos(angle), y - kRayLength * std::sin(angle));
                }
                fmt::format_to(out, "</g>\n");
                break;
            case GlyphKind::disk:
                fmt::format_to(out,
                               "<g class=\"disk\" data-birth=\"{}\" data-death=\"{}\" data-count=\"{}\">\n"
                               "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"14\" fill=\"lightgray\" stroke=\"black\"/>\n"
                               "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                               "font-size=\"11\">{}</text>\n</g>\n",
                               g.birth, g.death, g.multiplicity, x, y, x, y + 4, g.multiplicity);
                break;
        }
    }
    fmt::format_to(out, "</g>\n</svg>\n");
    return svg;
}

}  // namespace concur
