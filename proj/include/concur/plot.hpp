#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "concur/homology.hpp"

namespace concur {

enum class GlyphKind { dot, rays, disk };

// One (birth, death) point of a sunflower persistence plot.
//   multiplicity 1                 -> dot
//   2 .. disk_threshold            -> dot with one ray per class
//   more than disk_threshold       -> disk annotated with the count
struct SunflowerGlyph {
    Level birth = 0;
    Level death = 0;
    std::size_t multiplicity = 0;
    GlyphKind kind = GlyphKind::dot;
};

struct SunflowerPlot {
    Level axis_max = 1;  // both axes span [0, axis_max] in frequency levels
    std::size_t disk_threshold = 10;
    std::vector<SunflowerGlyph> glyphs;  // sorted by (birth, death)
};

inline constexpr std::size_t kDefaultDiskThreshold = 10;

SunflowerPlot sunflower_plot_data(const PersistenceDiagram& diagram,
                                  std::size_t disk_threshold = kDefaultDiskThreshold);

// Standalone SVG document. Birth on the horizontal axis, death on the vertical axis, so every
// class plots below the main diagonal.
std::string render_sunflower_svg(const SunflowerPlot& plot);

}  // namespace concur
