#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tc/types.hpp"

namespace tc {

// Static two-panel chart: raw series with the trend overlaid on top, the
// cycle with a zero line below. Optional shading bands (index ranges,
// inclusive) are drawn behind both panels. Self-contained SVG 1.1, no
// external references. NaN entries split the polylines.
std::string render_two_panel_chart(const std::vector<std::string>& dates,
                                   const Vec& raw, const Vec& trend,
                                   const Vec& cycle,
                                   const std::vector<std::pair<int, int>>& shading,
                                   const std::string& title);

}  // namespace tc
