#pragma once

#include "chessan/stats/stat_table.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace chessan::stats {

struct RenderedFiles {
    std::filesystem::path csv;
    std::optional<std::filesystem::path> svg;
};

/// Bars for histograms, lines for everything else; nothing is drawn for an
/// empty table but the axes.
std::string to_svg(const StatTable& t);

/// Writes <out_dir>/<name>.csv and, when asked, <name>.svg. Throws
/// std::runtime_error on write failure.
RenderedFiles render(const StatTable& t, const std::filesystem::path& out_dir, bool want_svg = true);

} // namespace chessan::stats
