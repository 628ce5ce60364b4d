#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "deeptraj/matrix.hpp"

namespace deeptraj {

enum class PlotKind { Trajectories, EmbeddingScatter, ChBars, MeanCurves };

std::string_view to_string(PlotKind kind);
PlotKind parse_plot_kind(std::string_view name);

/// Fill/stroke color of group `index`; cycles through a fixed palette.
std::string_view group_color(std::size_t index);

/// One polyline per row of `values` (time on x). `groups`, when non-empty,
/// colors each row; otherwise every row takes color 0.
std::string render_trajectories(const Matrix& values, const std::vector<std::size_t>& groups,
                                const std::string& title);

/// One circle marker per row of the first two columns of `points`.
std::string render_embedding_scatter(const Matrix& points, const std::vector<std::size_t>& groups,
                                     const std::string& title);

/// One bar per k; the bar of `highlight` (an index into ks) is emphasized.
std::string render_ch_bars(const std::vector<std::size_t>& ks, const std::vector<double>& values,
                           std::size_t highlight, const std::string& title);

/// One polyline per cluster mean (row of `means`), colored by row index.
std::string render_mean_curves(const Matrix& means, const std::string& title);

/// Writes an SVG document; throws IoError.
void write_svg(const std::filesystem::path& path, const std::string& svg);

}  // namespace deeptraj
