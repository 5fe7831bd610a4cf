#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ots/core.hpp"
#include "ots/inference.hpp"
#include "ots/mining.hpp"

namespace ots {

enum class PlotKind { Series, Kappa, Scaling, Boxplot };

std::string_view to_string(PlotKind kind);
/// "series", "kappa", "mds", "boxplot".
PlotKind parse_plot_kind(std::string_view name);

/// A static SVG together with the exact values it draws. render_svg(kind,
/// data_csv) reproduces svg byte for byte.
struct PlotArtifact {
    PlotKind kind;
    std::string svg;
    std::string data_csv;
};

/// Codes against time, states drawn equidistant on the y axis.
PlotArtifact series_plot(const OrdinalSeries& series);
/// Kappa bars per lag with the two critical lines.
PlotArtifact kappa_plot(const KappaDiagnostics& diagnostics);
/// First two scaling coordinates, coloured by label when given.
PlotArtifact scaling_plot(const ScalingResult& scaling, const std::optional<std::vector<int>>& labels);
/// Outlier scores with the upper fence.
PlotArtifact boxplot_plot(const OutlierReport& report);

std::string render_svg(PlotKind kind, std::string_view data_csv);

}  // namespace ots
