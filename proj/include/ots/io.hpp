#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ots/core.hpp"
#include "ots/simulators.hpp"

namespace ots {

enum class SeriesFormat { Column, Long };
SeriesFormat parse_series_format(std::string_view name);

/// Column: one integer code per line, optional non-numeric header.
/// Long: CSV with columns series_id,t,value (header optional); series come
/// out sorted by id (numerically when every id is an integer) and each must
/// cover a gapless run of t. Errors name the offending line.
std::vector<OrdinalSeries> parse_series(std::istream& in, SeriesFormat format, const StateSpace& space,
                                        std::string_view source = "<input>");
std::vector<OrdinalSeries> load_series(const std::filesystem::path& path, SeriesFormat format,
                                       const StateSpace& space);

/// Real-valued column file for the mixed correlation measures.
NumericSeries load_numeric_series(const std::filesystem::path& path);

/// "6" for six unnamed states, or a comma separated list of labels.
StateSpace parse_state_space(std::string_view text);

struct DatasetManifest {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> series_files;  ///< relative to the manifest
    std::optional<std::string> long_csv;
    std::optional<std::vector<int>> labels;
    std::optional<DistanceKind> distance;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
OtsDataset load_dataset(const std::filesystem::path& manifest_path);
/// Writes one column file per series next to `manifest_path`.
void write_dataset(const OtsDataset& dataset, const std::filesystem::path& manifest_path);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);
std::string series_to_csv(const OrdinalSeries& series);
std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& header = {});
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// One row per series: location, dispersion_2, asymmetry, skewness and
/// kappa at each lag, then "Class" when the dataset is labelled.
std::string export_feature_matrix(const OtsDataset& dataset, const StateDistance& dist,
                                  const std::vector<int>& lags = {1, 2}, int threads = 1);

/// Either a benchmark ({"groups": [...], "per_group", "length", "states"}) or
/// a single generator ({"family", ...}).
BenchmarkSpec parse_benchmark_config(std::string_view json_text);
GeneratorSpec parse_generator_config(std::string_view json_text);
bool is_benchmark_config(std::string_view json_text);

}  // namespace ots
