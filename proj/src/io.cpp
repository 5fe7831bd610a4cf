#include "ots/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ots/errors.hpp"
#include "ots/marginal_features.hpp"
#include "ots/parallel.hpp"
#include "ots/serial_dependence.hpp"

namespace ots {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<long long> parse_integer(std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line, const std::string& what) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

int checked_code(std::string_view source, std::size_t line, std::string_view field, const StateSpace& space) {
    const auto v = parse_integer(field);
    if (!v) fail_at(source, line, "'" + std::string(field) + "' is not an integer code");
    if (*v < 0 || *v > space.n())
        fail_at(source, line, "code " + std::to_string(*v) + " outside [0, " + std::to_string(space.n()) + "]");
    return static_cast<int>(*v);
}

std::vector<OrdinalSeries> parse_column(std::istream& in, const StateSpace& space, std::string_view source) {
    std::vector<int> codes;
    std::string raw;
    std::size_t line = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line;
        const auto field = trim(raw);
        if (field.empty()) continue;
        if (first_content && !parse_integer(field)) {
            first_content = false;  // header
            continue;
        }
        first_content = false;
        codes.push_back(checked_code(source, line, field, space));
    }
    if (codes.empty()) throw ValidationError(std::string(source) + ": no observations");
    std::vector<OrdinalSeries> out;
    out.emplace_back(std::move(codes), space);
    return out;
}

std::vector<OrdinalSeries> parse_long(std::istream& in, const StateSpace& space, std::string_view source) {
    struct Obs {
        long long t;
        int code;
        std::size_t line;
    };
    std::map<std::string, std::vector<Obs>> groups;
    std::string raw;
    std::size_t line = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) continue;
        const auto fields = split(raw, ',');
        const bool header = first_content && (fields.size() < 2 || !parse_integer(fields[1]));
        first_content = false;
        if (header) continue;
        if (fields.size() != 3) fail_at(source, line, "expected 3 fields series_id,t,value");
        const auto t = parse_integer(fields[1]);
        if (!t) fail_at(source, line, "'" + fields[1] + "' is not an integer time index");
        groups[fields[0]].push_back({*t, checked_code(source, line, fields[2], space), line});
    }
    if (groups.empty()) throw ValidationError(std::string(source) + ": no observations");

    std::vector<std::string> ids;
    for (const auto& [id, obs] : groups) ids.push_back(id);
    const bool numeric = std::all_of(ids.begin(), ids.end(), [](const std::string& s) { return parse_integer(s); });
    if (numeric)
        std::stable_sort(ids.begin(), ids.end(),
                         [](const std::string& a, const std::string& b) { return *parse_integer(a) < *parse_integer(b); });

    std::vector<OrdinalSeries> out;
    for (const auto& id : ids) {
        auto obs = groups[id];
        std::stable_sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.t < b.t; });
        std::vector<int> codes;
        for (std::size_t k = 0; k < obs.size(); ++k) {
            if (k > 0 && obs[k].t == obs[k - 1].t)
                fail_at(source, obs[k].line, "duplicate t=" + std::to_string(obs[k].t) + " in series '" + id + "'");
            if (k > 0 && obs[k].t != obs[k - 1].t + 1)
                fail_at(source, obs[k].line,
                        "gap in series '" + id + "' between t=" + std::to_string(obs[k - 1].t) + " and t=" +
                            std::to_string(obs[k].t));
            codes.push_back(obs[k].code);
        }
        out.emplace_back(std::move(codes), space);
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

SeriesFormat parse_series_format(std::string_view name) {
    if (name == "column") return SeriesFormat::Column;
    if (name == "long") return SeriesFormat::Long;
    throw ValidationError("unknown series format '" + std::string(name) + "' (expected column or long)");
}

std::vector<OrdinalSeries> parse_series(std::istream& in, SeriesFormat format, const StateSpace& space,
                                        std::string_view source) {
    return format == SeriesFormat::Column ? parse_column(in, space, source) : parse_long(in, space, source);
}

std::vector<OrdinalSeries> load_series(const std::filesystem::path& path, SeriesFormat format,
                                       const StateSpace& space) {
    auto in = open_input(path);
    return parse_series(in, format, space, path.string());
}

NumericSeries load_numeric_series(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<double> values;
    std::string raw;
    std::size_t line = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line;
        const auto field = trim(raw);
        if (field.empty()) continue;
        double v = 0.0;
        const auto* end = field.data() + field.size();
        auto [ptr, ec] = std::from_chars(field.data(), end, v);
        const bool ok = ec == std::errc() && ptr == end;
        if (!ok && first_content) {
            first_content = false;
            continue;
        }
        first_content = false;
        if (!ok) fail_at(path.string(), line, "'" + field + "' is not a number");
        values.push_back(v);
    }
    if (values.empty()) throw ValidationError(path.string() + ": no observations");
    return NumericSeries(std::move(values));
}

StateSpace parse_state_space(std::string_view text) {
    if (const auto count = parse_integer(trim(text))) {
        if (*count < 2 || *count > 100000) throw ValidationError("state count must be at least 2");
        return StateSpace(static_cast<int>(*count));
    }
    return StateSpace(split(text, ','));
}

// ---------------------------------------------------------------------------
// manifests

DatasetManifest read_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    try {
        DatasetManifest m;
        m.name = j.value("name", path.stem().string());
        m.states = j.at("states").get<std::vector<std::string>>();
        const auto& s = j.at("series");
        if (s.is_array()) {
            m.series_files = s.get<std::vector<std::string>>();
        } else {
            m.long_csv = s.at("long_csv").get<std::string>();
        }
        if (j.contains("labels")) m.labels = j.at("labels").get<std::vector<int>>();
        if (j.contains("distance")) m.distance = parse_distance_kind(j.at("distance").get<std::string>());
        if (m.states.size() < 2) throw ValidationError("manifest needs at least two states");
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": malformed manifest: " + e.what());
    }
}

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    json j;
    j["name"] = m.name;
    j["states"] = m.states;
    if (m.long_csv) {
        j["series"] = {{"long_csv", *m.long_csv}};
    } else {
        j["series"] = m.series_files;
    }
    if (m.labels) j["labels"] = *m.labels;
    if (m.distance) j["distance"] = std::string(to_string(*m.distance));
    write_text_file(path, j.dump(2) + "\n");
}

OtsDataset load_dataset(const std::filesystem::path& manifest_path) {
    const auto m = read_manifest(manifest_path);
    const StateSpace space(m.states);
    const auto base = manifest_path.parent_path();
    std::vector<OrdinalSeries> series;
    if (m.long_csv) {
        series = load_series(base / *m.long_csv, SeriesFormat::Long, space);
    } else {
        for (const auto& f : m.series_files) {
            auto s = load_series(base / f, SeriesFormat::Column, space);
            series.push_back(std::move(s.front()));
        }
    }
    if (m.labels && m.labels->size() != series.size())
        throw ValidationError(manifest_path.string() + ": " + std::to_string(m.labels->size()) + " labels for " +
                              std::to_string(series.size()) + " series");
    return OtsDataset(m.name, space, std::move(series), m.labels);
}

void write_dataset(const OtsDataset& dataset, const std::filesystem::path& manifest_path) {
    const auto base = manifest_path.parent_path();
    if (!base.empty()) std::filesystem::create_directories(base);
    DatasetManifest m;
    m.name = dataset.name();
    m.states = dataset.state_space().labels();
    m.labels = dataset.labels();
    const auto width = std::to_string(dataset.size()).size();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto id = std::to_string(i + 1);
        id.insert(0, width - id.size(), '0');
        const auto file = manifest_path.stem().string() + "_" + id + ".csv";
        write_text_file(base / file, series_to_csv(dataset[i]));
        m.series_files.push_back(file);
    }
    write_manifest(m, manifest_path);
}

// ---------------------------------------------------------------------------
// text output

std::string format_number(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string series_to_csv(const OrdinalSeries& series) {
    std::string out;
    for (int c : series.codes()) {
        out += std::to_string(c);
        out += '\n';
    }
    return out;
}

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& header) {
    std::string out;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) out += ',';
        out += header[k];
    }
    if (!header.empty()) out += '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_number(m(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string export_feature_matrix(const OtsDataset& dataset, const StateDistance& dist,
                                  const std::vector<int>& lags, int threads) {
    if (dataset.size() == 0) throw ValidationError("dataset is empty");
    if (dist.size() != dataset.state_space().size())
        throw ValidationError("distance and dataset disagree on the number of states");
    const auto cols = static_cast<Eigen::Index>(4 + lags.size());
    Matrix rows(static_cast<Eigen::Index>(dataset.size()), cols);
    parallel_for(dataset.size(), threads, [&](std::size_t i) {
        const auto& s = dataset[i];
        const auto r = static_cast<Eigen::Index>(i);
        rows(r, 0) = ordinal_location_1(s, dist);
        rows(r, 1) = ordinal_dispersion_2(s, dist);
        rows(r, 2) = ordinal_asymmetry(s, dist);
        rows(r, 3) = ordinal_skewness(s, dist);
        for (std::size_t k = 0; k < lags.size(); ++k)
            rows(r, 4 + static_cast<Eigen::Index>(k)) = ordinal_cohens_kappa(s, dist, lags[k]);
    });
    std::string out = "location,dispersion,asymmetry,skewness";
    for (int l : lags) out += ",kappa_lag" + std::to_string(l);
    const auto& labels = dataset.labels();
    if (labels) out += ",Class";
    out += '\n';
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (j) out += ',';
            out += format_number(rows(i, j));
        }
        if (labels) out += "," + std::to_string((*labels)[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// generator configs

namespace {

GeneratorSpec generator_from_json(const json& j, int default_states, std::size_t default_length) {
    GeneratorSpec g;
    const int states = j.value("states", default_states);
    g.n = states - 1;
    g.length = j.value("length", default_length);
    g.seed = j.value("seed", std::uint64_t{1});
    switch (parse_generator_family(j.at("family").get<std::string>())) {
        case GeneratorFamily::BinomialAR:
            g.params = BinomialArParams{j.at("pi").get<double>(), j.at("rho").get<double>(),
                                        j.value("weights", std::vector<double>{1.0})};
            break;
        case GeneratorFamily::BinomialINARCH:
            g.params = BinomialInarchParams{j.at("a0").get<double>(), j.at("a").get<std::vector<double>>()};
            break;
        case GeneratorFamily::OrdinalLogitAR1:
            g.params = OrdinalLogitParams{j.at("thresholds").get<std::vector<double>>(), j.at("phi").get<double>()};
            break;
    }
    validate_generator(g);
    return g;
}

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

bool is_benchmark_config(std::string_view json_text) {
    return parse_json_text(json_text).contains("groups");
}

BenchmarkSpec parse_benchmark_config(std::string_view json_text) {
    const auto j = parse_json_text(json_text);
    try {
        BenchmarkSpec spec;
        spec.per_group = j.value("per_group", 20);
        const int states = j.value("states", 6);
        const std::size_t length = j.value("length", std::size_t{600});
        for (const auto& g : j.at("groups")) spec.groups.push_back(generator_from_json(g, states, length));
        return spec;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed benchmark config: ") + e.what());
    }
}

GeneratorSpec parse_generator_config(std::string_view json_text) {
    const auto j = parse_json_text(json_text);
    try {
        return generator_from_json(j, 6, 600);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed generator config: ") + e.what());
    }
}

}  // namespace ots
