#include "ots/cli.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ots/errors.hpp"
#include "ots/inference.hpp"
#include "ots/io.hpp"
#include "ots/marginal_features.hpp"
#include "ots/mining.hpp"
#include "ots/plots.hpp"
#include "ots/probabilities.hpp"
#include "ots/serial_dependence.hpp"
#include "ots/simulators.hpp"

namespace ots {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string input;
    std::string format = "column";
    std::string states;
    std::string distance;
    std::string distance_matrix;
    std::uint64_t seed = 1;
    std::string out;
    int threads = 1;

    int lag = 1;
    int max_lag = 10;
    double alpha = 0.05;
    double level = 0.95;
    std::string plot;
    bool normalized = false;
    std::string covariate;
    int nodes = 100;
    std::string index_range = "definitional";
    std::string feature;
    double h0 = 0.0;
    std::string mode = "temporal";
    int bandwidth = 0;
    int bootstrap = 0;
    std::vector<double> p_values;
    std::string metric = "d1";
    int feature_lags = 2;
    bool root = false;
    int dims = 2;
    int k = 4;
    int restarts = 10;
    std::vector<int> a, b;
    double range = 1.0;
    std::string config;
    std::vector<int> kappa_lags{1, 2};
    std::string kind;
    std::string data;
};

json to_json(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
    return rows;
}

std::vector<int> one_based(const std::vector<std::size_t>& idx) {
    std::vector<int> out;
    for (auto i : idx) out.push_back(static_cast<int>(i) + 1);
    return out;
}

std::vector<int> one_based(const std::vector<int>& labels) {
    std::vector<int> out;
    for (int l : labels) out.push_back(l + 1);
    return out;
}

class Session {
public:
    Session(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    void emit_text(const std::string& text) {
        if (o_.out.empty()) {
            out_ << text;
        } else {
            write_text_file(o_.out, text);
        }
    }
    void emit(const json& j) { emit_text(j.dump(2) + "\n"); }

    void write_plot(const PlotArtifact& a) {
        if (o_.plot.empty()) return;
        fs::path svg = o_.plot;
        fs::path csv = svg;
        csv.replace_extension(".csv");
        write_text_file(svg, a.svg);
        write_text_file(csv, a.data_csv);
    }

    bool is_manifest() const { return fs::path(o_.input).extension() == ".json"; }

    const OtsDataset& dataset() {
        if (!dataset_) {
            if (o_.input.empty()) throw ValidationError("--input is required");
            if (is_manifest()) {
                dataset_ = load_dataset(o_.input);
                manifest_distance_ = read_manifest(o_.input).distance;
            } else {
                if (o_.states.empty()) throw ValidationError("--states is required for series files");
                const auto space = parse_state_space(o_.states);
                auto series = load_series(o_.input, parse_series_format(o_.format), space);
                dataset_.emplace(fs::path(o_.input).stem().string(), space, std::move(series));
            }
        }
        return *dataset_;
    }

    StateDistance distance() {
        const auto& ds = dataset();
        DistanceKind kind = DistanceKind::Block;
        if (!o_.distance.empty()) {
            kind = parse_distance_kind(o_.distance);
        } else if (manifest_distance_) {
            kind = *manifest_distance_;
        }
        std::optional<Matrix> custom;
        if (kind == DistanceKind::Custom) {
            if (o_.distance_matrix.empty()) throw ValidationError("--distance custom needs --distance-matrix");
            custom = read_matrix(o_.distance_matrix);
        }
        return build_state_distance(kind, ds.state_space(), custom);
    }

    /// Applies fn to every input series; one result is emitted bare, several
    /// as an array.
    void per_series(const std::function<json(const OrdinalSeries&)>& fn) {
        const auto& ds = dataset();
        if (ds.size() == 1) {
            emit(fn(ds[0]));
            return;
        }
        json all = json::array();
        for (const auto& s : ds.series()) all.push_back(fn(s));
        emit(all);
    }

    DatasetMetric metric() const {
        if (o_.metric == "d1") return DatasetMetric::D1;
        if (o_.metric == "dpmf") return DatasetMetric::DPMF;
        throw ValidationError("unknown metric '" + o_.metric + "' (expected d1 or dpmf)");
    }

    DistanceMatrix dissimilarities() {
        return pairwise_distance_matrix(dataset(), metric(), o_.feature_lags, !o_.root, o_.threads);
    }

    InferenceMode mode() const {
        if (o_.mode == "iid") return InferenceMode::Iid;
        if (o_.mode == "temporal") return InferenceMode::Temporal;
        throw ValidationError("unknown mode '" + o_.mode + "' (expected iid or temporal)");
    }

    InferenceOptions inference_options() const {
        InferenceOptions opt;
        if (o_.bandwidth > 0) opt.bandwidth = o_.bandwidth;
        opt.bootstrap_resamples = o_.bootstrap;
        opt.bootstrap_seed = o_.seed;
        return opt;
    }

    static Matrix read_matrix(const std::string& path) {
        std::istringstream in(read_text_file(path));
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<double> row;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) {
                try {
                    row.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw ValidationError(path + ": '" + cell + "' is not a number");
                }
            }
            rows.push_back(std::move(row));
        }
        Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != m.cols()) throw ValidationError(path + ": ragged matrix");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return m;
    }

    const Options& o_;

private:
    std::ostream& out_;
    std::optional<OtsDataset> dataset_;
    std::optional<DistanceKind> manifest_distance_;
};

json features_json(const MarginalFeatureSet& f) {
    return {{"location", f.location_standard},
            {"location_wrt_s0", f.location_wrt_s0},
            {"dispersion_1", f.dispersion_1},
            {"dispersion_2", f.dispersion_2},
            {"asymmetry", f.asymmetry},
            {"skewness", f.skewness},
            {"normalized", f.normalized},
            {"warnings", f.warnings}};
}

json test_json(const TestResult& r) {
    json j = {{"estimate", r.estimate},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"critical_value", r.critical_value},
              {"alpha", r.alpha},
              {"h0", r.h0_value},
              {"standard_error", std::isfinite(r.standard_error) ? json(r.standard_error) : json(nullptr)},
              {"mode", std::string(to_string(r.mode))},
              {"reference", r.reference == ReferenceDistribution::Normal ? "normal" : "chi_squared"},
              {"degrees_of_freedom", r.degrees_of_freedom},
              {"rejects", r.rejects()},
              {"warnings", r.warnings}};
    if (r.bootstrap_standard_error) j["bootstrap_standard_error"] = *r.bootstrap_standard_error;
    return j;
}

MixedIndexRange parse_index_range(const std::string& s) {
    if (s == "definitional") return MixedIndexRange::Definitional;
    if (s == "display") return MixedIndexRange::EstimatorDisplay;
    throw ValidationError("unknown index range '" + s + "' (expected definitional or display)");
}

void add_input(CLI::App* c, Options& o) {
    c->add_option("--input,-i", o.input, "Series file, or dataset manifest (.json)");
    c->add_option("--format", o.format, "Series file format: column or long");
    c->add_option("--states", o.states, "Number of states, or comma separated labels");
    c->add_option("--out,-o", o.out, "Write the result here instead of stdout");
    c->add_option("--threads", o.threads, "Worker threads for dataset-level work")->check(CLI::PositiveNumber);
}

void add_distance(CLI::App* c, Options& o) {
    c->add_option("--distance,-d", o.distance, "hamming, block, euclidean or custom (default block)");
    c->add_option("--distance-matrix", o.distance_matrix, "CSV matrix for --distance custom");
}

void add_metric(CLI::App* c, Options& o) {
    c->add_option("--metric", o.metric, "Series dissimilarity: d1 or dpmf");
    c->add_option("--feature-lags", o.feature_lags, "Largest lag in the feature vectors")->check(CLI::PositiveNumber);
    c->add_flag("--root", o.root, "Use square roots of the summed squared differences");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Feature extraction, inference and mining for ordinal time series", "ots"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ots 1.0.0");
    std::function<void(Session&)> action;
    auto sub = [&](const char* name, const char* help, std::function<void(Session&)> fn) {
        auto* c = app.add_subcommand(name, help);
        c->callback([&action, fn] { action = fn; });
        return c;
    };

    auto* probs = sub("probs", "Marginal and lagged joint probability estimates", [](Session& s) {
        s.per_series([&](const OrdinalSeries& x) {
            const auto p = probability_profile(x);
            json j = {{"p_hat", to_json(p.p_hat)}, {"f_hat", to_json(p.f_hat)}};
            if (s.o_.lag > 0) {
                const auto l = lagged_probability_profile(x, s.o_.lag);
                j["lag"] = l.lag;
                j["p_joint"] = to_json(l.p_joint);
                j["f_joint"] = to_json(l.f_joint);
            }
            return j;
        });
    });
    add_input(probs, o);
    probs->add_option("--lag", o.lag, "Lag of the joint estimates (0 to skip)")->check(CLI::NonNegativeNumber);

    auto* features = sub("features", "Location, dispersion, asymmetry and skewness", [](Session& s) {
        const auto d = s.distance();
        s.per_series([&](const OrdinalSeries& x) { return features_json(marginal_features(x, d, s.o_.normalized)); });
    });
    add_input(features, o);
    add_distance(features, o);
    features->add_flag("--normalized", o.normalized, "Divide by d(s_0, s_n)");

    auto* kappa = sub("kappa", "Ordinal Cohen's kappa with serial independence bounds", [](Session& s) {
        const auto d = s.distance();
        const auto& ds = s.dataset();
        if (ds.size() != 1) throw ValidationError("kappa expects a single series");
        const auto& x = ds[0];
        if (d.kind() == DistanceKind::Block) {
            const auto diag = kappa_diagnostics(x, s.o_.max_lag, s.o_.alpha);
            s.write_plot(kappa_plot(diag));
            s.emit({{"distance", "block"},
                    {"lags", diag.max_lag},
                    {"kappa", diag.kappas},
                    {"p_values", diag.p_values},
                    {"alpha", diag.alpha},
                    {"critical_lower", diag.critical.lower},
                    {"critical_upper", diag.critical.upper},
                    {"null_mean", diag.null.mean},
                    {"null_variance", diag.null.variance}});
            return;
        }
        std::vector<double> k;
        for (int l = 1; l <= s.o_.max_lag; ++l) k.push_back(ordinal_cohens_kappa(x, d, l));
        if (!s.o_.plot.empty()) throw UnsupportedDistanceError("critical bounds need the block distance");
        s.emit({{"distance", std::string(to_string(d.kind()))}, {"lags", s.o_.max_lag}, {"kappa", k}});
    });
    add_input(kappa, o);
    add_distance(kappa, o);
    kappa->add_option("--max-lag", o.max_lag)->check(CLI::PositiveNumber);
    kappa->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));
    kappa->add_option("--plot", o.plot, "SVG path; the plotted values go next to it as .csv");

    auto* tcc = sub("tcc", "Cumulative autocorrelations and their total", [](Session& s) {
        s.per_series([&](const OrdinalSeries& x) {
            const auto psi = cumulative_correlations(x, s.o_.lag);
            return json{{"lag", s.o_.lag}, {"tcc", total_c_cor(x, s.o_.lag)}, {"psi", to_json(psi.values)},
                        {"clamped", psi.clamped}};
        });
    });
    add_input(tcc, o);
    tcc->add_option("--lag", o.lag)->check(CLI::PositiveNumber);

    auto* mixed = sub("mixed-cor", "Linear and quantile cross-correlations with a numeric series", [](Session& s) {
        if (s.o_.covariate.empty()) throw ValidationError("--covariate is required");
        const auto z = load_numeric_series(s.o_.covariate);
        const auto range = parse_index_range(s.o_.index_range);
        s.per_series([&](const OrdinalSeries& x) {
            const auto lin = mixed_linear_correlations(x, z, s.o_.lag);
            return json{{"lag", s.o_.lag},
                        {"psi_star", to_json(lin.values)},
                        {"clamped", lin.clamped},
                        {"tmclc", total_mixed_c_cor(x, z, s.o_.lag, range)},
                        {"tmcqc", total_mixed_c_qcor(x, z, s.o_.lag, s.o_.nodes, range)},
                        {"index_range", s.o_.index_range}};
        });
    });
    add_input(mixed, o);
    mixed->add_option("--covariate", o.covariate, "Numeric series, one value per line");
    mixed->add_option("--lag", o.lag)->check(CLI::NonNegativeNumber);
    mixed->add_option("--nodes", o.nodes, "Quadrature nodes for the quantile measure")->check(CLI::PositiveNumber);
    mixed->add_option("--index-range", o.index_range, "definitional or display");

    auto* test = sub("test", "Two-sided test for a marginal feature", [](Session& s) {
        const auto d = s.distance();
        const auto f = parse_marginal_feature(s.o_.feature);
        s.per_series([&](const OrdinalSeries& x) {
            return test_json(test_marginal_feature(x, d, f, s.o_.h0, s.o_.alpha, s.mode(), s.inference_options()));
        });
    });
    add_input(test, o);
    add_distance(test, o);
    test->add_option("--feature", o.feature, "dispersion, asymmetry or skewness")->required();
    test->add_option("--h0", o.h0, "Null value");
    test->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));
    test->add_option("--mode", o.mode, "iid or temporal");
    test->add_option("--bandwidth", o.bandwidth, "Bartlett bandwidth (temporal mode)");
    test->add_option("--bootstrap", o.bootstrap, "Block bootstrap resamples for a second standard error");
    test->add_option("--seed", o.seed);

    auto* ci = sub("ci", "Confidence interval for a marginal feature", [](Session& s) {
        const auto d = s.distance();
        const auto f = parse_marginal_feature(s.o_.feature);
        s.per_series([&](const OrdinalSeries& x) {
            const auto r = ci_marginal_feature(x, d, f, s.o_.level, s.mode(), s.inference_options());
            return json{{"estimate", r.estimate}, {"lower", r.lower}, {"upper", r.upper}, {"level", r.level},
                        {"mode", s.o_.mode}};
        });
    });
    add_input(ci, o);
    add_distance(ci, o);
    ci->add_option("--feature", o.feature, "dispersion, asymmetry or skewness")->required();
    ci->add_option("--level", o.level)->check(CLI::Range(0.0, 1.0));
    ci->add_option("--mode", o.mode, "iid or temporal");
    ci->add_option("--bandwidth", o.bandwidth, "Bartlett bandwidth (temporal mode)");

    auto* holm = sub("holm", "Holm adjustment of a list of p-values", [](Session& s) {
        s.emit({{"adjusted", holm_adjust(s.o_.p_values)}});
    });
    holm->add_option("--p", o.p_values, "Comma separated p-values")->required()->delimiter(',');
    holm->add_option("--out,-o", o.out);

    auto* dist = sub("dist", "Pairwise dissimilarity matrix as CSV", [](Session& s) {
        s.emit_text(matrix_to_csv(s.dissimilarities().to_dense()));
    });
    add_input(dist, o);
    add_metric(dist, o);

    auto* mds = sub("mds", "Classical scaling of the dissimilarity matrix", [](Session& s) {
        const auto r = classical_mds(s.dissimilarities(), s.o_.dims);
        if (!s.o_.plot.empty()) s.write_plot(scaling_plot(r, s.dataset().labels()));
        s.emit({{"coordinates", to_json(r.coordinates)}, {"eigenvalues", to_json(r.eigenvalues)},
                {"warnings", r.warnings}});
    });
    add_input(mds, o);
    add_metric(mds, o);
    mds->add_option("--dims", o.dims)->check(CLI::PositiveNumber);
    mds->add_option("--plot", o.plot, "SVG path; the plotted values go next to it as .csv");

    auto* pam = sub("pam", "Partitioning around medoids", [](Session& s) {
        const auto r = pam_cluster(s.dissimilarities(), s.o_.k);
        json j = {{"k", s.o_.k}, {"labels", one_based(r.labels)}, {"medoids", one_based(r.medoids)},
                  {"cost", r.cost}, {"build_cost", r.build_cost}, {"swaps", r.swaps}};
        if (const auto& truth = s.dataset().labels()) j["ari"] = adjusted_rand_index(r.labels, *truth);
        s.emit(j);
    });
    add_input(pam, o);
    add_metric(pam, o);
    pam->add_option("--k", o.k)->check(CLI::PositiveNumber);

    auto* kmeans = sub("kmeans", "k-means on the feature vectors", [](Session& s) {
        const auto f = s.metric() == DatasetMetric::D1
                           ? cumulative_feature_matrix(s.dataset(), s.o_.feature_lags, s.o_.threads)
                           : pmf_feature_matrix(s.dataset(), s.o_.feature_lags, s.o_.threads);
        const auto r = kmeans_cluster(f.rows, s.o_.k, s.o_.seed, s.o_.restarts);
        json j = {{"k", s.o_.k}, {"labels", one_based(r.labels)}, {"within_ss", r.within_ss},
                  {"iterations", r.iterations}, {"seed", s.o_.seed}};
        if (const auto& truth = s.dataset().labels()) j["ari"] = adjusted_rand_index(r.labels, *truth);
        s.emit(j);
    });
    add_input(kmeans, o);
    add_metric(kmeans, o);
    kmeans->add_option("--k", o.k)->check(CLI::PositiveNumber);
    kmeans->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
    kmeans->add_option("--seed", o.seed);

    auto* ari = sub("ari", "Adjusted Rand index of two partitions", [](Session& s) {
        s.emit({{"ari", adjusted_rand_index(s.o_.a, s.o_.b)}});
    });
    ari->add_option("--a", o.a, "Comma separated labels")->required()->delimiter(',');
    ari->add_option("--b", o.b, "Comma separated labels")->required()->delimiter(',');
    ari->add_option("--out,-o", o.out);

    auto* outliers = sub("outliers", "Rank series by summed dissimilarity", [](Session& s) {
        const auto dm = s.dissimilarities();
        auto r = outlier_ranking(dm);
        if (dm.size() >= 4) r.fence_flags = boxplot_outlier_flags(r.scores, s.o_.range, &r.upper_fence);
        if (!s.o_.plot.empty()) s.write_plot(boxplot_plot(r));
        std::vector<int> flagged;
        for (std::size_t i = 0; i < r.fence_flags.size(); ++i)
            if (r.fence_flags[i]) flagged.push_back(static_cast<int>(i) + 1);
        s.emit({{"scores", r.scores}, {"ranking", one_based(r.ranking)}, {"upper_fence", r.upper_fence},
                {"flagged", flagged}});
    });
    add_input(outliers, o);
    add_metric(outliers, o);
    outliers->add_option("--range", o.range, "Fence multiplier of the interquartile range");
    outliers->add_option("--plot", o.plot, "SVG path; the plotted values go next to it as .csv");

    auto* simulate_cmd = sub("simulate", "Generate a series or a labelled benchmark dataset", [](Session& s) {
        if (s.o_.config.empty()) throw ValidationError("--config is required");
        const auto text = read_text_file(s.o_.config);
        if (is_benchmark_config(text)) {
            if (s.o_.out.empty()) throw ValidationError("benchmark output needs --out manifest.json");
            const auto ds = make_benchmark_dataset(parse_benchmark_config(text), s.o_.seed, s.o_.threads);
            write_dataset(ds, s.o_.out);
            return;
        }
        auto g = parse_generator_config(text);
        g.seed = s.o_.seed;
        s.emit_text(series_to_csv(simulate(g)));
    });
    simulate_cmd->add_option("--config", o.config, "Generator or benchmark JSON");
    simulate_cmd->add_option("--seed", o.seed);
    simulate_cmd->add_option("--out,-o", o.out);
    simulate_cmd->add_option("--threads", o.threads)->check(CLI::PositiveNumber);

    auto* export_cmd = sub("export-features", "Per-series feature matrix as CSV", [](Session& s) {
        s.emit_text(export_feature_matrix(s.dataset(), s.distance(), s.o_.kappa_lags, s.o_.threads));
    });
    add_input(export_cmd, o);
    add_distance(export_cmd, o);
    export_cmd->add_option("--lags", o.kappa_lags, "Kappa lags")->delimiter(',');

    auto* plot = sub("plot", "Draw a series, or redraw a plot from its data CSV", [](Session& s) {
        if (!s.o_.data.empty()) {
            if (s.o_.kind.empty()) throw ValidationError("--data needs --kind");
            s.emit_text(render_svg(parse_plot_kind(s.o_.kind), read_text_file(s.o_.data)));
            return;
        }
        const auto& ds = s.dataset();
        if (ds.size() != 1) throw ValidationError("plot expects a single series");
        const auto a = series_plot(ds[0]);
        if (!s.o_.plot.empty()) {
            s.write_plot(a);
        } else {
            s.emit_text(a.svg);
        }
    });
    add_input(plot, o);
    plot->add_option("--kind", o.kind, "series, kappa, mds or boxplot");
    plot->add_option("--data", o.data, "Data CSV written next to an earlier plot");
    plot->add_option("--plot", o.plot, "SVG path; the plotted values go next to it as .csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Session session(o, out);
        action(session);
        return 0;
    } catch (const ValidationError& e) {
        err << "ots: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "ots: internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ots
