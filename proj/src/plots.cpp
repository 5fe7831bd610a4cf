#include "ots/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ots/errors.hpp"
#include "ots/io.hpp"

namespace ots {

std::string_view to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::Series: return "series";
        case PlotKind::Kappa: return "kappa";
        case PlotKind::Scaling: return "mds";
        case PlotKind::Boxplot: return "boxplot";
    }
    return "unknown";
}

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "series") return PlotKind::Series;
    if (name == "kappa") return PlotKind::Kappa;
    if (name == "mds") return PlotKind::Scaling;
    if (name == "boxplot") return PlotKind::Boxplot;
    throw ValidationError("unknown plot kind '" + std::string(name) + "' (expected series, kappa, mds or boxplot)");
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 45;

const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo, hi;
};

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> ticks(Range r, int target = 5) {
    const double raw = (r.hi - r.lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
}

class Canvas {
public:
    Canvas(std::string title, Range x, Range y) : x_(x), y_(y) {
        svg_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
             << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
        svg_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        svg_ << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
             << escape(title) << "</text>\n";
        line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "black");
        line(kLeft, kTop, kLeft, kHeight - kBottom, "black");
    }

    double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

    void x_ticks(const std::vector<double>& at, const std::vector<std::string>& labels) {
        for (std::size_t k = 0; k < at.size(); ++k) {
            const double x = px(at[k]);
            line(x, kHeight - kBottom, x, kHeight - kBottom + 4, "black");
            text(x, kHeight - kBottom + 16, labels[k], "middle");
        }
    }
    void y_ticks(const std::vector<double>& at, const std::vector<std::string>& labels) {
        for (std::size_t k = 0; k < at.size(); ++k) {
            const double y = py(at[k]);
            line(kLeft - 4, y, kLeft, y, "black");
            text(kLeft - 7, y + 4, labels[k], "end");
        }
    }
    void x_title(std::string_view t) { text(kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 8, t, "middle"); }
    void y_title(std::string_view t) {
        svg_ << "<text x=\"14\" y=\"" << fmt(kTop + (kHeight - kTop - kBottom) / 2)
             << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
             << fmt(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << escape(t) << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, std::string_view stroke, std::string_view extra = "") {
        svg_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\"" << fmt(y2)
             << "\" stroke=\"" << stroke << '"' << extra << "/>\n";
    }
    void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke) {
        svg_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
             << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
    }
    void circle(double x, double y, double r, std::string_view fill) {
        svg_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r) << "\" fill=\"" << fill
             << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke) {
        svg_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k) svg_ << (k ? " " : "") << fmt(pts[k].first) << ',' << fmt(pts[k].second);
        svg_ << "\"/>\n";
    }
    void text(double x, double y, std::string_view t, std::string_view anchor) {
        svg_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor << "\">" << escape(t)
             << "</text>\n";
    }

    std::string finish() {
        svg_ << "</svg>\n";
        return svg_.str();
    }

private:
    Range x_, y_;
    std::ostringstream svg_;
};

std::vector<std::string> tick_labels(const std::vector<double>& at) {
    std::vector<std::string> out;
    for (double v : at) out.push_back(tick_label(v));
    return out;
}

/// Rows of a data CSV without its header; the last column keeps any commas.
std::vector<std::vector<std::string>> read_rows(std::string_view csv, std::size_t columns) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in{std::string(csv)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (fields.size() + 1 < columns) {
            const auto pos = line.find(',', start);
            if (pos == std::string::npos) break;
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        fields.push_back(line.substr(start));
        if (fields.size() != columns)
            throw ValidationError("plot data row '" + line + "' needs " + std::to_string(columns) + " fields");
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw ValidationError("plot data has no rows");
    return rows;
}

double number(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("plot data field '" + s + "' is not a number");
    }
}

std::string render_series(std::string_view csv) {
    const auto rows = read_rows(csv, 3);
    std::map<int, std::string> states;
    std::vector<std::pair<double, double>> pts;
    double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
    int top = 0;
    for (const auto& r : rows) {
        const double t = number(r[0]);
        const int c = static_cast<int>(number(r[1]));
        states[c] = r[2];
        top = std::max(top, c);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
        pts.emplace_back(t, c);
    }
    Canvas cv("Ordinal time series", padded(tmin, tmax), padded(0, top));
    const auto xt = ticks(padded(tmin, tmax));
    cv.x_ticks(xt, tick_labels(xt));
    std::vector<double> yt;
    std::vector<std::string> yl;
    for (const auto& [c, label] : states) {
        yt.push_back(c);
        yl.push_back(label);
    }
    cv.y_ticks(yt, yl);
    cv.x_title("t");
    cv.y_title("state");
    for (auto& p : pts) p = {cv.px(p.first), cv.py(p.second)};
    cv.polyline(pts, "#1f4e79");
    return cv.finish();
}

std::string render_kappa(std::string_view csv) {
    const auto rows = read_rows(csv, 4);
    double lo = 0.0, hi = 0.0;
    int max_lag = 0;
    for (const auto& r : rows) {
        max_lag = std::max(max_lag, static_cast<int>(number(r[0])));
        for (int k = 1; k < 4; ++k) {
            lo = std::min(lo, number(r[k]));
            hi = std::max(hi, number(r[k]));
        }
    }
    Canvas cv("Serial dependence plot", {0.0, max_lag + 1.0}, padded(lo, hi));
    std::vector<double> xt;
    for (int l = 1; l <= max_lag; ++l) xt.push_back(l);
    cv.x_ticks(xt, tick_labels(xt));
    const auto yt = ticks(padded(lo, hi));
    cv.y_ticks(yt, tick_labels(yt));
    cv.x_title("lag");
    cv.y_title("ordinal Cohen's kappa");
    cv.line(cv.px(0), cv.py(0), cv.px(max_lag + 1.0), cv.py(0), "#888888");
    const double lower = number(rows.front()[2]), upper = number(rows.front()[3]);
    for (double v : {lower, upper})
        cv.line(cv.px(0), cv.py(v), cv.px(max_lag + 1.0), cv.py(v), "#1f4e79", " stroke-dasharray=\"5,4\"");
    for (const auto& r : rows) {
        const double x = cv.px(number(r[0]));
        cv.line(x, cv.py(0), x, cv.py(number(r[1])), "black", " stroke-width=\"3\"");
    }
    return cv.finish();
}

std::string render_scaling(std::string_view csv) {
    const auto rows = read_rows(csv, 4);
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    std::map<std::string, int> groups;
    for (const auto& r : rows) {
        xlo = std::min(xlo, number(r[1]));
        xhi = std::max(xhi, number(r[1]));
        ylo = std::min(ylo, number(r[2]));
        yhi = std::max(yhi, number(r[2]));
        groups.emplace(r[3], 0);
    }
    int next = 0;
    for (auto& [label, colour] : groups) colour = next++;
    Canvas cv("Two-dimensional scaling", padded(xlo, xhi), padded(ylo, yhi));
    const auto xt = ticks(padded(xlo, xhi));
    const auto yt = ticks(padded(ylo, yhi));
    cv.x_ticks(xt, tick_labels(xt));
    cv.y_ticks(yt, tick_labels(yt));
    cv.x_title("coordinate 1");
    cv.y_title("coordinate 2");
    for (const auto& r : rows)
        cv.circle(cv.px(number(r[1])), cv.py(number(r[2])), 3.5, kPalette[groups[r[3]] % 8]);
    return cv.finish();
}

std::string render_boxplot(std::string_view csv) {
    const auto rows = read_rows(csv, 4);
    std::vector<double> scores;
    for (const auto& r : rows) scores.push_back(number(r[1]));
    const double fence = number(rows.front()[3]);
    const double q1 = quantile_type7(scores, 0.25), med = quantile_type7(scores, 0.5), q3 = quantile_type7(scores, 0.75);
    double whisker_hi = q1, whisker_lo = q3;
    for (double s : scores) {
        if (s <= fence) whisker_hi = std::max(whisker_hi, s);
        whisker_lo = std::min(whisker_lo, s);
    }
    const double lo = *std::min_element(scores.begin(), scores.end());
    const double hi = std::max(*std::max_element(scores.begin(), scores.end()), fence);
    Canvas cv("Outlier scores", {0.0, 2.0}, padded(lo, hi));
    const auto yt = ticks(padded(lo, hi));
    cv.y_ticks(yt, tick_labels(yt));
    cv.y_title("sum of distances");
    const double left = cv.px(0.7), right = cv.px(1.3), mid = cv.px(1.0);
    cv.rect(left, cv.py(q3), right - left, cv.py(q1) - cv.py(q3), "#dde6f0", "black");
    cv.line(left, cv.py(med), right, cv.py(med), "black", " stroke-width=\"2\"");
    cv.line(mid, cv.py(q3), mid, cv.py(whisker_hi), "black");
    cv.line(mid, cv.py(q1), mid, cv.py(whisker_lo), "black");
    cv.line(cv.px(0.85), cv.py(whisker_hi), cv.px(1.15), cv.py(whisker_hi), "black");
    cv.line(cv.px(0.85), cv.py(whisker_lo), cv.px(1.15), cv.py(whisker_lo), "black");
    cv.line(cv.px(0.1), cv.py(fence), cv.px(1.9), cv.py(fence), "#b22222", " stroke-dasharray=\"5,4\"");
    for (const auto& r : rows) {
        if (r[2] != "1") continue;
        const double y = cv.py(number(r[1]));
        cv.circle(mid, y, 3.5, "#b22222");
        cv.text(mid + 8, y + 4, r[0], "start");
    }
    return cv.finish();
}

PlotArtifact finish(PlotKind kind, std::string csv) {
    PlotArtifact a{kind, render_svg(kind, csv), std::move(csv)};
    return a;
}

}  // namespace

std::string render_svg(PlotKind kind, std::string_view data_csv) {
    switch (kind) {
        case PlotKind::Series: return render_series(data_csv);
        case PlotKind::Kappa: return render_kappa(data_csv);
        case PlotKind::Scaling: return render_scaling(data_csv);
        case PlotKind::Boxplot: return render_boxplot(data_csv);
    }
    throw ValidationError("unknown plot kind");
}

PlotArtifact series_plot(const OrdinalSeries& series) {
    std::string csv = "t,code,state\n";
    for (std::size_t t = 0; t < series.length(); ++t)
        csv += std::to_string(t + 1) + "," + std::to_string(series[t]) + "," + series.state_space().label(series[t]) + "\n";
    return finish(PlotKind::Series, std::move(csv));
}

PlotArtifact kappa_plot(const KappaDiagnostics& d) {
    std::string csv = "lag,kappa,lower,upper\n";
    for (std::size_t l = 0; l < d.kappas.size(); ++l)
        csv += std::to_string(l + 1) + "," + format_number(d.kappas[l]) + "," + format_number(d.critical.lower) + "," +
               format_number(d.critical.upper) + "\n";
    return finish(PlotKind::Kappa, std::move(csv));
}

PlotArtifact scaling_plot(const ScalingResult& scaling, const std::optional<std::vector<int>>& labels) {
    if (scaling.coordinates.cols() < 2) throw ValidationError("scaling plot needs two coordinates");
    std::string csv = "index,x,y,label\n";
    for (Eigen::Index i = 0; i < scaling.coordinates.rows(); ++i) {
        csv += std::to_string(i + 1) + "," + format_number(scaling.coordinates(i, 0)) + "," +
               format_number(scaling.coordinates(i, 1)) + ",";
        if (labels) csv += std::to_string((*labels)[static_cast<std::size_t>(i)]);
        csv += "\n";
    }
    return finish(PlotKind::Scaling, std::move(csv));
}

PlotArtifact boxplot_plot(const OutlierReport& report) {
    if (report.scores.size() < 4) throw ValidationError("boxplot needs at least 4 scores");
    std::string csv = "index,score,flag,upper_fence\n";
    for (std::size_t i = 0; i < report.scores.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_number(report.scores[i]) + "," +
               (report.fence_flags[i] ? "1" : "0") + "," + format_number(report.upper_fence) + "\n";
    return finish(PlotKind::Boxplot, std::move(csv));
}

}  // namespace ots
