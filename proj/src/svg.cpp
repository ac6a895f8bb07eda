#include "embtopo/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "embtopo/report.hpp"

namespace embtopo {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 30;
constexpr double kTop = 60;
constexpr double kBottom = 50;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    static Range of(const std::vector<double>& values) {
        if (values.empty()) return {};
        Range r{values.front(), values.front()};
        for (double v : values) r.include(v);
        if (r.hi == r.lo) {
            r.lo -= 0.5;
            r.hi += 0.5;
        } else {
            const double pad = 0.05 * (r.hi - r.lo);
            r.lo -= pad;
            r.hi += pad;
        }
        return r;
    }
};

// Plot area mapping plus the shared frame (title, axes, ticks).
class Canvas {
public:
    Canvas(Range x, Range y, const SvgOptions& options) : x_(x), y_(y), options_(options) {}

    double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

    void frame(const std::string& x_label, const std::string& y_label, const std::vector<std::string>& notes = {}) {
        body_ << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
              << "\" height=\"" << num(kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            body_ << "<text class=\"tick\" x=\"" << num(px(xv)) << "\" y=\"" << num(kHeight - kBottom + 16)
                  << "\" font-size=\"10\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
            body_ << "<text class=\"tick\" x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 3)
                  << "\" font-size=\"10\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
        }
        body_ << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 10)
              << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
        body_ << "<text x=\"16\" y=\"" << num(kHeight / 2) << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
              << num(kHeight / 2) << ")\">" << escape(y_label) << "</text>\n";
        body_ << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">"
              << escape(options_.title) << "</text>\n";
        for (std::size_t i = 0; i < notes.size(); ++i) {
            body_ << "<text class=\"note\" x=\"" << num(kWidth / 2) << "\" y=\"" << num(40 + 14 * static_cast<double>(i))
                  << "\" font-size=\"11\" text-anchor=\"middle\">" << escape(notes[i]) << "</text>\n";
        }
    }

    void point(double x, double y, const std::string& cls, int style, double draw_y) {
        const char* color = kPalette[style % 4];
        const double cx = px(x), cy = draw_y;
        body_ << "<g class=\"point " << cls << "\" data-x=\"" << format_real(x) << "\" data-y=\"" << format_real(y)
              << "\">";
        switch (style % 3) {
            case 0:
                body_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4\" fill=\"" << color << "\"/>";
                break;
            case 1:
                body_ << "<rect x=\"" << num(cx - 4) << "\" y=\"" << num(cy - 4) << "\" width=\"8\" height=\"8\" fill=\""
                      << color << "\"/>";
                break;
            default:
                body_ << "<polygon points=\"" << num(cx) << "," << num(cy - 5) << " " << num(cx - 5) << "," << num(cy + 4)
                      << " " << num(cx + 5) << "," << num(cy + 4) << "\" fill=\"" << color << "\"/>";
        }
        body_ << "</g>\n";
    }

    void line(double x0, double y0, double x1, double y1, const std::string& cls, const std::string& dash = "") {
        body_ << "<line class=\"" << cls << "\" x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(y0)) << "\" x2=\""
              << num(px(x1)) << "\" y2=\"" << num(py(y1)) << "\" stroke=\"#888\"";
        if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << "/>\n";
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& cls, int style) {
        body_ << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << kPalette[style % 4]
              << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) body_ << (i ? " " : "") << num(px(xs[i])) << "," << num(py(ys[i]));
        body_ << "\"/>\n";
    }

    void raw(const std::string& s) { body_ << s; }

    void legend(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            const double y = kTop + 14 + 16 * static_cast<double>(i);
            body_ << "<rect x=\"" << num(kWidth - kRight - 80) << "\" y=\"" << num(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
                  << kPalette[i % 4] << "\"/><text x=\"" << num(kWidth - kRight - 65) << "\" y=\"" << num(y)
                  << "\" font-size=\"11\">" << escape(names[i]) << "</text>\n";
        }
    }

    std::string render() const {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        if (!options_.reproducible) {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm utc{};
            gmtime_r(&now, &utc);
            char stamp[32];
            std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
            out << "<!-- generated " << stamp << " -->\n";
        }
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
        return out.str();
    }

private:
    static std::string tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }

    Range x_, y_;
    SvgOptions options_;
    std::ostringstream body_;
};

}  // namespace

std::string diagram_svg(const PersistenceDiagram& diagram, const SvgOptions& options) {
    std::vector<double> values;
    for (const auto& p : diagram.pairs) {
        values.push_back(p.birth);
        if (!p.essential()) values.push_back(p.death);
    }
    const Range r = Range::of(values);
    // The top slice of the plot area is the "infinity" band.
    Range y = r;
    y.hi += 0.12 * (r.hi - r.lo);
    Canvas canvas(r, y, options);
    canvas.frame("birth", "death");
    canvas.line(r.lo, r.lo, r.hi, r.hi, "diagonal");
    canvas.line(r.lo, r.hi, r.hi, r.hi, "infinity-band", "4 3");
    canvas.raw("<text class=\"infinity-label\" x=\"" + num(kLeft + 4) + "\" y=\"" + num(canvas.py(r.hi) - 4) +
               "\" font-size=\"10\">inf</text>\n");
    const double band_y = canvas.py(r.hi + 0.06 * (r.hi - r.lo));
    for (const auto& p : diagram.pairs) {
        canvas.point(p.birth, p.death, "h" + std::to_string(p.dim), p.dim, p.essential() ? band_y : canvas.py(p.death));
    }
    canvas.legend({"H0", "H1", "H2"});
    return canvas.render();
}

std::string betti_svg(const BettiCurve& curve, const SvgOptions& options) {
    std::vector<double> counts;
    for (const auto& b : curve.values) counts.insert(counts.end(), b.begin(), b.end());
    counts.push_back(0.0);
    Canvas canvas(Range::of(curve.thresholds), Range::of(counts), options);
    canvas.frame("threshold", "Betti number");
    for (int k = 0; k < 3; ++k) {
        std::vector<double> ys;
        for (const auto& b : curve.values) ys.push_back(static_cast<double>(b[static_cast<std::size_t>(k)]));
        canvas.polyline(curve.thresholds, ys, "betti b" + std::to_string(k), k);
        for (std::size_t i = 0; i < ys.size(); ++i)
            canvas.point(curve.thresholds[i], ys[i], "b" + std::to_string(k), k, canvas.py(ys[i]));
    }
    canvas.legend({"b0", "b1", "b2"});
    return canvas.render();
}

std::string omega_svg(const OmegaTrajectory& trajectory, const SvgOptions& options) {
    std::vector<double> xs, ys;
    for (const auto& r : trajectory.records) {
        xs.push_back(r.layer_index);
        ys.push_back(r.omega_mean);
    }
    std::vector<double> y_all = ys;
    y_all.push_back(0.0);
    Canvas canvas(Range::of(xs), Range::of(y_all), options);
    std::vector<std::string> notes{trajectory.model_id + " on " + trajectory.dataset_id};
    if (!trajectory.records.empty()) notes.push_back("eta = " + format_real(trajectory.records.front().eta));
    canvas.frame("layer index", "Omega", notes);
    canvas.polyline(xs, ys, "omega", 0);
    for (std::size_t i = 0; i < xs.size(); ++i) canvas.point(xs[i], ys[i], "omega", 0, canvas.py(ys[i]));
    return canvas.render();
}

std::string ranking_svg(const RankingReport& report, const SvgOptions& options) {
    std::vector<double> xs, ys;
    for (const auto& e : report.entries) {
        if (!e.accuracy) continue;
        xs.push_back(e.theta);
        ys.push_back(*e.accuracy);
    }
    const Range xr = Range::of(xs);
    Canvas canvas(xr, Range::of(ys), options);
    canvas.frame("TTP theta", "fine-tuned accuracy", {"pearson = " + format_real(report.pearson_theta)});
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        if (sxx > 0) {
            const double slope = sxy / sxx;
            canvas.line(xr.lo, my + slope * (xr.lo - mx), xr.hi, my + slope * (xr.hi - mx), "trend", "5 3");
        }
    }
    for (const auto& e : report.entries) {
        if (!e.accuracy) continue;
        canvas.point(e.theta, *e.accuracy, "model", 0, canvas.py(*e.accuracy));
        canvas.raw("<text class=\"label\" x=\"" + num(canvas.px(e.theta) + 6) + "\" y=\"" +
                   num(canvas.py(*e.accuracy) - 6) + "\" font-size=\"10\">" + escape(e.model_id) + "</text>\n");
    }
    return canvas.render();
}

}  // namespace embtopo
