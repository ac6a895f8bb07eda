#include "embtopo/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "embtopo/error.hpp"

namespace embtopo {

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

double parse_real(const std::string& field, const std::string& context) {
    if (field == "inf") return kInfinity;
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
        throw Error(ErrorKind::InvalidArgument, context + ": '" + field + "' is not a number");
    return value;
}

int parse_int(const std::string& field, const std::string& context) {
    int value = 0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
        throw Error(ErrorKind::InvalidArgument, context + ": '" + field + "' is not an integer");
    return value;
}

}  // namespace

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string diagram_csv(const PersistenceDiagram& diagram) {
    std::string out = "dim,birth,death\n";
    for (const auto& p : diagram.pairs)
        out += std::to_string(p.dim) + "," + format_real(p.birth) + "," + format_real(p.death) + "\n";
    return out;
}

std::string betti_csv(const BettiCurve& curve) {
    std::string out = "eta,b0,b1,b2\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        const auto& b = curve.values[i];
        out += format_real(curve.thresholds[i]) + "," + std::to_string(b[0]) + "," + std::to_string(b[1]) + "," +
               std::to_string(b[2]) + "\n";
    }
    return out;
}

std::string omega_csv(const OmegaTrajectory& trajectory) {
    std::string out = "layer_index,layer_name,eta,n_images,omega_mean,omega_std,omega_min,omega_max\n";
    for (const auto& r : trajectory.records) {
        out += std::to_string(r.layer_index) + "," + r.layer_name + "," + format_real(r.eta) + "," +
               std::to_string(r.n_images()) + "," + format_real(r.omega_mean) + "," + format_real(r.omega_std()) +
               "," + std::to_string(r.omega_min()) + "," + std::to_string(r.omega_max()) + "\n";
    }
    return out;
}

std::string ranking_csv(const RankingReport& report) {
    // Footer correlations always show a decimal point, e.g. "-1.0".
    auto footer_real = [](double v) {
        auto s = format_real(v);
        if (s.find_first_of(".en") == std::string::npos) s += ".0";
        return s;
    };
    std::string out = "model_id,theta,accuracy,leep\n";
    for (const auto& e : report.entries) {
        out += e.model_id + "," + format_real(e.theta) + "," + (e.accuracy ? format_real(*e.accuracy) : "") + "," +
               (e.leep ? format_real(*e.leep) : "") + "\n";
    }
    out += "pearson_ttp=" + footer_real(report.pearson_theta) + "\n";
    out += "pearson_leep=" + (report.pearson_leep ? footer_real(*report.pearson_leep) : std::string("NA")) + "\n";
    if (!report.excluded.empty()) {
        out += "excluded_from_pearson=";
        for (std::size_t i = 0; i < report.excluded.size(); ++i) out += (i ? ";" : "") + report.excluded[i];
        out += "\n";
    }
    return out;
}

PersistenceDiagram parse_diagram_csv(const std::string& text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != "dim,birth,death")
        throw Error(ErrorKind::InvalidArgument, "diagram CSV must start with 'dim,birth,death'");
    std::vector<PersistencePair> pairs;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        const std::string ctx = "diagram row " + std::to_string(i);
        if (f.size() != 3) throw Error(ErrorKind::InvalidArgument, ctx + ": expected 3 fields");
        pairs.push_back({parse_int(f[0], ctx), parse_real(f[1], ctx), parse_real(f[2], ctx)});
    }
    return PersistenceDiagram(std::move(pairs));
}

std::map<std::string, double> parse_accuracy_csv(const std::string& text) {
    const auto lines = lines_of(text);
    std::map<std::string, double> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        const std::string ctx = "accuracy row " + std::to_string(i);
        if (f.size() != 2) throw Error(ErrorKind::InvalidArgument, ctx + ": expected model_id,accuracy");
        out[f[0]] = parse_real(f[1], ctx);
    }
    return out;
}

std::map<std::string, int> parse_labels_csv(const std::string& text) {
    const auto lines = lines_of(text);
    std::map<std::string, int> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        const std::string ctx = "labels row " + std::to_string(i);
        if (f.size() != 2) throw Error(ErrorKind::InvalidArgument, ctx + ": expected image_id,label");
        out[f[0]] = parse_int(f[1], ctx);
    }
    return out;
}

SoftmaxTable parse_softmax_csv(const std::string& text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw Error(ErrorKind::InvalidArgument, "softmax CSV is empty");
    const auto header = split(lines.front(), ',');
    if (header.size() < 2) throw Error(ErrorKind::InvalidArgument, "softmax CSV needs image_id and class columns");
    SoftmaxTable table;
    table.matrix.cols = header.size() - 1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        const std::string ctx = "softmax row " + std::to_string(i);
        if (f.size() != header.size()) throw Error(ErrorKind::InvalidArgument, ctx + ": wrong column count");
        table.image_ids.push_back(f[0]);
        for (std::size_t c = 1; c < f.size(); ++c) table.matrix.values.push_back(parse_real(f[c], ctx));
    }
    table.matrix.rows = table.image_ids.size();
    return table;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw Error(ErrorKind::Io, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move output into " + path.string());
    }
}

}  // namespace embtopo
