#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "embtopo/error.hpp"
#include "embtopo/grid.hpp"
#include "embtopo/manifest.hpp"
#include "embtopo/metrics.hpp"
#include "embtopo/npy.hpp"
#include "embtopo/persistence.hpp"
#include "embtopo/report.hpp"
#include "embtopo/svg.hpp"
#include "embtopo/ttp.hpp"

namespace embtopo::cli {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::string channels = "volume";
    std::size_t downsample = 1;
    std::string pool = "stride";
    bool normalize = false;
    std::size_t workers = 1;
    std::string out_dir = ".";
    bool reproducible = false;

    GridOptions grid_options() const {
        return {ChannelPolicy::parse(channels), downsample, parse_pool_mode(pool), normalize};
    }
    PipelineOptions pipeline() const {
        PipelineOptions p;
        p.grid = grid_options();
        p.workers = workers;
        return p;
    }
};

void add_grid_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--channels", flags.channels, "Channel policy: volume, mean or select:<k>")
        ->capture_default_str();
    cmd.add_option("--downsample", flags.downsample, "Spatial downsampling factor")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--pool", flags.pool, "Downsampling mode: stride or max")
        ->check(CLI::IsMember({"stride", "max"}))
        ->capture_default_str();
    cmd.add_flag("--normalize", flags.normalize, "Min-max normalize each grid to [0, 1]");
}

void add_output_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
    cmd.add_flag("--reproducible", flags.reproducible, "Omit timestamps so outputs are byte-identical");
}

void add_worker_flag(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--workers", flags.workers, "Worker threads for per-image diagrams")
        ->check(CLI::Range(std::size_t{1}, std::size_t{4096}))
        ->capture_default_str();
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "output directory " + dir + " is not usable");
    return fs::path(dir);
}

// Outputs are staged in memory and written only once every artifact has been computed.
void write_outputs(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files,
                   std::ostream& out) {
    for (const auto& [name, content] : files) {
        write_file_atomic(dir / name, content);
        out << "wrote " << (dir / name).string() << "\n";
    }
}

ScalarGrid load_single_grid(const std::string& path, std::size_t image, const GridOptions& options) {
    const auto tensor = read_tensor(path);
    auto grids = split_images(tensor, options.channels);
    if (image >= grids.size())
        throw Error(ErrorKind::InvalidArgument, "image index " + std::to_string(image) + " out of range for " +
                                                    std::to_string(grids.size()) + " images");
    auto grid = std::move(grids[image]);
    if (options.downsample > 1) grid = downsample(grid, options.downsample, options.pool);
    if (options.normalize) grid = min_max_normalize(grid);
    return grid;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw Error(ErrorKind::InvalidArgument, "--grid expects min:max:count, got '" + spec + "'");
    const auto parse = [&](std::string_view text, auto& value) {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            throw Error(ErrorKind::InvalidArgument, "--grid expects min:max:count, got '" + spec + "'");
    };
    const std::string_view view(spec);
    double lo = 0, hi = 0;
    std::size_t count = 0;
    parse(view.substr(0, a), lo);
    parse(view.substr(a + 1, b - a - 1), hi);
    parse(view.substr(b + 1), count);
    if (count < 2) throw Error(ErrorKind::EmptyGrid, "--grid needs a count of at least 2");
    if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "--grid needs max > min");
    return linear_grid(lo, hi, count);
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoValidThreshold:
        case ErrorKind::GridTooLarge:
        case ErrorKind::ReductionOverflow:
        case ErrorKind::OracleTooLarge:
        case ErrorKind::InsufficientLayers:
        case ErrorKind::DegenerateFit:
        case ErrorKind::ZeroVariance:
        case ErrorKind::RowNotNormalized:
        case ErrorKind::LengthMismatch:
            return kComputationError;
        default:
            return kUsageError;
    }
}

std::vector<fs::path> expand_manifest_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> manifests;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(input))
                if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            manifests.insert(manifests.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(input)) {
            manifests.emplace_back(input);
        } else {
            throw Error(ErrorKind::Io, "no such manifest or directory: " + input);
        }
    }
    return manifests;
}

double leep_for(const std::string& softmax_path, const std::map<std::string, int>& labels) {
    const auto table = parse_softmax_csv(read_text_file(softmax_path));
    std::vector<int> targets;
    targets.reserve(table.image_ids.size());
    for (const auto& id : table.image_ids) {
        const auto it = labels.find(id);
        if (it == labels.end()) throw Error(ErrorKind::InvalidArgument, "no label for image '" + id + "'");
        targets.push_back(it->second);
    }
    return leep(table.matrix, targets);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cubical persistent homology of activation grids, embedding complexity and TTP model ranking"};
    app.require_subcommand(1);
    CommonFlags flags;

    std::string tensor_path;
    std::size_t image = 0;
    auto* diagram_cmd = app.add_subcommand("diagram", "Persistence diagram of one tensor (CSV + SVG)");
    diagram_cmd->add_option("tensor", tensor_path, "NPY tensor")->required();
    diagram_cmd->add_option("--image", image, "Image index within a batch tensor")->capture_default_str();
    add_grid_flags(*diagram_cmd, flags);
    add_output_flags(*diagram_cmd, flags);

    std::string grid_spec;
    auto* betti_cmd = app.add_subcommand("betti", "Betti curves of one tensor (CSV + SVG)");
    betti_cmd->add_option("tensor", tensor_path, "NPY tensor")->required();
    betti_cmd->add_option("--grid", grid_spec, "Threshold grid min:max:count")->required();
    betti_cmd->add_option("--image", image, "Image index within a batch tensor")->capture_default_str();
    add_grid_flags(*betti_cmd, flags);
    add_output_flags(*betti_cmd, flags);

    std::string manifest_path;
    std::string eta_text = "auto";
    auto* omega_cmd = app.add_subcommand("omega", "Omega trajectory of one manifest (CSV + SVG)");
    omega_cmd->add_option("manifest", manifest_path, "Layer manifest JSON")->required();
    omega_cmd->add_option("--eta", eta_text, "Threshold: auto or a number")->capture_default_str();
    add_grid_flags(*omega_cmd, flags);
    add_worker_flag(*omega_cmd, flags);
    add_output_flags(*omega_cmd, flags);

    std::vector<std::string> rank_inputs;
    std::string accuracy_csv;
    std::vector<std::string> softmax_specs;
    std::string labels_csv;
    int degree = 3;
    auto* rank_cmd = app.add_subcommand("rank", "Rank models by TTP theta against fine-tuned accuracy");
    rank_cmd->add_option("manifests", rank_inputs, "Manifest files or directories of *.json manifests")->required();
    rank_cmd->add_option("--accuracy", accuracy_csv, "CSV model_id,accuracy (overrides manifest accuracies)");
    rank_cmd->add_option("--softmax", softmax_specs, "model_id=softmax.csv for the LEEP baseline (repeatable)");
    rank_cmd->add_option("--labels", labels_csv, "CSV image_id,label of target labels for LEEP");
    rank_cmd->add_option("--eta", eta_text, "Threshold: auto or a number")->capture_default_str();
    rank_cmd->add_option("--degree", degree, "Polynomial degree")->check(CLI::PositiveNumber)->capture_default_str();
    add_grid_flags(*rank_cmd, flags);
    add_worker_flag(*rank_cmd, flags);
    add_output_flags(*rank_cmd, flags);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (diagram_cmd->parsed()) {
            const auto grid = load_single_grid(tensor_path, image, flags.grid_options());
            const auto diagram = compute_diagram(grid);
            const SvgOptions svg{"Persistence diagram: " + fs::path(tensor_path).filename().string(), flags.reproducible};
            write_outputs(prepare_out_dir(flags.out_dir),
                          {{"diagram.csv", diagram_csv(diagram)}, {"diagram.svg", diagram_svg(diagram, svg)}}, out);
        } else if (betti_cmd->parsed()) {
            const auto etas = parse_grid_spec(grid_spec);
            const auto grid = load_single_grid(tensor_path, image, flags.grid_options());
            const auto curve = betti_curve(compute_diagram(grid), etas);
            const SvgOptions svg{"Betti curves: " + fs::path(tensor_path).filename().string(), flags.reproducible};
            write_outputs(prepare_out_dir(flags.out_dir),
                          {{"betti.csv", betti_csv(curve)}, {"betti.svg", betti_svg(curve, svg)}}, out);
        } else if (omega_cmd->parsed()) {
            const auto policy = EtaPolicy::parse(eta_text);
            const auto manifest = load_manifest(manifest_path);
            const auto traj = trajectory(manifest, policy, flags.pipeline());
            const SvgOptions svg{"Topological complexity by depth", flags.reproducible};
            write_outputs(prepare_out_dir(flags.out_dir),
                          {{"omega.csv", omega_csv(traj)}, {"omega.svg", omega_svg(traj, svg)}}, out);
        } else if (rank_cmd->parsed()) {
            const auto policy = EtaPolicy::parse(eta_text);
            const auto paths = expand_manifest_inputs(rank_inputs);
            if (paths.size() < 3)
                throw Error(ErrorKind::InvalidArgument,
                            "ranking needs at least 3 models, got " + std::to_string(paths.size()));

            std::map<std::string, double> accuracies;
            std::vector<TTPResult> results;
            for (const auto& path : paths) {
                const auto manifest = load_manifest(path);
                if (manifest.finetuned_accuracy) accuracies[manifest.model_id] = *manifest.finetuned_accuracy;
                results.push_back(ttp(trajectory(manifest, policy, flags.pipeline()), degree));
            }
            if (!accuracy_csv.empty()) {
                for (const auto& [model, acc] : parse_accuracy_csv(read_text_file(accuracy_csv))) accuracies[model] = acc;
            }

            std::map<std::string, double> leep_scores;
            if (!softmax_specs.empty()) {
                if (labels_csv.empty()) throw Error(ErrorKind::InvalidArgument, "--softmax requires --labels");
                const auto labels = parse_labels_csv(read_text_file(labels_csv));
                for (const auto& spec : softmax_specs) {
                    const auto eq = spec.find('=');
                    if (eq == std::string::npos || eq == 0)
                        throw Error(ErrorKind::InvalidArgument, "--softmax expects model_id=path, got '" + spec + "'");
                    leep_scores[spec.substr(0, eq)] = leep_for(spec.substr(eq + 1), labels);
                }
            }

            const auto report = rank_models(results, accuracies, leep_scores);
            const SvgOptions svg{"Fine-tuned accuracy vs. TTP theta", flags.reproducible};
            write_outputs(prepare_out_dir(flags.out_dir),
                          {{"ranking.csv", ranking_csv(report)}, {"ranking.svg", ranking_svg(report, svg)}}, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::NoValidThreshold)
            err << "hint: pass --eta <value> to use a fixed threshold instead of automatic selection\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kComputationError;
    }
    return kSuccess;
}

}  // namespace embtopo::cli
