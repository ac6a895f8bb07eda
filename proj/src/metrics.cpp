#include "embtopo/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "embtopo/error.hpp"
#include "embtopo/parallel.hpp"

namespace embtopo {

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> grid(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

BettiCurve betti_curve(const PersistenceDiagram& diagram, std::span<const double> eta_grid) {
    if (eta_grid.empty()) throw Error(ErrorKind::EmptyGrid, "threshold grid is empty");
    if (!std::is_sorted(eta_grid.begin(), eta_grid.end()))
        throw Error(ErrorKind::InvalidArgument, "threshold grid must be ascending");
    BettiCurve curve;
    curve.thresholds.assign(eta_grid.begin(), eta_grid.end());
    curve.values.reserve(eta_grid.size());
    for (double eta : eta_grid) curve.values.push_back(betti_at(diagram, eta));
    return curve;
}

double select_eta(std::span<const PersistenceDiagram> first_layer, std::size_t candidates) {
    if (first_layer.empty()) throw Error(ErrorKind::InvalidArgument, "select_eta needs at least one diagram");
    if (candidates < 2) throw Error(ErrorKind::InvalidArgument, "select_eta needs at least two candidates");

    double lo = kInfinity;
    double hi = -kInfinity;
    for (const auto& diagram : first_layer) {
        for (const auto& p : diagram.pairs) {
            lo = std::min(lo, p.birth);
            hi = std::max(hi, p.essential() ? p.birth : p.death);
        }
    }
    if (!std::isfinite(lo)) throw Error(ErrorKind::NoValidThreshold, "all first-layer diagrams are empty");

    for (double eta : linear_grid(lo, hi, candidates)) {
        const bool valid = std::all_of(first_layer.begin(), first_layer.end(), [eta](const PersistenceDiagram& d) {
            const auto b = betti_at(d, eta);
            return b[0] >= 1 && b[1] >= 1 && b[2] >= 1;
        });
        if (valid) return eta;
    }
    throw Error(ErrorKind::NoValidThreshold,
                "no threshold in the candidate grid has beta_0, beta_1, beta_2 >= 1 for every first-layer image");
}

std::int64_t omega_for_image(const PersistenceDiagram& diagram, double eta) noexcept {
    const auto b = betti_at(diagram, eta);
    return b[0] + b[1] + b[2];
}

double ComplexityRecord::omega_std() const noexcept {
    if (omega_values.empty()) return 0.0;
    double acc = 0.0;
    for (auto w : omega_values) {
        const double d = static_cast<double>(w) - omega_mean;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(omega_values.size()));
}

std::int64_t ComplexityRecord::omega_min() const noexcept {
    return omega_values.empty() ? 0 : *std::min_element(omega_values.begin(), omega_values.end());
}

std::int64_t ComplexityRecord::omega_max() const noexcept {
    return omega_values.empty() ? 0 : *std::max_element(omega_values.begin(), omega_values.end());
}

EtaPolicy EtaPolicy::parse(const std::string& text) {
    if (text == "auto") return auto_layer1();
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value))
        throw Error(ErrorKind::InvalidArgument, "--eta expects 'auto' or a finite number, got '" + text + "'");
    return fixed(value);
}

ComplexityRecord omega_from_diagrams(std::span<const PersistenceDiagram> diagrams, double eta) {
    if (diagrams.empty()) throw Error(ErrorKind::InvalidArgument, "a layer needs at least one image");
    ComplexityRecord record;
    record.eta = eta;
    record.omega_values.reserve(diagrams.size());
    std::int64_t total = 0;
    for (const auto& d : diagrams) {
        record.omega_values.push_back(omega_for_image(d, eta));
        total += record.omega_values.back();
    }
    record.omega_mean = static_cast<double>(total) / static_cast<double>(diagrams.size());
    return record;
}

std::vector<PersistenceDiagram> diagrams_for(std::span<const ScalarGrid> grids, std::size_t workers,
                                             const ReductionOptions& reduction) {
    std::vector<PersistenceDiagram> diagrams(grids.size());
    parallel_for(grids.size(), workers, [&](std::size_t i) {
        try {
            diagrams[i] = compute_diagram(grids[i], reduction);
        } catch (const Error& e) {
            throw Error(e.kind(), "image " + std::to_string(i) + ": " + e.message());
        }
    });
    return diagrams;
}

ComplexityRecord omega_for_layer(std::span<const ScalarGrid> grids, double eta, std::size_t workers,
                                 const ReductionOptions& reduction) {
    if (grids.empty()) throw Error(ErrorKind::InvalidArgument, "a layer needs at least one image");
    const auto diagrams = diagrams_for(grids, workers, reduction);
    return omega_from_diagrams(diagrams, eta);
}

std::vector<ScalarGrid> load_layer_grids(const LayerEntry& layer, const GridOptions& options) {
    std::vector<ScalarGrid> grids;
    for (const auto& path : layer.tensors) {
        const auto tensor = read_tensor(path);
        for (auto& grid : split_images(tensor, options.channels)) {
            if (options.downsample > 1) grid = downsample(grid, options.downsample, options.pool);
            if (options.normalize) grid = min_max_normalize(grid);
            grids.push_back(std::move(grid));
        }
    }
    return grids;
}

OmegaTrajectory trajectory(const LayerManifest& manifest, const EtaPolicy& eta_policy,
                           const PipelineOptions& options) {
    OmegaTrajectory out;
    out.model_id = manifest.model_id;
    out.dataset_id = manifest.dataset_id;
    if (manifest.layers.empty()) return out;

    std::vector<std::vector<PersistenceDiagram>> per_layer;
    per_layer.reserve(manifest.layers.size());
    for (const auto& layer : manifest.layers) {
        try {
            const auto grids = load_layer_grids(layer, options.grid);
            per_layer.push_back(diagrams_for(grids, options.workers, options.reduction));
        } catch (const Error& e) {
            throw Error(e.kind(), "layer " + std::to_string(layer.index) + " '" + layer.name + "': " + e.message());
        }
    }

    const double eta = eta_policy.mode == EtaPolicy::Mode::Fixed ? eta_policy.value
                                                                 : select_eta(per_layer.front(), eta_policy.candidates);
    for (std::size_t l = 0; l < manifest.layers.size(); ++l) {
        auto record = omega_from_diagrams(per_layer[l], eta);
        record.layer_index = manifest.layers[l].index;
        record.layer_name = manifest.layers[l].name;
        out.records.push_back(std::move(record));
    }
    return out;
}

}  // namespace embtopo
