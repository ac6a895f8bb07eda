#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "embtopo/grid.hpp"
#include "embtopo/manifest.hpp"
#include "embtopo/persistence.hpp"

namespace embtopo {

struct BettiCurve {
    std::vector<double> thresholds;
    std::vector<BettiNumbers> values;
};

/// Evenly spaced ascending grid of `count` values over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

BettiCurve betti_curve(const PersistenceDiagram& diagram, std::span<const double> eta_grid);

/// Smallest candidate threshold at which every diagram has beta_0, beta_1 and beta_2 >= 1.
/// Candidates are `candidates` evenly spaced values over [min birth, max finite death].
double select_eta(std::span<const PersistenceDiagram> first_layer, std::size_t candidates = 256);

/// omega = beta_0 + beta_1 + beta_2 at eta.
std::int64_t omega_for_image(const PersistenceDiagram& diagram, double eta) noexcept;

struct ComplexityRecord {
    int layer_index = 0;
    std::string layer_name;
    double eta = 0.0;
    std::vector<std::int64_t> omega_values;
    double omega_mean = 0.0;

    std::size_t n_images() const noexcept { return omega_values.size(); }
    /// Population standard deviation of the per-image values.
    double omega_std() const noexcept;
    std::int64_t omega_min() const noexcept;
    std::int64_t omega_max() const noexcept;
};

struct OmegaTrajectory {
    std::string model_id;
    std::string dataset_id;
    std::vector<ComplexityRecord> records;
};

struct GridOptions {
    ChannelPolicy channels = ChannelPolicy::volume();
    std::size_t downsample = 1;
    PoolMode pool = PoolMode::Stride;
    bool normalize = false;
};

struct PipelineOptions {
    GridOptions grid;
    std::size_t workers = 1;
    ReductionOptions reduction;
};

struct EtaPolicy {
    enum class Mode { Fixed, AutoLayer1 };
    Mode mode = Mode::AutoLayer1;
    double value = 0.0;
    std::size_t candidates = 256;

    static EtaPolicy fixed(double eta) { return {Mode::Fixed, eta, 256}; }
    static EtaPolicy auto_layer1(std::size_t candidates = 256) { return {Mode::AutoLayer1, 0.0, candidates}; }
    /// "auto" or a real number.
    static EtaPolicy parse(const std::string& text);
};

/// Record built from per-image diagrams that are already computed.
ComplexityRecord omega_from_diagrams(std::span<const PersistenceDiagram> diagrams, double eta);

/// One diagram per grid, computed on `workers` threads. A failure names the image index.
std::vector<PersistenceDiagram> diagrams_for(std::span<const ScalarGrid> grids, std::size_t workers,
                                             const ReductionOptions& reduction = {});

ComplexityRecord omega_for_layer(std::span<const ScalarGrid> grids, double eta, std::size_t workers = 1,
                                 const ReductionOptions& reduction = {});

/// Loads every image grid of one manifest layer and applies the grid options.
std::vector<ScalarGrid> load_layer_grids(const LayerEntry& layer, const GridOptions& options);

OmegaTrajectory trajectory(const LayerManifest& manifest, const EtaPolicy& eta_policy,
                           const PipelineOptions& options = {});

}  // namespace embtopo
