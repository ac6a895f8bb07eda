#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "embtopo/npy.hpp"

namespace embtopo {

/// Dense 2D or 3D array of finite filtration values in row-major order.
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(std::vector<std::size_t> dims, std::vector<double> values);

    std::size_t rank() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    /// Dims padded with trailing 1s to three axes.
    std::array<std::size_t, 3> extent() const noexcept;
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    double at(std::size_t i, std::size_t j, std::size_t k = 0) const noexcept;

    friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<double> values_;
};

struct ChannelPolicy {
    enum class Mode { Volume, Mean, Select };
    Mode mode = Mode::Volume;
    std::size_t channel = 0;

    static ChannelPolicy volume() { return {}; }
    static ChannelPolicy mean() { return {Mode::Mean, 0}; }
    static ChannelPolicy select(std::size_t k) { return {Mode::Select, k}; }
    /// Parses "volume", "mean" or "select:<k>".
    static ChannelPolicy parse(const std::string& text);
};

enum class PoolMode { Stride, MaxPool };

PoolMode parse_pool_mode(const std::string& text);

/// Converts a 2- or 3-axis tensor (batch axis already stripped) to a grid.
ScalarGrid to_grid(const Tensor& tensor, ChannelPolicy policy = ChannelPolicy::volume());
ScalarGrid to_grid(std::span<const std::size_t> shape, std::span<const double> values,
                   ChannelPolicy policy = ChannelPolicy::volume());

/// Splits a tensor into per-image grids. 4-axis tensors are N×H×W×C batches; others hold one image.
std::vector<ScalarGrid> split_images(const Tensor& tensor, ChannelPolicy policy = ChannelPolicy::volume());

/// Reduces the two spatial axes by `factor` (ceiling division); a third (channel) axis is kept.
ScalarGrid downsample(const ScalarGrid& grid, std::size_t factor, PoolMode mode);

/// Affine rescale of the values onto [0, 1]; a constant grid maps to all zeros.
ScalarGrid min_max_normalize(const ScalarGrid& grid);

}  // namespace embtopo
