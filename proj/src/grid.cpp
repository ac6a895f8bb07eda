#include "embtopo/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "embtopo/error.hpp"

namespace embtopo {

ScalarGrid::ScalarGrid(std::vector<std::size_t> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
    if (dims_.size() != 2 && dims_.size() != 3)
        throw Error(ErrorKind::InvalidGrid, "grid must have 2 or 3 axes, got " + std::to_string(dims_.size()));
    if (std::find(dims_.begin(), dims_.end(), 0u) != dims_.end())
        throw Error(ErrorKind::InvalidGrid, "every grid axis needs at least one vertex");
    const auto count = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    if (count != values_.size())
        throw Error(ErrorKind::InvalidGrid,
                    "expected " + std::to_string(count) + " values, got " + std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw Error(ErrorKind::InvalidGrid, "non-finite value at flat index " + std::to_string(i));
    }
}

std::array<std::size_t, 3> ScalarGrid::extent() const noexcept {
    std::array<std::size_t, 3> e{1, 1, 1};
    std::copy(dims_.begin(), dims_.end(), e.begin());
    return e;
}

double ScalarGrid::at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    const auto e = extent();
    return values_[(i * e[1] + j) * e[2] + k];
}

ChannelPolicy ChannelPolicy::parse(const std::string& text) {
    if (text == "volume") return volume();
    if (text == "mean") return mean();
    constexpr std::string_view prefix = "select:";
    if (text.starts_with(prefix)) {
        std::size_t k = 0;
        const char* first = text.data() + prefix.size();
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, k);
        if (ec == std::errc() && ptr == last && first != last) return select(k);
    }
    throw Error(ErrorKind::InvalidArgument, "channel policy must be volume, mean or select:<k>, got '" + text + "'");
}

PoolMode parse_pool_mode(const std::string& text) {
    if (text == "stride") return PoolMode::Stride;
    if (text == "max" || text == "max_pool") return PoolMode::MaxPool;
    throw Error(ErrorKind::InvalidArgument, "pool mode must be stride or max, got '" + text + "'");
}

ScalarGrid to_grid(std::span<const std::size_t> shape, std::span<const double> values, ChannelPolicy policy) {
    if (shape.size() == 2) return ScalarGrid({shape[0], shape[1]}, {values.begin(), values.end()});
    if (shape.size() != 3)
        throw Error(ErrorKind::InvalidArgument, "to_grid expects 2 or 3 axes, got " + std::to_string(shape.size()));

    const std::size_t rows = shape[0], cols = shape[1], channels = shape[2];
    switch (policy.mode) {
        case ChannelPolicy::Mode::Volume:
            return ScalarGrid({rows, cols, channels}, {values.begin(), values.end()});
        case ChannelPolicy::Mode::Mean: {
            std::vector<double> out(rows * cols);
            for (std::size_t p = 0; p < out.size(); ++p) {
                double sum = 0.0;
                for (std::size_t c = 0; c < channels; ++c) sum += values[p * channels + c];
                out[p] = sum / static_cast<double>(channels);
            }
            return ScalarGrid({rows, cols}, std::move(out));
        }
        case ChannelPolicy::Mode::Select: {
            if (policy.channel >= channels)
                throw Error(ErrorKind::BadChannelIndex, "channel " + std::to_string(policy.channel) +
                                                            " out of range for " + std::to_string(channels) +
                                                            " channels");
            std::vector<double> out(rows * cols);
            for (std::size_t p = 0; p < out.size(); ++p) out[p] = values[p * channels + policy.channel];
            return ScalarGrid({rows, cols}, std::move(out));
        }
    }
    return {};
}

ScalarGrid to_grid(const Tensor& tensor, ChannelPolicy policy) {
    return to_grid(tensor.shape(), tensor.values, policy);
}

std::vector<ScalarGrid> split_images(const Tensor& tensor, ChannelPolicy policy) {
    const auto& shape = tensor.shape();
    if (shape.size() != 4) return {to_grid(tensor, policy)};
    const std::span<const std::size_t> image_shape(shape.begin() + 1, shape.end());
    const std::size_t stride = shape[1] * shape[2] * shape[3];
    std::vector<ScalarGrid> grids;
    grids.reserve(shape[0]);
    for (std::size_t n = 0; n < shape[0]; ++n) {
        grids.push_back(to_grid(image_shape, std::span<const double>(tensor.values).subspan(n * stride, stride), policy));
    }
    return grids;
}

ScalarGrid downsample(const ScalarGrid& grid, std::size_t factor, PoolMode mode) {
    if (factor == 0) throw Error(ErrorKind::InvalidArgument, "downsample factor must be >= 1");
    if (factor == 1) return grid;
    const auto e = grid.extent();
    const std::size_t rows = (e[0] + factor - 1) / factor;
    const std::size_t cols = (e[1] + factor - 1) / factor;
    std::vector<double> out;
    out.reserve(rows * cols * e[2]);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = 0; k < e[2]; ++k) {
                if (mode == PoolMode::Stride) {
                    out.push_back(grid.at(i * factor, j * factor, k));
                    continue;
                }
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t di = i * factor; di < std::min(e[0], (i + 1) * factor); ++di)
                    for (std::size_t dj = j * factor; dj < std::min(e[1], (j + 1) * factor); ++dj)
                        best = std::max(best, grid.at(di, dj, k));
                out.push_back(best);
            }
        }
    }
    auto dims = grid.dims();
    dims[0] = rows;
    dims[1] = cols;
    return ScalarGrid(std::move(dims), std::move(out));
}

ScalarGrid min_max_normalize(const ScalarGrid& grid) {
    const auto values = grid.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    std::vector<double> out(values.size(), 0.0);
    if (span > 0.0) {
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / span;
    }
    return ScalarGrid(grid.dims(), std::move(out));
}

}  // namespace embtopo
