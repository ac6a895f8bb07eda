#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace embtopo::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& prefix) {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / (prefix + "-" + std::to_string(rd()));
        if (fs::create_directory(candidate)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

ScalarGrid constant_grid(std::vector<std::size_t> dims, double value) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return ScalarGrid(std::move(dims), std::vector<double>(n, value));
}

ScalarGrid ring_grid() { return ScalarGrid({3, 3}, {0, 0, 0, 0, 9, 0, 0, 0, 0}); }

ScalarGrid shell_grid() {
    std::vector<double> v(27, 0.0);
    v[13] = 9.0;
    return ScalarGrid({3, 3, 3}, std::move(v));
}

ScalarGrid random_grid(std::mt19937_64& rng, std::vector<std::size_t> dims, int max_value) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    std::uniform_int_distribution<int> dist(0, max_value);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return ScalarGrid(std::move(dims), std::move(v));
}

std::vector<std::size_t> random_small_shape(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> side(3, 5);
    std::uniform_int_distribution<std::size_t> depth(1, 5);
    std::vector<std::size_t> dims{side(rng), side(rng)};
    if (rng() % 2 == 0) dims.push_back(depth(rng));
    return dims;
}

ScalarGrid isolated_minima_grid(std::size_t k) { return isolated_minima_grid(k, k); }

ScalarGrid isolated_minima_grid(std::size_t k, std::size_t slots) {
    if (k > slots) throw std::invalid_argument("more minima than slots");
    const std::size_t cols = 2 * slots + 1;
    std::vector<double> v(3 * cols, 9.0);
    for (std::size_t i = 0; i < k; ++i) v[cols + 2 * i + 1] = 0.0;
    return ScalarGrid({3, cols}, std::move(v));
}

ScalarGrid ring_and_shell_grid() {
    // Axis 2 has 7 layers: 0..2 hold the shell, 3 separates, 5 holds the ring.
    std::vector<double> v(3 * 3 * 7, 9.0);
    const auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> double& { return v[(i * 3 + j) * 7 + k]; };
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) at(i, j, k) = 0.0;
            at(i, j, 5) = 0.0;
        }
    at(1, 1, 1) = 9.0;
    at(1, 1, 5) = 9.0;
    return ScalarGrid({3, 3, 7}, std::move(v));
}

void write_grid(const fs::path& path, const ScalarGrid& grid, ElementKind kind) {
    write_tensor(path, grid.dims(), grid.values(), kind);
}

std::vector<std::size_t> write_batch(const fs::path& path, const std::vector<ScalarGrid>& grids) {
    const auto e = grids.front().extent();
    std::vector<std::size_t> shape{grids.size(), e[0], e[1], e[2]};
    std::vector<double> values;
    for (const auto& g : grids) {
        if (g.extent() != e) throw std::invalid_argument("batch grids must share a shape");
        values.insert(values.end(), g.values().begin(), g.values().end());
    }
    write_tensor(path, shape, values);
    return shape;
}

void write_manifest(const fs::path& path, const std::string& model_id, const std::string& dataset_id,
                    std::optional<double> accuracy, const std::vector<ManifestLayer>& layers) {
    nlohmann::json doc;
    doc["model_id"] = model_id;
    doc["dataset_id"] = dataset_id;
    doc["finetuned_accuracy"] = accuracy ? nlohmann::json(*accuracy) : nlohmann::json(nullptr);
    doc["layers"] = nlohmann::json::array();
    for (const auto& l : layers)
        doc["layers"].push_back({{"index", l.index}, {"name", l.name}, {"tensor", l.tensor}, {"shape", l.shape}});
    std::ofstream(path) << doc.dump(2);
}

fs::path write_model(const fs::path& dir, const std::string& model_id, std::optional<double> accuracy,
                     const std::vector<ScalarGrid>& layer_grids) {
    fs::create_directories(dir);
    std::vector<ManifestLayer> layers;
    for (std::size_t l = 0; l < layer_grids.size(); ++l) {
        const std::string name = model_id + "_layer" + std::to_string(l) + ".npy";
        write_grid(dir / name, layer_grids[l]);
        layers.push_back({static_cast<int>(l), "block" + std::to_string(l), name, layer_grids[l].dims()});
    }
    const auto path = dir / (model_id + ".json");
    write_manifest(path, model_id, "synthetic", accuracy, layers);
    return path;
}

ShapeParams random_shape_params(std::mt19937_64& rng, int cls) {
    std::uniform_real_distribution<double> centre(0.4, 0.6);
    std::uniform_real_distribution<double> radius(0.22, 0.32);
    std::uniform_real_distribution<double> width(0.09, 0.12);
    ShapeParams p;
    p.cls = cls;
    p.cx = centre(rng);
    p.cy = centre(rng);
    p.radius = radius(rng);
    p.width = width(rng);
    p.noise_seed = rng();
    return p;
}

ScalarGrid rasterize(const ShapeParams& shape, std::size_t res, double noise_amplitude) {
    // Noise lives on a fixed lattice in unit coordinates and is bilinearly interpolated, so two
    // resolutions sample the same continuous image.
    constexpr std::size_t lattice = 17;
    std::mt19937_64 noise_rng(shape.noise_seed);
    std::uniform_real_distribution<double> noise(-noise_amplitude, noise_amplitude);
    std::vector<double> knots(lattice * lattice);
    for (auto& k : knots) k = noise(noise_rng);
    const auto field = [&](double x, double y) {
        const double gx = x * (lattice - 1), gy = y * (lattice - 1);
        const auto i0 = std::min<std::size_t>(static_cast<std::size_t>(gx), lattice - 2);
        const auto j0 = std::min<std::size_t>(static_cast<std::size_t>(gy), lattice - 2);
        const double fx = gx - static_cast<double>(i0), fy = gy - static_cast<double>(j0);
        const auto at = [&](std::size_t i, std::size_t j) { return knots[i * lattice + j]; };
        return (1 - fx) * ((1 - fy) * at(i0, j0) + fy * at(i0, j0 + 1)) +
               fx * ((1 - fy) * at(i0 + 1, j0) + fy * at(i0 + 1, j0 + 1));
    };

    std::vector<double> v(res * res);
    for (std::size_t i = 0; i < res; ++i) {
        for (std::size_t j = 0; j < res; ++j) {
            const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(res);
            const double y = (static_cast<double>(j) + 0.5) / static_cast<double>(res);
            const double r = std::hypot(x - shape.cx, y - shape.cy);
            const double dist = shape.cls == 0 ? std::abs(r - shape.radius) / shape.width : r / shape.radius;
            const double base = std::min(1.0, shape.cls == 0 ? dist : dist * dist);
            v[i * res + j] = base + field(x, y);
        }
    }
    return ScalarGrid({res, res}, std::move(v));
}

ScalarGrid gaussian_blur(const ScalarGrid& grid, double sigma) {
    const auto e = grid.extent();
    const long reach = static_cast<long>(std::ceil(3.0 * sigma));
    std::vector<double> kernel;
    double total = 0.0;
    for (long d = -reach; d <= reach; ++d) {
        kernel.push_back(std::exp(-0.5 * static_cast<double>(d * d) / (sigma * sigma)));
        total += kernel.back();
    }
    for (auto& w : kernel) w /= total;

    // Separable: axis 0, then axis 1, clamping indices at the border.
    std::vector<double> src(grid.values().begin(), grid.values().end());
    std::vector<double> dst(src.size());
    const auto index = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * e[1] + j) * e[2] + k; };
    for (int axis = 0; axis < 2; ++axis) {
        const long n = static_cast<long>(e[axis]);
        for (std::size_t i = 0; i < e[0]; ++i)
            for (std::size_t j = 0; j < e[1]; ++j)
                for (std::size_t k = 0; k < e[2]; ++k) {
                    double sum = 0.0;
                    for (long d = -reach; d <= reach; ++d) {
                        const long at = std::clamp<long>(static_cast<long>(axis == 0 ? i : j) + d, 0, n - 1);
                        const auto a = static_cast<std::size_t>(at);
                        sum += kernel[static_cast<std::size_t>(d + reach)] * src[axis == 0 ? index(a, j, k) : index(i, a, k)];
                    }
                    dst[index(i, j, k)] = sum;
                }
        std::swap(src, dst);
    }
    return ScalarGrid(grid.dims(), std::move(src));
}

std::vector<ScalarGrid> synthetic_stages(const ScalarGrid& image, double pixels_per_unit) {
    const double sigma = pixels_per_unit / 32.0;
    auto blurred = gaussian_blur(image, sigma);
    auto deep = downsample(gaussian_blur(image, 3.0 * sigma), 2, PoolMode::Stride);
    return {image, std::move(blurred), std::move(deep)};
}

}  // namespace embtopo::testing
