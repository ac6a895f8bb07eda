#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace embtopo {

enum class ElementKind { Float32, Float64 };

std::size_t element_width(ElementKind kind) noexcept;

/// Header of an NPY v1.0 file: little-endian, C-order, float32 or float64.
struct TensorHeader {
    std::vector<std::size_t> shape;
    ElementKind element_kind = ElementKind::Float64;

    std::size_t element_count() const noexcept;
    std::size_t payload_bytes() const noexcept;
};

/// A tensor as read from disk. float32 payloads are widened to double.
struct Tensor {
    TensorHeader header;
    std::vector<double> values;

    const std::vector<std::size_t>& shape() const noexcept { return header.shape; }
};

TensorHeader parse_npy_header(std::span<const unsigned char> bytes, std::size_t* payload_offset = nullptr);

/// Reads only the header; used to validate manifests without loading payloads.
TensorHeader read_npy_header(const std::filesystem::path& path);

Tensor read_tensor(const std::filesystem::path& path);
Tensor decode_npy(std::span<const unsigned char> bytes);

std::vector<unsigned char> encode_npy(std::span<const std::size_t> shape, std::span<const double> values,
                                      ElementKind kind = ElementKind::Float64);

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> shape,
                  std::span<const double> values, ElementKind kind = ElementKind::Float64);

}  // namespace embtopo
