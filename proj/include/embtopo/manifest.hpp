#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace embtopo {

struct LayerEntry {
    int index = 0;
    std::string name;
    /// Resolved tensor files. One entry is the common case: a single image or an N×H×W×C batch.
    /// Several entries mean one file per image, all with `shape`.
    std::vector<std::filesystem::path> tensors;
    std::vector<std::size_t> shape;
};

struct LayerManifest {
    std::string model_id;
    std::string dataset_id;
    std::optional<double> finetuned_accuracy;
    std::vector<LayerEntry> layers;
    std::filesystem::path source;
};

/// Parses and validates a manifest. Tensor paths are resolved relative to the manifest's directory
/// and their headers are checked against the declared shapes.
LayerManifest load_manifest(const std::filesystem::path& path);

/// Same validation for in-memory JSON text; `base_dir` anchors relative tensor paths.
LayerManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);

}  // namespace embtopo
