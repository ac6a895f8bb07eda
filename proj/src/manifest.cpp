#include "embtopo/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "embtopo/error.hpp"
#include "embtopo/npy.hpp"

namespace embtopo {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaViolation, what); }

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema(where + ": missing field '" + key + "'");
    const bool ok = type == json::value_t::number_integer ? it->is_number_integer()
                                                           : (it->type() == type);
    if (!ok) schema(where + ": field '" + key + "' has the wrong type");
    return *it;
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& rel) {
    const std::filesystem::path p(rel);
    return p.is_absolute() ? p : base_dir / p;
}

}  // namespace

LayerManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        schema(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema("manifest root must be an object");

    LayerManifest manifest;
    manifest.model_id = require(doc, "model_id", json::value_t::string, "manifest").get<std::string>();
    manifest.dataset_id = require(doc, "dataset_id", json::value_t::string, "manifest").get<std::string>();
    if (const auto acc = doc.find("finetuned_accuracy"); acc != doc.end() && !acc->is_null()) {
        if (!acc->is_number()) schema("finetuned_accuracy must be a number or null");
        const double value = acc->get<double>();
        if (!(value >= 0.0 && value <= 1.0)) schema("finetuned_accuracy must lie in [0, 1]");
        manifest.finetuned_accuracy = value;
    }

    const auto& layers = require(doc, "layers", json::value_t::array, "manifest");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& item = layers[i];
        const std::string where = "layers[" + std::to_string(i) + "]";
        if (!item.is_object()) schema(where + " must be an object");

        LayerEntry layer;
        layer.index = require(item, "index", json::value_t::number_integer, where).get<int>();
        layer.name = require(item, "name", json::value_t::string, where).get<std::string>();

        const auto tensor_it = item.find("tensor");
        if (tensor_it == item.end()) schema(where + ": missing field 'tensor'");
        if (tensor_it->is_string()) {
            layer.tensors.push_back(resolve(base_dir, tensor_it->get<std::string>()));
        } else if (tensor_it->is_array() && !tensor_it->empty()) {
            for (const auto& t : *tensor_it) {
                if (!t.is_string()) schema(where + ": tensor list entries must be strings");
                layer.tensors.push_back(resolve(base_dir, t.get<std::string>()));
            }
        } else {
            schema(where + ": 'tensor' must be a path or a non-empty list of paths");
        }

        for (const auto& dim : require(item, "shape", json::value_t::array, where)) {
            if (!dim.is_number_integer() || dim.get<long long>() <= 0)
                schema(where + ": shape entries must be positive integers");
            layer.shape.push_back(dim.get<std::size_t>());
        }

        if (!manifest.layers.empty() && layer.index <= manifest.layers.back().index)
            throw Error(ErrorKind::NonMonotoneLayerIndex, where + ": index " + std::to_string(layer.index) +
                                                              " does not exceed previous index " +
                                                              std::to_string(manifest.layers.back().index));
        manifest.layers.push_back(std::move(layer));
    }

    for (const auto& layer : manifest.layers) {
        for (const auto& path : layer.tensors) {
            if (!std::filesystem::is_regular_file(path))
                throw Error(ErrorKind::MissingTensorFile, "layer '" + layer.name + "': " + path.string());
            TensorHeader header;
            try {
                header = read_npy_header(path);
            } catch (const Error& e) {
                throw Error(e.kind(), "layer '" + layer.name + "': " + e.message());
            }
            if (header.shape != layer.shape)
                schema("layer '" + layer.name + "': tensor " + path.string() + " does not match declared shape");
        }
    }
    return manifest;
}

LayerManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto manifest = parse_manifest(buffer.str(), path.parent_path());
    manifest.source = path;
    return manifest;
}

}  // namespace embtopo
